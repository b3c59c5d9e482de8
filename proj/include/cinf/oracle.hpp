#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cinf/model.hpp"

// Exhaustive reference for small instances: enumerates all M^T labelings and
// groups them by their compressed value.

namespace cinf {

struct OracleBudget {
  std::uint64_t max_enumerations = 10'000'000;
};

struct WeightedLabeling {
  StateString states;
  double probability = 0.0;
};

using CompressedDistribution = std::map<CompressedSequence, double>;

/// Every labeling with p(y | x). Throws ResourceLimitError when M^T exceeds
/// the budget.
std::vector<WeightedLabeling> enumerate_posterior(const ChainModel& model,
                                                  std::span<const SymbolId> obs,
                                                  OracleBudget budget = {});

CompressedDistribution oracle_compressed_distribution(const ChainModel& model,
                                                      std::span<const SymbolId> obs,
                                                      OracleBudget budget = {});

/// probs[k] = p(c = k + 1 | x) for k = 0..T-1.
std::vector<double> oracle_length_distribution(const ChainModel& model,
                                               std::span<const SymbolId> obs,
                                               OracleBudget budget = {});

/// p(s_position = j | x, c = length) for every j; position is 0-based.
/// Throws UndefinedConditionalError when length c has no mass.
std::vector<double> oracle_compressed_marginal(const ChainModel& model,
                                               std::span<const SymbolId> obs, std::size_t length,
                                               std::size_t position, OracleBudget budget = {});

/// The same two-step decode as compressed_decode, driven by the oracle.
StateString oracle_compressed_decode(const ChainModel& model, std::span<const SymbolId> obs,
                                     std::size_t c_max, OracleBudget budget = {});

}  // namespace cinf
