#include "cinf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cinf/errors.hpp"
#include "cinf/logspace.hpp"

namespace cinf {

namespace {

void check_budget(std::size_t M, std::size_t T, OracleBudget budget) {
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < T; ++t) {
    if (count > budget.max_enumerations / M) {
      throw ResourceLimitError("enumeration of M^T = " + std::to_string(M) + "^" +
                               std::to_string(T) + " labelings exceeds the budget of " +
                               std::to_string(budget.max_enumerations));
    }
    count *= M;
  }
  if (count > budget.max_enumerations)
    throw ResourceLimitError("enumeration of M^T labelings exceeds the budget");
}

// Advances an odometer over {0..M-1}^T; false once it wraps to all zeros.
bool advance(StateString& y, std::size_t M) {
  for (std::size_t t = y.size(); t-- > 0;) {
    if (++y[t] < M) return true;
    y[t] = 0;
  }
  return false;
}

}  // namespace

std::vector<WeightedLabeling> enumerate_posterior(const ChainModel& model,
                                                  std::span<const SymbolId> obs,
                                                  OracleBudget budget) {
  if (obs.empty()) throw std::invalid_argument("observation sequence must be non-empty");
  model.check_observations(obs);
  const std::size_t M = model.num_states();
  check_budget(M, obs.size(), budget);

  std::vector<WeightedLabeling> out;
  std::vector<double> log_scores;
  StateString y(obs.size(), 0);
  do {
    log_scores.push_back(sequence_log_score(model, obs, y));
    out.push_back({y, 0.0});
  } while (advance(y, M));

  const double log_Z = log_sum_exp(log_scores);
  if (log_Z == kLogZero)
    throw UndefinedConditionalError("observation sequence has zero probability under the model");
  for (std::size_t n = 0; n < out.size(); ++n) out[n].probability = std::exp(log_scores[n] - log_Z);
  return out;
}

CompressedDistribution oracle_compressed_distribution(const ChainModel& model,
                                                      std::span<const SymbolId> obs,
                                                      OracleBudget budget) {
  CompressedDistribution out;
  for (const auto& [y, p] : enumerate_posterior(model, obs, budget)) out[compress(y)] += p;
  return out;
}

std::vector<double> oracle_length_distribution(const ChainModel& model,
                                               std::span<const SymbolId> obs,
                                               OracleBudget budget) {
  std::vector<double> out(obs.size(), 0.0);
  for (const auto& [s, p] : oracle_compressed_distribution(model, obs, budget))
    out[s.size() - 1] += p;
  return out;
}

std::vector<double> oracle_compressed_marginal(const ChainModel& model,
                                               std::span<const SymbolId> obs, std::size_t length,
                                               std::size_t position, OracleBudget budget) {
  if (position >= length) throw std::invalid_argument("position outside the compressed length");
  std::vector<double> row(model.num_states(), 0.0);
  double total = 0.0;
  for (const auto& [s, p] : oracle_compressed_distribution(model, obs, budget)) {
    if (s.size() != length) continue;
    row[s[position]] += p;
    total += p;
  }
  if (total <= 0.0)
    throw UndefinedConditionalError("compressed length " + std::to_string(length) +
                                    " has zero probability");
  for (double& v : row) v /= total;
  return row;
}

StateString oracle_compressed_decode(const ChainModel& model, std::span<const SymbolId> obs,
                                     std::size_t c_max, OracleBudget budget) {
  if (c_max == 0 || c_max > obs.size()) throw std::invalid_argument("c_max must lie in [1, T]");
  const auto dist = oracle_compressed_distribution(model, obs, budget);
  std::vector<double> lengths(c_max, 0.0);
  for (const auto& [s, p] : dist)
    if (s.size() <= c_max) lengths[s.size() - 1] += p;
  const std::size_t c = static_cast<std::size_t>(
      std::max_element(lengths.begin(), lengths.end()) - lengths.begin() + 1);

  StateString out(c);
  for (std::size_t i = 0; i < c; ++i) {
    std::vector<double> row(model.num_states(), 0.0);
    for (const auto& [s, p] : dist)
      if (s.size() == c) row[s[i]] += p;
    out[i] = static_cast<StateId>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

}  // namespace cinf
