#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cinf/constraint_set.hpp"
#include "cinf/lattice_kernel.hpp"
#include "cinf/model.hpp"

// Inference over compressed state sequences: the run-collapsed string s of a
// labeling y, marginalizing over every dwell-time allocation that produces it.
//
// Lengths (c, c_max, heights) are counts starting at 1. Positions inside a
// compressed sequence and lattice rows are 0-based.

namespace cinf {

/// Forward values over the T x height x M compressed lattice.
class LatticeTable {
 public:
  LatticeTable(std::size_t length, std::size_t height, std::size_t num_states);

  std::size_t length() const { return length_; }
  std::size_t height() const { return height_; }
  std::size_t num_states() const { return num_states_; }

  double operator()(std::size_t t, std::size_t row, StateId j) const {
    return cells_[(t * height_ + row) * num_states_ + j];
  }
  std::span<double> slice(std::size_t t) {
    return {cells_.data() + t * height_ * num_states_, height_ * num_states_};
  }
  std::span<const double> slice(std::size_t t) const {
    return {cells_.data() + t * height_ * num_states_, height_ * num_states_};
  }

  /// log of the summed mass in one row at time t.
  double row_log_mass(std::size_t t, std::size_t row) const;

 private:
  std::size_t length_;
  std::size_t height_;
  std::size_t num_states_;
  std::vector<double> cells_;
};

enum class Normalization {
  kExact,      // Z from a full-height run: every compressed length counted.
  kTruncated,  // Z from lengths 1..c_max only.
};

/// p(c = length | x) for length = 1..c_max.
struct LengthDistribution {
  std::vector<double> probs;     // probs[k] = p(c = k + 1 | x)
  std::vector<double> log_mass;  // log Z(Q_{S_{k+1}})
  double log_Z = 0.0;
  std::size_t sequence_length = 0;

  std::size_t c_max() const { return probs.size(); }
  /// Zero for lengths outside 1..T; throws for lengths above c_max.
  double probability(std::size_t length) const;
};

struct CompressedDecode {
  StateString states;  // argmax per position; may repeat adjacent states
  std::size_t length = 0;
  LengthDistribution length_dist;

  /// Number of adjacent equal pairs in `states`.
  std::size_t adjacent_duplicates() const;
};

/// log Z(s0): the summed score of all labelings y with compress(y) == s0,
/// by the length-|s0| vector recursion. kLogZero when |s0| > T.
double compressed_sequence_log_lattice(const ChainModel& model, std::span<const SymbolId> obs,
                                       const CompressedSequence& s0);

/// The full T x height x M table for constraint set q.
LatticeTable table_forward(const ChainModel& model, std::span<const SymbolId> obs,
                           const ConstraintSet& q, Execution exec = Execution::kParallel);

/// Z(Q) at height `target_height`: the log mass in row target_height - 1 at
/// the final time.
double constraint_log_Z(const ChainModel& model, std::span<const SymbolId> obs,
                        const ConstraintSet& q, std::size_t target_height,
                        Execution exec = Execution::kParallel);

/// Log mass per compressed length 1..height at the final time, for q.
std::vector<double> row_log_masses(const ChainModel& model, std::span<const SymbolId> obs,
                                   const ConstraintSet& q, Execution exec = Execution::kParallel);

LengthDistribution length_distribution(const ChainModel& model, std::span<const SymbolId> obs,
                                       std::size_t c_max,
                                       Normalization norm = Normalization::kExact,
                                       Execution exec = Execution::kParallel);

/// log Z as the sum of the height-T table at the final time.
double log_partition_via_table(const ChainModel& model, std::span<const SymbolId> obs,
                               Execution exec = Execution::kParallel);

/// log Z(Q_{position, j}) for every state j, where Q_{position, j} admits all
/// cells of rows 0..length-1 except that row `position` admits only j.
std::vector<double> position_log_masses(const ChainModel& model, std::span<const SymbolId> obs,
                                        std::size_t length, std::size_t position);

/// p(s_position = j | x, c = length) for every j.
std::vector<double> compressed_marginal_row(const ChainModel& model,
                                            std::span<const SymbolId> obs, std::size_t length,
                                            std::size_t position);

double compressed_marginal(const ChainModel& model, std::span<const SymbolId> obs,
                           std::size_t length, std::size_t position, StateId j);

/// Two-step decode: the most probable length, then the most probable state
/// at each position given that length. Ties go to the shorter length and the
/// lower state index.
CompressedDecode compressed_decode(const ChainModel& model, std::span<const SymbolId> obs,
                                   std::size_t c_max, Normalization norm = Normalization::kExact);

/// min(T, 128).
std::size_t default_c_max(std::size_t sequence_length);

}  // namespace cinf
