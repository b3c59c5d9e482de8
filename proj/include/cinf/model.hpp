#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cinf {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;

/// A run of state ids. Decoder output that may or may not be run-collapsed.
using StateString = std::vector<StateId>;

/// Dense row-major table of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// An ordered set of distinct labels with a label <-> index bijection.
/// Used for both the hidden state space and the observation alphabet.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Throws std::invalid_argument naming the label when it is unknown.
  std::uint32_t index_of(const std::string& label) const;
  std::optional<std::uint32_t> find(const std::string& label) const;

  bool operator==(const LabelSet& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

using StateSpace = LabelSet;
using ObservationAlphabet = LabelSet;

/// Log-domain potential tables of a first-order chain model.
///
/// The per-step potential factorizes as
///   log Psi(j, START, x) = init_logw[j] + emit_logw[j][x]   (first step)
///   log Psi(j, i, x)     = trans_logw[i][j] + emit_logw[j][x]
/// Entries are finite or -infinity (a forbidden event).
class ChainModel {
 public:
  ChainModel(StateSpace states, ObservationAlphabet alphabet, std::vector<double> init_logw,
             Matrix trans_logw, Matrix emit_logw);

  /// All-zero weights: every potential equals 1.
  static ChainModel uniform(StateSpace states, ObservationAlphabet alphabet);

  const StateSpace& states() const { return states_; }
  const ObservationAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return states_.size(); }
  std::size_t num_symbols() const { return alphabet_.size(); }

  std::span<const double> init_logw() const { return init_logw_; }
  const Matrix& trans_logw() const { return trans_logw_; }
  const Matrix& emit_logw() const { return emit_logw_; }

  double init(StateId j) const { return init_logw_[j]; }
  double trans(StateId from, StateId to) const { return trans_logw_(from, to); }
  double emit(StateId j, SymbolId x) const { return emit_logw_(j, x); }

  /// Throws std::invalid_argument if any symbol is outside the alphabet.
  void check_observations(std::span<const SymbolId> obs) const;

  bool operator==(const ChainModel&) const = default;

 private:
  StateSpace states_;
  ObservationAlphabet alphabet_;
  std::vector<double> init_logw_;
  Matrix trans_logw_;
  Matrix emit_logw_;
};

struct LabeledSequence {
  std::vector<SymbolId> obs;
  std::optional<std::vector<StateId>> states;

  std::size_t length() const { return obs.size(); }
  bool labeled() const { return states.has_value(); }

  bool operator==(const LabeledSequence&) const = default;
};

/// Throws std::invalid_argument unless the sequence is non-empty, its indices
/// are in range for the model, and label/observation lengths agree.
void validate_sequence(const ChainModel& model, const LabeledSequence& seq);

/// A run-collapsed state string: non-empty, no two adjacent entries equal.
class CompressedSequence {
 public:
  /// Throws std::invalid_argument on empty input or adjacent duplicates.
  explicit CompressedSequence(StateString entries);

  std::size_t size() const { return entries_.size(); }
  StateId operator[](std::size_t i) const { return entries_[i]; }
  const StateString& entries() const { return entries_; }

  auto operator<=>(const CompressedSequence&) const = default;

 private:
  StateString entries_;
};

/// log Psi(y_t = j, y_{t-1} = prev, x_t). `t` is 0-based; `prev` must be
/// std::nullopt (the START context) exactly when t == 0.
double log_potential(const ChainModel& model, std::size_t t, StateId j, std::optional<StateId> prev,
                     SymbolId x);

/// Unnormalized log score of a labeled sequence: the sum of its log potentials.
double sequence_log_score(const ChainModel& model, const LabeledSequence& seq);
double sequence_log_score(const ChainModel& model, std::span<const SymbolId> obs,
                          std::span<const StateId> states);

/// Collapses maximal runs of equal adjacent states.
CompressedSequence compress(std::span<const StateId> states);

/// Additively smoothed maximum-likelihood estimate from labeled sequences.
/// Rows of the exponentiated tables are proper distributions.
ChainModel estimate_counts(const StateSpace& states, const ObservationAlphabet& alphabet,
                           std::span<const LabeledSequence> dataset, double smoothing = 1.0);

}  // namespace cinf
