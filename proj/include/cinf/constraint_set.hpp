#pragma once

#include <cstddef>
#include <vector>

#include "cinf/model.hpp"

namespace cinf {

/// Admissible (row, state) cells of the height x M compressed lattice.
/// Rows are 0-based compressed positions; row r holds paths that have made
/// exactly r state changes.
class ConstraintSet {
 public:
  /// An empty set of the given shape; add cells with allow().
  ConstraintSet(std::size_t height, std::size_t num_states);

  /// Every cell of rows 0..height-1: all compressed sequences up to `height`.
  static ConstraintSet full_table(std::size_t height, std::size_t num_states);
  /// Exactly the cells {(0, s_0), ..., (c-1, s_{c-1})} of one sequence.
  static ConstraintSet fixed_sequence(const CompressedSequence& s, std::size_t num_states);
  /// All cells of rows 0..height-1 except that row `row` admits only `state`.
  static ConstraintSet fixed_cell(std::size_t height, std::size_t num_states, std::size_t row,
                                  StateId state);

  std::size_t height() const { return height_; }
  std::size_t num_states() const { return num_states_; }

  bool allowed(std::size_t row, StateId state) const {
    return mask_[row * num_states_ + state] != 0;
  }
  void allow(std::size_t row, StateId state);
  void forbid(std::size_t row, StateId state);

 private:
  std::size_t height_;
  std::size_t num_states_;
  std::vector<unsigned char> mask_;
};

}  // namespace cinf
