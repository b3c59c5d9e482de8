#include "cinf/constraint_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace cinf {

ConstraintSet::ConstraintSet(std::size_t height, std::size_t num_states)
    : height_(height), num_states_(num_states), mask_(height * num_states, 0) {
  if (height == 0) throw std::invalid_argument("constraint set height must be positive");
  if (num_states == 0) throw std::invalid_argument("constraint set needs at least one state");
}

void ConstraintSet::allow(std::size_t row, StateId state) {
  if (row >= height_ || state >= num_states_)
    throw std::invalid_argument("constraint cell out of bounds");
  mask_[row * num_states_ + state] = 1;
}

void ConstraintSet::forbid(std::size_t row, StateId state) {
  if (row >= height_ || state >= num_states_)
    throw std::invalid_argument("constraint cell out of bounds");
  mask_[row * num_states_ + state] = 0;
}

ConstraintSet ConstraintSet::full_table(std::size_t height, std::size_t num_states) {
  ConstraintSet q(height, num_states);
  std::fill(q.mask_.begin(), q.mask_.end(), 1);
  return q;
}

ConstraintSet ConstraintSet::fixed_sequence(const CompressedSequence& s, std::size_t num_states) {
  ConstraintSet q(s.size(), num_states);
  for (std::size_t r = 0; r < s.size(); ++r) q.allow(r, s[r]);
  return q;
}

ConstraintSet ConstraintSet::fixed_cell(std::size_t height, std::size_t num_states,
                                        std::size_t row, StateId state) {
  if (row >= height || state >= num_states)
    throw std::invalid_argument("fixed cell out of bounds");
  ConstraintSet q = full_table(height, num_states);
  for (StateId j = 0; j < num_states; ++j)
    if (j != state) q.forbid(row, j);
  return q;
}

}  // namespace cinf
