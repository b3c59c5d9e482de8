#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "cinf/model.hpp"

// Standard chain decoders: Viterbi, forward-backward marginals, the
// constrained forward pass, and the post-hoc compressed baselines.
// Time indices are 0-based.

namespace cinf {

struct ViterbiResult {
  StateString states;
  double log_score = 0.0;
};

struct ForwardBackwardResult {
  Matrix log_alpha;  // T x M
  Matrix log_beta;   // T x M, last row all zero
  double log_Z = 0.0;
};

/// A required state at a time step.
struct StateConstraint {
  std::size_t t = 0;
  StateId state = 0;
};

/// Constraints ordered by strictly increasing time.
using ConstraintList = std::vector<StateConstraint>;

/// Max-product decode. Ties resolve to the lowest state index.
ViterbiResult viterbi(const ChainModel& model, std::span<const SymbolId> obs);

ForwardBackwardResult forward_backward(const ChainModel& model, std::span<const SymbolId> obs);

/// T x M table of p(y_t = j | x).
Matrix posterior_marginals(const ChainModel& model, std::span<const SymbolId> obs);
Matrix posterior_marginals(const ForwardBackwardResult& fb);

/// Per-position argmax of the posterior marginals (ties to the lowest index).
StateString marginal_decode(const ChainModel& model, std::span<const SymbolId> obs);

/// log Z' over the labelings that agree with every constraint. Returns
/// kLogZero when no labeling satisfies them.
double constrained_log_Z(const ChainModel& model, std::span<const SymbolId> obs,
                         const ConstraintList& constraints);

enum class BaselineMethod { kJoint, kMarginal };

/// compress() of the Viterbi path (joint) or the marginal decode (marginal).
CompressedSequence baseline_compressed(const ChainModel& model, std::span<const SymbolId> obs,
                                       BaselineMethod method);

}  // namespace cinf
