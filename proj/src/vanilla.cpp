#include "cinf/vanilla.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cinf/logspace.hpp"

namespace cinf {

namespace {

void check_input(const ChainModel& model, std::span<const SymbolId> obs) {
  if (obs.empty()) throw std::invalid_argument("observation sequence must be non-empty");
  model.check_observations(obs);
}

// Forward pass with an optional per-time admissibility mask. A time step with
// a constraint keeps only the required state.
Matrix forward_pass(const ChainModel& model, std::span<const SymbolId> obs,
                    const ConstraintList* constraints) {
  const std::size_t T = obs.size();
  const std::size_t M = model.num_states();
  Matrix alpha(T, M, kLogZero);
  std::vector<double> terms(M);
  std::size_t next = 0;

  for (std::size_t t = 0; t < T; ++t) {
    std::optional<StateId> required;
    if (constraints && next < constraints->size() && (*constraints)[next].t == t)
      required = (*constraints)[next++].state;

    for (StateId j = 0; j < M; ++j) {
      if (required && *required != j) continue;
      double inbound;
      if (t == 0) {
        inbound = model.init(j);
      } else {
        for (StateId i = 0; i < M; ++i) terms[i] = alpha(t - 1, i) + model.trans(i, j);
        inbound = log_sum_exp(terms);
      }
      alpha(t, j) = inbound + model.emit(j, obs[t]);
    }
  }
  return alpha;
}

}  // namespace

ViterbiResult viterbi(const ChainModel& model, std::span<const SymbolId> obs) {
  check_input(model, obs);
  const std::size_t T = obs.size();
  const std::size_t M = model.num_states();
  Matrix delta(T, M, kLogZero);
  std::vector<StateId> back(T * M, 0);

  for (StateId j = 0; j < M; ++j) delta(0, j) = model.init(j) + model.emit(j, obs[0]);
  for (std::size_t t = 1; t < T; ++t) {
    for (StateId j = 0; j < M; ++j) {
      double best = kLogZero;
      StateId arg = 0;
      for (StateId i = 0; i < M; ++i) {
        double v = delta(t - 1, i) + model.trans(i, j);
        if (v > best) {
          best = v;
          arg = i;
        }
      }
      delta(t, j) = best + model.emit(j, obs[t]);
      back[t * M + j] = arg;
    }
  }

  ViterbiResult result;
  result.states.resize(T);
  double best = kLogZero;
  StateId arg = 0;
  for (StateId j = 0; j < M; ++j) {
    if (delta(T - 1, j) > best) {
      best = delta(T - 1, j);
      arg = j;
    }
  }
  result.log_score = best;
  result.states[T - 1] = arg;
  for (std::size_t t = T - 1; t > 0; --t) result.states[t - 1] = back[t * M + result.states[t]];
  return result;
}

ForwardBackwardResult forward_backward(const ChainModel& model, std::span<const SymbolId> obs) {
  check_input(model, obs);
  const std::size_t T = obs.size();
  const std::size_t M = model.num_states();

  ForwardBackwardResult fb;
  fb.log_alpha = forward_pass(model, obs, nullptr);
  fb.log_beta = Matrix(T, M, 0.0);
  std::vector<double> terms(M);
  for (std::size_t t = T - 1; t > 0; --t) {
    for (StateId i = 0; i < M; ++i) {
      for (StateId j = 0; j < M; ++j)
        terms[j] = model.trans(i, j) + model.emit(j, obs[t]) + fb.log_beta(t, j);
      fb.log_beta(t - 1, i) = log_sum_exp(terms);
    }
  }
  fb.log_Z = log_sum_exp(fb.log_alpha.row(T - 1));
  return fb;
}

Matrix posterior_marginals(const ForwardBackwardResult& fb) {
  const std::size_t T = fb.log_alpha.rows();
  const std::size_t M = fb.log_alpha.cols();
  if (fb.log_Z == kLogZero) throw std::domain_error("observation sequence has zero probability");
  Matrix out(T, M);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < M; ++j)
      out(t, j) = std::exp(fb.log_alpha(t, j) + fb.log_beta(t, j) - fb.log_Z);
  return out;
}

Matrix posterior_marginals(const ChainModel& model, std::span<const SymbolId> obs) {
  return posterior_marginals(forward_backward(model, obs));
}

StateString marginal_decode(const ChainModel& model, std::span<const SymbolId> obs) {
  const Matrix marginals = posterior_marginals(model, obs);
  StateString out(marginals.rows());
  for (std::size_t t = 0; t < marginals.rows(); ++t) {
    StateId arg = 0;
    for (StateId j = 1; j < marginals.cols(); ++j)
      if (marginals(t, j) > marginals(t, arg)) arg = j;
    out[t] = arg;
  }
  return out;
}

double constrained_log_Z(const ChainModel& model, std::span<const SymbolId> obs,
                         const ConstraintList& constraints) {
  check_input(model, obs);
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const auto& c = constraints[k];
    if (c.t >= obs.size())
      throw std::invalid_argument("constraint time " + std::to_string(c.t) + " outside sequence");
    if (c.state >= model.num_states()) throw std::invalid_argument("constraint state out of range");
    if (k > 0 && constraints[k - 1].t >= c.t)
      throw std::invalid_argument("constraint times must be strictly increasing");
  }
  const Matrix alpha = forward_pass(model, obs, &constraints);
  return log_sum_exp(alpha.row(obs.size() - 1));
}

CompressedSequence baseline_compressed(const ChainModel& model, std::span<const SymbolId> obs,
                                       BaselineMethod method) {
  if (method == BaselineMethod::kJoint) return compress(viterbi(model, obs).states);
  return compress(marginal_decode(model, obs));
}

}  // namespace cinf
