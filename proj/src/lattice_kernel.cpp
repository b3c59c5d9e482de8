#include "cinf/lattice_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cinf/logspace.hpp"

namespace cinf {

namespace {

// Below this many live cells a step is too small to amortize a parallel region.
constexpr std::size_t kParallelCellThreshold = 1024;

}  // namespace

LatticeKernel::LatticeKernel(const ChainModel& model, const ConstraintSet& q)
    : model_(model),
      height_(q.height()),
      num_states_(model.num_states()),
      allowed_(q.height() * model.num_states()),
      into_(model.num_states() * model.num_states()) {
  if (q.num_states() != num_states_)
    throw std::invalid_argument("constraint set and model disagree on the number of states");
  for (std::size_t r = 0; r < height_; ++r)
    for (StateId j = 0; j < num_states_; ++j) allowed_[r * num_states_ + j] = q.allowed(r, j);
  for (StateId j = 0; j < num_states_; ++j)
    for (StateId k = 0; k < num_states_; ++k) into_[j * num_states_ + k] = model.trans(k, j);
}

void LatticeKernel::init(SymbolId x0, std::span<double> slice) const {
  std::fill(slice.begin(), slice.end(), kLogZero);
  for (StateId j = 0; j < num_states_; ++j)
    if (allowed_[j]) slice[j] = model_.init(j) + model_.emit(j, x0);
}

double LatticeKernel::cell(std::size_t idx, SymbolId x, std::span<const double> prev) const {
  if (!allowed_[idx]) return kLogZero;
  const std::size_t M = num_states_;
  const std::size_t r = idx / M;
  const std::size_t j = idx % M;
  const double* into = into_.data() + j * M;

  const double stay = prev[idx] + into[j];
  double top = stay;
  const double* below = r > 0 ? prev.data() + (r - 1) * M : nullptr;
  if (below) {
    for (std::size_t k = 0; k < M; ++k)
      if (k != j) top = std::max(top, below[k] + into[k]);
  }
  if (top == kLogZero) return kLogZero;

  double sum = std::exp(stay - top);
  if (below) {
    for (std::size_t k = 0; k < M; ++k)
      if (k != j) sum += std::exp(below[k] + into[k] - top);
  }
  return model_.emit(j, x) + top + std::log(sum);
}

void LatticeKernel::step_serial(std::size_t t, SymbolId x, std::span<const double> prev,
                                std::span<double> next) const {
  const std::size_t live = std::min(t + 1, height_) * num_states_;
  for (std::size_t idx = 0; idx < live; ++idx) next[idx] = cell(idx, x, prev);
}

void LatticeKernel::step_parallel(std::size_t t, SymbolId x, std::span<const double> prev,
                                  std::span<double> next) const {
  const auto live = static_cast<std::ptrdiff_t>(std::min(t + 1, height_) * num_states_);
#pragma omp parallel for schedule(static) if (live >= static_cast<std::ptrdiff_t>(kParallelCellThreshold))
  for (std::ptrdiff_t idx = 0; idx < live; ++idx)
    next[static_cast<std::size_t>(idx)] = cell(static_cast<std::size_t>(idx), x, prev);
}

std::vector<double> LatticeKernel::run_final(std::span<const SymbolId> obs, Execution exec) const {
  if (obs.empty()) throw std::invalid_argument("observation sequence must be non-empty");
  std::vector<double> a(slice_size(), kLogZero);
  std::vector<double> b(slice_size(), kLogZero);
  init(obs[0], a);
  for (std::size_t t = 1; t < obs.size(); ++t) {
    step(exec, t, obs[t], a, b);
    std::swap(a, b);
  }
  return a;
}

}  // namespace cinf
