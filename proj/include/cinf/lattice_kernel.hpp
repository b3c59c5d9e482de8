#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cinf/constraint_set.hpp"
#include "cinf/model.hpp"

// One time step of the compressed-lattice forward recursion over a
// height x M slice of log values:
//
//   a_t(r, j) = emit(j, x_t) + log( exp(a_{t-1}(r, j) + trans(j, j))
//                 + sum_{k != j} exp(a_{t-1}(r-1, k) + trans(k, j)) )
//
// for admissible cells, and log 0 elsewhere. The first step places all mass
// on row 0: a_0(0, j) = init(j) + emit(j, x_0).
//
// Two interchangeable step implementations exist: a serial reference and an
// OpenMP version that splits the cells of a step across threads. Both compute
// every cell with the same arithmetic, so their results are bit-identical.

namespace cinf {

enum class Execution { kSerial, kParallel };

class LatticeKernel {
 public:
  LatticeKernel(const ChainModel& model, const ConstraintSet& q);

  std::size_t height() const { return height_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t slice_size() const { return height_ * num_states_; }

  /// Writes the time-0 slice.
  void init(SymbolId x0, std::span<double> slice) const;

  /// Computes slice t from slice t-1. Only rows 0..min(t, height-1) are
  /// written; higher rows are unreachable and must already hold log 0.
  void step_serial(std::size_t t, SymbolId x, std::span<const double> prev,
                   std::span<double> next) const;
  void step_parallel(std::size_t t, SymbolId x, std::span<const double> prev,
                     std::span<double> next) const;

  void step(Execution exec, std::size_t t, SymbolId x, std::span<const double> prev,
            std::span<double> next) const {
    if (exec == Execution::kParallel)
      step_parallel(t, x, prev, next);
    else
      step_serial(t, x, prev, next);
  }

  /// Runs all steps keeping two slices; returns the final height x M slice.
  std::vector<double> run_final(std::span<const SymbolId> obs, Execution exec) const;

 private:
  double cell(std::size_t cell_index, SymbolId x, std::span<const double> prev) const;

  const ChainModel& model_;
  std::size_t height_;
  std::size_t num_states_;
  std::vector<unsigned char> allowed_;
  // into_[j * M + k] = trans(k, j): contiguous over source states.
  std::vector<double> into_;
};

}  // namespace cinf
