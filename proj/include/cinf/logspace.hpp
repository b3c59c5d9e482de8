#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace cinf {

/// log(0). Marks forbidden transitions and excluded lattice cells.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)); returns kLogZero when both inputs are kLogZero.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == kLogZero) return kLogZero;
  return a + std::log1p(std::exp(b - a));
}

/// log(sum_i exp(v_i)). Empty or all-kLogZero input yields kLogZero.
inline double log_sum_exp(std::span<const double> values) {
  double max = kLogZero;
  for (double v : values) max = std::max(max, v);
  if (max == kLogZero) return kLogZero;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

}  // namespace cinf
