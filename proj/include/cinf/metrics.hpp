#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cinf/model.hpp"

namespace cinf {

struct SequenceDistance {
  std::size_t edit_distance = 0;
  std::size_t normalizer = 1;  // max(|prediction|, |truth|)

  double normalized() const {
    return static_cast<double>(edit_distance) / static_cast<double>(normalizer);
  }
};

struct EvaluationReport {
  double exact_score = 0.0;  // percentage of perfect matches
  double eds = 0.0;          // 100 - 100 * mean normalized edit distance
  std::vector<SequenceDistance> per_sequence;
};

/// Unit-cost Levenshtein distance.
std::size_t edit_distance(std::span<const StateId> a, std::span<const StateId> b);

double exact_score(std::span<const StateString> preds, std::span<const StateString> truths);

/// EDS from per-sequence distances.
double eds_from(std::span<const SequenceDistance> per_sequence);

/// Throws std::invalid_argument on mismatched or empty lists and on empty
/// sequences.
EvaluationReport evaluate(std::span<const StateString> preds, std::span<const StateString> truths);

}  // namespace cinf
