#include "cinf/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cinf {

namespace {

void check_lists(std::span<const StateString> preds, std::span<const StateString> truths) {
  if (preds.empty()) throw std::invalid_argument("nothing to evaluate");
  if (preds.size() != truths.size())
    throw std::invalid_argument("prediction and truth counts differ");
}

}  // namespace

std::size_t edit_distance(std::span<const StateId> a, std::span<const StateId> b) {
  // Single rolling row over b.
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t substitute = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, substitute});
      diag = up;
    }
  }
  return row[b.size()];
}

double exact_score(std::span<const StateString> preds, std::span<const StateString> truths) {
  check_lists(preds, truths);
  std::size_t hits = 0;
  for (std::size_t n = 0; n < preds.size(); ++n)
    if (preds[n] == truths[n]) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

double eds_from(std::span<const SequenceDistance> per_sequence) {
  if (per_sequence.empty()) throw std::invalid_argument("nothing to evaluate");
  double sum = 0.0;
  for (const auto& d : per_sequence) sum += d.normalized();
  return 100.0 - 100.0 * sum / static_cast<double>(per_sequence.size());
}

EvaluationReport evaluate(std::span<const StateString> preds, std::span<const StateString> truths) {
  check_lists(preds, truths);
  EvaluationReport report;
  report.per_sequence.reserve(preds.size());
  for (std::size_t n = 0; n < preds.size(); ++n) {
    if (preds[n].empty() || truths[n].empty())
      throw std::invalid_argument("compressed sequences must be non-empty");
    report.per_sequence.push_back(
        {edit_distance(preds[n], truths[n]), std::max(preds[n].size(), truths[n].size())});
  }
  report.exact_score = exact_score(preds, truths);
  report.eds = eds_from(report.per_sequence);
  return report;
}

}  // namespace cinf
