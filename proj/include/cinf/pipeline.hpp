#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cinf/compressed.hpp"
#include "cinf/datagen.hpp"
#include "cinf/metrics.hpp"
#include "cinf/model.hpp"

// File-to-file experiment steps behind the command-line tool. Each step is
// deterministic in its configuration; wall-clock measurements go to separate
// sidecar files so primary outputs stay byte-identical across reruns.

namespace cinf {

namespace fs = std::filesystem;

enum class Method { kViterbi, kMarginal, kCompressed, kOracle };

std::string to_string(Method m);
Method parse_method(const std::string& name);

/// Sidecar written next to a generated dataset.
fs::path metadata_path(const fs::path& dataset);
/// Per-sequence wall-clock sidecar of a predictions file.
fs::path timing_path(const fs::path& predictions);

struct GenRobotConfig {
  std::optional<fs::path> world;  // default world when absent
  std::size_t n = 400;
  std::size_t min_length = 100;
  std::size_t max_length = 300;
  double accuracy = 100.0;
  std::uint64_t seed = 0;
  RobotOptions robot;
  fs::path out;
};

void gen_robot(const GenRobotConfig& cfg);

struct FitConfig {
  fs::path data;
  double smoothing = 1.0;
  fs::path out;
};

struct FitSummary {
  std::size_t num_states = 0;
  std::size_t num_symbols = 0;
  std::vector<double> transition_entropy;  // nats, per state
  std::vector<double> emission_entropy;    // nats, per state
  bool has_forbidden_entries = false;      // any -inf weight
};

FitSummary fit(const FitConfig& cfg);

/// State space and alphabet for a dataset: from its metadata sidecar when
/// present, otherwise from labels in order of first appearance.
std::pair<StateSpace, ObservationAlphabet> dataset_spaces(const fs::path& data);

struct InferConfig {
  fs::path model;
  fs::path data;
  std::vector<Method> methods = {Method::kCompressed};
  std::optional<std::size_t> c_max;  // min(T, 128) when absent
  Normalization norm = Normalization::kExact;
  std::uint64_t oracle_budget = 10'000'000;
  std::uint64_t seed = 0;
  fs::path out;
};

struct PredictionRecord {
  std::size_t index = 0;
  Method method = Method::kCompressed;
  StateString prediction;
  std::optional<std::size_t> c_hat;
  std::size_t adjacent_duplicates = 0;
  double micros = 0.0;
};

/// Decodes every sequence with every method. Labels in the dataset are
/// ignored. Records are ordered by sequence, then by method.
std::vector<PredictionRecord> infer(const InferConfig& cfg);

struct EvaluateConfig {
  fs::path predictions;
  fs::path data;
  fs::path out;
  std::uint64_t seed = 0;
};

struct MethodReport {
  Method method = Method::kCompressed;
  EvaluationReport report;
  std::size_t adjacent_duplicates = 0;
};

std::vector<MethodReport> evaluate_predictions(const EvaluateConfig& cfg);

/// Aligned text table, one row per method.
std::string format_table(const std::vector<MethodReport>& reports);

/// Reads back a report file and recomputes EDS per method from its
/// per-sequence records.
std::vector<std::pair<std::string, double>> recompute_eds(const fs::path& report);

struct BenchConfig {
  fs::path model;
  fs::path data;
  std::vector<std::size_t> c_max_values;
  Normalization norm = Normalization::kTruncated;
  std::size_t repetitions = 5;
};

struct BenchRow {
  std::size_t c_max = 0;
  double median_seconds = 0.0;
  double seconds_per_c_max = 0.0;
};

std::vector<BenchRow> bench(const BenchConfig& cfg);
std::string format_bench(const std::vector<BenchRow>& rows);

}  // namespace cinf
