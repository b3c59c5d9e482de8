#include "cinf/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cinf/errors.hpp"
#include "cinf/logspace.hpp"
#include "cinf/model_io.hpp"
#include "cinf/oracle.hpp"
#include "cinf/vanilla.hpp"
#include "json.hpp"

namespace cinf {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string to_string(Method m) {
  switch (m) {
    case Method::kViterbi: return "viterbi";
    case Method::kMarginal: return "marginal";
    case Method::kCompressed: return "compressed";
    case Method::kOracle: return "oracle";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kViterbi, Method::kMarginal, Method::kCompressed, Method::kOracle})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown method '" + name + "'");
}

fs::path metadata_path(const fs::path& dataset) { return dataset.string() + ".meta.json"; }
fs::path timing_path(const fs::path& predictions) { return predictions.string() + ".timing.jsonl"; }

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<json> read_records(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("malformed record in '" + path.string() + "': " + e.what());
    }
  }
  return out;
}

// FNV-1a, enough to tell world maps apart in metadata.
std::string fingerprint(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

double row_entropy(std::span<const double> log_row) {
  double h = 0.0;
  for (double w : log_row)
    if (w != kLogZero) h -= std::exp(w) * w;
  return h;
}

std::string norm_name(Normalization n) {
  return n == Normalization::kExact ? "exact" : "truncated";
}

}  // namespace

void gen_robot(const GenRobotConfig& cfg) {
  const GridWorld world = cfg.world ? GridWorld::load(*cfg.world) : default_world();
  const auto states = world.state_space();
  const auto alphabet = color_alphabet();

  const auto data = robot_dataset(world, cfg.n, cfg.min_length, cfg.max_length, cfg.accuracy,
                                  cfg.seed, cfg.robot);
  std::vector<RawSequence> raw;
  raw.reserve(data.size());
  for (const auto& seq : data) raw.push_back(to_raw(seq, states, alphabet));
  save_dataset(raw, cfg.out);

  json meta;
  meta["command"] = "gen-robot";
  meta["world_fingerprint"] = fingerprint(world.to_text());
  meta["world"] = world.to_text();
  meta["n"] = cfg.n;
  meta["min_length"] = cfg.min_length;
  meta["max_length"] = cfg.max_length;
  meta["accuracy"] = cfg.accuracy;
  meta["seed"] = cfg.seed;
  meta["move_probability"] = cfg.robot.move_probability;
  meta["blocked"] = cfg.robot.blocked == BlockedMove::kStay ? "stay" : "resample";
  meta["states"] = states.labels();
  meta["symbols"] = alphabet.labels();
  auto out = open_out(metadata_path(cfg.out));
  out << meta.dump(1) << '\n';
}

std::pair<StateSpace, ObservationAlphabet> dataset_spaces(const fs::path& data) {
  const auto meta_file = metadata_path(data);
  if (fs::exists(meta_file)) {
    std::ifstream in(meta_file, std::ios::binary);
    if (!in) throw IoError("cannot open '" + meta_file.string() + "'");
    json meta;
    try {
      meta = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("malformed metadata '" + meta_file.string() + "': " + e.what());
    }
    if (meta.contains("states") && meta.contains("symbols"))
      return {StateSpace(meta["states"].get<std::vector<std::string>>()),
              ObservationAlphabet(meta["symbols"].get<std::vector<std::string>>())};
  }

  std::vector<std::string> states;
  std::vector<std::string> symbols;
  auto note = [](std::vector<std::string>& seen, const std::string& label) {
    if (std::find(seen.begin(), seen.end(), label) == seen.end()) seen.push_back(label);
  };
  for (const auto& rec : load_dataset(data)) {
    for (const auto& o : rec.obs) note(symbols, o);
    if (rec.states)
      for (const auto& s : *rec.states) note(states, s);
  }
  if (states.empty()) throw std::invalid_argument("dataset '" + data.string() + "' has no state labels");
  return {StateSpace(std::move(states)), ObservationAlphabet(std::move(symbols))};
}

FitSummary fit(const FitConfig& cfg) {
  const auto raw = load_dataset(cfg.data);
  if (raw.empty()) throw std::invalid_argument("cannot fit a model to an empty dataset");
  for (std::size_t n = 0; n < raw.size(); ++n)
    if (!raw[n].states)
      throw std::invalid_argument("dataset record " + std::to_string(n) + " has no state labels");

  const auto [states, alphabet] = dataset_spaces(cfg.data);
  const auto data = resolve(raw, states, alphabet);
  const ChainModel model = estimate_counts(states, alphabet, data, cfg.smoothing);
  save_model(model, cfg.out);

  FitSummary summary;
  summary.num_states = model.num_states();
  summary.num_symbols = model.num_symbols();
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    summary.transition_entropy.push_back(row_entropy(model.trans_logw().row(i)));
    summary.emission_entropy.push_back(row_entropy(model.emit_logw().row(i)));
  }
  auto forbidden = [](std::span<const double> v) {
    return std::any_of(v.begin(), v.end(), [](double w) { return w == kLogZero; });
  };
  summary.has_forbidden_entries = forbidden(model.init_logw()) ||
                                  forbidden(model.trans_logw().data()) ||
                                  forbidden(model.emit_logw().data());
  return summary;
}

namespace {

PredictionRecord decode_one(const ChainModel& model, std::span<const SymbolId> obs, Method method,
                            const InferConfig& cfg) {
  PredictionRecord rec;
  rec.method = method;
  const std::size_t c_max =
      cfg.c_max ? std::min(*cfg.c_max, obs.size()) : default_c_max(obs.size());
  switch (method) {
    case Method::kViterbi:
      rec.prediction = baseline_compressed(model, obs, BaselineMethod::kJoint).entries();
      break;
    case Method::kMarginal:
      rec.prediction = baseline_compressed(model, obs, BaselineMethod::kMarginal).entries();
      break;
    case Method::kCompressed: {
      auto decoded = compressed_decode(model, obs, c_max, cfg.norm);
      rec.c_hat = decoded.length;
      rec.adjacent_duplicates = decoded.adjacent_duplicates();
      rec.prediction = std::move(decoded.states);
      break;
    }
    case Method::kOracle: {
      rec.prediction = oracle_compressed_decode(model, obs, c_max, {cfg.oracle_budget});
      rec.c_hat = rec.prediction.size();
      for (std::size_t i = 1; i < rec.prediction.size(); ++i)
        if (rec.prediction[i] == rec.prediction[i - 1]) ++rec.adjacent_duplicates;
      break;
    }
  }
  return rec;
}

}  // namespace

std::vector<PredictionRecord> infer(const InferConfig& cfg) {
  if (cfg.methods.empty()) throw std::invalid_argument("no inference method selected");
  if (cfg.c_max && *cfg.c_max == 0) throw std::invalid_argument("--cmax must be positive");
  const ChainModel model = load_model(cfg.model);

  // Observations only: labels are dropped before resolution.
  std::vector<std::vector<SymbolId>> inputs;
  for (auto rec : load_dataset(cfg.data)) {
    rec.states.reset();
    auto seq = resolve(rec, model.states(), model.alphabet());
    if (seq.obs.empty()) throw std::invalid_argument("dataset contains an empty sequence");
    inputs.push_back(std::move(seq.obs));
  }

  const std::size_t n_methods = cfg.methods.size();
  std::vector<PredictionRecord> records(inputs.size() * n_methods);
  std::vector<std::exception_ptr> failures(records.size());
  const auto total = static_cast<std::ptrdiff_t>(records.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const std::size_t seq = idx / n_methods;
    try {
      const auto start = Clock::now();
      records[idx] = decode_one(model, inputs[seq], cfg.methods[idx % n_methods], cfg);
      records[idx].micros =
          std::chrono::duration<double, std::micro>(Clock::now() - start).count();
      records[idx].index = seq;
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  auto out = open_out(cfg.out);
  json header;
  header["record"] = "header";
  header["command"] = "infer";
  header["model"] = cfg.model.string();
  header["data"] = cfg.data.string();
  std::vector<std::string> names;
  for (Method m : cfg.methods) names.push_back(to_string(m));
  header["methods"] = names;
  header["cmax"] = cfg.c_max ? json(*cfg.c_max) : json("default");
  header["norm"] = norm_name(cfg.norm);
  header["seed"] = cfg.seed;
  out << header.dump() << '\n';

  auto timing = open_out(timing_path(cfg.out));
  for (const auto& rec : records) {
    json line;
    line["record"] = "prediction";
    line["index"] = rec.index;
    line["method"] = to_string(rec.method);
    line["prediction"] = state_labels(rec.prediction, model.states());
    if (rec.c_hat) line["c_hat"] = *rec.c_hat;
    line["adjacent_duplicates"] = rec.adjacent_duplicates;
    out << line.dump() << '\n';

    json t;
    t["index"] = rec.index;
    t["method"] = to_string(rec.method);
    t["micros"] = rec.micros;
    timing << t.dump() << '\n';
  }
  if (!out) throw IoError("failed writing '" + cfg.out.string() + "'");
  return records;
}

std::vector<MethodReport> evaluate_predictions(const EvaluateConfig& cfg) {
  const auto raw = load_dataset(cfg.data);
  const auto [states, alphabet] = dataset_spaces(cfg.data);
  std::vector<StateString> truths;
  for (std::size_t n = 0; n < raw.size(); ++n) {
    if (!raw[n].states)
      throw std::invalid_argument("dataset record " + std::to_string(n) + " has no state labels");
    const auto seq = resolve(raw[n], states, alphabet);
    truths.push_back(compress(*seq.states).entries());
  }

  // Per method, predictions keyed by sequence index, methods in order of appearance.
  std::vector<Method> order;
  std::map<Method, std::map<std::size_t, StateString>> preds;
  std::map<Method, std::size_t> duplicates;
  for (const auto& rec : read_records(cfg.predictions)) {
    if (rec.value("record", "") != "prediction") continue;
    const Method m = parse_method(rec.at("method").get<std::string>());
    const auto index = rec.at("index").get<std::size_t>();
    if (index >= truths.size())
      throw std::invalid_argument("prediction index " + std::to_string(index) +
                                  " has no matching dataset record");
    StateString p;
    for (const auto& label : rec.at("prediction")) p.push_back(states.index_of(label.get<std::string>()));
    if (!preds.count(m)) order.push_back(m);
    preds[m][index] = std::move(p);
    duplicates[m] += rec.value("adjacent_duplicates", std::size_t{0});
  }
  if (order.empty()) throw std::invalid_argument("predictions file holds no predictions");

  std::vector<MethodReport> reports;
  for (Method m : order) {
    const auto& by_index = preds[m];
    if (by_index.size() != truths.size())
      throw std::invalid_argument("method " + to_string(m) + " does not cover every sequence");
    std::vector<StateString> p;
    for (const auto& [idx, s] : by_index) p.push_back(s);
    reports.push_back({m, evaluate(p, truths), duplicates[m]});
  }

  auto out = open_out(cfg.out);
  json header;
  header["record"] = "header";
  header["command"] = "evaluate";
  header["predictions"] = cfg.predictions.string();
  header["data"] = cfg.data.string();
  header["seed"] = cfg.seed;
  out << header.dump() << '\n';
  for (const auto& r : reports) {
    json line;
    line["record"] = "summary";
    line["method"] = to_string(r.method);
    line["sequences"] = r.report.per_sequence.size();
    line["exact"] = r.report.exact_score;
    line["eds"] = r.report.eds;
    line["adjacent_duplicates"] = r.adjacent_duplicates;
    out << line.dump() << '\n';
  }
  for (const auto& r : reports) {
    for (std::size_t n = 0; n < r.report.per_sequence.size(); ++n) {
      json line;
      line["record"] = "sequence";
      line["method"] = to_string(r.method);
      line["index"] = n;
      line["edit_distance"] = r.report.per_sequence[n].edit_distance;
      line["normalizer"] = r.report.per_sequence[n].normalizer;
      out << line.dump() << '\n';
    }
  }
  if (!out) throw IoError("failed writing '" + cfg.out.string() + "'");
  return reports;
}

std::string format_table(const std::vector<MethodReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "method" << std::right << std::setw(10) << "sequences"
      << std::setw(10) << "exact" << std::setw(10) << "eds" << std::setw(12) << "duplicates"
      << '\n';
  out << std::fixed << std::setprecision(2);
  for (const auto& r : reports) {
    out << std::left << std::setw(12) << to_string(r.method) << std::right << std::setw(10)
        << r.report.per_sequence.size() << std::setw(10) << r.report.exact_score << std::setw(10)
        << r.report.eds << std::setw(12) << r.adjacent_duplicates << '\n';
  }
  return out.str();
}

std::vector<std::pair<std::string, double>> recompute_eds(const fs::path& report) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<SequenceDistance>> per;
  for (const auto& rec : read_records(report)) {
    if (rec.value("record", "") != "sequence") continue;
    const auto m = rec.at("method").get<std::string>();
    if (!per.count(m)) order.push_back(m);
    per[m].push_back({rec.at("edit_distance").get<std::size_t>(), rec.at("normalizer").get<std::size_t>()});
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& m : order) out.emplace_back(m, eds_from(per[m]));
  return out;
}

std::vector<BenchRow> bench(const BenchConfig& cfg) {
  if (cfg.c_max_values.empty()) throw std::invalid_argument("no c_max values to benchmark");
  if (cfg.repetitions == 0) throw std::invalid_argument("repetitions must be positive");
  const ChainModel model = load_model(cfg.model);
  std::vector<std::vector<SymbolId>> inputs;
  for (auto rec : load_dataset(cfg.data)) {
    rec.states.reset();
    inputs.push_back(resolve(rec, model.states(), model.alphabet()).obs);
  }
  if (inputs.empty()) throw std::invalid_argument("benchmark dataset is empty");
  for (std::size_t c : cfg.c_max_values) {
    for (const auto& obs : inputs)
      if (c == 0 || c > obs.size())
        throw std::invalid_argument("c_max " + std::to_string(c) + " outside [1, T] for a sequence");
  }

  // Repetitions are interleaved across c_max values so that transient load
  // affects every value alike.
  std::vector<std::vector<double>> times(cfg.c_max_values.size());
  double sink = 0.0;
  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    for (std::size_t k = 0; k < cfg.c_max_values.size(); ++k) {
      const std::size_t c = cfg.c_max_values[k];
      const auto start = Clock::now();
      for (const auto& obs : inputs) sink += length_distribution(model, obs, c, cfg.norm).probs[0];
      times[k].push_back(std::chrono::duration<double>(Clock::now() - start).count());
    }
  }
  std::vector<BenchRow> rows;
  for (std::size_t k = 0; k < cfg.c_max_values.size(); ++k) {
    auto& t = times[k];
    std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end());
    const double median = t[t.size() / 2];
    const std::size_t c = cfg.c_max_values[k];
    rows.push_back({c, median, median / static_cast<double>(c)});
  }
  if (std::isnan(sink)) throw std::runtime_error("benchmark produced NaN");
  return rows;
}

std::string format_bench(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << std::setw(8) << "c_max" << std::setw(16) << "median_s" << std::setw(16) << "s_per_cmax"
      << '\n';
  out << std::scientific << std::setprecision(4);
  for (const auto& r : rows)
    out << std::setw(8) << r.c_max << std::setw(16) << r.median_seconds << std::setw(16)
        << r.seconds_per_c_max << '\n';
  return out.str();
}

}  // namespace cinf
