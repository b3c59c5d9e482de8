// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cinf/compressed.hpp"
#include "cinf/datagen.hpp"
#include "cinf/logspace.hpp"
#include "cinf/metrics.hpp"
#include "cinf/model_io.hpp"
#include "cinf/oracle.hpp"
#include "cinf/pipeline.hpp"
#include "cinf/vanilla.hpp"
#include "support/brute.hpp"

using namespace cinf;
namespace fs = std::filesystem;

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kClosedFormTol = 1e-12;
constexpr std::size_t kInstances = 200;

struct Instance {
  ChainModel model;
  std::vector<SymbolId> obs;
};

// M alternates over {2, 3}; T cycles over 2..7.
std::vector<Instance> instance_family(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (std::size_t i = 0; i < kInstances; ++i) {
    const std::size_t M = 2 + i % 2;
    const std::size_t T = 2 + (i / 2) % 6;
    auto m = testsupport::random_model(M, 3, rng, -2.0, 2.0);
    auto x = testsupport::random_obs(T, 3, rng);
    out.push_back({std::move(m), std::move(x)});
  }
  return out;
}

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s  [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion_1(const std::vector<Instance>& family) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& [m, x] : family) {
    const auto oracle = oracle_compressed_distribution(m, x);
    const double log_Z = log_partition_via_table(m, x);
    for (std::size_t c = 1; c <= x.size(); ++c) {
      for (const auto& s : testsupport::all_compressed(m.num_states(), c)) {
        const CompressedSequence s0(s);
        const auto it = oracle.find(s0);
        const double expected = it == oracle.end() ? 0.0 : it->second;
        const double got = std::exp(compressed_sequence_log_lattice(m, x, s0) - log_Z);
        worst = std::max(worst, std::abs(got - expected));
        ++checked;
      }
    }
  }
  const double secs = seconds_since(t0);
  report(1, worst <= kOracleTol && secs <= 60.0, "compressed sequence probability vs oracle",
         std::to_string(family.size()) + " instances, " + std::to_string(checked) +
             " sequences, max err " + fmt("%.3g", worst) + ", " + fmt("%.2f s", secs));
}

void criterion_2(const std::vector<Instance>& family) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& [m, x] : family) {
    const auto oracle = oracle_length_distribution(m, x);
    const auto dist = length_distribution(m, x, x.size());
    for (std::size_t c = 1; c <= x.size(); ++c)
      worst = std::max(worst, std::abs(dist.probability(c) - oracle[c - 1]));
  }
  const double secs = seconds_since(t0);
  report(2, worst <= kOracleTol && secs <= 60.0, "length distribution vs oracle",
         "max err " + fmt("%.3g", worst) + ", " + fmt("%.2f s", secs));
}

void criterion_3(const std::vector<Instance>& family) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t rows = 0;
  for (const auto& [m, x] : family) {
    const auto lengths = oracle_length_distribution(m, x);
    for (std::size_t c = 1; c <= x.size(); ++c) {
      if (lengths[c - 1] == 0.0) continue;
      for (std::size_t i = 0; i < c; ++i) {
        const auto got = compressed_marginal_row(m, x, c, i);
        const auto expected = oracle_compressed_marginal(m, x, c, i);
        for (std::size_t j = 0; j < got.size(); ++j)
          worst = std::max(worst, std::abs(got[j] - expected[j]));
        ++rows;
      }
    }
  }
  const double secs = seconds_since(t0);
  report(3, worst <= kOracleTol && secs <= 120.0, "compressed marginals vs oracle",
         std::to_string(rows) + " (c, i) rows, max err " + fmt("%.3g", worst) + ", " +
             fmt("%.2f s", secs));
}

void criterion_4(const std::vector<Instance>& family) {
  double z_err = 0.0, cell_err = 0.0, sum_err = 0.0;
  for (const auto& [m, x] : family) {
    const std::size_t T = x.size();
    const std::size_t M = m.num_states();
    z_err = std::max(z_err, std::abs(log_partition_via_table(m, x) - forward_backward(m, x).log_Z));

    const auto rows = row_log_masses(m, x, ConstraintSet::full_table(T, M));
    for (std::size_t c = 1; c <= T; ++c) {
      if (rows[c - 1] == kLogZero) continue;
      for (std::size_t i = 0; i < c; ++i) {
        const double total = log_sum_exp(position_log_masses(m, x, c, i));
        cell_err = std::max(cell_err, std::abs(std::exp(total - rows[c - 1]) - 1.0));
      }
    }
    double total = 0.0;
    for (double p : length_distribution(m, x, T).probs) total += p;
    sum_err = std::max(sum_err, std::abs(total - 1.0));
  }
  const bool pass = z_err <= kOracleTol && cell_err <= kOracleTol && sum_err <= kOracleTol;
  report(4, pass, "partition identities",
         "table vs forward-backward log Z " + fmt("%.3g", z_err) + ", sum_j Z(Q_ij) rel " +
             fmt("%.3g", cell_err) + ", sum p(c) " + fmt("%.3g", sum_err));
}

void criterion_5() {
  const auto m = ChainModel::uniform(StateSpace({"a", "b"}), ObservationAlphabet({"p"}));
  const std::vector<SymbolId> x = {0, 0, 0};
  const auto dist = length_distribution(m, x, 3);
  const std::vector<double> want_len = {0.25, 0.5, 0.25};
  double worst = 0.0;
  for (std::size_t c = 1; c <= 3; ++c)
    worst = std::max(worst, std::abs(dist.probability(c) - want_len[c - 1]));

  const std::vector<std::pair<StateString, double>> want_seq = {
      {{0}, 0.125}, {{1}, 0.125}, {{0, 1}, 0.25}, {{1, 0}, 0.25}, {{0, 1, 0}, 0.125},
      {{1, 0, 1}, 0.125}};
  const double log_Z = log_partition_via_table(m, x);
  double total = 0.0;
  for (const auto& [s, p] : want_seq) {
    const double got = std::exp(compressed_sequence_log_lattice(m, x, CompressedSequence(s)) - log_Z);
    worst = std::max(worst, std::abs(got - p));
    total += got;
  }
  worst = std::max(worst, std::abs(total - 1.0));
  report(5, worst <= kClosedFormTol, "uniform M=2 T=3 closed form", "max err " + fmt("%.3g", worst));
}

void criterion_6(const std::vector<Instance>& family) {
  double worst = 0.0;
  for (const auto& [m, x] : family) {
    const auto fb = forward_backward(m, x);
    const auto post = posterior_marginals(fb);
    for (std::size_t t = 0; t < x.size(); ++t)
      for (StateId j = 0; j < m.num_states(); ++j)
        worst = std::max(worst, std::abs(std::exp(constrained_log_Z(m, x, {{t, j}}) - fb.log_Z) -
                                         post(t, j)));
  }
  report(6, worst <= kClosedFormTol, "constrained partition equals node marginal",
         "max err " + fmt("%.3g", worst));
}

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto world = default_world();
  std::string detail;
  bool pass = true;
  for (double P : {100.0, 70.0, 60.0, 50.0}) {
    int wins = 0;
    double min_eds = 100.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto train = robot_dataset(world, 100, 100, 300, P, seed * 1000 + 1);
      const auto test = robot_dataset(world, 100, 100, 300, P, seed * 1000 + 2);
      const auto model = estimate_counts(world.state_space(), color_alphabet(), train, 1.0);
      std::vector<StateString> truth, joint, marginal, comp;
      for (const auto& s : test) {
        truth.push_back(compress(*s.states).entries());
        joint.push_back(baseline_compressed(model, s.obs, BaselineMethod::kJoint).entries());
        marginal.push_back(baseline_compressed(model, s.obs, BaselineMethod::kMarginal).entries());
        comp.push_back(compressed_decode(model, s.obs, default_c_max(s.length())).states);
      }
      const double ej = evaluate(joint, truth).eds;
      const double em = evaluate(marginal, truth).eds;
      const double ec = evaluate(comp, truth).eds;
      wins += ec >= ej && ec >= em;
      min_eds = std::min({min_eds, ej, em, ec});
    }
    if (P == 100.0) {
      pass = pass && min_eds >= 99.0;
      detail += "P=100 min EDS " + fmt("%.2f", min_eds);
    } else {
      pass = pass && wins >= 4;
      detail += ", P=" + fmt("%.0f", P) + " wins " + std::to_string(wins) + "/5";
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && secs <= 600.0;
  report(7, pass, "robot ordering", detail + ", " + fmt("%.1f s", secs));
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cinf_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void criterion_8() {
  const auto dir = scratch_dir("bench");
  std::mt19937_64 rng(808);
  const auto model = testsupport::random_stochastic_model(16, 8, rng);
  save_model(model, dir / "model.json");
  std::vector<RawSequence> data;
  for (std::uint64_t k = 0; k < 8; ++k)
    data.push_back(to_raw(sample_chain(model, 300, k), model.states(), model.alphabet()));
  save_dataset(data, dir / "data.jsonl");

  BenchConfig cfg;
  cfg.model = dir / "model.json";
  cfg.data = dir / "data.jsonl";
  cfg.c_max_values = {8, 16, 32, 64};
  cfg.repetitions = 7;
  const auto rows = bench(cfg);
  double mean = 0.0;
  for (const auto& r : rows) mean += r.seconds_per_c_max;
  mean /= static_cast<double>(rows.size());
  double spread = 0.0;
  std::string detail;
  for (const auto& r : rows) {
    spread = std::max(spread, std::abs(r.seconds_per_c_max / mean - 1.0));
    detail += std::to_string(r.c_max) + ":" + fmt("%.3g", r.seconds_per_c_max) + " ";
  }
  report(8, spread <= 0.30, "time per c_max constant at T=300, M=16",
         detail + "s/c_max, max deviation " + fmt("%.1f%%", 100.0 * spread));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CINF_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void criterion_9() {
  const auto dir = scratch_dir("determinism");
  const std::string d = dir.string();
  const std::vector<std::string> steps = {
      "gen-robot -n 40 --accuracy 70 --seed 17 --out " + d + "/data.jsonl",
      "fit --data " + d + "/data.jsonl --out " + d + "/model.json",
      "infer --model " + d + "/model.json --data " + d +
          "/data.jsonl --method viterbi --method marginal --method compressed --seed 17 --out " + d +
          "/pred.jsonl",
      "evaluate --predictions " + d + "/pred.jsonl --data " + d + "/data.jsonl --seed 17 --out " +
          d + "/report.jsonl",
  };
  const std::vector<std::string> files = {"data.jsonl", "data.jsonl.meta.json", "model.json",
                                          "pred.jsonl", "report.jsonl"};
  std::vector<std::string> first;
  bool ok = true;
  for (int round = 0; round < 2; ++round) {
    for (const auto& s : steps) ok = ok && run_cli(s) == 0;
    for (std::size_t f = 0; f < files.size(); ++f) {
      const auto bytes = slurp(dir / files[f]);
      ok = ok && !bytes.empty();
      if (round == 0)
        first.push_back(bytes);
      else
        ok = ok && bytes == first[f];
    }
    if (round == 0)
      for (const auto& f : files) fs::remove(dir / f);
  }
  report(9, ok, "identical invocations give byte-identical files",
         std::to_string(files.size()) + " files compared");
}

}  // namespace

int main() {
  const auto family = instance_family(20240601);
  const std::vector<std::function<void()>> criteria = {
      [&] { criterion_1(family); }, [&] { criterion_2(family); }, [&] { criterion_3(family); },
      [&] { criterion_4(family); }, [] { criterion_5(); },        [&] { criterion_6(family); },
      [] { criterion_7(); },        [] { criterion_8(); },        [] { criterion_9(); },
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, "criterion raised", e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
