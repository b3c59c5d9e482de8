// cinf: generate robot data, fit chain models, decode, evaluate, benchmark.
//
// Exit codes: 0 success, 2 invalid arguments, 3 I/O failure,
// 4 resource limit (oracle budget).

#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cinf/errors.hpp"
#include "cinf/pipeline.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;
constexpr int kExitResource = 4;

cinf::Normalization parse_norm(const std::string& name) {
  if (name == "exact") return cinf::Normalization::kExact;
  if (name == "truncated") return cinf::Normalization::kTruncated;
  throw std::invalid_argument("--norm must be exact or truncated");
}

void check_readable(const std::string& path, const char* what) {
  if (!std::filesystem::exists(path))
    throw cinf::IoError(std::string(what) + " '" + path + "' does not exist");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed-sequence inference for linear-chain models"};
  app.require_subcommand(1);

  // gen-robot
  cinf::GenRobotConfig gen;
  std::string gen_world, gen_out, gen_blocked = "stay";
  std::vector<std::size_t> gen_lengths = {100, 300};
  auto* gen_cmd = app.add_subcommand("gen-robot", "Simulate the grid-world robot");
  gen_cmd->add_option("--world", gen_world, "World map file (b/g/y/r/# per cell)");
  gen_cmd->add_option("-n,--count", gen.n, "Number of sequences")->capture_default_str();
  gen_cmd->add_option("--lengths", gen_lengths, "Sequence length range LO HI")
      ->expected(2)
      ->capture_default_str();
  gen_cmd->add_option("--accuracy", gen.accuracy, "Sensor accuracy P in percent")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--move-prob", gen.robot.move_probability,
                      "Per-step probability of attempting a move")
      ->capture_default_str();
  gen_cmd->add_option("--blocked", gen_blocked, "Blocked move handling: stay | resample")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Dataset output path")->required();

  // fit
  cinf::FitConfig fit;
  std::string fit_data, fit_out;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate a model by smoothed counting");
  fit_cmd->add_option("--data", fit_data, "Labeled dataset")->required();
  fit_cmd->add_option("--smoothing", fit.smoothing, "Additive smoothing")->capture_default_str();
  fit_cmd->add_option("--out,--model", fit_out, "Model output path")->required();

  // infer
  cinf::InferConfig infer;
  std::string infer_model, infer_data, infer_out, infer_norm = "exact";
  std::vector<std::string> infer_methods;
  std::size_t infer_cmax = 0;
  std::uint64_t infer_budget = infer.oracle_budget;
  auto* infer_cmd = app.add_subcommand("infer", "Decode compressed state sequences");
  infer_cmd->add_option("--model", infer_model, "Model file")->required();
  infer_cmd->add_option("--data", infer_data, "Dataset file")->required();
  infer_cmd->add_option("--method", infer_methods,
                        "viterbi | marginal | compressed | oracle (repeatable)");
  infer_cmd->add_option("--cmax", infer_cmax, "Largest compressed length (default min(T,128))");
  infer_cmd->add_option("--norm", infer_norm, "exact | truncated")->capture_default_str();
  infer_cmd->add_option("--oracle-budget", infer_budget, "Enumeration cap for --method oracle")
      ->capture_default_str();
  infer_cmd->add_option("--seed", infer.seed, "Recorded in the output header");
  infer_cmd->add_option("--out", infer_out, "Predictions output path")->required();

  // evaluate
  cinf::EvaluateConfig eval;
  std::string eval_pred, eval_data, eval_out;
  auto* eval_cmd = app.add_subcommand("evaluate", "Exact and EDS scores per method");
  eval_cmd->add_option("--predictions", eval_pred, "Predictions file")->required();
  eval_cmd->add_option("--data", eval_data, "Labeled dataset")->required();
  eval_cmd->add_option("--seed", eval.seed, "Recorded in the report header");
  eval_cmd->add_option("--out", eval_out, "Report output path")->required();

  // bench
  cinf::BenchConfig bench;
  std::string bench_model, bench_data, bench_norm = "truncated";
  auto* bench_cmd = app.add_subcommand("bench", "Time the length distribution per c_max");
  bench_cmd->add_option("--model", bench_model, "Model file")->required();
  bench_cmd->add_option("--data", bench_data, "Dataset file")->required();
  bench_cmd->add_option("--cmax", bench.c_max_values, "c_max values")->required();
  bench_cmd->add_option("--norm", bench_norm, "exact | truncated")->capture_default_str();
  bench_cmd->add_option("--reps", bench.repetitions, "Repetitions per value")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*gen_cmd) {
      if (!gen_world.empty()) {
        check_readable(gen_world, "world map");
        gen.world = gen_world;
      }
      if (gen_blocked == "stay")
        gen.robot.blocked = cinf::BlockedMove::kStay;
      else if (gen_blocked == "resample")
        gen.robot.blocked = cinf::BlockedMove::kResample;
      else
        throw std::invalid_argument("--blocked must be stay or resample");
      gen.min_length = gen_lengths.at(0);
      gen.max_length = gen_lengths.at(1);
      gen.out = gen_out;
      cinf::gen_robot(gen);
      std::cout << "wrote " << gen.n << " sequences to " << gen_out << " (seed " << gen.seed
                << ")\n";
    } else if (*fit_cmd) {
      check_readable(fit_data, "dataset");
      fit.data = fit_data;
      fit.out = fit_out;
      const auto s = cinf::fit(fit);
      std::cout << "M = " << s.num_states << ", V = " << s.num_symbols << '\n';
      std::cout << "state  transition_entropy  emission_entropy\n";
      for (std::size_t i = 0; i < s.num_states; ++i)
        std::cout << i << "  " << s.transition_entropy[i] << "  " << s.emission_entropy[i] << '\n';
      if (s.has_forbidden_entries)
        std::cerr << "warning: model contains -inf weights (zero counts without smoothing)\n";
    } else if (*infer_cmd) {
      check_readable(infer_model, "model");
      check_readable(infer_data, "dataset");
      infer.model = infer_model;
      infer.data = infer_data;
      infer.out = infer_out;
      infer.norm = parse_norm(infer_norm);
      infer.oracle_budget = infer_budget;
      if (infer_cmd->count("--cmax")) infer.c_max = infer_cmax;
      if (!infer_methods.empty()) {
        infer.methods.clear();
        for (const auto& m : infer_methods) infer.methods.push_back(cinf::parse_method(m));
      }
      const auto records = cinf::infer(infer);
      std::size_t dups = 0;
      for (const auto& r : records) dups += r.adjacent_duplicates;
      std::cout << "wrote " << records.size() << " predictions to " << infer_out << '\n';
      if (dups > 0)
        std::cerr << "note: " << dups
                  << " adjacent duplicate states in compressed predictions (kept verbatim)\n";
    } else if (*eval_cmd) {
      check_readable(eval_pred, "predictions");
      check_readable(eval_data, "dataset");
      eval.predictions = eval_pred;
      eval.data = eval_data;
      eval.out = eval_out;
      std::cout << cinf::format_table(cinf::evaluate_predictions(eval));
    } else if (*bench_cmd) {
      check_readable(bench_model, "model");
      check_readable(bench_data, "dataset");
      bench.model = bench_model;
      bench.data = bench_data;
      bench.norm = parse_norm(bench_norm);
      std::cout << cinf::format_bench(cinf::bench(bench));
    }
  } catch (const cinf::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const cinf::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
