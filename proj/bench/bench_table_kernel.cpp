// Serial reference vs OpenMP lattice kernel on random models.
//
//   bench_table_kernel [T] [M] [height] [reps]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "cinf/compressed.hpp"
#include "cinf/lattice_kernel.hpp"

namespace {

cinf::ChainModel random_model(std::size_t M, std::size_t V, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  std::vector<std::string> states, symbols;
  for (std::size_t i = 0; i < M; ++i) states.push_back("s" + std::to_string(i));
  for (std::size_t v = 0; v < V; ++v) symbols.push_back("x" + std::to_string(v));
  std::vector<double> init(M);
  for (auto& v : init) v = w(rng);
  cinf::Matrix trans(M, M), emit(M, V);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) trans(i, j) = w(rng);
    for (std::size_t v = 0; v < V; ++v) emit(i, v) = w(rng);
  }
  return cinf::ChainModel(cinf::StateSpace(states), cinf::ObservationAlphabet(symbols), init, trans,
                          emit);
}

template <class F>
double median_seconds(std::size_t reps, F&& f) {
  std::vector<double> t;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto a = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count());
  }
  std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
  return t[t.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t T = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 300;
  const std::size_t M = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 16;
  const std::size_t H = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 128;
  const std::size_t reps = argc > 4 ? std::strtoul(argv[4], nullptr, 10) : 5;

  std::mt19937_64 rng(7);
  const auto model = random_model(M, 8, rng);
  std::uniform_int_distribution<cinf::SymbolId> sym(0, 7);
  std::vector<cinf::SymbolId> obs(T);
  for (auto& x : obs) x = sym(rng);

  const auto q = cinf::ConstraintSet::full_table(std::min(H, T), M);
  const cinf::LatticeKernel kernel(model, q);
  std::vector<double> serial_out, parallel_out;
  const double serial = median_seconds(reps, [&] {
    serial_out = kernel.run_final(obs, cinf::Execution::kSerial);
  });
  const double parallel = median_seconds(reps, [&] {
    parallel_out = kernel.run_final(obs, cinf::Execution::kParallel);
  });

  std::printf("T=%zu M=%zu height=%zu threads=%d\n", T, M, q.height(), omp_get_max_threads());
  std::printf("serial    %.6f s\n", serial);
  std::printf("parallel  %.6f s\n", parallel);
  std::printf("speedup   %.2fx\n", serial / parallel);
  std::printf("identical %s\n", serial_out == parallel_out ? "yes" : "NO");
  return serial_out == parallel_out ? 0 : 1;
}
