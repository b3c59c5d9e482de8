#include <stdexcept>
#include <chrono>
#include <cmath>

#include "doctest.h"
#include "cinf/compressed.hpp"
#include "cinf/errors.hpp"
#include "cinf/logspace.hpp"
#include "cinf/vanilla.hpp"
#include "support/brute.hpp"

using namespace cinf;

TEST_CASE("vector recursion matches enumeration for every compressed sequence") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t M = 2 + trial % 2;
    const std::size_t T = 2 + trial % 5;
    const auto m = testsupport::random_model(M, 3, rng);
    const auto x = testsupport::random_obs(T, 3, rng);
    const auto b = testsupport::brute(m, x);
    for (std::size_t c = 1; c <= T; ++c) {
      for (const auto& s : testsupport::all_compressed(M, c)) {
        const auto it = b.compressed.find(s);
        const double expected = it == b.compressed.end() ? 0.0 : it->second;
        const CompressedSequence s0(s);
        const double vec = compressed_sequence_log_lattice(m, x, s0);
        CHECK(std::abs(std::exp(vec) - expected) <= 1e-12 * b.Z);
        const double tab =
            constraint_log_Z(m, x, ConstraintSet::fixed_sequence(s0, M), c, Execution::kSerial);
        CHECK(std::abs(std::exp(tab) - expected) <= 1e-12 * b.Z);
      }
    }
    const CompressedSequence too_long(testsupport::all_compressed(M, T + 1).front());
    CHECK(compressed_sequence_log_lattice(m, x, too_long) == kLogZero);
  }
}

TEST_CASE("length distribution and marginals match enumeration") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t M = 2 + trial % 3;
    const std::size_t T = 1 + trial % 6;
    const auto m = testsupport::random_model(M, 2, rng);
    const auto x = testsupport::random_obs(T, 2, rng);
    const auto b = testsupport::brute(m, x);

    CHECK(log_partition_via_table(m, x) == doctest::Approx(std::log(b.Z)).epsilon(1e-12));
    const auto dist = length_distribution(m, x, T);
    for (std::size_t c = 1; c <= T; ++c)
      CHECK(std::abs(dist.probability(c) - b.length_mass[c - 1] / b.Z) <= 1e-12);
    CHECK(dist.probability(0) == 0.0);

    for (std::size_t c = 1; c <= T; ++c) {
      if (b.length_mass[c - 1] == 0.0) continue;
      for (std::size_t i = 0; i < c; ++i) {
        const auto row = compressed_marginal_row(m, x, c, i);
        const auto ref = testsupport::brute_marginal(b, M, c, i);
        for (std::size_t j = 0; j < M; ++j) CHECK(std::abs(row[j] - ref[j]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("uniform two-state model at T = 3") {
  const auto m = ChainModel::uniform(StateSpace({"a", "b"}), ObservationAlphabet({"p"}));
  const std::vector<SymbolId> x = {0, 0, 0};
  const auto dist = length_distribution(m, x, 3);
  CHECK(std::abs(dist.probability(1) - 0.25) <= 1e-12);
  CHECK(std::abs(dist.probability(2) - 0.5) <= 1e-12);
  CHECK(std::abs(dist.probability(3) - 0.25) <= 1e-12);
  const double log_Z = log_partition_via_table(m, x);
  CHECK(std::abs(log_Z - std::log(8.0)) <= 1e-12);
  const auto p = [&](StateString s) {
    return std::exp(compressed_sequence_log_lattice(m, x, CompressedSequence(s)) - log_Z);
  };
  CHECK(std::abs(p({0}) - 0.125) <= 1e-12);
  CHECK(std::abs(p({0, 1}) - 0.25) <= 1e-12);
  CHECK(std::abs(p({1, 0, 1}) - 0.125) <= 1e-12);
}

TEST_CASE("truncated normalization sums to one over 1..c_max") {
  std::mt19937_64 rng(23);
  const auto m = testsupport::random_model(3, 2, rng);
  const auto x = testsupport::random_obs(12, 2, rng);
  const auto exact = length_distribution(m, x, 4, Normalization::kExact);
  const auto trunc = length_distribution(m, x, 4, Normalization::kTruncated);
  double total = 0.0;
  for (double p : trunc.probs) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  double exact_total = 0.0;
  for (double p : exact.probs) exact_total += p;
  CHECK(exact_total < 1.0);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(trunc.probs[k] == doctest::Approx(exact.probs[k] / exact_total).epsilon(1e-12));
  CHECK_THROWS_AS(exact.probability(5), std::out_of_range);
  CHECK(exact.probability(13) == 0.0);
}

TEST_CASE("fixed-cell masses at one position sum to the row mass") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testsupport::random_model(4, 3, rng);
    const auto x = testsupport::random_obs(9, 3, rng);
    const auto rows = row_log_masses(m, x, ConstraintSet::full_table(9, 4));
    for (std::size_t c = 1; c <= 6; ++c) {
      for (std::size_t i = 0; i < c; ++i) {
        const double total = log_sum_exp(position_log_masses(m, x, c, i));
        CHECK(std::abs(std::exp(total - rows[c - 1]) - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("node marginals from the constrained partition") {
  std::mt19937_64 rng(25);
  const auto m = testsupport::random_model(3, 2, rng);
  const auto x = testsupport::random_obs(6, 2, rng);
  const auto post = posterior_marginals(m, x);
  const double log_Z = forward_backward(m, x).log_Z;
  for (std::size_t t = 0; t < 6; ++t)
    for (StateId j = 0; j < 3; ++j)
      CHECK(std::abs(std::exp(constrained_log_Z(m, x, {{t, j}}) - log_Z) - post(t, j)) <= 1e-12);
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  std::mt19937_64 rng(26);
  const auto m = testsupport::random_model(16, 5, rng);
  const auto x = testsupport::random_obs(200, 5, rng);
  // height * M = 1280 exceeds the parallel threshold.
  const auto q = ConstraintSet::full_table(80, 16);
  const auto a = table_forward(m, x, q, Execution::kSerial);
  const auto b = table_forward(m, x, q, Execution::kParallel);
  for (std::size_t t = 0; t < 200; ++t) {
    const auto sa = a.slice(t);
    const auto sb = b.slice(t);
    CHECK(std::equal(sa.begin(), sa.end(), sb.begin()));
  }
  const auto fixed = ConstraintSet::fixed_cell(80, 16, 3, 7);
  const LatticeKernel k(m, fixed);
  CHECK(k.run_final(x, Execution::kSerial) == k.run_final(x, Execution::kParallel));
}

TEST_CASE("rows above t stay at log zero") {
  std::mt19937_64 rng(27);
  const auto m = testsupport::random_model(3, 2, rng);
  const auto x = testsupport::random_obs(5, 2, rng);
  const auto tab = table_forward(m, x, ConstraintSet::full_table(5, 3), Execution::kSerial);
  for (std::size_t t = 0; t < 5; ++t)
    for (std::size_t r = t + 1; r < 5; ++r)
      for (StateId j = 0; j < 3; ++j) CHECK(tab(t, r, j) == kLogZero);
}

TEST_CASE("decode picks the modal length and per-position argmax") {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testsupport::random_model(3, 3, rng);
    const auto x = testsupport::random_obs(6, 3, rng);
    const auto b = testsupport::brute(m, x);
    const auto d = compressed_decode(m, x, 6);
    std::size_t best = 0;
    for (std::size_t c = 1; c < 6; ++c)
      if (b.length_mass[c] > b.length_mass[best]) best = c;
    CHECK(d.length == best + 1);
    REQUIRE(d.states.size() == d.length);
    for (std::size_t i = 0; i < d.length; ++i) {
      const auto ref = testsupport::brute_marginal(b, 3, d.length, i);
      CHECK(ref[d.states[i]] == doctest::Approx(*std::max_element(ref.begin(), ref.end())));
    }
  }
}

TEST_CASE("zero-mass lengths and zero-probability inputs") {
  Matrix trans(2, 2, 0.0), emit(2, 1, 0.0);
  trans(0, 1) = -std::numeric_limits<double>::infinity();
  trans(1, 0) = -std::numeric_limits<double>::infinity();
  ChainModel sticky(StateSpace({"a", "b"}), ObservationAlphabet({"p"}), {0.0, 0.0}, trans, emit);
  const std::vector<SymbolId> x = {0, 0, 0};
  CHECK(length_distribution(sticky, x, 3).probability(2) == 0.0);
  CHECK_THROWS_AS(compressed_marginal_row(sticky, x, 2, 0), UndefinedConditionalError);

  Matrix no_emit(2, 1, -std::numeric_limits<double>::infinity());
  ChainModel dead(StateSpace({"a", "b"}), ObservationAlphabet({"p"}), {0.0, 0.0}, Matrix(2, 2),
                  no_emit);
  CHECK_THROWS_AS(length_distribution(dead, x, 3), UndefinedConditionalError);
}

TEST_CASE("argument checks") {
  const auto m = ChainModel::uniform(StateSpace({"a", "b"}), ObservationAlphabet({"p"}));
  const std::vector<SymbolId> x = {0, 0, 0};
  CHECK_THROWS_AS(length_distribution(m, x, 0), std::invalid_argument);
  CHECK_THROWS_AS(length_distribution(m, x, 4), std::invalid_argument);
  CHECK_THROWS_AS(compressed_marginal_row(m, x, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(table_forward(m, x, ConstraintSet::full_table(4, 2)), std::invalid_argument);
  CHECK(default_c_max(50) == 50);
  CHECK(default_c_max(500) == 128);
}

TEST_CASE("table cost grows linearly in its height") {
  std::mt19937_64 rng(29);
  const auto m = testsupport::random_model(16, 4, rng);
  const auto x = testsupport::random_obs(300, 4, rng);
  auto time = [&](std::size_t h) {
    const LatticeKernel k(m, ConstraintSet::full_table(h, 16));
    double best = 1e9;
    for (int r = 0; r < 3; ++r) {
      const auto a = std::chrono::steady_clock::now();
      (void)k.run_final(x, Execution::kSerial);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count());
    }
    return best;
  };
  const double ratio = time(64) / time(16);
  CHECK(ratio > 2.0);
  CHECK(ratio < 6.0);
}
