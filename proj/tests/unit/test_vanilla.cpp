#include <stdexcept>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "cinf/vanilla.hpp"
#include "support/brute.hpp"

using namespace cinf;

TEST_CASE("forward-backward partition and marginals agree with enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t M = 2 + trial % 3;
    const std::size_t T = 1 + trial % 6;
    const auto m = testsupport::random_model(M, 3, rng);
    const auto x = testsupport::random_obs(T, 3, rng);
    const auto b = testsupport::brute(m, x);

    const auto fb = forward_backward(m, x);
    CHECK(fb.log_Z == doctest::Approx(std::log(b.Z)).epsilon(1e-12));
    for (std::size_t j = 0; j < M; ++j) CHECK(fb.log_beta(T - 1, j) == 0.0);

    const auto post = posterior_marginals(m, x);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t j = 0; j < M; ++j)
        CHECK(std::abs(post(t, j) - b.node_mass[t][j] / b.Z) <= 1e-12);

    const auto v = viterbi(m, x);
    CHECK(v.states == b.argmax);
    CHECK(v.log_score == doctest::Approx(std::log(b.max_weight)).epsilon(1e-12));
  }
}

TEST_CASE("constrained partition over fixed states") {
  std::mt19937_64 rng(12);
  const auto m = testsupport::random_model(3, 2, rng);
  const auto x = testsupport::random_obs(5, 2, rng);

  double expected = 0.0;
  std::vector<StateId> y(5, 0);
  for (std::size_t code = 0; code < 243; ++code) {
    std::size_t c = code;
    for (auto& v : y) {
      v = static_cast<StateId>(c % 3);
      c /= 3;
    }
    if (y[1] == 2 && y[3] == 0) expected += testsupport::weight(m, x, y);
  }
  CHECK(constrained_log_Z(m, x, {{1, 2}, {3, 0}}) ==
        doctest::Approx(std::log(expected)).epsilon(1e-12));
  CHECK(constrained_log_Z(m, x, {}) == doctest::Approx(forward_backward(m, x).log_Z));

  CHECK_THROWS_AS(constrained_log_Z(m, x, {{3, 0}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(constrained_log_Z(m, x, {{1, 0}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(constrained_log_Z(m, x, {{5, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(constrained_log_Z(m, x, {{0, 3}}), std::invalid_argument);
}

TEST_CASE("decoders break ties toward the lowest state index") {
  const auto m = ChainModel::uniform(StateSpace({"a", "b", "c"}), ObservationAlphabet({"p"}));
  const std::vector<SymbolId> x = {0, 0, 0, 0};
  CHECK(viterbi(m, x).states == StateString{0, 0, 0, 0});
  CHECK(marginal_decode(m, x) == StateString{0, 0, 0, 0});
  CHECK(baseline_compressed(m, x, BaselineMethod::kJoint).entries() == StateString{0});
}

TEST_CASE("forbidden transitions and starts are respected") {
  const double ninf = -std::numeric_limits<double>::infinity();
  Matrix trans(3, 3, 0.0), emit(3, 1, 0.0);
  trans(0, 0) = ninf;
  trans(0, 1) = ninf;
  trans(2, 1) = ninf;
  ChainModel m(StateSpace({"a", "b", "c"}), ObservationAlphabet({"p"}),
               {std::log(0.5), std::log(0.5), ninf}, trans, emit);
  const std::vector<SymbolId> x = {0, 0, 0};
  const auto b = testsupport::brute(m, x);
  const auto post = posterior_marginals(m, x);
  for (std::size_t t = 0; t < 3; ++t)
    for (StateId j = 0; j < 3; ++j) CHECK(std::abs(post(t, j) - b.node_mass[t][j] / b.Z) <= 1e-12);
  CHECK(post(0, 2) == 0.0);
  // Several paths tie for the maximum here; compare scores only.
  CHECK(viterbi(m, x).log_score == doctest::Approx(std::log(b.max_weight)).epsilon(1e-12));
}

TEST_CASE("empty observations are rejected") {
  const auto m = ChainModel::uniform(StateSpace({"a"}), ObservationAlphabet({"p"}));
  const std::vector<SymbolId> x;
  CHECK_THROWS_AS(forward_backward(m, x), std::invalid_argument);
  CHECK_THROWS_AS(viterbi(m, x), std::invalid_argument);
}
