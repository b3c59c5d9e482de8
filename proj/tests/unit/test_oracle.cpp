#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "cinf/errors.hpp"
#include "cinf/oracle.hpp"
#include "support/brute.hpp"

using namespace cinf;

TEST_CASE("library oracle agrees with the linear-domain enumeration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t M = 2 + trial % 2;
    const std::size_t T = 1 + trial % 6;
    const auto m = testsupport::random_model(M, 2, rng);
    const auto x = testsupport::random_obs(T, 2, rng);
    const auto b = testsupport::brute(m, x);

    const auto post = enumerate_posterior(m, x);
    CHECK(post.size() == static_cast<std::size_t>(std::pow(M, T)));
    double total = 0.0;
    for (const auto& w : post) total += w.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    const auto dist = oracle_compressed_distribution(m, x);
    CHECK(dist.size() == b.compressed.size());
    for (const auto& [s, w] : b.compressed)
      CHECK(std::abs(dist.at(CompressedSequence(s)) - w / b.Z) <= 1e-12);

    const auto len = oracle_length_distribution(m, x);
    REQUIRE(len.size() == T);
    for (std::size_t c = 0; c < T; ++c) CHECK(std::abs(len[c] - b.length_mass[c] / b.Z) <= 1e-12);

    for (std::size_t c = 1; c <= T; ++c) {
      for (std::size_t i = 0; i < c; ++i) {
        const auto row = oracle_compressed_marginal(m, x, c, i);
        const auto ref = testsupport::brute_marginal(b, M, c, i);
        for (std::size_t j = 0; j < M; ++j) CHECK(std::abs(row[j] - ref[j]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("oracle refuses instances over budget") {
  const auto m = ChainModel::uniform(StateSpace({"a", "b", "c"}), ObservationAlphabet({"p"}));
  const std::vector<SymbolId> x(10, 0);
  CHECK_THROWS_WITH_AS(enumerate_posterior(m, x, OracleBudget{1000}), doctest::Contains("3^10"),
                       ResourceLimitError);
  CHECK_NOTHROW(enumerate_posterior(m, std::vector<SymbolId>(6, 0), OracleBudget{1000}));
}

TEST_CASE("oracle conditional on an empty length is undefined") {
  Matrix trans(2, 2, 0.0);
  trans(0, 1) = -std::numeric_limits<double>::infinity();
  trans(1, 0) = -std::numeric_limits<double>::infinity();
  ChainModel sticky(StateSpace({"a", "b"}), ObservationAlphabet({"p"}), {0.0, 0.0}, trans,
                    Matrix(2, 1));
  const std::vector<SymbolId> x = {0, 0};
  CHECK_THROWS_AS(oracle_compressed_marginal(sticky, x, 2, 0), UndefinedConditionalError);
  CHECK(oracle_compressed_decode(sticky, x, 2) == StateString{0});
}
