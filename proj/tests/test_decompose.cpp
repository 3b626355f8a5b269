#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stochca/decompose.hpp"
#include "stochca/error.hpp"
#include "stochca/rules.hpp"

using namespace stochca;

TEST_SUITE("decompose") {

TEST_CASE("worked 4 x 3 example, rows are neighborhoods") {
  const std::vector<double> p{0.6, 0.3, 0.1, 0.0, 1.0, 0.0, 0.2, 0.3, 0.5, 0.4, 0.4, 0.2};
  const MatrixDecomposition d = greedy_decompose_matrix(p, 3);
  REQUIRE(d.alphas.size() == 4);
  // Choices per neighborhood (0-based state) for L^1 .. L^4.
  CHECK(d.choices[0] == std::vector<std::uint8_t>{0, 1, 2, 0});
  CHECK(d.choices[1] == std::vector<std::uint8_t>{1, 1, 1, 1});
  CHECK(d.choices[2] == std::vector<std::uint8_t>{0, 1, 0, 2});
  CHECK(d.choices[3] == std::vector<std::uint8_t>{2, 1, 2, 1});
  CHECK(d.alphas[0] == 0.4);
  CHECK(d.alphas[1] == 0.3);
  // 0.2 and 0.1 are reached through inexact binary subtractions.
  CHECK(d.alphas[2] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(d.alphas[3] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(greedy_decompose_matrix(std::vector<double>{0.5, 0.5, 1.0}, 2), DomainError);
}


TEST_CASE("uniform binary pLUT") {
  std::vector<double> half(16, 0.5);
  const Decomposition d = greedy_decompose(Plut::from_flat(2, 1, half));
  REQUIRE(d.components.size() == 2);
  CHECK(d.components[0].alpha == 0.5);
  CHECK(lut_number(d.components[0].lut).value() == 0);
  CHECK(d.components[1].alpha == 0.5);
  CHECK(lut_number(d.components[1].lut).value() == 255);
}

TEST_CASE("deterministic tables decompose to themselves") {
  for (int n = 0; n < 256; ++n) {
    const Lut l = eca_lut(EcaNumber(n));
    const Decomposition d = greedy_decompose(lut_to_plut(l));
    REQUIRE(d.components.size() == 1);
    CHECK(d.components[0].alpha == 1.0);
    CHECK(d.components[0].lut == l);
  }
  const Lut l3 = identity_lut(3, 1);
  const Decomposition d = greedy_decompose(lut_to_plut(l3));
  REQUIRE(d.components.size() == 1);
  CHECK(d.components[0].lut == l3);
}

TEST_CASE("recompose") {
  const Decomposition c3{2, 1, {{0.9, eca_lut(EcaNumber(184))}, {0.1, eca_lut(EcaNumber(232))}}};
  CHECK(recompose(c3) == c3_plut(0.1));
  const Lut l = eca_lut(EcaNumber(77));
  CHECK(recompose(Decomposition{2, 1, {{1.0, l}}}) == lut_to_plut(l));
  const Decomposition mixed{2, 1, {{0.5, l}, {0.5, identity_lut(2, 0)}}};
  CHECK_THROWS_AS(recompose(mixed), DomainError);
  CHECK_THROWS_AS(recompose(Decomposition{2, 1, {}}), DomainError);
}

TEST_CASE("dominant_component") {
  const auto t = dominant_component(totalistic_plut({0.3, 0.7}));
  CHECK(t.alpha == 0.7);
  CHECK(lut_number(t.lut).value() == 232);
  const auto c = dominant_component(c3_plut(0.05));
  CHECK(c.alpha == 0.95);
  CHECK(lut_number(c.lut).value() == 184);
  const auto e = dominant_component(lut_to_plut(eca_lut(EcaNumber(110))));
  CHECK(e.alpha == 1.0);
  CHECK(lut_number(e.lut).value() == 110);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Plut p = oracle::random_plut(2 + trial % 3, trial % 2, rng);
    CHECK(dominant_component(p) == greedy_decompose(p).components.front());
  }
}

TEST_CASE("decomposition_valid") {
  const Plut p = c3_plut(0.1);
  const Decomposition d = greedy_decompose(p);
  CHECK(decomposition_valid(d, p).valid);

  Decomposition perturbed = d;
  perturbed.components[0].alpha += 0.01;
  const auto r = decomposition_valid(perturbed, p);
  CHECK_FALSE(r.valid);
  CHECK(r.reasons.front().find("sum") != std::string::npos);

  Decomposition swapped = greedy_decompose(totalistic_plut({0.2, 0.9}));
  std::swap(swapped.components[0].lut, swapped.components[1].lut);
  const auto s = decomposition_valid(swapped, totalistic_plut({0.2, 0.9}));
  CHECK_FALSE(s.valid);
  CHECK(s.reasons.front().find("reconstruction") != std::string::npos);

  CHECK_FALSE(decomposition_valid(Decomposition{2, 1, {}}, p).valid);
  CHECK_FALSE(decomposition_valid(d, lut_to_plut(identity_lut(2, 2))).valid);
}

TEST_CASE("reconstruction, monotone coefficients, termination bound") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t radius = (trial / 3) % 2;
    const Plut p = oracle::random_plut(n, radius, rng);
    const GreedyTrace tr = greedy_decompose_traced(p);
    const Decomposition& d = tr.decomposition;
    const Plut back = recompose(d);
    for (std::size_t x = 0; x < p.values().size(); ++x)
      REQUIRE(std::abs(back.values()[x] - p.values()[x]) <= 1e-12);
    for (std::size_t m = 1; m < d.components.size(); ++m)
      REQUIRE(d.components[m].alpha <= d.components[m - 1].alpha);
    REQUIRE(d.components.back().alpha > 0.0);
    REQUIRE(std::abs(d.total() - 1.0) <= 1e-12);
    REQUIRE(d.components.size() <= n * p.rows());
    for (std::size_t m = 1; m < tr.zero_counts.size(); ++m)
      REQUIRE(tr.zero_counts[m] > tr.zero_counts[m - 1]);
  }
}

TEST_CASE("maximality of the first coefficient") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Plut p = oracle::random_plut(2 + trial % 3, trial % 2, rng);
    const Decomposition d = greedy_decompose(p);
    const double alpha1 = d.components.front().alpha;
    for (int alt = 0; alt < 10; ++alt) {
      // Independent decompositions with random per-row supports.
      for (const auto& term : oracle::random_decomposition(p, rng))
        REQUIRE(term.alpha <= alpha1 + 1e-12);
      // Splits of the greedy components into convex sub-combinations.
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (const auto& c : d.components) {
        const double w = u(rng);
        REQUIRE(c.alpha * w <= alpha1 + 1e-12);
        REQUIRE(c.alpha * (1.0 - w) <= alpha1 + 1e-12);
      }
    }
  }
}

TEST_CASE("coefficients do not depend on tie resolution") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const Plut p = oracle::random_plut(2 + trial % 3, trial % 2, rng);
    const auto lo = greedy_decompose(p, TieBreak::lowest_index);
    const auto hi = greedy_decompose(p, TieBreak::highest_index);
    REQUIRE(lo.components.size() == hi.components.size());
    for (std::size_t m = 0; m < lo.components.size(); ++m)
      CHECK(std::abs(lo.components[m].alpha - hi.components[m].alpha) <= 1e-12);
  }
  std::vector<double> half(16, 0.5);
  const auto hi = greedy_decompose(Plut::from_flat(2, 1, half), TieBreak::highest_index);
  CHECK(lut_number(hi.components[0].lut).value() == 255);
}

}  // TEST_SUITE
