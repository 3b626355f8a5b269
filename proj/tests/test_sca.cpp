#include <doctest.h>

#include <array>
#include <random>

#include "oracles.hpp"
#include "stochca/decompose.hpp"
#include "stochca/error.hpp"
#include "stochca/rules.hpp"
#include "stochca/sca.hpp"

using namespace stochca;

namespace {

Configuration random_binary(std::size_t cells, std::mt19937_64& rng) {
  std::vector<std::uint8_t> s(cells);
  for (auto& x : s) x = rng() & 1;
  return Configuration(Geometry(cells, 1), 2, s);
}

// Per-neighborhood next-state counts over many steps of a fixed input: the
// configuration cycles through all 8 neighborhoods, so one step gives one
// sample per row of the table per block of cells.
struct RowCounts {
  std::array<std::size_t, 8> draws{};
  std::array<std::size_t, 8> ones{};
};

// Ring holding the de Bruijn sequence 00010111: cell i sees neighborhood
// pattern d[i-1] d[i] d[i+1], covering all eight rows once.
Configuration de_bruijn_ring(std::size_t copies) {
  const std::array<std::uint8_t, 8> seq{0, 0, 0, 1, 0, 1, 1, 1};
  std::vector<std::uint8_t> s;
  for (std::size_t c = 0; c < copies; ++c) s.insert(s.end(), seq.begin(), seq.end());
  return Configuration(Geometry(s.size(), 1), 2, s);
}

template <class Step>
RowCounts tally(const Configuration& ring, std::size_t steps, Step&& step) {
  RowCounts rc;
  for (std::size_t t = 0; t < steps; ++t) {
    const Configuration next = step(ring);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t k = ring.neighborhood(i, 1);
      ++rc.draws[k];
      rc.ones[k] += next.cells()[i];
    }
  }
  return rc;
}

}  // namespace

TEST_SUITE("sca") {

TEST_CASE("sample_state inverse CDF") {
  const std::vector<double> row{0.2, 0.0, 0.8};
  CHECK(sample_state(row, 0.0) == 0);
  CHECK(sample_state(row, 0.19999) == 0);
  CHECK(sample_state(row, 0.2) == 2);
  CHECK(sample_state(row, 0.999999) == 2);
  // A short cumulative sum never selects a zero-probability state.
  const std::vector<double> tail{0.3, 0.7 - 1e-12, 0.0};
  CHECK(sample_state(tail, 0.9999999999999) == 1);
}

TEST_CASE("deterministic pLUT step equals the CA step for any seed") {
  std::mt19937_64 rng(1);
  for (int rule : {30, 90, 110, 184}) {
    const Configuration c = random_binary(25, rng);
    const Lut lut = eca_lut(EcaNumber(rule));
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      auto engine = RngSeed(seed).engine();
      CHECK(sca_step(lut_to_plut(lut), c, engine) == ca_step(lut, c));
    }
  }
  const Configuration ones(Geometry(7, 1), 2, std::vector<std::uint8_t>(7, 1));
  auto engine = RngSeed(5).engine();
  CHECK(sca_step(totalistic_plut({0.0, 0.0}), ones, engine) == ones);
}

TEST_CASE("C3 (110) frequency") {
  const Plut p = c3_plut(0.1);
  // Ring 1 1 0 repeated: cell with window (1,1,0) is every third cell.
  std::vector<std::uint8_t> s;
  for (int i = 0; i < 300; ++i) s.insert(s.end(), {1, 1, 0});
  const Configuration c(Geometry(s.size(), 1), 2, s);
  auto engine = RngSeed(17).engine();
  std::size_t ones = 0;
  std::size_t draws = 0;
  while (draws < 100000) {
    const Configuration next = sca_step(p, c, engine);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.neighborhood(i, 1) != 6) continue;
      ones += next.cells()[i];
      ++draws;
    }
  }
  CHECK(std::abs(static_cast<double>(ones) / draws - 0.1) <= 0.005);
}

TEST_CASE("sca_evolve determinism and shape") {
  std::mt19937_64 rng(2);
  const Configuration c = random_binary(40, rng);
  const Plut p = c3_plut(0.2);
  const auto t0 = sca_evolve(p, c, 0, RngSeed(1));
  CHECK(t0.rows() == 1);
  CHECK(t0.configuration(0) == c);
  const auto a = sca_evolve(p, c, 30, RngSeed(4, {2, 7}));
  CHECK(a.rows() == 31);
  CHECK(a == sca_evolve(p, c, 30, RngSeed(4, {2, 7})));
  CHECK_FALSE(a == sca_evolve(p, c, 30, RngSeed(4, {2, 8})));

  const Lut l150 = eca_lut(EcaNumber(150));
  const auto d = sca_evolve(alpha_async_plut(l150, 1.0), c, 20, RngSeed(9));
  Configuration cur = c;
  for (std::size_t t = 0; t <= 20; ++t) {
    CHECK(d.configuration(t) == cur);
    cur = ca_step(l150, cur);
  }
  const Configuration three(Geometry(5, 1), 3, {0, 1, 2, 0, 1});
  CHECK_THROWS_AS(sca_evolve(p, three, 2, RngSeed(1)), DomainError);
}

TEST_CASE("packed diagrams equal unpacked ones") {
  std::mt19937_64 rng(3);
  for (std::size_t cells : {5, 63, 64, 65, 130}) {
    const Configuration c = random_binary(cells, rng);
    const Plut p = totalistic_plut({0.4, 0.6});
    const auto full = sca_evolve(p, c, 12, RngSeed(cells));
    const auto packed = sca_evolve_packed(p, c, 12, RngSeed(cells));
    CHECK(packed == PackedDiagram::pack(full));
    for (std::size_t t = 0; t < full.rows(); ++t)
      for (std::size_t i = 0; i < cells; ++i) CHECK(packed.at(t, i) == (full.row(t)[i] != 0));
  }
}

TEST_CASE("mixture_step basics") {
  std::mt19937_64 rng(4);
  const Configuration c = random_binary(30, rng);
  const Lut l150 = eca_lut(EcaNumber(150));
  auto engine = RngSeed(1).engine();
  const std::vector<MixtureComponent> single{{1.0, l150}};
  CHECK(mixture_step(single, c, engine) == ca_step(l150, c));
  const std::vector<MixtureComponent> unnormalized{{0.7, l150}, {0.2, eca_lut(EcaNumber(232))}};
  CHECK_THROWS_AS(mixture_step(unnormalized, c, engine), DomainError);
  const std::vector<MixtureComponent> mixed_radius{{0.5, l150}, {0.5, identity_lut(2, 0)}};
  CHECK_THROWS_AS(mixture_step(mixed_radius, c, engine), DomainError);
  const std::vector<MixtureComponent> widened{{0.5, l150},
                                              {0.5, widen_radius(identity_lut(2, 0), 1)}};
  CHECK_NOTHROW(mixture_step(widened, c, engine));
}

TEST_CASE("mixtures are statistically equivalent to their pLUT") {
  const Configuration ring = de_bruijn_ring(50);  // 400 cells, 50 per row
  const std::size_t steps = 2000;                 // 10^5 draws per row

  // `sigmas` is 3 for single comparisons; the 50-mixture sweep makes 800 of
  // them, so it uses 4 to keep the family-wise false-alarm rate near 2.5%.
  auto compare = [&](const std::vector<MixtureComponent>& mixture, const Plut& plut,
                     std::uint64_t seed, double sigmas = 3.0) {
    auto e1 = RngSeed(seed, {1}).engine();
    auto e2 = RngSeed(seed, {2}).engine();
    const RowCounts a =
        tally(ring, steps, [&](const Configuration& c) { return mixture_step(mixture, c, e1); });
    const RowCounts b =
        tally(ring, steps, [&](const Configuration& c) { return sca_step(plut, c, e2); });
    for (std::size_t k = 0; k < 8; ++k) {
      const double p = plut.at(k, 1);
      CHECK(oracle::within_sigmas(double(a.ones[k]) / a.draws[k], p, a.draws[k], sigmas));
      CHECK(oracle::within_sigmas(double(b.ones[k]) / b.draws[k], p, b.draws[k], sigmas));
    }
  };

  compare({{0.7, eca_lut(EcaNumber(232))}, {0.3, eca_lut(EcaNumber(150))}},
          totalistic_plut({0.3, 0.7}), 1);
  compare({{0.9, eca_lut(EcaNumber(184))}, {0.1, eca_lut(EcaNumber(232))}}, c3_plut(0.1), 2);

  // Random mixtures of up to four ECAs against the recomposed pLUT.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t q = 1 + rng() % 4;
    std::vector<double> w(q);
    double sum = 0.0;
    for (auto& x : w) sum += (x = 0.05 + std::uniform_real_distribution<double>(0, 1)(rng));
    Decomposition d{2, 1, {}};
    for (std::size_t i = 0; i < q; ++i)
      d.components.push_back({w[i] / sum, eca_lut(EcaNumber(static_cast<int>(rng() % 256)))});
    compare(d.components, recompose(d), 100 + trial, 4.0);
  }
}

TEST_CASE("estimate_pi") {
  std::mt19937_64 rng(6);
  const Configuration c = random_binary(16, rng);

  SUBCASE("deterministic rule gives the one-hot trajectory") {
    const Lut l110 = eca_lut(EcaNumber(110));
    for (std::size_t samples : {1, 7}) {
      const auto est = estimate_pi(lut_to_plut(l110), c, 8, samples, RngSeed(1));
      Configuration cur = c;
      for (std::size_t t = 0; t <= 8; ++t) {
        CHECK(est.steps[t] == ContinuousConfiguration::lift(cur));
        cur = ca_step(l110, cur);
      }
    }
  }

  SUBCASE("frequencies in [0,1], rows sum to one") {
    const auto est = estimate_pi(c3_plut(0.3), c, 10, 999, RngSeed(2), 3);
    for (const auto& step : est.steps)
      for (std::size_t i = 0; i < step.size(); ++i) {
        const auto cell = step.cell(i);
        CHECK(cell[0] >= 0.0);
        CHECK(cell[1] <= 1.0);
        // Counts are integers summing to `samples`; after division the sum is
        // 1 up to one rounding per state.
        CHECK(std::abs(cell[0] + cell[1] - 1.0) <= 4e-16);
      }
  }

  SUBCASE("thread count does not change the estimate") {
    const Plut p = totalistic_plut({0.35, 0.8});
    const auto one = estimate_pi(p, c, 6, 500, RngSeed(3), 1);
    const auto four = estimate_pi(p, c, 6, 500, RngSeed(3), 4);
    CHECK(one.steps == four.steps);
  }

  SUBCASE("Monte-Carlo error shrinks like 1/sqrt(samples)") {
    const Plut p = oracle::random_plut(2, 1, rng);
    const auto exact = cca_evolve(p, c, 1);
    double ratio_sum = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
      auto gap = [&](std::size_t samples, std::uint64_t seed) {
        const auto est = estimate_pi(p, c, 1, samples, RngSeed(seed));
        double sum = 0.0;
        for (std::size_t x = 0; x < exact.steps[1].values().size(); ++x)
          sum += std::abs(est.steps[1].values()[x] - exact.steps[1].values()[x]);
        return sum;
      };
      ratio_sum += gap(8000, 1000 + s) / gap(4000, 2000 + s);
    }
    const double ratio = ratio_sum / seeds;
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 0.9);
  }

  CHECK_THROWS_AS(estimate_pi(c3_plut(0.1), c, 3, 0, RngSeed(1)), DomainError);
}

TEST_CASE("rng streams") {
  CHECK(RngSeed(1).key() != RngSeed(2).key());
  CHECK(RngSeed(1, {3}).key() == RngSeed(1).child(3).key());
  CHECK(RngSeed(1, {3, 4}).key() != RngSeed(1, {4, 3}).key());
  auto e = RngSeed(42).engine();
  for (int i = 0; i < 1000; ++i) {
    const double u = e.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(e.below(7) < 7);
  }
  // Pinned first outputs: a change to the generator or the stream derivation
  // would silently change every published diagram.
  // Expected values come from an independent Python transcription.
  SplitMix64 sm(0);
  CHECK(sm() == 0xE220A8397B1DCDAFULL);  // published SplitMix64 vector
  auto pinned = RngSeed(1).engine();
  CHECK(pinned() == 0xA9031B5B4274847DULL);
  CHECK(pinned() == 0x83007B6BC5BA1EE6ULL);
  CHECK(pinned() == 0xE241652A4972B576ULL);
}

}  // TEST_SUITE
