#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stochca/cca.hpp"
#include "stochca/error.hpp"
#include "stochca/experiments.hpp"
#include "stochca/kernels.hpp"
#include "stochca/rules.hpp"
#include "stochca/sca.hpp"

using namespace stochca;

namespace {

ContinuousConfiguration random_continuous(std::size_t cells, std::size_t states,
                                          std::mt19937_64& rng) {
  std::vector<double> v;
  for (std::size_t i = 0; i < cells; ++i) {
    const auto s = oracle::random_simplex(states, rng);
    v.insert(v.end(), s.begin(), s.end());
  }
  return ContinuousConfiguration(Geometry(cells, 1), states, v);
}

std::vector<double> table_of(const Plut& p) { return {p.values().begin(), p.values().end()}; }

// RAII switch of the dispatched kernel.
struct IsaScope {
  explicit IsaScope(kernels::Isa isa) : saved(kernels::active_isa()) {
    kernels::set_active_isa(isa);
  }
  ~IsaScope() { kernels::set_active_isa(saved); }
  kernels::Isa saved;
};

}  // namespace

TEST_SUITE("cca") {

TEST_CASE("cca_local_eval examples") {
  const Plut p150 = lut_to_plut(eca_lut(EcaNumber(150)));
  const SimplexVector half({0.5, 0.5});
  const std::vector<SimplexVector> w{half, half, half};
  const SimplexVector out = cca_local_eval(p150, w);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == 0.5);

  const Plut c3 = c3_plut(0.1);
  const auto e0 = SimplexVector::one_hot(StateId{0}, 2);
  const auto e1 = SimplexVector::one_hot(StateId{1}, 2);
  const std::vector<SimplexVector> w110{e1, e1, e0};
  CHECK(cca_local_eval(c3, w110) == SimplexVector({0.9, 0.1}));

  // One-hot window k -> exactly row k.
  std::mt19937_64 rng(1);
  const Plut p = oracle::random_plut(3, 1, rng);
  for (std::size_t k = 0; k < p.rows(); ++k) {
    const auto d = oracle::ind(k + 1, 3, 3);
    std::vector<SimplexVector> win;
    for (auto digit : d) win.push_back(SimplexVector::one_hot(StateId{std::uint8_t(digit - 1)}, 3));
    const SimplexVector r = cca_local_eval(p, win);
    for (std::size_t j = 0; j < 3; ++j) CHECK(r[j] == p.at(k, j));
  }
  CHECK_THROWS_AS(cca_local_eval(p150, std::vector<SimplexVector>{half, half}), DomainError);
}

TEST_CASE("cca_local_eval agrees with the enumeration oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t radius = trial % 2;
    const Plut p = oracle::random_plut(n, radius, rng);
    std::vector<SimplexVector> win;
    std::vector<std::vector<double>> raw;
    for (std::size_t m = 0; m < p.window(); ++m) {
      raw.push_back(oracle::random_simplex(n, rng));
      win.emplace_back(raw.back());
    }
    const auto expected = oracle::cca_cell(table_of(p), n, raw);
    const SimplexVector got = cca_local_eval(p, win);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(got[j] - expected[j]) <= 1e-12);
  }
}

TEST_CASE("neighborhood probabilities sum to one") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t width = 1 + 2 * (trial % 3);
    std::vector<std::vector<double>> win;
    for (std::size_t m = 0; m < width; ++m) win.push_back(oracle::random_simplex(n, rng));
    double total = 0.0;
    for (std::size_t i = 1; i <= oracle::ipow(n, width); ++i) {
      const auto d = oracle::ind(i, n, width);
      double w = 1.0;
      for (std::size_t m = 0; m < width; ++m) w *= win[m][d[m] - 1];
      total += w;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("simplex closure over random steps") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const Plut p = oracle::random_plut(n, 1, rng);
    const auto c = random_continuous(12, n, rng);
    const auto next = cca_step(p, c);
    for (std::size_t i = 0; i < next.size(); ++i) {
      double s = 0.0;
      for (double x : next.cell(i)) {
        REQUIRE(x >= 0.0);
        REQUIRE(x <= 1.0);
        s += x;
      }
      REQUIRE(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("kernel variants and the reference path are bit-identical") {
  std::mt19937_64 rng(6);
  std::vector<kernels::Isa> isas{kernels::Isa::scalar};
  if (kernels::isa_available(kernels::Isa::avx2)) isas.push_back(kernels::Isa::avx2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t radius = trial % 4 == 3 ? 2 : 1;
    // Sizes around the vector width and the kernel's 256-cell blocks.
    const std::size_t cells = std::vector<std::size_t>{5, 7, 8, 9, 31, 255, 256, 257, 600}[trial % 9];
    const Plut p = oracle::random_plut(n, radius, rng);
    std::vector<double> v;
    for (std::size_t i = 0; i < cells; ++i) {
      const auto s = oracle::random_simplex(n, rng);
      v.insert(v.end(), s.begin(), s.end());
    }
    const ContinuousConfiguration c(Geometry(cells, radius), n, v);
    const auto reference = cca_step_reference(p, c);
    for (auto isa : isas) {
      IsaScope scope(isa);
      REQUIRE(cca_step(p, c) == reference);
    }
  }
}

TEST_CASE("dispatch controls") {
  CHECK(kernels::isa_available(kernels::Isa::scalar));
  CHECK(kernels::parse_isa("scalar") == kernels::Isa::scalar);
  CHECK(kernels::parse_isa("avx2") == kernels::Isa::avx2);
  CHECK_THROWS_AS(kernels::parse_isa("neon"), ValidationError);
  if (!kernels::isa_available(kernels::Isa::avx2))
    CHECK_THROWS(kernels::set_active_isa(kernels::Isa::avx2));
}

TEST_CASE("deterministic embedding") {
  std::mt19937_64 rng(8);
  for (int rule = 0; rule < 256; ++rule) {
    std::vector<std::uint8_t> s(31);
    for (auto& x : s) x = rng() & 1;
    const Configuration init(Geometry(31, 1), 2, s);
    const auto traj = cca_evolve(lut_to_plut(eca_lut(EcaNumber(rule))), init, 20);
    auto cur = s;
    for (std::size_t t = 0; t <= 20; ++t) {
      REQUIRE(traj.steps[t] ==
              ContinuousConfiguration::lift(Configuration(Geometry(31, 1), 2, cur)));
      cur = oracle::eca_step(rule, cur);
    }
  }
}

TEST_CASE("cca_evolve basics") {
  const Configuration init(Geometry(6, 1), 2, {1, 0, 1, 1, 0, 0});
  const auto t0 = cca_evolve(c3_plut(0.1), init, 0);
  CHECK(t0.steps.size() == 1);
  CHECK(t0.time_steps() == 0);
  CHECK(t0.steps[0] == ContinuousConfiguration::lift(init));
  const auto a = cca_evolve(c3_plut(0.1), init, 15);
  const auto b = cca_evolve(c3_plut(0.1), init, 15);
  CHECK(a.steps == b.steps);
  CHECK_THROWS_AS(cca_step(c3_plut(0.1), ContinuousConfiguration::lift(Configuration(
                                              Geometry(3, 1), 3, {0, 1, 2}))),
                  DomainError);
}

TEST_CASE("C3 with 16 of 29 ones drifts toward state 1") {
  const Configuration init = config_with_ones(29, 16, 12345);
  const auto traj = cca_evolve(c3_plut(0.1), init, 80);
  CHECK(mean_density(traj.steps.back()) > 0.5);
}

TEST_CASE("cca_converged and density traces") {
  const Geometry g(4, 1);
  const ContinuousConfiguration flat(g, 2, {0.2, 0.8, 0.2, 0.8, 0.2, 0.8, 0.2, 0.8});
  const auto check = cca_converged(flat);
  CHECK(check.converged);
  REQUIRE(check.majority.has_value());
  CHECK(check.majority->index == 1);
  const ContinuousConfiguration alt(g, 2, {1, 0, 0, 1, 1, 0, 0, 1});
  CHECK_FALSE(cca_converged(alt).converged);
  CHECK(cca_converged(alt).spread == 1.0);
  CHECK(kConvergenceEpsilon == 0.001);
  CHECK_THROWS_AS(cca_converged(flat, 0.0), DomainError);

  const Configuration ones(g, 2, {1, 1, 1, 1});
  CHECK(density_trace(cca_evolve(c3_plut(0.3), ones, 3)).front() == 1.0);
  const Configuration mixed(Geometry(9, 1), 2, {1, 0, 0, 1, 1, 0, 1, 0, 0});
  for (double d : density_trace(cca_evolve(lut_to_plut(identity_lut(2, 1)), mixed, 6)))
    CHECK(d == 4.0 / 9.0);
  const Configuration three(Geometry(3, 1), 3, {0, 1, 2});
  CHECK_THROWS_AS(density_trace(cca_evolve(lut_to_plut(identity_lut(3, 1)), three, 1)),
                  UnsupportedError);
  CHECK_THROWS_AS(cca_converged(ContinuousConfiguration::lift(three)), UnsupportedError);
}

TEST_CASE("C3 eta = 0.01: density traces separate by majority") {
  const auto traces = run_c3_traces(0.01, 29, 5, 400, 77);
  REQUIRE(traces.size() == 10);
  for (const auto& tr : traces) {
    if (tr.initial_density > 0.5)
      CHECK(tr.density.back() > tr.initial_density);
    else
      CHECK(tr.density.back() < tr.initial_density);
  }
}

TEST_CASE("CCA matches a Monte-Carlo estimate after one step") {
  std::mt19937_64 rng(10);
  const Plut p = oracle::random_plut(2, 1, rng);
  std::vector<std::uint8_t> s(20);
  for (auto& x : s) x = rng() & 1;
  const Configuration init(Geometry(20, 1), 2, s);
  const auto exact = cca_evolve(p, init, 1);
  const auto est = estimate_pi(p, init, 1, 100000, RngSeed(3));
  double worst = 0.0;
  for (std::size_t x = 0; x < exact.steps[1].values().size(); ++x)
    worst = std::max(worst, std::abs(exact.steps[1].values()[x] - est.steps[1].values()[x]));
  CHECK(worst <= 0.01);
}

TEST_CASE("renormalization keeps long runs on the simplex") {
  // Without per-step renormalization the cell mass drifts geometrically.
  const Configuration init = config_random(Geometry(69, 1), 2, InitMode::uniform, 1);
  auto traj = cca_evolve(alpha_async_plut(eca_lut(EcaNumber(40)), 0.99), init, 500);
  for (std::size_t i = 0; i < 69; ++i) {
    const auto c = traj.steps.back().cell(i);
    CHECK(std::abs(c[0] + c[1] - 1.0) <= 1e-12);
  }
}

}  // TEST_SUITE
