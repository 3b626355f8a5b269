#include "stochca/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "stochca/error.hpp"
#include "stochca/kernels.hpp"
#include "stochca/parallel.hpp"
#include "stochca/rng.hpp"

namespace stochca {

// ---------------------------------------------------------------------------
// D(alpha)

DistanceMetric parse_metric(std::string_view name) {
  if (name == "tv") return DistanceMetric::tv;
  if (name == "euclidean") return DistanceMetric::euclidean;
  throw ValidationError("unknown metric '" + std::string(name) + "' (tv | euclidean)");
}

std::string_view metric_name(DistanceMetric metric) {
  return metric == DistanceMetric::tv ? "tv" : "euclidean";
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw DomainError("a grid needs at least two points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  grid.back() = hi;
  return grid;
}

namespace {

double distance_at(const Configuration& exact, const ContinuousConfiguration& approx,
                   DistanceMetric metric) {
  double total = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    // One-hot vs pi: total variation is 1 - pi[s]; for two states that is
    // also |s - P(state 1)|.
    const double tv = 1.0 - approx.prob(i, exact.cells()[i]);
    total += metric == DistanceMetric::tv ? tv : tv * tv;
  }
  return metric == DistanceMetric::tv ? total : std::sqrt(total);
}

}  // namespace

DAlphaCurve run_dalpha(EcaNumber rule, std::span<const double> alphas, std::size_t cells,
                       std::size_t steps, std::uint64_t seed, DistanceMetric metric,
                       std::size_t threads) {
  if (steps == 0) throw DomainError("D(alpha) needs T >= 1");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("synchrony rates must lie in [0, 1]");

  const Geometry geometry(cells, 1);
  const Lut lut = eca_lut(rule);
  const Configuration init = config_random(geometry, 2, InitMode::uniform, seed);

  std::vector<Configuration> exact{init};
  for (std::size_t t = 0; t < steps; ++t) exact.push_back(ca_step(lut, exact.back()));

  DAlphaCurve curve;
  curve.rule = rule;
  curve.alphas.assign(alphas.begin(), alphas.end());
  curve.values.assign(alphas.size(), 0.0);
  curve.cells = cells;
  curve.steps = steps;
  curve.seed = seed;
  curve.metric = metric;

  parallel_for(alphas.size(), threads, [&](std::size_t a, std::size_t) {
    const Plut plut = alpha_async_plut(lut, alphas[a]);
    ContinuousConfiguration state = ContinuousConfiguration::lift(init);
    double sum = 0.0;
    for (std::size_t t = 1; t <= steps; ++t) {
      state = cca_step(plut, state);
      sum += distance_at(exact[t], state, metric);
    }
    curve.values[a] = sum / static_cast<double>(cells * steps);
  });
  return curve;
}

std::string_view aca_class_name(AcaClass c) {
  switch (c) {
    case AcaClass::I:
      return "I";
    case AcaClass::II:
      return "II";
    case AcaClass::IIIa:
      return "IIIa";
    case AcaClass::IIIb:
      return "IIIb";
  }
  return "?";
}

std::size_t derivative_sign_changes(std::span<const double> values) {
  std::size_t changes = 0;
  int last = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    const int sign = (d > 0) - (d < 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

AcaClass classify_aca(const DAlphaCurve& curve, const ClassifyThresholds& thresholds) {
  const auto& a = curve.alphas;
  const auto& v = curve.values;
  if (a.size() != v.size() || a.size() < 11)
    throw DomainError("classification needs at least 11 curve points");
  if (!std::is_sorted(a.begin(), a.end()) || a.back() != 1.0)
    throw DomainError("curve must be sampled in ascending alpha and end at alpha = 1");

  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi < thresholds.flat) return AcaClass::I;
  const double drop = v[v.size() - 2] - v.back();
  if (drop > thresholds.drop_fraction * (*hi - *lo)) {
    return derivative_sign_changes(v) >= thresholds.noise ? AcaClass::IIIb : AcaClass::IIIa;
  }
  return AcaClass::II;
}

AcaClass reference_aca_class(EcaNumber rule) {
  struct Span {
    int lo, hi;
  };
  static constexpr Span kClassI[] = {
      {0, 0},     {8, 8},     {12, 12},   {32, 32},   {40, 40},   {64, 64},   {68, 68},
      {72, 72},   {76, 77},   {93, 93},   {96, 96},   {128, 128}, {132, 132}, {136, 136},
      {140, 140}, {160, 160}, {168, 168}, {192, 192}, {196, 196}, {200, 200}, {205, 207},
      {220, 221}, {224, 224}, {232, 233}, {235, 239}, {249, 255}};
  static constexpr Span kClassIIIb[] = {{11, 11}, {14, 14},   {43, 43},   {47, 47},
                                        {81, 81}, {84, 84},   {113, 113}, {117, 117},
                                        {142, 143}, {212, 213}};
  static constexpr Span kClassII[] = {
      {1, 5},     {7, 7},     {10, 10},   {13, 13},   {15, 17},   {19, 19},   {21, 21},
      {23, 24},   {29, 29},   {31, 31},   {34, 34},   {36, 36},   {42, 42},   {44, 44},
      {48, 48},   {50, 51},   {55, 56},   {63, 63},   {66, 66},   {69, 69},   {71, 71},
      {79, 80},   {85, 85},   {87, 87},   {92, 92},   {95, 95},   {100, 100}, {104, 104},
      {108, 108}, {112, 112}, {119, 119}, {127, 127}, {130, 130}, {138, 138}, {141, 141},
      {144, 144}, {152, 152}, {162, 162}, {164, 164}, {170, 172}, {174, 176}, {178, 179},
      {186, 191}, {194, 194}, {197, 197}, {201, 203}, {208, 208}, {216, 219}, {222, 223},
      {226, 226}, {228, 228}, {230, 231}, {234, 234}, {240, 248}};
  auto in = [&](std::span<const Span> spans) {
    return std::any_of(spans.begin(), spans.end(), [&](Span s) {
      return rule.value() >= s.lo && rule.value() <= s.hi;
    });
  };
  if (in(kClassI)) return AcaClass::I;
  if (in(kClassII)) return AcaClass::II;
  if (in(kClassIIIb)) return AcaClass::IIIb;
  return AcaClass::IIIa;  // the table's remaining rules
}

// ---------------------------------------------------------------------------
// C3

C3Mode parse_c3_mode(std::string_view name) {
  if (name == "cca") return C3Mode::cca;
  if (name == "sca") return C3Mode::sca;
  throw ValidationError("unknown mode '" + std::string(name) + "' (cca | sca)");
}

Configuration config_with_ones(std::size_t cells, std::size_t ones, std::uint64_t seed) {
  if (ones > cells) throw DomainError("more ones than cells");
  std::vector<std::uint8_t> states(cells, 0);
  std::fill_n(states.begin(), ones, 1);
  auto rng = RngSeed(seed, {streams::kInitialCondition}).engine();
  for (std::size_t i = cells; i > 1; --i) std::swap(states[i - 1], states[rng.below(i)]);
  return Configuration(Geometry(cells, std::min<std::size_t>(1, (cells - 1) / 2)), 2,
                       std::move(states));
}

std::optional<std::uint8_t> majority_state(const Configuration& config) {
  if (config.states() != 2) throw UnsupportedError("majority is defined for N = 2 only");
  const auto ones = static_cast<std::size_t>(
      std::count(config.cells().begin(), config.cells().end(), std::uint8_t{1}));
  if (2 * ones > config.size()) return 1;
  if (2 * ones < config.size()) return 0;
  return std::nullopt;
}

namespace {

bool homogeneous(std::span<const std::uint8_t> cells) {
  return std::adjacent_find(cells.begin(), cells.end(), std::not_equal_to<>()) == cells.end();
}

}  // namespace

ScaOutcome simulate_until_homogeneous(const Plut& plut, const Configuration& init,
                                      std::size_t runs, std::size_t step_cap,
                                      const RngSeed& seed, std::size_t threads) {
  const auto majority = majority_state(init);
  struct Run {
    bool converged = false;
    bool correct = false;
    std::size_t steps = 0;
  };
  std::vector<Run> results(runs);
  parallel_for(runs, threads, [&](std::size_t r, std::size_t) {
    auto rng = seed.child(r).engine();
    Configuration state = init;
    std::size_t t = 0;
    while (!homogeneous(state.cells()) && t < step_cap) {
      state = sca_step(plut, state, rng);
      ++t;
    }
    Run& out = results[r];
    out.converged = homogeneous(state.cells());
    out.steps = t;
    out.correct = out.converged && majority && state.cells()[0] == *majority;
  });

  ScaOutcome outcome;
  outcome.runs = runs;
  double steps = 0.0;
  for (const Run& r : results) {
    if (!r.converged) continue;
    ++outcome.converged;
    outcome.correct += r.correct;
    steps += static_cast<double>(r.steps);
  }
  if (outcome.converged > 0) outcome.mean_steps = steps / static_cast<double>(outcome.converged);
  return outcome;
}

CcaOutcome cca_until_converged(const Plut& plut, const Configuration& init, std::size_t step_cap,
                               double epsilon) {
  ContinuousConfiguration state = ContinuousConfiguration::lift(init);
  CcaOutcome outcome;
  for (std::size_t t = 0;; ++t) {
    const ConvergenceCheck check = cca_converged(state, epsilon);
    if (check.converged) {
      outcome.converged = true;
      outcome.steps = t;
      outcome.state = check.majority->index;
      return outcome;
    }
    if (t == step_cap) {
      outcome.steps = t;
      return outcome;
    }
    state = cca_step(plut, state);
  }
}

C3Summary run_c3_convergence(const C3Options& o) {
  if (o.ensemble == 0) throw DomainError("ensemble must not be empty");
  if (o.mode == C3Mode::sca && o.runs_per_ic == 0) throw DomainError("runs_per_ic must be >= 1");
  const Plut plut = c3_plut(o.eta);
  const Geometry geometry(o.cells, 1);

  C3Summary summary;
  summary.step_cap = o.step_cap != 0 ? o.step_cap : 50 * o.cells;
  summary.records.resize(o.ensemble);

  parallel_for(o.ensemble, o.threads, [&](std::size_t i, std::size_t) {
    const RngSeed ic_seed(o.seed, {streams::kEnsemble, i});
    const Configuration init =
        config_random(geometry, 2, InitMode::density_balanced, ic_seed.key());
    C3Record& rec = summary.records[i];
    rec.ic = i;
    rec.ones = static_cast<std::size_t>(
        std::count(init.cells().begin(), init.cells().end(), std::uint8_t{1}));
    rec.majority = majority_state(init);
    if (o.mode == C3Mode::cca) {
      const CcaOutcome out = cca_until_converged(plut, init, summary.step_cap, o.epsilon);
      rec.runs = 1;
      rec.converged = out.converged ? 1 : 0;
      rec.correct = out.converged && rec.majority && out.state == rec.majority ? 1 : 0;
      rec.mean_steps = static_cast<double>(out.steps);
    } else {
      const ScaOutcome out = simulate_until_homogeneous(
          plut, init, o.runs_per_ic, summary.step_cap,
          RngSeed(o.seed, {streams::kSimulation, i}), 1);
      rec.runs = out.runs;
      rec.converged = out.converged;
      rec.correct = out.correct;
      rec.mean_steps = out.mean_steps;
    }
  });

  double steps = 0.0;
  std::size_t timed = 0;
  std::size_t correct = 0;
  std::size_t judged = 0;
  for (const C3Record& rec : summary.records) {
    summary.non_converged += rec.runs - rec.converged;
    if (rec.converged > 0) {
      steps += rec.mean_steps;
      ++timed;
    }
    if (rec.majority) {
      correct += rec.correct;
      judged += rec.runs;
    }
  }
  summary.mean_steps = timed > 0 ? steps / static_cast<double>(timed) : 0.0;
  summary.success_rate = judged > 0 ? static_cast<double>(correct) / static_cast<double>(judged)
                                    : 0.0;
  return summary;
}

std::vector<DensityTrace> run_c3_traces(double eta, std::size_t cells, std::size_t per_side,
                                        std::size_t steps, std::uint64_t seed,
                                        std::size_t threads) {
  const Plut plut = c3_plut(eta);
  const Geometry geometry(cells, 1);

  // Density-balanced draws, kept until each side of one half is filled.
  std::vector<Configuration> ics;
  std::size_t above = 0;
  std::size_t below = 0;
  for (std::uint64_t draw = 0; above < per_side || below < per_side; ++draw) {
    if (draw > 1000 * (2 * per_side + 1))
      throw InternalError("could not fill the density-balanced ensemble");
    Configuration c = config_random(geometry, 2, InitMode::density_balanced,
                                    RngSeed(seed, {streams::kEnsemble, draw}).key());
    const auto majority = majority_state(c);
    if (!majority) continue;
    std::size_t& side = *majority == 1 ? above : below;
    if (side == per_side) continue;
    ++side;
    ics.push_back(std::move(c));
  }

  std::vector<DensityTrace> traces(ics.size());
  parallel_for(ics.size(), threads, [&](std::size_t i, std::size_t) {
    const ContinuousTrajectory trajectory = cca_evolve(plut, ics[i], steps);
    traces[i].ic = i;
    traces[i].density = density_trace(trajectory);
    traces[i].initial_density = traces[i].density.front();
  });
  return traces;
}

// ---------------------------------------------------------------------------
// Hamming grid

double hamming(const SpaceTimeDiagram& a, const SpaceTimeDiagram& b) {
  if (a.cells() != b.cells() || a.rows() != b.rows() || a.states() != b.states())
    throw DomainError("diagrams differ in shape");
  std::size_t diff = 0;
  for (std::size_t t = 0; t < a.rows(); ++t) {
    auto ra = a.row(t);
    auto rb = b.row(t);
    for (std::size_t i = 0; i < ra.size(); ++i) diff += ra[i] != rb[i];
  }
  return static_cast<double>(diff) / static_cast<double>(a.cells() * a.rows());
}

double hamming(const PackedDiagram& a, const PackedDiagram& b) {
  if (a.cells() != b.cells() || a.rows() != b.rows()) throw DomainError("diagrams differ in shape");
  const std::uint64_t diff = kernels::xor_popcount(a.words().data(), b.words().data(),
                                                   a.words().size());
  return static_cast<double>(diff) / static_cast<double>(a.cells() * a.rows());
}

double hamming_row(const PackedDiagram& a, const PackedDiagram& b, std::size_t t) {
  if (a.cells() != b.cells() || a.rows() != b.rows()) throw DomainError("diagrams differ in shape");
  if (t >= a.rows()) throw DomainError("row out of range");
  const std::uint64_t diff =
      kernels::xor_popcount(a.row(t).data(), b.row(t).data(), a.words_per_row());
  return static_cast<double>(diff) / static_cast<double>(a.cells());
}

GridStats totalistic_point(TotalisticParams params, const Configuration& init, std::size_t steps,
                           std::size_t runs, const RngSeed& seed) {
  if (runs < 2) throw DomainError("pairwise distances need at least two runs");
  const Plut plut = totalistic_plut(params);
  std::vector<PackedDiagram> diagrams;
  diagrams.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r)
    diagrams.push_back(sca_evolve_packed(plut, init, steps, seed.child(r)));

  GridStats s;
  s.p1 = params.p1;
  s.p2 = params.p2;
  s.delta_min = s.final_min = std::numeric_limits<double>::infinity();
  s.delta_max = s.final_max = -std::numeric_limits<double>::infinity();
  double delta_sum = 0.0;
  double final_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < runs; ++i) {
    for (std::size_t j = i + 1; j < runs; ++j) {
      const double d = hamming(diagrams[i], diagrams[j]);
      const double f = hamming_row(diagrams[i], diagrams[j], steps);
      s.delta_min = std::min(s.delta_min, d);
      s.delta_max = std::max(s.delta_max, d);
      s.final_min = std::min(s.final_min, f);
      s.final_max = std::max(s.final_max, f);
      delta_sum += d;
      final_sum += f;
      ++pairs;
    }
  }
  s.delta_mean = delta_sum / static_cast<double>(pairs);
  s.final_mean = final_sum / static_cast<double>(pairs);
  // Keep min <= mean <= max under rounding of the averages.
  s.delta_mean = std::clamp(s.delta_mean, s.delta_min, s.delta_max);
  s.final_mean = std::clamp(s.final_mean, s.final_min, s.final_max);
  return s;
}

std::vector<GridStats> run_totalistic_grid(const GridOptions& o) {
  if (o.resolution < 2) throw DomainError("grid resolution must be >= 2");
  const Configuration init =
      config_random(Geometry(o.cells, 1), 2, InitMode::uniform, o.seed);
  const std::vector<double> axis = linear_grid(0.0, 1.0, o.resolution);
  const std::size_t points = o.resolution * o.resolution;
  std::vector<GridStats> stats(points);
  parallel_for(points, o.threads, [&](std::size_t p, std::size_t) {
    const TotalisticParams params{axis[p / o.resolution], axis[p % o.resolution]};
    stats[p] = totalistic_point(params, init, o.steps, o.runs,
                                RngSeed(o.seed, {streams::kGrid, p}));
  });
  return stats;
}

}  // namespace stochca
