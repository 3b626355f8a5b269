#pragma once

// Experiment drivers behind the CLI: synchrony-rate distance curves and their
// classification, C3 density-classification convergence and traces, and the
// totalistic-family Hamming-distance grid. Every driver is a pure function of
// its options (including the master seed); the thread count never changes
// the output.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stochca/cca.hpp"
#include "stochca/lattice.hpp"
#include "stochca/rules.hpp"
#include "stochca/sca.hpp"

namespace stochca {

// ---------------------------------------------------------------------------
// Synchrony-rate distance D(alpha)

enum class DistanceMetric { tv, euclidean };

DistanceMetric parse_metric(std::string_view name);
std::string_view metric_name(DistanceMetric metric);

struct DAlphaCurve {
  EcaNumber rule{0};
  std::vector<double> alphas;
  std::vector<double> values;
  std::size_t cells = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  DistanceMetric metric = DistanceMetric::tv;
};

/// `points` values evenly spaced on [lo, hi], both ends included.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// D(alpha) = 1/(M T) sum_{t=1..T} || A^t(I0) - A_alpha^t(I0) ||, with A the
/// deterministic ECA and A_alpha the CCA of its alpha-asynchronous pLUT. The
/// tv metric sums per-cell total-variation distances; euclidean takes the
/// 2-norm of the per-cell differences of P(state 1) at each time step. I0 is
/// drawn uniformly from `seed` once and shared by every alpha.
DAlphaCurve run_dalpha(EcaNumber rule, std::span<const double> alphas, std::size_t cells,
                       std::size_t steps, std::uint64_t seed,
                       DistanceMetric metric = DistanceMetric::tv, std::size_t threads = 1);

enum class AcaClass { I, II, IIIa, IIIb };

std::string_view aca_class_name(AcaClass c);

struct ClassifyThresholds {
  double flat = 0.02;          ///< Class I when max D stays below this
  double drop_fraction = 0.75; ///< last-interval drop, as a fraction of the range
  std::size_t noise = 2;       ///< derivative sign changes that make IIIa noisy
};

/// Curve must have >= 11 points in ascending alpha, the last at alpha = 1.
AcaClass classify_aca(const DAlphaCurve& curve, const ClassifyThresholds& thresholds = {});

/// Number of sign changes of the discrete derivative (zero steps skipped).
std::size_t derivative_sign_changes(std::span<const double> values);

/// Rule lists of the published alpha-asynchronous classification table.
AcaClass reference_aca_class(EcaNumber rule);

// ---------------------------------------------------------------------------
// C3 density classification

enum class C3Mode { cca, sca };

C3Mode parse_c3_mode(std::string_view name);

/// Uniformly random placement of exactly `ones` ones among `cells` cells.
Configuration config_with_ones(std::size_t cells, std::size_t ones, std::uint64_t seed);

/// The state holding a strict majority in `config`, if any.
std::optional<std::uint8_t> majority_state(const Configuration& config);

struct ScaOutcome {
  std::size_t runs = 0;
  std::size_t converged = 0;      ///< runs that reached a homogeneous state
  std::size_t correct = 0;        ///< ... and that state was the IC majority
  double mean_steps = 0.0;        ///< over converged runs
  double success_rate() const { return runs == 0 ? 0.0 : double(correct) / double(runs); }
};

/// Runs the binary SCA from `init` until homogeneous or `step_cap`, `runs`
/// times; run r draws from seed.child(r).
ScaOutcome simulate_until_homogeneous(const Plut& plut, const Configuration& init,
                                      std::size_t runs, std::size_t step_cap,
                                      const RngSeed& seed, std::size_t threads = 1);

struct CcaOutcome {
  bool converged = false;
  std::size_t steps = 0;
  std::optional<std::uint8_t> state;
};

CcaOutcome cca_until_converged(const Plut& plut, const Configuration& init,
                               std::size_t step_cap, double epsilon = kConvergenceEpsilon);

struct C3Options {
  double eta = 0.1;
  std::size_t cells = 29;
  std::size_t ensemble = 100;
  C3Mode mode = C3Mode::cca;
  std::size_t runs_per_ic = 100;
  std::uint64_t seed = 1;
  std::size_t step_cap = 0;  ///< 0 means 50 * cells
  double epsilon = kConvergenceEpsilon;
  std::size_t threads = 1;
};

struct C3Record {
  std::size_t ic = 0;
  std::size_t ones = 0;
  std::optional<std::uint8_t> majority;
  std::size_t runs = 0;        ///< 1 in CCA mode
  std::size_t converged = 0;
  std::size_t correct = 0;
  double mean_steps = 0.0;     ///< over converged runs
};

struct C3Summary {
  std::vector<C3Record> records;
  std::size_t step_cap = 0;
  double mean_steps = 0.0;      ///< mean over ICs that converged at least once
  double success_rate = 0.0;    ///< correct / runs over ICs with a strict majority
  std::size_t non_converged = 0;
};

C3Summary run_c3_convergence(const C3Options& options);

struct DensityTrace {
  std::size_t ic = 0;
  double initial_density = 0.0;
  std::vector<double> density;
};

/// Density traces of the C3 CCA for `per_side` density-balanced ICs above
/// one half and `per_side` below, `steps` steps each.
std::vector<DensityTrace> run_c3_traces(double eta, std::size_t cells, std::size_t per_side,
                                        std::size_t steps, std::uint64_t seed,
                                        std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Totalistic Hamming-distance grid

/// Fraction of differing cells, (#diff) / (M (T+1)).
double hamming(const SpaceTimeDiagram& a, const SpaceTimeDiagram& b);
double hamming(const PackedDiagram& a, const PackedDiagram& b);
/// Same, restricted to row t of both diagrams.
double hamming_row(const PackedDiagram& a, const PackedDiagram& b, std::size_t t);

struct GridOptions {
  std::size_t resolution = 21;
  std::size_t cells = 49;
  std::size_t steps = 49;
  std::size_t runs = 30;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct GridStats {
  double p1 = 0.0;
  double p2 = 0.0;
  double delta_min = 0.0;
  double delta_mean = 0.0;
  double delta_max = 0.0;
  double final_min = 0.0;
  double final_mean = 0.0;
  double final_max = 0.0;
};

/// Stats over all pairs of `runs` diagrams evolved from one shared uniform
/// I0, at every (p1, p2) of a resolution x resolution grid on [0,1]^2
/// (p1 outer, p2 inner).
std::vector<GridStats> run_totalistic_grid(const GridOptions& options);

GridStats totalistic_point(TotalisticParams params, const Configuration& init,
                           std::size_t steps, std::size_t runs, const RngSeed& seed);

}  // namespace stochca
