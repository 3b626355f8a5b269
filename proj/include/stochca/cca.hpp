#pragma once

// Exact evolution of cell-wise state distributions. For a pLUT P, the
// distribution of cell i at t+1 is
//
//   pi_j(i, t+1) = sum_k P[k][j] * prod_m pi_{digit_m(k)}(i - r + m, t)
//
// i.e. the continuous CA whose local rule is the multilinear extension of P.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stochca/lattice.hpp"

namespace stochca {

inline constexpr double kConvergenceEpsilon = 1e-3;

/// One simplex vector per cell, stored cell-major.
class ContinuousConfiguration {
 public:
  ContinuousConfiguration(Geometry geometry, std::size_t states, std::vector<double> values,
                          double tol = kSimplexTolerance);
  ContinuousConfiguration(Geometry geometry, std::span<const SimplexVector> cells);

  /// Exact one-hot lift of a discrete configuration.
  static ContinuousConfiguration lift(const Configuration& config);

  const Geometry& geometry() const { return geometry_; }
  std::size_t states() const { return states_; }
  std::size_t size() const { return geometry_.cells(); }
  std::span<const double> cell(std::size_t i) const {
    return {values_.data() + i * states_, states_};
  }
  double prob(std::size_t i, std::size_t j) const { return values_[i * states_ + j]; }
  std::span<const double> values() const { return values_; }

  bool operator==(const ContinuousConfiguration&) const = default;

 private:
  struct Unchecked {};
  ContinuousConfiguration(Unchecked, Geometry geometry, std::size_t states,
                          std::vector<double> values)
      : geometry_(geometry), states_(states), values_(std::move(values)) {}

  friend ContinuousConfiguration cca_step(const Plut&, const ContinuousConfiguration&);
  friend ContinuousConfiguration cca_step_reference(const Plut&,
                                                    const ContinuousConfiguration&);

  Geometry geometry_;
  std::size_t states_;
  std::vector<double> values_;
};

struct ContinuousTrajectory {
  std::vector<ContinuousConfiguration> steps;

  std::size_t time_steps() const { return steps.empty() ? 0 : steps.size() - 1; }
};

/// Generalized LUT evaluated on a window of R simplex vectors. Reference
/// path: one product per neighborhood index, no factorization. A result
/// whose sum strays more than 1e-13 from 1 is divided by that sum, so
/// rounding drift cannot accumulate over long runs.
SimplexVector cca_local_eval(const Plut& plut, std::span<const SimplexVector> window);

/// Per-cell application of cca_local_eval; the oracle for cca_step.
ContinuousConfiguration cca_step_reference(const Plut& plut,
                                           const ContinuousConfiguration& config);

/// Vectorized step through the dispatched SoA kernel.
ContinuousConfiguration cca_step(const Plut& plut, const ContinuousConfiguration& config);

ContinuousTrajectory cca_evolve(const Plut& plut, const ContinuousConfiguration& init,
                                std::size_t steps);
ContinuousTrajectory cca_evolve(const Plut& plut, const Configuration& init, std::size_t steps);

struct ConvergenceCheck {
  bool converged;
  double spread;                     ///< max - min of P(state 1) over cells
  std::optional<StateId> majority;   ///< set only when converged
};

/// Binary only. Converged iff the spread of P(state 1) across cells is below
/// epsilon; the majority is 1 iff the mean P(state 1) exceeds 0.5.
ConvergenceCheck cca_converged(const ContinuousConfiguration& config,
                               double epsilon = kConvergenceEpsilon);

/// Mean P(state 1) over cells (binary only).
double mean_density(const ContinuousConfiguration& config);

std::vector<double> density_trace(const ContinuousTrajectory& trajectory);

}  // namespace stochca
