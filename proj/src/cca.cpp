#include "stochca/cca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochca/error.hpp"
#include "stochca/kernels.hpp"

namespace stochca {

namespace {

void check_compatible(const Plut& plut, const ContinuousConfiguration& config) {
  if (plut.states() != config.states())
    throw DomainError("pLUT has " + std::to_string(plut.states()) +
                      " states, configuration has " + std::to_string(config.states()));
  if (plut.window() > config.size()) throw DomainError("rule window is wider than the ring");
}

void require_binary(std::size_t states, const char* what) {
  if (states != 2) throw UnsupportedError(std::string(what) + " is defined for N = 2 only");
}

// The exact image of a simplex point sums to 1, but each step multiplies
// the rounding error of the input sums by about R, so over long runs the
// cell mass drifts geometrically. Cells that stray more than kDriftLimit
// from 1 are divided by their sum; all others, one-hot rows included, keep
// the exact value of the local rule.
constexpr double kDriftLimit = 1e-13;

void renormalize(double* p, std::size_t states) {
  double sum = 0.0;
  for (std::size_t j = 0; j < states; ++j) {
    p[j] = std::min(p[j], 1.0);  // a near-certain state can round to 1 + ulp
    sum += p[j];
  }
  if (!(std::abs(sum - 1.0) > kDriftLimit) || !(sum > 0.0)) return;
  for (std::size_t j = 0; j < states; ++j) p[j] /= sum;
}

}  // namespace

ContinuousConfiguration::ContinuousConfiguration(Geometry geometry, std::size_t states,
                                                 std::vector<double> values, double tol)
    : geometry_(geometry), states_(states), values_(std::move(values)) {
  check_states(states);
  if (values_.size() != geometry_.cells() * states)
    throw ValidationError("continuous configuration needs " +
                          std::to_string(geometry_.cells() * states) + " values");
  for (std::size_t i = 0; i < geometry_.cells(); ++i) {
    try {
      SimplexVector(std::vector<double>(cell(i).begin(), cell(i).end()), tol);
    } catch (const ValidationError& e) {
      throw ValidationError("cell " + std::to_string(i) + ": " + e.what());
    }
  }
}

ContinuousConfiguration::ContinuousConfiguration(Geometry geometry,
                                                 std::span<const SimplexVector> cells)
    : geometry_(geometry), states_(cells.empty() ? 0 : cells.front().size()) {
  if (cells.size() != geometry_.cells())
    throw ValidationError("continuous configuration needs one simplex vector per cell");
  check_states(states_);
  values_.reserve(cells.size() * states_);
  for (const SimplexVector& c : cells) {
    if (c.size() != states_) throw ValidationError("cells disagree on the number of states");
    values_.insert(values_.end(), c.probs().begin(), c.probs().end());
  }
}

ContinuousConfiguration ContinuousConfiguration::lift(const Configuration& config) {
  std::vector<double> values(config.size() * config.states(), 0.0);
  for (std::size_t i = 0; i < config.size(); ++i)
    values[i * config.states() + config.cells()[i]] = 1.0;
  return ContinuousConfiguration(Unchecked{}, config.geometry(), config.states(),
                                 std::move(values));
}

SimplexVector cca_local_eval(const Plut& plut, std::span<const SimplexVector> window) {
  const std::size_t states = plut.states();
  const std::size_t width = plut.window();
  if (window.size() != width)
    throw DomainError("window has " + std::to_string(window.size()) + " cells, rule expects " +
                      std::to_string(width));
  for (const SimplexVector& s : window)
    if (s.size() != states) throw DomainError("window cell has the wrong number of states");

  std::vector<double> out(states, 0.0);
  std::vector<std::size_t> digit(width, 0);
  for (std::size_t k = 0; k < plut.rows(); ++k) {
    double weight = 1.0;
    for (std::size_t m = 0; m < width; ++m) weight *= window[m][digit[m]];
    for (std::size_t j = 0; j < states; ++j) out[j] += plut.at(k, j) * weight;
    for (std::size_t m = width; m-- > 0;) {
      if (++digit[m] < states) break;
      digit[m] = 0;
    }
  }
  renormalize(out.data(), states);
  return SimplexVector(std::move(out));
}

ContinuousConfiguration cca_step_reference(const Plut& plut,
                                           const ContinuousConfiguration& config) {
  check_compatible(plut, config);
  const auto& geometry = config.geometry();
  const auto r = static_cast<std::ptrdiff_t>(plut.radius());
  std::vector<SimplexVector> window(plut.window());
  std::vector<double> values;
  values.reserve(config.values().size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    for (std::ptrdiff_t d = -r; d <= r; ++d) {
      auto src = config.cell(geometry.wrap(static_cast<std::ptrdiff_t>(i) + d));
      window[static_cast<std::size_t>(d + r)] =
          SimplexVector(std::vector<double>(src.begin(), src.end()));
    }
    const SimplexVector next = cca_local_eval(plut, window);
    values.insert(values.end(), next.probs().begin(), next.probs().end());
  }
  return ContinuousConfiguration(ContinuousConfiguration::Unchecked{}, geometry,
                                 config.states(), std::move(values));
}

ContinuousConfiguration cca_step(const Plut& plut, const ContinuousConfiguration& config) {
  check_compatible(plut, config);
  const std::size_t states = config.states();
  const std::size_t cells = config.size();
  const std::size_t radius = plut.radius();
  const std::size_t stride = cells + 2 * radius;

  std::vector<double> padded(states * stride);
  for (std::size_t p = 0; p < stride; ++p) {
    auto src = config.cell(config.geometry().wrap(static_cast<std::ptrdiff_t>(p) -
                                                  static_cast<std::ptrdiff_t>(radius)));
    for (std::size_t j = 0; j < states; ++j) padded[j * stride + p] = src[j];
  }

  std::vector<double> planes(states * cells);
  kernels::cca_step_soa({plut.values(), states, plut.window(), cells, padded.data(), stride,
                         planes.data()});

  std::vector<double> values(states * cells);
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t j = 0; j < states; ++j) values[i * states + j] = planes[j * cells + i];
    renormalize(values.data() + i * states, states);
  }
  return ContinuousConfiguration(ContinuousConfiguration::Unchecked{}, config.geometry(), states,
                                 std::move(values));
}

ContinuousTrajectory cca_evolve(const Plut& plut, const ContinuousConfiguration& init,
                                std::size_t steps) {
  ContinuousTrajectory trajectory;
  trajectory.steps.reserve(steps + 1);
  trajectory.steps.push_back(init);
  for (std::size_t t = 0; t < steps; ++t)
    trajectory.steps.push_back(cca_step(plut, trajectory.steps.back()));
  return trajectory;
}

ContinuousTrajectory cca_evolve(const Plut& plut, const Configuration& init, std::size_t steps) {
  return cca_evolve(plut, ContinuousConfiguration::lift(init), steps);
}

double mean_density(const ContinuousConfiguration& config) {
  require_binary(config.states(), "density");
  double sum = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) sum += config.prob(i, 1);
  return sum / static_cast<double>(config.size());
}

ConvergenceCheck cca_converged(const ContinuousConfiguration& config, double epsilon) {
  require_binary(config.states(), "convergence");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    lo = std::min(lo, config.prob(i, 1));
    hi = std::max(hi, config.prob(i, 1));
  }
  ConvergenceCheck check{hi - lo < epsilon, hi - lo, std::nullopt};
  if (check.converged)
    check.majority = StateId{static_cast<std::uint8_t>(mean_density(config) > 0.5 ? 1 : 0)};
  return check;
}

std::vector<double> density_trace(const ContinuousTrajectory& trajectory) {
  std::vector<double> trace;
  trace.reserve(trajectory.steps.size());
  for (const auto& step : trajectory.steps) trace.push_back(mean_density(step));
  return trace;
}

}  // namespace stochca
