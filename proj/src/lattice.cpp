#include "stochca/lattice.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "stochca/error.hpp"
#include "stochca/rng.hpp"

namespace stochca {

namespace {

std::string row_prefix(std::size_t k0) {
  return "row " + std::to_string(k0 + 1) + ": ";
}

// Returns an error message for a candidate simplex vector, or empty if valid.
std::string simplex_violation(std::span<const double> probs, double tol) {
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p)) return "non-finite entry";
    if (p < 0.0) return "negative entry " + std::to_string(p);
    if (p > 1.0) return "entry above 1: " + std::to_string(p);
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "entries sum to " << sum << ", not 1";
    return os.str();
  }
  return {};
}

}  // namespace

void check_states(std::size_t states) {
  if (states < 2 || states > kMaxStates)
    throw DomainError("number of states must be in [2, " + std::to_string(kMaxStates) +
                      "], got " + std::to_string(states));
}

std::size_t table_size(std::size_t states, std::size_t window) {
  check_states(states);
  std::size_t size = 1;
  for (std::size_t m = 0; m < window; ++m) {
    size *= states;
    if (size > kMaxTableSize)
      throw DomainError("N^R exceeds the table limit of 2^24 rows");
  }
  return size;
}

SimplexVector::SimplexVector(std::vector<double> probs, double tol) : probs_(std::move(probs)) {
  check_states(probs_.size());
  if (auto why = simplex_violation(probs_, tol); !why.empty())
    throw ValidationError("invalid simplex vector: " + why);
}

SimplexVector SimplexVector::one_hot(StateId state, std::size_t states) {
  if (state.index >= states) throw DomainError("state index out of range");
  std::vector<double> probs(states, 0.0);
  probs[state.index] = 1.0;
  return SimplexVector(std::move(probs));
}

Geometry::Geometry(std::size_t cells, std::size_t radius) : cells_(cells), radius_(radius) {
  if (cells == 0) throw DomainError("geometry needs at least one cell");
  if (2 * radius + 1 > cells)
    throw DomainError("neighborhood size 2r+1 = " + std::to_string(2 * radius + 1) +
                      " exceeds the number of cells " + std::to_string(cells));
}

std::size_t Geometry::wrap(std::ptrdiff_t position) const {
  const auto m = static_cast<std::ptrdiff_t>(cells_);
  position %= m;
  if (position < 0) position += m;
  return static_cast<std::size_t>(position);
}

std::vector<std::size_t> ind_digits(std::uint64_t index, std::size_t states,
                                    std::size_t window) {
  const std::size_t size = table_size(states, window);
  if (index < 1 || index > size)
    throw DomainError("neighborhood index " + std::to_string(index) + " outside [1, " +
                      std::to_string(size) + "]");
  std::vector<std::size_t> digits(window);
  std::uint64_t rest = index - 1;
  for (std::size_t m = window; m-- > 0;) {
    digits[m] = static_cast<std::size_t>(rest % states) + 1;
    rest /= states;
  }
  return digits;
}

std::uint64_t neighborhood_index(std::span<const std::size_t> digits, std::size_t states) {
  table_size(states, digits.size());
  std::uint64_t index = 0;
  for (std::size_t d : digits) {
    if (d < 1 || d > states)
      throw DomainError("digit " + std::to_string(d) + " outside [1, " +
                        std::to_string(states) + "]");
    index = index * states + (d - 1);
  }
  return index + 1;
}

Configuration::Configuration(Geometry geometry, std::size_t states,
                             std::vector<std::uint8_t> cells)
    : geometry_(geometry), states_(states), cells_(std::move(cells)) {
  check_states(states);
  if (cells_.size() != geometry_.cells())
    throw ValidationError("configuration has " + std::to_string(cells_.size()) +
                          " cells, geometry expects " + std::to_string(geometry_.cells()));
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i] >= states)
      throw ValidationError("cell " + std::to_string(i) + " holds invalid state " +
                            std::to_string(cells_[i]));
}

std::size_t Configuration::neighborhood(std::size_t cell, std::size_t radius) const {
  const auto r = static_cast<std::ptrdiff_t>(radius);
  const auto c = static_cast<std::ptrdiff_t>(cell);
  std::size_t k = 0;
  for (std::ptrdiff_t d = -r; d <= r; ++d) k = k * states_ + cells_[geometry_.wrap(c + d)];
  return k;
}

Lut::Lut(std::size_t states, std::size_t radius, std::vector<std::uint8_t> outputs)
    : states_(states), radius_(radius), outputs_(std::move(outputs)) {
  const std::size_t size = table_size(states, 2 * radius + 1);
  if (outputs_.size() != size)
    throw ValidationError("LUT needs " + std::to_string(size) + " outputs, got " +
                          std::to_string(outputs_.size()));
  for (std::size_t k = 0; k < size; ++k)
    if (outputs_[k] >= states)
      throw ValidationError(row_prefix(k) + "invalid state " + std::to_string(outputs_[k]));
}

Lut make_lut(std::span<const StateId> outputs, std::size_t states, std::size_t radius) {
  std::vector<std::uint8_t> raw;
  raw.reserve(outputs.size());
  for (StateId s : outputs) raw.push_back(s.index);
  return Lut(states, radius, std::move(raw));
}

Plut Plut::from_flat(std::size_t states, std::size_t radius, std::vector<double> values,
                     double tol) {
  const std::size_t size = table_size(states, 2 * radius + 1);
  if (values.size() != size * states)
    throw ValidationError("pLUT needs " + std::to_string(size) + " rows of " +
                          std::to_string(states) + " entries");
  for (std::size_t k = 0; k < size; ++k) {
    std::span<const double> row(values.data() + k * states, states);
    if (auto why = simplex_violation(row, tol); !why.empty())
      throw ValidationError(row_prefix(k) + why);
  }
  return Plut(states, radius, std::move(values));
}

Plut validate_plut(std::size_t states, std::size_t radius,
                   const std::vector<std::vector<double>>& rows, double tol) {
  const std::size_t size = table_size(states, 2 * radius + 1);
  if (rows.size() != size)
    throw ValidationError("pLUT needs " + std::to_string(size) + " rows, got " +
                          std::to_string(rows.size()));
  std::vector<double> flat;
  flat.reserve(size * states);
  for (std::size_t k = 0; k < size; ++k) {
    if (rows[k].size() != states)
      throw ValidationError(row_prefix(k) + "expected " + std::to_string(states) +
                            " entries, got " + std::to_string(rows[k].size()));
    flat.insert(flat.end(), rows[k].begin(), rows[k].end());
  }
  return Plut::from_flat(states, radius, std::move(flat), tol);
}

Plut lut_to_plut(const Lut& lut) {
  std::vector<double> values(lut.rows() * lut.states(), 0.0);
  for (std::size_t k = 0; k < lut.rows(); ++k) values[k * lut.states() + lut.outputs()[k]] = 1.0;
  return Plut::from_flat(lut.states(), lut.radius(), std::move(values));
}

bool is_deterministic(const Plut& plut) {
  for (double v : plut.values())
    if (v != 0.0 && v != 1.0) return false;
  return true;
}

Lut plut_to_lut(const Plut& plut) {
  if (!is_deterministic(plut)) throw DomainError("pLUT is not deterministic");
  std::vector<std::uint8_t> outputs(plut.rows());
  for (std::size_t k = 0; k < plut.rows(); ++k)
    for (std::size_t j = 0; j < plut.states(); ++j)
      if (plut.at(k, j) == 1.0) outputs[k] = static_cast<std::uint8_t>(j);
  return Lut(plut.states(), plut.radius(), std::move(outputs));
}

Configuration ca_step(const Lut& lut, const Configuration& config) {
  if (lut.states() != config.states())
    throw DomainError("LUT and configuration disagree on the number of states");
  if (lut.window() > config.size())
    throw DomainError("rule window is wider than the ring");
  std::vector<std::uint8_t> next(config.size());
  for (std::size_t i = 0; i < next.size(); ++i)
    next[i] = lut.outputs()[config.neighborhood(i, lut.radius())];
  return Configuration(config.geometry(), config.states(), std::move(next));
}

InitMode parse_init_mode(std::string_view name) {
  if (name == "uniform") return InitMode::uniform;
  if (name == "density-balanced" || name == "density_balanced") return InitMode::density_balanced;
  throw ValidationError("unknown initial-condition mode '" + std::string(name) + "'");
}

Configuration config_random(const Geometry& geometry, std::size_t states, InitMode mode,
                            std::uint64_t seed) {
  check_states(states);
  auto rng = RngSeed(seed, {streams::kInitialCondition}).engine();
  std::vector<std::uint8_t> cells(geometry.cells());
  switch (mode) {
    case InitMode::uniform:
      for (auto& c : cells) c = static_cast<std::uint8_t>(rng.below(states));
      break;
    case InitMode::density_balanced: {
      if (states != 2)
        throw UnsupportedError("density-balanced initial conditions are binary only");
      const double p_zero = rng.uniform();
      for (auto& c : cells) c = rng.uniform() < p_zero ? 0 : 1;
      break;
    }
  }
  return Configuration(geometry, states, std::move(cells));
}

}  // namespace stochca
