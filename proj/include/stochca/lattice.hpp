#pragma once

// Core value types for one-dimensional, N-state cellular automata on a ring:
// states, simplex vectors, geometry, configurations, deterministic lookup
// tables (LUT) and probabilistic lookup tables (pLUT).
//
// Neighborhood indices follow the 1-based convention of the literature in
// the public codec (ind_digits / neighborhood_index). Storage is 0-based:
// the neighborhood (s_{i-r}, ..., s_{i+r}) of 0-based states has table row
//   k0 = sum_m s_{i-r+m} * N^(R-1-m)
// i.e. the leftmost cell is the most significant base-N digit.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace stochca {

inline constexpr std::size_t kMaxStates = 16;
inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 24;
inline constexpr double kSimplexTolerance = 1e-9;

struct StateId {
  std::uint8_t index = 0;

  constexpr auto operator<=>(const StateId&) const = default;
};

/// Checks 2 <= states <= kMaxStates.
void check_states(std::size_t states);

/// N^R for a window of R cells, enforcing the table size limit.
std::size_t table_size(std::size_t states, std::size_t window);

/// Element of the standard (N-1)-simplex. Validated on construction and never
/// renormalized.
class SimplexVector {
 public:
  SimplexVector() = default;
  explicit SimplexVector(std::vector<double> probs, double tol = kSimplexTolerance);

  static SimplexVector one_hot(StateId state, std::size_t states);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t j) const { return probs_[j]; }
  std::span<const double> probs() const { return probs_; }

  bool operator==(const SimplexVector&) const = default;

 private:
  std::vector<double> probs_;
};

/// Ring of `cells` cells with symmetric neighborhoods of radius `radius`.
class Geometry {
 public:
  Geometry(std::size_t cells, std::size_t radius);

  std::size_t cells() const { return cells_; }
  std::size_t radius() const { return radius_; }
  std::size_t window() const { return 2 * radius_ + 1; }

  /// Periodic wrap of a possibly negative or overflowing cell position.
  std::size_t wrap(std::ptrdiff_t position) const;

  bool operator==(const Geometry&) const = default;

 private:
  std::size_t cells_;
  std::size_t radius_;
};

/// 1-based neighborhood index i in [1, N^R] -> R digits in [1, N].
std::vector<std::size_t> ind_digits(std::uint64_t index, std::size_t states,
                                    std::size_t window);

/// Inverse of ind_digits.
std::uint64_t neighborhood_index(std::span<const std::size_t> digits,
                                 std::size_t states);

/// Discrete configuration: one state per cell.
class Configuration {
 public:
  Configuration(Geometry geometry, std::size_t states, std::vector<std::uint8_t> cells);

  const Geometry& geometry() const { return geometry_; }
  std::size_t states() const { return states_; }
  std::size_t size() const { return cells_.size(); }
  StateId at(std::size_t cell) const { return StateId{cells_[cell]}; }
  std::span<const std::uint8_t> cells() const { return cells_; }

  /// 0-based table row of the radius-`radius` window centred at `cell`.
  std::size_t neighborhood(std::size_t cell, std::size_t radius) const;

  bool operator==(const Configuration&) const = default;

 private:
  Geometry geometry_;
  std::size_t states_;
  std::vector<std::uint8_t> cells_;
};

/// Deterministic lookup table: N^R outputs, row k0 = image of neighborhood k0.
class Lut {
 public:
  Lut(std::size_t states, std::size_t radius, std::vector<std::uint8_t> outputs);

  std::size_t states() const { return states_; }
  std::size_t radius() const { return radius_; }
  std::size_t window() const { return 2 * radius_ + 1; }
  std::size_t rows() const { return outputs_.size(); }
  StateId output(std::size_t row) const { return StateId{outputs_[row]}; }
  std::span<const std::uint8_t> outputs() const { return outputs_; }

  bool operator==(const Lut&) const = default;

 private:
  std::size_t states_;
  std::size_t radius_;
  std::vector<std::uint8_t> outputs_;
};

Lut make_lut(std::span<const StateId> outputs, std::size_t states, std::size_t radius);

/// Probabilistic lookup table (row-stochastic matrix), stored row-major with
/// one row per neighborhood and one column per next state.
class Plut {
 public:
  std::size_t states() const { return states_; }
  std::size_t radius() const { return radius_; }
  std::size_t window() const { return 2 * radius_ + 1; }
  std::size_t rows() const { return values_.size() / states_; }
  std::span<const double> row(std::size_t k) const {
    return {values_.data() + k * states_, states_};
  }
  double at(std::size_t k, std::size_t j) const { return values_[k * states_ + j]; }
  std::span<const double> values() const { return values_; }

  bool operator==(const Plut&) const = default;

  /// Validating constructor from a flat row-major table.
  static Plut from_flat(std::size_t states, std::size_t radius, std::vector<double> values,
                        double tol = kSimplexTolerance);

 private:
  Plut(std::size_t states, std::size_t radius, std::vector<double> values)
      : states_(states), radius_(radius), values_(std::move(values)) {}

  std::size_t states_ = 0;
  std::size_t radius_ = 0;
  std::vector<double> values_;
};

/// Accepts iff there are N^R rows of N entries, every entry in [0,1] and each
/// row sums to one within `tol`. Errors name the offending 1-based row.
Plut validate_plut(std::size_t states, std::size_t radius,
                   const std::vector<std::vector<double>>& rows,
                   double tol = kSimplexTolerance);

Plut lut_to_plut(const Lut& lut);

/// Returns the Lut when every row is exactly one-hot.
bool is_deterministic(const Plut& plut);
Lut plut_to_lut(const Plut& plut);

struct MixtureComponent {
  double alpha;
  Lut lut;

  bool operator==(const MixtureComponent&) const = default;
};

/// Synchronous step of the deterministic CA. The rule's radius defines the
/// window; it must fit in the ring.
Configuration ca_step(const Lut& lut, const Configuration& config);

enum class InitMode { uniform, density_balanced };

InitMode parse_init_mode(std::string_view name);

/// Random initial configuration. `uniform`: iid uniform over the N states.
/// `density_balanced` (N = 2 only): draw p ~ U[0,1], then each cell is
/// state 0 with probability p.
Configuration config_random(const Geometry& geometry, std::size_t states, InitMode mode,
                            std::uint64_t seed);

}  // namespace stochca
