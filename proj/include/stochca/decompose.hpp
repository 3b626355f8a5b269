#pragma once

// Decomposition of a pLUT into a convex combination of deterministic LUTs.
//
// Greedy scheme: starting from the residual R = P, repeatedly take
//   alpha = min over rows of (max over states of R[k][.])
//   L     = per row, the lowest state index attaining the row maximum
//   R    -= alpha * L
// until R vanishes. The first coefficient is the largest any decomposition
// of P can assign to a single LUT.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stochca/lattice.hpp"

namespace stochca {

inline constexpr double kZeroTolerance = 1e-12;

struct Decomposition {
  std::size_t states = 0;
  std::size_t radius = 0;
  std::vector<MixtureComponent> components;

  double total() const;
};

enum class TieBreak { lowest_index, highest_index };

struct GreedyTrace {
  Decomposition decomposition;
  /// Number of exactly-zero residual entries before each extraction and
  /// after the last one; strictly increasing.
  std::vector<std::size_t> zero_counts;
};

/// The greedy scheme on any row-stochastic matrix (rows x states, row-major),
/// not only on tables with N^R rows. choices[m][k] is the state L^m selects
/// in row k.
struct MatrixDecomposition {
  std::vector<double> alphas;
  std::vector<std::vector<std::uint8_t>> choices;
  std::vector<std::size_t> zero_counts;
};

MatrixDecomposition greedy_decompose_matrix(std::span<const double> values, std::size_t states,
                                            TieBreak tie = TieBreak::lowest_index);

/// `highest_index` exists to check that the coefficients do not depend on
/// tie resolution; the canonical decomposition uses `lowest_index`.
Decomposition greedy_decompose(const Plut& plut, TieBreak tie = TieBreak::lowest_index);
GreedyTrace greedy_decompose_traced(const Plut& plut, TieBreak tie = TieBreak::lowest_index);

/// Entrywise convex combination of the components' one-hot tables.
Plut recompose(const Decomposition& decomposition);

MixtureComponent dominant_component(const Plut& plut);

struct ValidityReport {
  bool valid = true;
  std::vector<std::string> reasons;

  explicit operator bool() const { return valid; }
};

ValidityReport decomposition_valid(const Decomposition& decomposition, const Plut& plut,
                                   double tol = kZeroTolerance);

}  // namespace stochca
