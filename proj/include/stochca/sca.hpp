#pragma once

// Seeded stochastic simulation. Draw order is fixed: within a step, cells
// 0..M-1 each consume exactly one uniform draw, and the next state is picked
// by inverse CDF over the pLUT row (first j with u < p_0 + ... + p_j).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stochca/cca.hpp"
#include "stochca/lattice.hpp"
#include "stochca/rng.hpp"

namespace stochca {

/// Rows 0..T of a discrete evolution, stored flat (row-major, one byte per cell).
class SpaceTimeDiagram {
 public:
  SpaceTimeDiagram(Geometry geometry, std::size_t states);

  const Geometry& geometry() const { return geometry_; }
  std::size_t states() const { return states_; }
  std::size_t cells() const { return geometry_.cells(); }
  std::size_t rows() const { return cells() == 0 ? 0 : data_.size() / cells(); }
  std::span<const std::uint8_t> row(std::size_t t) const {
    return {data_.data() + t * cells(), cells()};
  }
  Configuration configuration(std::size_t t) const;

  void push_back(const Configuration& config);

  bool operator==(const SpaceTimeDiagram&) const = default;

 private:
  Geometry geometry_;
  std::size_t states_;
  std::vector<std::uint8_t> data_;
};

/// Binary space-time diagram, 64 cells per word; padding bits are zero.
class PackedDiagram {
 public:
  PackedDiagram(std::size_t cells, std::size_t rows);

  static PackedDiagram pack(const SpaceTimeDiagram& diagram);

  std::size_t cells() const { return cells_; }
  std::size_t rows() const { return rows_; }
  std::size_t words_per_row() const { return words_per_row_; }
  std::span<const std::uint64_t> row(std::size_t t) const {
    return {words_.data() + t * words_per_row_, words_per_row_};
  }
  std::span<const std::uint64_t> words() const { return words_; }
  bool at(std::size_t t, std::size_t cell) const {
    return (words_[t * words_per_row_ + cell / 64] >> (cell % 64)) & 1U;
  }
  void set(std::size_t t, std::size_t cell, bool value);

  bool operator==(const PackedDiagram&) const = default;

 private:
  std::size_t cells_;
  std::size_t rows_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> words_;
};

/// Inverse-CDF pick from one distribution row.
std::uint8_t sample_state(std::span<const double> row, double u);

Configuration sca_step(const Plut& plut, const Configuration& config, Xoshiro256& rng);

/// T steps drawing from seed.engine().
SpaceTimeDiagram sca_evolve(const Plut& plut, const Configuration& init, std::size_t steps,
                            const RngSeed& seed);

/// Bit-packed binary evolution; identical states to sca_evolve for the same seed.
PackedDiagram sca_evolve_packed(const Plut& plut, const Configuration& init, std::size_t steps,
                                const RngSeed& seed);

/// Per cell: pick a component by its alpha, apply its LUT. Alphas must sum
/// to 1 within 1e-9 and all LUTs must share N and radius.
Configuration mixture_step(std::span<const MixtureComponent> components,
                           const Configuration& config, Xoshiro256& rng);

/// Monte-Carlo estimate of the cell-wise distributions: `samples`
/// independent runs, run s drawing from seed.child(s).
ContinuousTrajectory estimate_pi(const Plut& plut, const Configuration& init, std::size_t steps,
                                 std::size_t samples, const RngSeed& seed,
                                 std::size_t threads = 1);

}  // namespace stochca
