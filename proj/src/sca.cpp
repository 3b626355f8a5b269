#include "stochca/sca.hpp"

#include <cmath>
#include <string>

#include "stochca/error.hpp"
#include "stochca/parallel.hpp"

namespace stochca {

namespace {

void check_compatible(const Plut& plut, const Configuration& config) {
  if (plut.states() != config.states())
    throw DomainError("pLUT has " + std::to_string(plut.states()) +
                      " states, configuration has " + std::to_string(config.states()));
  if (plut.window() > config.size()) throw DomainError("rule window is wider than the ring");
}

// Table row of every cell's window, by a rolling base-N update.
void neighborhood_rows(std::span<const std::uint8_t> cells, std::size_t states,
                       std::size_t radius, std::size_t rows, std::vector<std::size_t>& out) {
  const std::size_t m = cells.size();
  out.resize(m);
  std::size_t k = 0;
  for (std::size_t d = 0; d < 2 * radius; ++d) k = k * states + cells[(m - radius + d) % m];
  for (std::size_t i = 0; i < m; ++i) {
    k = (k * states + cells[(i + radius) % m]) % rows;
    out[i] = k;
  }
}

void step_into(const Plut& plut, std::span<const std::uint8_t> cur, std::vector<std::uint8_t>& next,
               std::vector<std::size_t>& rows_scratch, Xoshiro256& rng) {
  neighborhood_rows(cur, plut.states(), plut.radius(), plut.rows(), rows_scratch);
  next.resize(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i)
    next[i] = sample_state(plut.row(rows_scratch[i]), rng.uniform());
}

}  // namespace

SpaceTimeDiagram::SpaceTimeDiagram(Geometry geometry, std::size_t states)
    : geometry_(geometry), states_(states) {
  check_states(states);
}

Configuration SpaceTimeDiagram::configuration(std::size_t t) const {
  auto r = row(t);
  return Configuration(geometry_, states_, std::vector<std::uint8_t>(r.begin(), r.end()));
}

void SpaceTimeDiagram::push_back(const Configuration& config) {
  if (config.geometry() != geometry_ || config.states() != states_)
    throw DomainError("configuration does not match the diagram's shape");
  data_.insert(data_.end(), config.cells().begin(), config.cells().end());
}

PackedDiagram::PackedDiagram(std::size_t cells, std::size_t rows)
    : cells_(cells),
      rows_(rows),
      words_per_row_((cells + 63) / 64),
      words_(words_per_row_ * rows, 0) {}

PackedDiagram PackedDiagram::pack(const SpaceTimeDiagram& diagram) {
  if (diagram.states() != 2) throw UnsupportedError("bit packing needs a binary diagram");
  PackedDiagram packed(diagram.cells(), diagram.rows());
  for (std::size_t t = 0; t < diagram.rows(); ++t) {
    auto r = diagram.row(t);
    for (std::size_t i = 0; i < r.size(); ++i) packed.set(t, i, r[i] != 0);
  }
  return packed;
}

void PackedDiagram::set(std::size_t t, std::size_t cell, bool value) {
  std::uint64_t& word = words_[t * words_per_row_ + cell / 64];
  const std::uint64_t bit = std::uint64_t{1} << (cell % 64);
  word = value ? (word | bit) : (word & ~bit);
}

std::uint8_t sample_state(std::span<const double> row, double u) {
  double cumulative = 0.0;
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    cumulative += row[j];
    if (u < cumulative) return static_cast<std::uint8_t>(j);
  }
  // Rounding can leave the cumulative sum short of 1; never pick a
  // zero-probability state.
  for (std::size_t j = row.size(); j-- > 0;)
    if (row[j] > 0.0) return static_cast<std::uint8_t>(j);
  return 0;
}

Configuration sca_step(const Plut& plut, const Configuration& config, Xoshiro256& rng) {
  check_compatible(plut, config);
  std::vector<std::uint8_t> next;
  std::vector<std::size_t> rows;
  step_into(plut, config.cells(), next, rows, rng);
  return Configuration(config.geometry(), config.states(), std::move(next));
}

SpaceTimeDiagram sca_evolve(const Plut& plut, const Configuration& init, std::size_t steps,
                            const RngSeed& seed) {
  check_compatible(plut, init);
  auto rng = seed.engine();
  SpaceTimeDiagram diagram(init.geometry(), init.states());
  diagram.push_back(init);
  std::vector<std::uint8_t> cur(init.cells().begin(), init.cells().end());
  std::vector<std::uint8_t> next;
  std::vector<std::size_t> rows;
  for (std::size_t t = 0; t < steps; ++t) {
    step_into(plut, cur, next, rows, rng);
    cur.swap(next);
    diagram.push_back(Configuration(init.geometry(), init.states(), cur));
  }
  return diagram;
}

PackedDiagram sca_evolve_packed(const Plut& plut, const Configuration& init, std::size_t steps,
                                const RngSeed& seed) {
  check_compatible(plut, init);
  if (plut.states() != 2) throw UnsupportedError("packed evolution needs a binary rule");
  auto rng = seed.engine();
  PackedDiagram diagram(init.size(), steps + 1);
  std::vector<std::uint8_t> cur(init.cells().begin(), init.cells().end());
  std::vector<std::uint8_t> next;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < cur.size(); ++i) diagram.set(0, i, cur[i] != 0);
  for (std::size_t t = 1; t <= steps; ++t) {
    step_into(plut, cur, next, rows, rng);
    cur.swap(next);
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (cur[i]) diagram.set(t, i, true);
  }
  return diagram;
}

Configuration mixture_step(std::span<const MixtureComponent> components,
                           const Configuration& config, Xoshiro256& rng) {
  if (components.empty()) throw DomainError("mixture needs at least one component");
  const Lut& first = components.front().lut;
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0))
      throw DomainError("mixture coefficient outside [0, 1]");
    if (c.lut.states() != first.states() || c.lut.radius() != first.radius())
      throw DomainError("mixture components must share N and radius (widen first)");
    total += c.alpha;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("mixture coefficients do not sum to 1");
  if (first.states() != config.states())
    throw DomainError("mixture and configuration disagree on the number of states");
  if (first.window() > config.size()) throw DomainError("rule window is wider than the ring");

  std::vector<double> weights;
  for (const auto& c : components) weights.push_back(c.alpha);
  std::vector<std::size_t> rows;
  neighborhood_rows(config.cells(), first.states(), first.radius(), first.rows(), rows);
  std::vector<std::uint8_t> next(config.size());
  for (std::size_t i = 0; i < next.size(); ++i) {
    const std::uint8_t pick = sample_state(weights, rng.uniform());
    next[i] = components[pick].lut.outputs()[rows[i]];
  }
  return Configuration(config.geometry(), config.states(), std::move(next));
}

ContinuousTrajectory estimate_pi(const Plut& plut, const Configuration& init, std::size_t steps,
                                 std::size_t samples, const RngSeed& seed, std::size_t threads) {
  check_compatible(plut, init);
  if (samples == 0) throw DomainError("estimate_pi needs at least one sample");
  const std::size_t states = init.states();
  const std::size_t cells = init.size();
  const std::size_t slots = (steps + 1) * cells * states;
  threads = std::max<std::size_t>(1, std::min(threads, samples));

  std::vector<std::vector<std::uint64_t>> counts(threads, std::vector<std::uint64_t>(slots, 0));
  parallel_for(samples, threads, [&](std::size_t s, std::size_t worker) {
    const SpaceTimeDiagram diagram = sca_evolve(plut, init, steps, seed.child(s));
    auto& c = counts[worker];
    for (std::size_t t = 0; t <= steps; ++t) {
      auto r = diagram.row(t);
      for (std::size_t i = 0; i < cells; ++i) ++c[(t * cells + i) * states + r[i]];
    }
  });
  for (std::size_t w = 1; w < threads; ++w)
    for (std::size_t x = 0; x < slots; ++x) counts[0][x] += counts[w][x];

  ContinuousTrajectory trajectory;
  trajectory.steps.reserve(steps + 1);
  const double n = static_cast<double>(samples);
  for (std::size_t t = 0; t <= steps; ++t) {
    std::vector<double> values(cells * states);
    for (std::size_t x = 0; x < cells * states; ++x)
      values[x] = static_cast<double>(counts[0][t * cells * states + x]) / n;
    trajectory.steps.emplace_back(init.geometry(), states, std::move(values));
  }
  return trajectory;
}

}  // namespace stochca
