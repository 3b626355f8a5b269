#include "stochca/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stochca/error.hpp"

namespace stochca {

namespace {

std::size_t row_argmax(std::span<const double> row, TieBreak tie) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best] || (tie == TieBreak::highest_index && row[j] == row[best])) best = j;
  }
  return best;
}

double min_row_max(std::span<const double> values, std::size_t states) {
  double alpha = 1.0;
  for (std::size_t k = 0; k < values.size() / states; ++k) {
    const auto row = values.subspan(k * states, states);
    alpha = std::min(alpha, *std::max_element(row.begin(), row.end()));
  }
  return alpha;
}

std::size_t count_zeros(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return v <= kZeroTolerance; }));
}

// Convex combination without validation; shape-checked against (states, radius).
std::vector<double> combine(const Decomposition& d) {
  const std::size_t rows = table_size(d.states, 2 * d.radius + 1);
  std::vector<double> values(rows * d.states, 0.0);
  for (const auto& c : d.components) {
    if (c.lut.states() != d.states || c.lut.radius() != d.radius)
      throw DomainError("decomposition components disagree on N or radius");
    for (std::size_t k = 0; k < rows; ++k) values[k * d.states + c.lut.outputs()[k]] += c.alpha;
  }
  return values;
}

}  // namespace

double Decomposition::total() const {
  double sum = 0.0;
  for (const auto& c : components) sum += c.alpha;
  return sum;
}

MatrixDecomposition greedy_decompose_matrix(std::span<const double> values, std::size_t states,
                                            TieBreak tie) {
  if (states == 0 || values.empty() || values.size() % states != 0)
    throw DomainError("matrix shape does not match the number of states");
  const std::size_t rows = values.size() / states;
  const std::size_t max_components = states * rows;
  std::vector<double> residual(values.begin(), values.end());

  MatrixDecomposition out;
  for (;;) {
    out.zero_counts.push_back(static_cast<std::size_t>(
        std::count(residual.begin(), residual.end(), 0.0)));
    if (count_zeros(residual) == residual.size()) break;
    if (out.alphas.size() == max_components)
      throw InternalError("greedy decomposition did not terminate within N * N^R steps");

    // alpha may legitimately fall below the zero tolerance: rounding leaves
    // ~1e-12 of mass per row, spread unevenly over entries. Each step still
    // zeroes the entry attaining alpha exactly, so the loop terminates.
    const double alpha = min_row_max(residual, states);
    if (alpha == 0.0) break;  // a row is spent; input row sums differ by more than the tolerance

    std::vector<std::uint8_t> choice(rows);
    for (std::size_t k = 0; k < rows; ++k) {
      const std::size_t j = row_argmax({residual.data() + k * states, states}, tie);
      choice[k] = static_cast<std::uint8_t>(j);
      double& entry = residual[k * states + j];
      entry -= alpha;
      if (entry < -kZeroTolerance) {
        std::ostringstream os;
        os << "residual entry went negative (" << entry << ") at row " << k + 1;
        throw InternalError(os.str());
      }
      if (entry < 0.0) entry = 0.0;
    }
    out.alphas.push_back(alpha);
    out.choices.push_back(std::move(choice));
  }
  return out;
}

GreedyTrace greedy_decompose_traced(const Plut& plut, TieBreak tie) {
  MatrixDecomposition m = greedy_decompose_matrix(plut.values(), plut.states(), tie);
  GreedyTrace trace;
  trace.decomposition.states = plut.states();
  trace.decomposition.radius = plut.radius();
  for (std::size_t i = 0; i < m.alphas.size(); ++i)
    trace.decomposition.components.push_back(
        {m.alphas[i], Lut(plut.states(), plut.radius(), std::move(m.choices[i]))});
  trace.zero_counts = std::move(m.zero_counts);
  return trace;
}

Decomposition greedy_decompose(const Plut& plut, TieBreak tie) {
  return greedy_decompose_traced(plut, tie).decomposition;
}

Plut recompose(const Decomposition& decomposition) {
  if (decomposition.components.empty()) throw DomainError("empty decomposition");
  std::vector<double> values = combine(decomposition);
  // Coefficients summing to 1 can round the combined entry to 1 + ulp.
  for (double& v : values) v = std::min(v, 1.0);
  return Plut::from_flat(decomposition.states, decomposition.radius, std::move(values));
}

MixtureComponent dominant_component(const Plut& plut) {
  const std::size_t states = plut.states();
  std::vector<std::uint8_t> outputs(plut.rows());
  for (std::size_t k = 0; k < plut.rows(); ++k)
    outputs[k] = static_cast<std::uint8_t>(row_argmax(plut.row(k), TieBreak::lowest_index));
  return {min_row_max(plut.values(), states), Lut(states, plut.radius(), std::move(outputs))};
}

ValidityReport decomposition_valid(const Decomposition& decomposition, const Plut& plut,
                                   double tol) {
  ValidityReport report;
  auto fail = [&](std::string reason) {
    report.valid = false;
    report.reasons.push_back(std::move(reason));
  };

  if (decomposition.components.empty()) fail("no components");
  for (std::size_t i = 0; i < decomposition.components.size(); ++i) {
    const double a = decomposition.components[i].alpha;
    if (!(a >= 0.0 && a <= 1.0)) fail("coefficient " + std::to_string(i + 1) + " outside [0, 1]");
  }
  if (std::abs(decomposition.total() - 1.0) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "coefficients sum to " << decomposition.total();
    fail(os.str());
  }
  if (decomposition.states != plut.states() || decomposition.radius != plut.radius()) {
    fail("decomposition shape differs from the pLUT");
    return report;
  }
  std::vector<double> combined;
  try {
    combined = combine(decomposition);
  } catch (const std::exception& e) {
    fail(e.what());
    return report;
  }
  double worst = 0.0;
  std::size_t worst_at = 0;
  for (std::size_t x = 0; x < combined.size(); ++x) {
    const double gap = std::abs(combined[x] - plut.values()[x]);
    if (gap > worst) {
      worst = gap;
      worst_at = x;
    }
  }
  if (worst > tol) {
    std::ostringstream os;
    os << "reconstruction differs by " << worst << " at row " << worst_at / plut.states() + 1
       << ", state " << worst_at % plut.states();
    fail(os.str());
  }
  return report;
}

}  // namespace stochca
