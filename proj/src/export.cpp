#include "stochca/export.hpp"

#include <cmath>

#include "stochca/error.hpp"

namespace stochca {

void write_metadata(std::ostream& out, const Metadata& metadata) {
  out << "# version: " << STOCHCA_VERSION << '\n';
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
}

void write_pgm(std::ostream& out, const ContinuousTrajectory& trajectory, std::size_t state) {
  if (trajectory.steps.empty()) throw DomainError("empty trajectory");
  const auto& first = trajectory.steps.front();
  if (state >= first.states()) throw DomainError("state index out of range");
  out << "P5\n" << first.size() << ' ' << trajectory.steps.size() << "\n255\n";
  for (const auto& step : trajectory.steps)
    for (std::size_t i = 0; i < step.size(); ++i)
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * step.prob(i, state)))));
}

void write_trajectory_csv(std::ostream& out, const ContinuousTrajectory& trajectory) {
  if (trajectory.steps.empty()) throw DomainError("empty trajectory");
  const std::size_t states = trajectory.steps.front().states();
  out << "t,cell";
  for (std::size_t j = 0; j < states; ++j) out << ",p_" << j;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t t = 0; t < trajectory.steps.size(); ++t) {
    const auto& step = trajectory.steps[t];
    for (std::size_t i = 0; i < step.size(); ++i) {
      out << t << ',' << i;
      for (std::size_t j = 0; j < states; ++j) out << ',' << step.prob(i, j);
      out << '\n';
    }
  }
  out.precision(old_precision);
}

void write_pbm(std::ostream& out, const SpaceTimeDiagram& diagram) {
  if (diagram.states() != 2) throw UnsupportedError("PBM export needs a binary diagram");
  out << "P4\n" << diagram.cells() << ' ' << diagram.rows() << '\n';
  for (std::size_t t = 0; t < diagram.rows(); ++t) {
    auto row = diagram.row(t);
    for (std::size_t byte = 0; byte < (row.size() + 7) / 8; ++byte) {
      unsigned char bits = 0;
      for (std::size_t b = 0; b < 8; ++b) {
        const std::size_t i = byte * 8 + b;
        if (i < row.size() && row[i]) bits |= static_cast<unsigned char>(0x80U >> b);
      }
      out.put(static_cast<char>(bits));
    }
  }
}

void write_pgm(std::ostream& out, const SpaceTimeDiagram& diagram) {
  out << "P5\n" << diagram.cells() << ' ' << diagram.rows() << '\n'
      << diagram.states() - 1 << '\n';
  for (std::size_t t = 0; t < diagram.rows(); ++t)
    for (std::uint8_t s : diagram.row(t)) out.put(static_cast<char>(s));
}

void write_diagram_csv(std::ostream& out, const SpaceTimeDiagram& diagram) {
  out << "t,cell,state\n";
  for (std::size_t t = 0; t < diagram.rows(); ++t) {
    auto row = diagram.row(t);
    for (std::size_t i = 0; i < row.size(); ++i)
      out << t << ',' << i << ',' << static_cast<int>(row[i]) << '\n';
  }
}

}  // namespace stochca
