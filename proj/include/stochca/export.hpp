#pragma once

// Image and CSV writers for trajectories and diagrams. Rows are time steps.
//   continuous trajectory -> PGM (P5, maxval 255), pixel = round(255 * P(state))
//   binary diagram        -> PBM (P4), state 1 is a set bit (black)
//   N-state diagram       -> PGM (P5, maxval N-1), pixel = state index
// CSV files start with a '#'-prefixed metadata block, then a header row.

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "stochca/cca.hpp"
#include "stochca/sca.hpp"

namespace stochca {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// "# version: ...", then one "# key: value" line per entry.
void write_metadata(std::ostream& out, const Metadata& metadata);

void write_pgm(std::ostream& out, const ContinuousTrajectory& trajectory, std::size_t state = 1);
void write_trajectory_csv(std::ostream& out, const ContinuousTrajectory& trajectory);

void write_pbm(std::ostream& out, const SpaceTimeDiagram& diagram);
void write_pgm(std::ostream& out, const SpaceTimeDiagram& diagram);
void write_diagram_csv(std::ostream& out, const SpaceTimeDiagram& diagram);

}  // namespace stochca
