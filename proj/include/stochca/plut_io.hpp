#pragma once

// JSON table files:
//   {"states": N, "radius": r, "rows": [[p_1, ..., p_N], ...]}
// with rows ordered by neighborhood index k = 1..N^R (leftmost cell most
// significant). A LUT file is the same object with one-hot rows.

#include <filesystem>
#include <string>

#include "stochca/lattice.hpp"

namespace stochca {

Plut parse_plut_json(const std::string& text, double tol = kSimplexTolerance);
Plut read_plut_file(const std::filesystem::path& path, double tol = kSimplexTolerance);
Lut read_lut_file(const std::filesystem::path& path);

std::string plut_to_json(const Plut& plut);
std::string lut_to_json(const Lut& lut);

}  // namespace stochca
