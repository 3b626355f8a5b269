#pragma once

// Constructors for named rule families: Wolfram-numbered elementary CAs,
// radius widening, alpha-asynchronous pLUTs, the C3 density classifier and
// the two-parameter totalistic family.
//
// State convention: state 0 is the symbol 0 (basis vector e_1) and state 1
// the symbol 1 (e_2). ECA rule n maps the neighborhood with binary value b
// (left cell most significant) to bit b of n.

#include <cstdint>
#include <string_view>

#include "stochca/lattice.hpp"

namespace stochca {

class EcaNumber {
 public:
  explicit EcaNumber(int value);
  int value() const { return value_; }
  bool operator==(const EcaNumber&) const = default;

 private:
  int value_;
};

struct TotalisticParams {
  double p1;  ///< P(next = 1) for neighborhoods with exactly one 1
  double p2;  ///< P(next = 1) for neighborhoods with exactly two 1s
};

Lut eca_lut(EcaNumber n);
EcaNumber lut_number(const Lut& lut);

/// Identity rule of radius r: every neighborhood maps to its centre state.
Lut identity_lut(std::size_t states, std::size_t radius);

Lut widen_radius(const Lut& rule, std::size_t new_radius);
Plut widen_radius(const Plut& rule, std::size_t new_radius);

/// Row k: alpha on base's output, 1 - alpha on the centre state of k.
Plut alpha_async_plut(const Lut& base, double alpha);

Plut c3_plut(double eta);
Plut totalistic_plut(TotalisticParams params);

/// Parses "eca:150", "aaca:150:0.9", "c3:0.1", "totalistic:0.3:0.7",
/// "file:<path>".
Plut parse_rule_spec(std::string_view spec);

}  // namespace stochca
