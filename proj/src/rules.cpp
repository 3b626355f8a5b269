#include "stochca/rules.hpp"

#include <bit>
#include <charconv>
#include <string>
#include <vector>

#include "stochca/error.hpp"
#include "stochca/plut_io.hpp"

namespace stochca {

namespace {

// Row of the centred sub-window of width 2*old_radius+1 inside new-row k.
std::size_t narrowed_row(std::size_t k, std::size_t states, std::size_t new_radius,
                         std::size_t old_radius) {
  const std::size_t margin = new_radius - old_radius;
  std::size_t drop_low = 1;
  for (std::size_t m = 0; m < margin; ++m) drop_low *= states;
  const std::size_t old_rows = table_size(states, 2 * old_radius + 1);
  return (k / drop_low) % old_rows;
}

std::size_t centre_state(std::size_t k, std::size_t states, std::size_t radius) {
  for (std::size_t m = 0; m < radius; ++m) k /= states;
  return k % states;
}

// Binary radius-1 pLUT from explicit (P(next = 0), P(next = 1)) pairs per
// neighborhood value b = 0..7. Complements are passed in rather than derived
// so that e.g. eta and 1 - eta appear bit-exactly where a mixture puts them.
Plut binary_plut(const double (&p_zero)[8], const double (&p_one)[8]) {
  std::vector<double> values(16);
  for (std::size_t b = 0; b < 8; ++b) {
    values[2 * b] = p_zero[b];
    values[2 * b + 1] = p_one[b];
  }
  return Plut::from_flat(2, 1, std::move(values));
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("'" + std::string(text) + "' is not a number");
  return value;
}

int parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("'" + std::string(text) + "' is not an integer");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

}  // namespace

EcaNumber::EcaNumber(int value) : value_(value) {
  if (value < 0 || value > 255)
    throw DomainError("ECA number must be in [0, 255], got " + std::to_string(value));
}

Lut eca_lut(EcaNumber n) {
  std::vector<std::uint8_t> outputs(8);
  for (int b = 0; b < 8; ++b) outputs[b] = static_cast<std::uint8_t>((n.value() >> b) & 1);
  return Lut(2, 1, std::move(outputs));
}

EcaNumber lut_number(const Lut& lut) {
  if (lut.states() != 2 || lut.radius() != 1)
    throw UnsupportedError("Wolfram numbers exist only for binary radius-1 rules");
  int n = 0;
  for (int b = 0; b < 8; ++b) n |= lut.outputs()[b] << b;
  return EcaNumber(n);
}

Lut identity_lut(std::size_t states, std::size_t radius) {
  const std::size_t rows = table_size(states, 2 * radius + 1);
  std::vector<std::uint8_t> outputs(rows);
  for (std::size_t k = 0; k < rows; ++k)
    outputs[k] = static_cast<std::uint8_t>(centre_state(k, states, radius));
  return Lut(states, radius, std::move(outputs));
}

Lut widen_radius(const Lut& rule, std::size_t new_radius) {
  if (new_radius < rule.radius())
    throw DomainError("cannot narrow a rule from radius " + std::to_string(rule.radius()) +
                      " to " + std::to_string(new_radius));
  const std::size_t rows = table_size(rule.states(), 2 * new_radius + 1);
  std::vector<std::uint8_t> outputs(rows);
  for (std::size_t k = 0; k < rows; ++k)
    outputs[k] = rule.outputs()[narrowed_row(k, rule.states(), new_radius, rule.radius())];
  return Lut(rule.states(), new_radius, std::move(outputs));
}

Plut widen_radius(const Plut& rule, std::size_t new_radius) {
  if (new_radius < rule.radius())
    throw DomainError("cannot narrow a rule from radius " + std::to_string(rule.radius()) +
                      " to " + std::to_string(new_radius));
  const std::size_t states = rule.states();
  const std::size_t rows = table_size(states, 2 * new_radius + 1);
  std::vector<double> values;
  values.reserve(rows * states);
  for (std::size_t k = 0; k < rows; ++k) {
    auto src = rule.row(narrowed_row(k, states, new_radius, rule.radius()));
    values.insert(values.end(), src.begin(), src.end());
  }
  return Plut::from_flat(states, new_radius, std::move(values));
}

Plut alpha_async_plut(const Lut& base, double alpha) {
  check_probability(alpha, "synchrony rate");
  const std::size_t states = base.states();
  std::vector<double> values(base.rows() * states, 0.0);
  for (std::size_t k = 0; k < base.rows(); ++k) {
    values[k * states + base.outputs()[k]] += alpha;
    values[k * states + centre_state(k, states, base.radius())] += 1.0 - alpha;
  }
  return Plut::from_flat(states, base.radius(), std::move(values));
}

Plut c3_plut(double eta) {
  check_probability(eta, "eta");
  // Indexed by b = 4*left + 2*centre + right.
  const double p_one[8] = {0.0, 0.0, 0.0, 1.0, 1.0 - eta, 1.0, eta, 1.0};
  const double p_zero[8] = {1.0, 1.0, 1.0, 0.0, eta, 0.0, 1.0 - eta, 0.0};
  return binary_plut(p_zero, p_one);
}

Plut totalistic_plut(TotalisticParams params) {
  check_probability(params.p1, "p1");
  check_probability(params.p2, "p2");
  const double one_by_count[4] = {0.0, params.p1, params.p2, 1.0};
  const double zero_by_count[4] = {1.0, 1.0 - params.p1, 1.0 - params.p2, 0.0};
  double p_zero[8];
  double p_one[8];
  for (int b = 0; b < 8; ++b) {
    const int ones = std::popcount(static_cast<unsigned>(b));
    p_zero[b] = zero_by_count[ones];
    p_one[b] = one_by_count[ones];
  }
  return binary_plut(p_zero, p_one);
}

Plut parse_rule_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ValidationError("rule spec '" + std::string(spec) + "' lacks a kind prefix");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (kind == "file") return read_plut_file(std::string(rest));

  const auto args = split(rest, ':');
  auto expect = [&](std::size_t n) {
    if (args.size() != n)
      throw ValidationError("rule spec '" + std::string(spec) + "' expects " +
                            std::to_string(n) + " argument(s)");
  };
  try {
    if (kind == "eca") {
      expect(1);
      return lut_to_plut(eca_lut(EcaNumber(parse_int(args[0]))));
    }
    if (kind == "aaca") {
      expect(2);
      return alpha_async_plut(eca_lut(EcaNumber(parse_int(args[0]))), parse_double(args[1]));
    }
    if (kind == "c3") {
      expect(1);
      return c3_plut(parse_double(args[0]));
    }
    if (kind == "totalistic") {
      expect(2);
      return totalistic_plut({parse_double(args[0]), parse_double(args[1])});
    }
  } catch (const DomainError& e) {
    throw ValidationError("rule spec '" + std::string(spec) + "': " + e.what());
  }
  throw ValidationError("unknown rule kind '" + std::string(kind) + "'");
}

}  // namespace stochca
