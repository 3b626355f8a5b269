#include "stochca/plut_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stochca/error.hpp"

namespace stochca {

using nlohmann::json;

namespace {

std::size_t require_count(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 0)
    throw ValidationError(std::string("table file needs a non-negative integer '") + key + "'");
  return doc[key].get<std::size_t>();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

Plut parse_plut_json(const std::string& text, double tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed table JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("table JSON must be an object");
  const std::size_t states = require_count(doc, "states");
  const std::size_t radius = require_count(doc, "radius");
  if (!doc.contains("rows") || !doc["rows"].is_array())
    throw ValidationError("table file needs a 'rows' array");

  std::vector<std::vector<double>> rows;
  rows.reserve(doc["rows"].size());
  for (std::size_t k = 0; k < doc["rows"].size(); ++k) {
    const json& row = doc["rows"][k];
    if (!row.is_array())
      throw ValidationError("row " + std::to_string(k + 1) + ": not an array");
    std::vector<double>& out = rows.emplace_back();
    for (const json& v : row) {
      if (!v.is_number())
        throw ValidationError("row " + std::to_string(k + 1) + ": non-numeric entry");
      out.push_back(v.get<double>());
    }
  }
  return validate_plut(states, radius, rows, tol);
}

Plut read_plut_file(const std::filesystem::path& path, double tol) {
  return parse_plut_json(slurp(path), tol);
}

Lut read_lut_file(const std::filesystem::path& path) {
  const Plut plut = read_plut_file(path);
  if (!is_deterministic(plut))
    throw ValidationError("'" + path.string() + "' is not a deterministic LUT");
  return plut_to_lut(plut);
}

std::string plut_to_json(const Plut& plut) {
  json rows = json::array();
  for (std::size_t k = 0; k < plut.rows(); ++k) {
    auto row = plut.row(k);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json doc = {{"states", plut.states()}, {"radius", plut.radius()}, {"rows", std::move(rows)}};
  return doc.dump();
}

std::string lut_to_json(const Lut& lut) { return plut_to_json(lut_to_plut(lut)); }

}  // namespace stochca
