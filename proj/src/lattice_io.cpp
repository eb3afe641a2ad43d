#include "dgslab/lattice_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dgslab {

namespace {

using nlohmann::json;

Rational entry(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(mpz_class(std::to_string(v.get<long long>())));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a \"p/q\" string");
}

RationalVector vector_of(const json& v, std::size_t n, const std::string& where) {
  if (!v.is_array() || v.size() != n) throw ParseError(where + ": expected " + std::to_string(n) + " entries");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(entry(v[i], where + "[" + std::to_string(i) + "]"));
  return RationalVector(std::move(out));
}

}  // namespace

ShiftedLattice parse_lattice_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("lattice file must be a JSON object");
  if (!doc.contains("basis")) throw ParseError("missing \"basis\"");
  const json& basis = doc["basis"];
  if (!basis.is_array() || basis.empty()) throw ParseError("\"basis\" must be a non-empty array");
  const std::size_t n = basis.size();
  if (doc.contains("dimension")) {
    if (!doc["dimension"].is_number_unsigned() || doc["dimension"].get<std::size_t>() != n)
      throw ParseError("\"dimension\" does not match the basis");
  }
  std::vector<RationalVector> columns;
  for (std::size_t i = 0; i < n; ++i) columns.push_back(vector_of(basis[i], n, "basis[" + std::to_string(i) + "]"));
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("\"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  RationalVector shift(n);
  if (doc.contains("shift") && !doc["shift"].is_null()) shift = vector_of(doc["shift"], n, "shift");
  try {
    return ShiftedLattice(Basis(std::move(columns)), std::move(shift), name);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("basis: ") + e.what());
  }
}

ShiftedLattice read_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lattice_json(ss.str());
}

std::string lattice_json(const ShiftedLattice& lat) {
  nlohmann::ordered_json doc;
  const std::size_t n = lat.dimension();
  doc["name"] = lat.name;
  doc["dimension"] = n;
  doc["basis"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    auto col = nlohmann::ordered_json::array();
    for (const auto& x : lat.basis.column(i)) col.push_back(to_string(x));
    doc["basis"].push_back(col);
  }
  if (!lat.shift.is_zero()) {
    doc["shift"] = nlohmann::ordered_json::array();
    for (const auto& x : lat.shift) doc["shift"].push_back(to_string(x));
  }
  return doc.dump(2) + "\n";
}

std::string format_sample(const RationalVector& x) { return x.key(); }

RationalVector parse_sample(const std::string& line) {
  try {
    return RationalVector::parse_key(line);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("sample line: ") + e.what());
  }
}

}  // namespace dgslab
