#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rogap/errors.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"

namespace rogap {

using AnyInstance = std::variant<GapInstance, KnapsackInstance>;

namespace io_detail {

using Json = nlohmann::ordered_json;

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

inline Rational read_number(const Json& j, const std::string& where) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
    return Rational(j.get<std::int64_t>());
  }
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      schema_error(where, e.what());
    }
  }
  schema_error(where, "expected a number, decimal string or \"p/q\" string");
}

inline std::vector<Rational> read_array(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(read_number(j[k], where + "/" + std::to_string(k)));
  return out;
}

inline std::vector<std::vector<Rational>> read_matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of rows");
  std::vector<std::vector<Rational>> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(read_array(j[k], where + "/" + std::to_string(k)));
  return out;
}

inline void check_fields(const Json& doc, const std::set<std::string>& allowed) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!allowed.count(it.key())) schema_error("/" + it.key(), "unknown field");
  }
  for (const auto& key : allowed) {
    if (!doc.contains(key)) schema_error("/" + key, "missing field");
  }
}

inline Json write_number(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) {
    const Integer num = boost::multiprecision::numerator(q);
    if (num >= std::numeric_limits<std::int64_t>::min() && num <= std::numeric_limits<std::int64_t>::max()) {
      return Json(num.convert_to<std::int64_t>());
    }
  }
  return Json(format_rational(q));
}

inline Json write_array(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(write_number(q));
  return a;
}

}  // namespace io_detail

/// Parses an instance document. Structural problems raise ParseError with a
/// JSON-pointer location; data problems raise the validation errors.
inline AnyInstance load_instance(const std::string& bytes) {
  using io_detail::Json;
  Json doc;
  try {
    doc = Json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": malformed document");
  }
  if (!doc.is_object()) io_detail::schema_error("", "top level must be an object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) io_detail::schema_error("/kind", "missing or not a string");
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "gap") {
    io_detail::check_fields(doc, {"kind", "capacities", "values", "sizes"});
    GapCandidate c;
    c.capacities = io_detail::read_array(doc["capacities"], "/capacities");
    c.values = io_detail::read_matrix(doc["values"], "/values");
    c.sizes = io_detail::read_matrix(doc["sizes"], "/sizes");
    return validate_gap(c);
  }
  if (kind == "knapsack") {
    io_detail::check_fields(doc, {"kind", "capacity", "values", "sizes"});
    KnapsackCandidate c;
    c.capacity = io_detail::read_number(doc["capacity"], "/capacity");
    c.values = io_detail::read_array(doc["values"], "/values");
    c.sizes = io_detail::read_array(doc["sizes"], "/sizes");
    return validate_knapsack(c);
  }
  io_detail::schema_error("/kind", "must be \"gap\" or \"knapsack\"");
}

/// Integers are written as JSON integers, everything else as "p/q" strings,
/// so load(save(x)) reproduces x exactly.
inline std::string save_instance(const GapInstance& inst) {
  using io_detail::Json;
  Json doc;
  doc["kind"] = "gap";
  doc["capacities"] = io_detail::write_array(inst.capacities());
  Json values = Json::array();
  Json sizes = Json::array();
  const GapCandidate c = to_candidate(inst);
  for (std::size_t i = 0; i < inst.num_bins(); ++i) {
    values.push_back(io_detail::write_array(c.values[i]));
    sizes.push_back(io_detail::write_array(c.sizes[i]));
  }
  doc["values"] = std::move(values);
  doc["sizes"] = std::move(sizes);
  return doc.dump(2) + "\n";
}

inline std::string save_instance(const KnapsackInstance& inst) {
  using io_detail::Json;
  Json doc;
  doc["kind"] = "knapsack";
  doc["capacity"] = io_detail::write_number(inst.capacity_exact());
  doc["values"] = io_detail::write_array(inst.values());
  doc["sizes"] = io_detail::write_array(inst.sizes());
  return doc.dump(2) + "\n";
}

inline std::string save_instance(const AnyInstance& inst) {
  return std::visit([](const auto& x) { return save_instance(x); }, inst);
}

}  // namespace rogap
