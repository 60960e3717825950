#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/generators.hpp"
#include "rogap/instance_io.hpp"

namespace rogap {

/// A generator named by a flat spec such as "gap n=5 m=2 seed=1",
/// "knapsack family=strong n=10" or "unit-iid n=10 dist=point:5".
struct GeneratorSpec {
  std::string kind;  // gap | knapsack | unit-iid
  std::map<std::string, std::string> params;
};

namespace spec_detail {

inline const std::set<std::string>& allowed_keys(const std::string& kind) {
  static const std::set<std::string> gap{"n", "m", "seed", "v_min", "v_max", "s_min", "s_max", "c_min", "c_max"};
  static const std::set<std::string> knapsack{"family", "n", "seed", "range", "offset", "capacity"};
  static const std::set<std::string> unit{"n", "dist", "seed"};
  if (kind == "gap") return gap;
  if (kind == "knapsack") return knapsack;
  if (kind == "unit-iid") return unit;
  throw Error(ErrorCode::ConfigError, "unknown generator '" + kind + "' (expected gap, knapsack or unit-iid)");
}

inline std::uint64_t to_u64(const GeneratorSpec& g, const std::string& key) {
  const std::string& text = g.params.at(key);
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw Error(ErrorCode::ConfigError, g.kind + ": " + key + " must be a nonnegative integer, got '" + text + "'");
  }
  return v;
}

inline std::int64_t to_i64(const GeneratorSpec& g, const std::string& key) {
  const std::string& text = g.params.at(key);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw Error(ErrorCode::ConfigError, g.kind + ": " + key + " must be an integer, got '" + text + "'");
  }
  return v;
}

inline void require(const GeneratorSpec& g, const std::string& key) {
  if (!g.params.count(key)) throw Error(ErrorCode::ConfigError, g.kind + ": missing " + key + "=");
}

}  // namespace spec_detail

/// `tokens` holds the generator name followed by key=value pairs.
inline GeneratorSpec parse_generator_spec(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw Error(ErrorCode::ConfigError, "empty generator spec");
  GeneratorSpec g;
  g.kind = tokens.front();
  const auto& allowed = spec_detail::allowed_keys(g.kind);
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    const auto eq = tokens[k].find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::ConfigError, "expected key=value, got '" + tokens[k] + "'");
    }
    std::string key = tokens[k].substr(0, eq);
    if (!allowed.count(key)) throw Error(ErrorCode::ConfigError, g.kind + ": unknown key '" + key + "'");
    if (!g.params.emplace(key, tokens[k].substr(eq + 1)).second) {
      throw Error(ErrorCode::ConfigError, g.kind + ": duplicate key '" + key + "'");
    }
  }
  return g;
}

inline GeneratorSpec parse_generator_spec(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  return parse_generator_spec(tokens);
}

/// Canonical text form: kind followed by keys in sorted order.
inline std::string to_string(const GeneratorSpec& g) {
  std::string s = g.kind;
  for (const auto& [k, v] : g.params) s += " " + k + "=" + v;
  return s;
}

/// Builds the instance; a `seed=` key overrides `default_seed`.
inline AnyInstance generate(const GeneratorSpec& g, std::uint64_t default_seed) {
  using namespace spec_detail;
  const std::uint64_t seed = g.params.count("seed") ? to_u64(g, "seed") : default_seed;
  require(g, "n");
  const auto n = static_cast<std::size_t>(to_u64(g, "n"));
  if (g.kind == "gap") {
    require(g, "m");
    const auto m = static_cast<std::size_t>(to_u64(g, "m"));
    GapRanges r;
    auto set = [&](const char* key, std::int64_t& field) {
      if (g.params.count(key)) field = to_i64(g, key);
    };
    set("v_min", r.v_min);
    set("v_max", r.v_max);
    set("s_min", r.s_min);
    set("s_max", r.s_max);
    set("c_min", r.c_min);
    set("c_max", r.c_max);
    return gen_uniform_gap(n, m, seed, r);
  }
  if (g.kind == "knapsack") {
    require(g, "family");
    const KnapsackFamily family = parse_knapsack_family(g.params.at("family"));
    KnapsackParams p;
    if (g.params.count("range")) p.range = to_i64(g, "range");
    if (g.params.count("offset")) p.offset = to_i64(g, "offset");
    if (g.params.count("capacity")) p.capacity = to_i64(g, "capacity");
    return gen_knapsack_family(family, n, seed, p);
  }
  require(g, "dist");
  return gen_unit_iid(n, parse_distribution(g.params.at("dist")), seed);
}

}  // namespace rogap
