#pragma once

#include <string>

#include "json.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/online_gap.hpp"
#include "rogap/online_knapsack.hpp"

namespace rogap {

namespace trace_detail {

using Json = nlohmann::ordered_json;

/// Rationals as "p/q" strings, doubles as numbers.
template <Scalar S>
Json number(const S& v) {
  if constexpr (is_exact_v<S>) return format_rational(v);
  else return v;
}

inline Json assignment(const Assignment& x) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace trace_detail

/// Round-by-round record of a GAP run. Bins and items are 1-based; bin 0
/// means no bin was selected.
template <Scalar S>
nlohmann::ordered_json trace_json(const GapRun<S>& run, const Permutation& perm) {
  using trace_detail::Json;
  Json j;
  j["algorithm"] = std::string(to_string(run.algorithm));
  j["executed"] = std::string(to_string(run.executed));
  j["sample_size"] = run.sample_size;
  Json order = Json::array();
  for (std::size_t k = 0; k < perm.size(); ++k) order.push_back(perm[k] + 1);
  j["order"] = order;
  Json rounds = Json::array();
  for (const auto& r : run.rounds) {
    Json e;
    e["round"] = r.round;
    e["item"] = r.item + 1;
    Json row = Json::array();
    for (const auto& v : r.row) row.push_back(trace_detail::number(v));
    e["row"] = row;
    e["selected_bin"] = r.selected ? *r.selected + 1 : 0;
    e["tentative_value"] = trace_detail::number(r.tentative_value);
    e["accepted"] = r.accepted;
    if (run.executed == GapAlgorithm::Imitative) e["imitative_accepted"] = r.imitative_accepted;
    e["load_before"] = trace_detail::number(r.load_before);
    e["load_after"] = trace_detail::number(r.load_after);
    rounds.push_back(e);
  }
  j["rounds"] = rounds;
  j["assignment"] = trace_detail::assignment(run.assignment);
  if (run.imitative) j["imitative_assignment"] = trace_detail::assignment(*run.imitative);
  j["value"] = trace_detail::number(run.value);
  return j;
}

template <Scalar S>
nlohmann::ordered_json trace_json(const KnapsackRun<S>& run, const Permutation& perm) {
  using trace_detail::Json;
  Json j;
  j["algorithm"] = "fractional-knapsack";
  j["sample_size"] = run.sample_size;
  Json order = Json::array();
  for (std::size_t k = 0; k < perm.size(); ++k) order.push_back(perm[k] + 1);
  j["order"] = order;
  Json rounds = Json::array();
  for (const auto& r : run.rounds) {
    Json e;
    e["round"] = r.round;
    e["item"] = r.item + 1;
    e["greedy_fraction"] = trace_detail::number(r.greedy_fraction);
    e["compensation"] = trace_detail::number(r.compensation);
    e["packed_fraction"] = trace_detail::number(r.packed_fraction);
    e["clamped"] = r.clamped;
    rounds.push_back(e);
  }
  j["rounds"] = rounds;
  Json fractions = Json::array();
  for (const auto& f : run.fractions) fractions.push_back(trace_detail::number(f));
  j["fractions"] = fractions;
  j["value"] = trace_detail::number(run.value);
  j["packed_size"] = trace_detail::number(run.packed_size);
  return j;
}

}  // namespace rogap
