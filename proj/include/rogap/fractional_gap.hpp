#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/item_set.hpp"
#include "rogap/model.hpp"
#include "rogap/numeric.hpp"
#include "rogap/simplex.hpp"

namespace rogap {

template <Scalar S>
struct LpSolution {
  FractionalAssignment<S> primal;  // m x n, zero outside the item subset
  S objective = 0;
  std::vector<S> bin_prices;   // duals of C1
  std::vector<S> item_prices;  // duals of C2; zero outside the subset
  std::string basis_signature;
};

/// Optimal vertex of  max v(x)  s.t. C1, C2, C4  with columns outside
/// `subset` fixed to zero. Columns are ordered bin-major (x_{1,1..n}, then
/// x_{2,1..n}, ...), followed by the bin slacks and the item slacks; the
/// Bland pivot rule over that order picks a canonical optimum.
template <Scalar S>
LpSolution<S> solve_fractional_gap(const GapInstance& inst, const ItemSet& subset,
                                   std::size_t pivot_limit = kDefaultPivotLimit) {
  const std::size_t m = inst.num_bins();
  const std::size_t n = inst.num_items();
  if (subset.universe() != n) {
    throw Error(ErrorCode::DimensionMismatch, "item set universe differs from the instance size");
  }
  const std::vector<std::size_t> items = subset.members();
  if (items.empty()) throw Error(ErrorCode::BadArguments, "item subset must be nonempty");
  const std::size_t q = items.size();

  PackingLp<S> lp;
  lp.a = Matrix<S>(m + q, m * q, S(0));
  lp.b.assign(m + q, S(0));
  lp.c.assign(m * q, S(0));
  for (std::size_t i = 0; i < m; ++i) {
    lp.b[i] = inst.capacity<S>(i);
    for (std::size_t k = 0; k < q; ++k) {
      const std::size_t col = i * q + k;
      lp.a(i, col) = inst.size<S>(i, items[k]);
      lp.a(m + k, col) = 1;
      lp.c[col] = inst.value<S>(i, items[k]);
    }
  }
  for (std::size_t k = 0; k < q; ++k) lp.b[m + k] = 1;

  const SimplexResult<S> res = maximize_bland(lp, pivot_limit);

  LpSolution<S> sol;
  sol.primal = FractionalAssignment<S>(m, n, S(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < q; ++k) sol.primal(i, items[k]) = res.x[i * q + k];
  }
  sol.objective = res.objective;
  sol.bin_prices.assign(res.duals.begin(), res.duals.begin() + static_cast<std::ptrdiff_t>(m));
  sol.item_prices.assign(n, S(0));
  for (std::size_t k = 0; k < q; ++k) sol.item_prices[items[k]] = res.duals[m + k];

  // Signature names basic variables in global terms: x<i>.<j>, sb<i>, si<j>.
  std::vector<std::string> names;
  for (std::size_t col : res.basis) {
    if (col < m * q) {
      names.push_back("x" + std::to_string(col / q + 1) + "." + std::to_string(items[col % q] + 1));
    } else if (col < m * q + m) {
      names.push_back("sb" + std::to_string(col - m * q + 1));
    } else {
      names.push_back("si" + std::to_string(items[col - m * q - m] + 1));
    }
  }
  std::sort(names.begin(), names.end());
  for (const auto& s : names) {
    if (!sol.basis_signature.empty()) sol.basis_signature += ",";
    sol.basis_signature += s;
  }
  return sol;
}

struct LpCertificate {
  bool primal_feasible = true;
  bool dual_feasible = true;
  bool complementary_slackness = true;
  bool objective_consistent = true;
  std::optional<std::size_t> violated_bin;
  std::vector<std::string> issues;

  bool ok() const {
    return primal_feasible && dual_feasible && complementary_slackness && objective_consistent;
  }
};

/// Duality certificate: primal feasibility, dual feasibility (no column has
/// positive reduced cost), complementary slackness and equal objectives.
/// Float mode uses tolerance 1e-7 scaled by the magnitude of the compared
/// quantities; rational mode is exact.
template <Scalar S>
LpCertificate verify_lp_optimality(const GapInstance& inst, const ItemSet& subset, const LpSolution<S>& sol) {
  const std::size_t m = inst.num_bins();
  const std::size_t n = inst.num_items();
  if (sol.primal.rows() != m || sol.primal.cols() != n || sol.bin_prices.size() != m ||
      sol.item_prices.size() != n || subset.universe() != n) {
    throw Error(ErrorCode::DimensionMismatch, "solution does not match the instance");
  }
  auto near = [](const S& a, const S& b) {
    if constexpr (is_exact_v<S>) {
      return a == b;
    } else {
      return std::fabs(a - b) <= kCertificateTol * (1.0 + std::fabs(a) + std::fabs(b));
    }
  };
  auto leq = [](const S& a, const S& b) {
    if constexpr (is_exact_v<S>) {
      return a <= b;
    } else {
      return a <= b + kCertificateTol * (1.0 + std::fabs(b));
    }
  };
  auto pos = [](const S& a) {
    if constexpr (is_exact_v<S>) return a > 0;
    else return a > kCertificateTol;
  };

  LpCertificate cert;
  S primal_obj = 0;
  for (std::size_t i = 0; i < m; ++i) {
    S load = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const S& x = sol.primal(i, j);
      if (!leq(S(0), x) || (!subset.contains(j) && x != S(0))) {
        cert.primal_feasible = false;
        cert.issues.push_back("x(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") out of domain");
      }
      load += inst.size<S>(i, j) * x;
      primal_obj += inst.value<S>(i, j) * x;
    }
    if (!leq(load, inst.capacity<S>(i))) {
      cert.primal_feasible = false;
      if (!cert.violated_bin) cert.violated_bin = i;
      cert.issues.push_back("bin " + std::to_string(i + 1) + " over capacity");
    }
    if (pos(sol.bin_prices[i]) && !near(load, inst.capacity<S>(i))) {
      cert.complementary_slackness = false;
      cert.issues.push_back("bin " + std::to_string(i + 1) + " priced but not tight");
    }
    if (!leq(S(0), sol.bin_prices[i])) {
      cert.dual_feasible = false;
      cert.issues.push_back("bin price " + std::to_string(i + 1) + " negative");
    }
  }
  S dual_obj = 0;
  for (std::size_t i = 0; i < m; ++i) dual_obj += inst.capacity<S>(i) * sol.bin_prices[i];
  for (std::size_t j = 0; j < n; ++j) {
    const S& w = sol.item_prices[j];
    if (!subset.contains(j)) continue;
    dual_obj += w;
    if (!leq(S(0), w)) {
      cert.dual_feasible = false;
      cert.issues.push_back("item price " + std::to_string(j + 1) + " negative");
    }
    S col = 0;
    for (std::size_t i = 0; i < m; ++i) {
      col += sol.primal(i, j);
      const S lhs = inst.size<S>(i, j) * sol.bin_prices[i] + w;
      if (!leq(inst.value<S>(i, j), lhs)) {
        cert.dual_feasible = false;
        cert.issues.push_back("column (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") has positive reduced cost");
      }
      if (pos(sol.primal(i, j)) && !near(lhs, inst.value<S>(i, j))) {
        cert.complementary_slackness = false;
        cert.issues.push_back("column (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") basic but not priced out");
      }
    }
    if (!leq(col, S(1))) {
      cert.primal_feasible = false;
      cert.issues.push_back("item " + std::to_string(j + 1) + " assigned more than once");
    }
    if (pos(w) && !near(col, S(1))) {
      cert.complementary_slackness = false;
      cert.issues.push_back("item " + std::to_string(j + 1) + " priced but not fully assigned");
    }
  }
  if (!near(primal_obj, sol.objective) || !near(primal_obj, dual_obj)) {
    cert.objective_consistent = false;
    cert.issues.push_back("primal and dual objectives disagree");
  }
  return cert;
}

/// Memo of canonical LP solutions keyed by item subset. Sound because the
/// solver output depends only on (instance, subset).
template <Scalar S>
class FractionalGapCache {
 public:
  explicit FractionalGapCache(const GapInstance& inst, std::size_t max_entries = 200000)
      : inst_(&inst), max_entries_(max_entries) {}

  const LpSolution<S>& solve(const ItemSet& subset) {
    if (auto it = memo_.find(subset); it != memo_.end()) return it->second;
    if (memo_.size() >= max_entries_) memo_.clear();
    return memo_.emplace(subset, solve_fractional_gap<S>(*inst_, subset)).first->second;
  }

  std::size_t size() const noexcept { return memo_.size(); }

 private:
  const GapInstance* inst_;
  std::size_t max_entries_;
  std::unordered_map<ItemSet, LpSolution<S>, ItemSetHash> memo_;
};

}  // namespace rogap
