#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/matrix.hpp"
#include "rogap/numeric.hpp"

namespace rogap {

/// max c^T x  s.t.  A x <= b, x >= 0, with b >= 0 so the all-slack basis is
/// feasible and no phase one is needed.
template <Scalar S>
struct PackingLp {
  Matrix<S> a;
  std::vector<S> b;
  std::vector<S> c;
};

template <Scalar S>
struct SimplexResult {
  std::vector<S> x;        // structural variables
  std::vector<S> duals;    // one price per row
  S objective = 0;
  std::vector<std::size_t> basis;  // column index per row; slacks are cols + row
  std::size_t pivots = 0;
};

inline constexpr std::size_t kDefaultPivotLimit = 100000;

namespace simplex_detail {

template <Scalar S>
bool positive(const S& v) {
  if constexpr (is_exact_v<S>) return v > 0;
  else return v > kPivotTol;
}

template <Scalar S>
void chop(S& v) {
  if constexpr (!is_exact_v<S>) {
    if (v < 1e-12 && v > -1e-12) v = 0;
  } else {
    (void)v;
  }
}

}  // namespace simplex_detail

/// Primal simplex on the dense tableau with Bland's rule: the entering column
/// is the lowest-indexed one with positive reduced cost; among rows tied in
/// the ratio test the one whose basic variable has the lowest index leaves.
/// Column order is structural columns first, then slacks. The rule rules out
/// cycling, and since it is a pure function of the data, the optimal vertex
/// returned is reproducible bit for bit.
template <Scalar S>
SimplexResult<S> maximize_bland(const PackingLp<S>& lp, std::size_t pivot_limit = kDefaultPivotLimit) {
  using simplex_detail::positive;
  const std::size_t rows = lp.a.rows();
  const std::size_t cols = lp.a.cols();
  if (lp.b.size() != rows || lp.c.size() != cols) {
    throw Error(ErrorCode::DimensionMismatch, "LP data has inconsistent dimensions");
  }
  const std::size_t width = cols + rows;

  // tableau rows: [A | I | b]; cost row holds reduced costs c_j - z_j.
  Matrix<S> t(rows, width + 1, S(0));
  for (std::size_t r = 0; r < rows; ++r) {
    if (is_negative_beyond(lp.b[r], 0.0)) {
      throw Error(ErrorCode::BadArguments, "packing LP requires b >= 0");
    }
    for (std::size_t k = 0; k < cols; ++k) t(r, k) = lp.a(r, k);
    t(r, cols + r) = 1;
    t(r, width) = lp.b[r];
  }
  std::vector<S> reduced(width + 1, S(0));
  for (std::size_t k = 0; k < cols; ++k) reduced[k] = lp.c[k];

  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = cols + r;

  SimplexResult<S> res;
  std::vector<std::size_t> nz;
  nz.reserve(width + 1);
  for (;;) {
    std::size_t enter = width;
    for (std::size_t k = 0; k < width; ++k) {
      if (positive(reduced[k])) {
        enter = k;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = rows;
    S best_ratio = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!positive(t(r, enter))) continue;
      S ratio = t(r, width) / t(r, enter);
      if (leave == rows) {
        leave = r;
        best_ratio = ratio;
        continue;
      }
      bool better;
      bool tie;
      if constexpr (is_exact_v<S>) {
        better = ratio < best_ratio;
        tie = ratio == best_ratio;
      } else {
        better = ratio < best_ratio - kPivotTol;
        tie = !better && ratio <= best_ratio + kPivotTol;
      }
      if (better || (tie && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows) {
      throw Error(ErrorCode::NumericalFailure, "LP unbounded; packing LPs are bounded");
    }
    if (++res.pivots > pivot_limit) {
      throw Error(ErrorCode::NumericalFailure,
                  "pivot limit " + std::to_string(pivot_limit) + " exceeded");
    }

    // Pivot, touching only the nonzeros of the pivot row.
    const S piv = t(leave, enter);
    nz.clear();
    for (std::size_t k = 0; k <= width; ++k) {
      if (t(leave, k) != S(0)) {
        t(leave, k) /= piv;
        simplex_detail::chop(t(leave, k));
        if (t(leave, k) != S(0)) nz.push_back(k);
      }
    }
    t(leave, enter) = 1;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const S f = t(r, enter);
      if (f == S(0)) continue;
      for (std::size_t k : nz) {
        t(r, k) -= f * t(leave, k);
        simplex_detail::chop(t(r, k));
      }
      t(r, enter) = 0;
    }
    {
      const S f = reduced[enter];
      for (std::size_t k : nz) {
        reduced[k] -= f * t(leave, k);
        simplex_detail::chop(reduced[k]);
      }
      reduced[enter] = 0;
    }
    basis[leave] = enter;
  }

  res.x.assign(cols, S(0));
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < cols) {
      S v = t(r, width);
      if constexpr (!is_exact_v<S>) {
        if (v < 0) v = 0;
      }
      res.x[basis[r]] = v;
    }
  }
  res.duals.assign(rows, S(0));
  for (std::size_t r = 0; r < rows; ++r) {
    S y = -reduced[cols + r];
    if constexpr (!is_exact_v<S>) {
      if (y < 0) y = 0;
    }
    res.duals[r] = y;
  }
  for (std::size_t k = 0; k < cols; ++k) {
    if (res.x[k] != S(0)) res.objective += lp.c[k] * res.x[k];
  }
  res.basis = std::move(basis);
  return res;
}

}  // namespace rogap
