#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rogap/errors.hpp"
#include "rogap/matrix.hpp"
#include "rogap/numeric.hpp"
#include "rogap/random.hpp"

namespace rogap {

/// Unvalidated GAP data as read from a file or built by hand. Rows of
/// `values` and `sizes` are bins.
struct GapCandidate {
  std::vector<Rational> capacities;
  std::vector<std::vector<Rational>> values;
  std::vector<std::vector<Rational>> sizes;
};

struct KnapsackCandidate {
  Rational capacity;
  std::vector<Rational> values;
  std::vector<Rational> sizes;
};

class GapInstance;
class KnapsackInstance;
GapInstance validate_gap(const GapCandidate& raw);
KnapsackInstance validate_knapsack(const KnapsackCandidate& raw);

/// Validated GAP instance. Data is held exactly; a double view is kept
/// alongside for float-mode solvers. Immutable after construction.
class GapInstance {
 public:
  std::size_t num_items() const noexcept { return n_; }
  std::size_t num_bins() const noexcept { return m_; }

  template <Scalar S>
  const S& capacity(std::size_t i) const {
    if constexpr (is_exact_v<S>) return caps_q_[i];
    else return caps_d_[i];
  }
  template <Scalar S>
  const S& value(std::size_t i, std::size_t j) const {
    if constexpr (is_exact_v<S>) return values_q_(i, j);
    else return values_d_(i, j);
  }
  template <Scalar S>
  const S& size(std::size_t i, std::size_t j) const {
    if constexpr (is_exact_v<S>) return sizes_q_(i, j);
    else return sizes_d_(i, j);
  }

  const std::vector<Rational>& capacities() const noexcept { return caps_q_; }
  const Matrix<Rational>& values() const noexcept { return values_q_; }
  const Matrix<Rational>& sizes() const noexcept { return sizes_q_; }

  friend bool operator==(const GapInstance& a, const GapInstance& b) {
    return a.caps_q_ == b.caps_q_ && a.values_q_ == b.values_q_ && a.sizes_q_ == b.sizes_q_;
  }

 private:
  friend GapInstance validate_gap(const GapCandidate& raw);
  GapInstance() = default;

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<Rational> caps_q_;
  Matrix<Rational> values_q_;
  Matrix<Rational> sizes_q_;
  std::vector<double> caps_d_;
  Matrix<double> values_d_;
  Matrix<double> sizes_d_;
};

/// Validated single-bin instance with strictly positive values.
class KnapsackInstance {
 public:
  std::size_t num_items() const noexcept { return values_q_.size(); }

  template <Scalar S>
  const S& capacity() const {
    if constexpr (is_exact_v<S>) return cap_q_;
    else return cap_d_;
  }
  template <Scalar S>
  const S& value(std::size_t j) const {
    if constexpr (is_exact_v<S>) return values_q_[j];
    else return values_d_[j];
  }
  template <Scalar S>
  const S& size(std::size_t j) const {
    if constexpr (is_exact_v<S>) return sizes_q_[j];
    else return sizes_d_[j];
  }

  const Rational& capacity_exact() const noexcept { return cap_q_; }
  const std::vector<Rational>& values() const noexcept { return values_q_; }
  const std::vector<Rational>& sizes() const noexcept { return sizes_q_; }

  friend bool operator==(const KnapsackInstance& a, const KnapsackInstance& b) {
    return a.cap_q_ == b.cap_q_ && a.values_q_ == b.values_q_ && a.sizes_q_ == b.sizes_q_;
  }

 private:
  friend KnapsackInstance validate_knapsack(const KnapsackCandidate& raw);
  KnapsackInstance() = default;

  Rational cap_q_;
  std::vector<Rational> values_q_;
  std::vector<Rational> sizes_q_;
  double cap_d_ = 0;
  std::vector<double> values_d_;
  std::vector<double> sizes_d_;
};

/// Checks every instance invariant in a fixed order (dimensions, capacities,
/// then per (bin, item) sizes and values) and reports the first violation.
inline GapInstance validate_gap(const GapCandidate& raw) {
  const std::size_t m = raw.capacities.size();
  if (m == 0) throw Error(ErrorCode::EmptyInstance, "instance has no bins");
  if (raw.values.size() != m || raw.sizes.size() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "values and sizes must have one row per bin (" + std::to_string(m) + ")");
  }
  const std::size_t n = raw.values[0].size();
  if (n == 0) throw Error(ErrorCode::EmptyInstance, "instance has no items");
  for (std::size_t i = 0; i < m; ++i) {
    if (raw.values[i].size() != n || raw.sizes[i].size() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "row " + std::to_string(i + 1) + " does not have " + std::to_string(n) + " items",
                  i);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (raw.capacities[i] <= 0) {
      throw Error(ErrorCode::NonPositiveCapacity, "C_" + std::to_string(i + 1) + " must be > 0", i);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string where = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (raw.sizes[i][j] <= 0) {
        throw Error(ErrorCode::NonPositiveSize, "s" + where + " must be > 0", i, j);
      }
      if (raw.sizes[i][j] > raw.capacities[i]) {
        throw Error(ErrorCode::SizeExceedsCapacity, "s" + where + " exceeds C_" + std::to_string(i + 1),
                    i, j);
      }
      if (raw.values[i][j] < 0) {
        throw Error(ErrorCode::NegativeValue, "v" + where + " must be >= 0", i, j);
      }
    }
  }

  GapInstance inst;
  inst.n_ = n;
  inst.m_ = m;
  inst.caps_q_ = raw.capacities;
  inst.values_q_ = Matrix<Rational>(m, n);
  inst.sizes_q_ = Matrix<Rational>(m, n);
  inst.caps_d_.resize(m);
  inst.values_d_ = Matrix<double>(m, n);
  inst.sizes_d_ = Matrix<double>(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    inst.caps_d_[i] = to_double(raw.capacities[i]);
    for (std::size_t j = 0; j < n; ++j) {
      inst.values_q_(i, j) = raw.values[i][j];
      inst.sizes_q_(i, j) = raw.sizes[i][j];
      inst.values_d_(i, j) = to_double(raw.values[i][j]);
      inst.sizes_d_(i, j) = to_double(raw.sizes[i][j]);
    }
  }
  return inst;
}

inline KnapsackInstance validate_knapsack(const KnapsackCandidate& raw) {
  const std::size_t n = raw.values.size();
  if (n == 0) throw Error(ErrorCode::EmptyInstance, "instance has no items");
  if (raw.sizes.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "values and sizes differ in length");
  }
  if (raw.capacity <= 0) throw Error(ErrorCode::NonPositiveCapacity, "C must be > 0", 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::string where = "_" + std::to_string(j + 1);
    if (raw.sizes[j] <= 0) throw Error(ErrorCode::NonPositiveSize, "s" + where + " must be > 0", 0, j);
    if (raw.sizes[j] > raw.capacity) {
      throw Error(ErrorCode::SizeExceedsCapacity, "s" + where + " exceeds C", 0, j);
    }
    if (raw.values[j] <= 0) {
      throw Error(ErrorCode::NonPositiveValue, "v" + where + " must be > 0", 0, j);
    }
  }
  KnapsackInstance inst;
  inst.cap_q_ = raw.capacity;
  inst.values_q_ = raw.values;
  inst.sizes_q_ = raw.sizes;
  inst.cap_d_ = to_double(raw.capacity);
  inst.values_d_.reserve(n);
  inst.sizes_d_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    inst.values_d_.push_back(to_double(raw.values[j]));
    inst.sizes_d_.push_back(to_double(raw.sizes[j]));
  }
  return inst;
}

inline GapCandidate to_candidate(const GapInstance& inst) {
  GapCandidate c;
  c.capacities = inst.capacities();
  c.values.assign(inst.num_bins(), {});
  c.sizes.assign(inst.num_bins(), {});
  for (std::size_t i = 0; i < inst.num_bins(); ++i) {
    for (std::size_t j = 0; j < inst.num_items(); ++j) {
      c.values[i].push_back(inst.values()(i, j));
      c.sizes[i].push_back(inst.sizes()(i, j));
    }
  }
  return c;
}

/// The single-bin GAP view of a knapsack instance.
inline GapInstance to_gap(const KnapsackInstance& k) {
  GapCandidate c;
  c.capacities = {k.capacity_exact()};
  c.values = {k.values()};
  c.sizes = {k.sizes()};
  return validate_gap(c);
}

/// Arrival order: position l (0-based) holds the item revealed in round l+1.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
    std::vector<bool> seen(order_.size(), false);
    for (std::size_t item : order_) {
      if (item >= order_.size() || seen[item]) {
        throw Error(ErrorCode::BadArguments, "arrival order is not a bijection on the items");
      }
      seen[item] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    return Permutation(std::move(order));
  }

  static Permutation random(std::size_t n, Rng& rng) {
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    shuffle_portable(order, rng);
    Permutation p;
    p.order_ = std::move(order);
    return p;
  }

  std::size_t size() const noexcept { return order_.size(); }
  std::size_t operator[](std::size_t position) const { return order_[position]; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::string digest() const { return digest_hex(order_); }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.order_ == b.order_; }

 private:
  std::vector<std::size_t> order_;
};

/// Binary bin-by-item decision matrix. Column sums are NOT enforced here so
/// that feasibility checks can report violations.
using Assignment = Matrix<int>;

template <Scalar S>
using FractionalAssignment = Matrix<S>;

inline Assignment empty_assignment(const GapInstance& inst) {
  return Assignment(inst.num_bins(), inst.num_items(), 0);
}

namespace detail {

template <class T>
void require_shape(const Matrix<T>& x, const GapInstance& inst) {
  if (x.rows() != inst.num_bins() || x.cols() != inst.num_items()) {
    throw Error(ErrorCode::DimensionMismatch,
                "assignment is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                    ", instance is " + std::to_string(inst.num_bins()) + "x" +
                    std::to_string(inst.num_items()));
  }
}

template <Scalar S, class T>
S as_scalar(const T& v) {
  if constexpr (std::is_same_v<T, S>) return v;
  else if constexpr (std::is_integral_v<T>) return S(v);
  else return from_rational<S>(Rational(v));
}

}  // namespace detail

/// Total value sum_i sum_j v_ij x_ij.
template <Scalar S, class T>
S value_of(const Matrix<T>& x, const GapInstance& inst) {
  detail::require_shape(x, inst);
  S total = 0;
  for (std::size_t i = 0; i < inst.num_bins(); ++i) {
    for (std::size_t j = 0; j < inst.num_items(); ++j) {
      if (x(i, j) != T(0)) total += inst.value<S>(i, j) * detail::as_scalar<S>(x(i, j));
    }
  }
  return total;
}

/// Load sum_j s_ij x_ij of bin i.
template <Scalar S, class T>
S bin_load(const Matrix<T>& x, const GapInstance& inst, std::size_t bin) {
  detail::require_shape(x, inst);
  if (bin >= inst.num_bins()) {
    throw Error(ErrorCode::IndexOutOfRange, "bin index " + std::to_string(bin + 1) + " out of range",
                bin);
  }
  S load = 0;
  for (std::size_t j = 0; j < inst.num_items(); ++j) {
    if (x(bin, j) != T(0)) load += inst.size<S>(bin, j) * detail::as_scalar<S>(x(bin, j));
  }
  return load;
}

template <Scalar S>
struct BinFeasibility {
  bool satisfies_c1 = true;
  S slack = 0;  // C_i - load_i; negative when violated
  /// Items (in scan order) whose inclusion left the running load above C_i.
  std::vector<std::size_t> overflow_items;
};

template <Scalar S>
struct FeasibilityReport {
  std::vector<BinFeasibility<S>> bins;
  std::vector<bool> satisfies_c2;  // per item: column sum <= 1
  bool entries_in_domain = true;   // binary (C3) or within [0, 1] (C4)

  bool c1() const {
    return std::all_of(bins.begin(), bins.end(), [](const auto& b) { return b.satisfies_c1; });
  }
  bool c2() const { return std::all_of(satisfies_c2.begin(), satisfies_c2.end(), [](bool b) { return b; }); }
  bool feasible() const { return c1() && c2() && entries_in_domain; }
};

/// Evaluates C1, C2 and the entry domain (C3 for integer matrices, C4 with
/// upper bound 1 otherwise). `scan_order` fixes the order used to attribute
/// overflow; it defaults to increasing item index.
template <Scalar S = Rational, class T>
FeasibilityReport<S> check_feasibility(const Matrix<T>& x, const GapInstance& inst,
                                       const std::vector<std::size_t>* scan_order = nullptr) {
  detail::require_shape(x, inst);
  const std::size_t m = inst.num_bins();
  const std::size_t n = inst.num_items();
  std::vector<std::size_t> order;
  if (scan_order) {
    order = *scan_order;
  } else {
    order.resize(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
  }

  FeasibilityReport<S> report;
  report.bins.resize(m);
  report.satisfies_c2.assign(n, true);
  for (std::size_t i = 0; i < m; ++i) {
    S load = 0;
    const S& cap = inst.capacity<S>(i);
    for (std::size_t j : order) {
      if (x(i, j) == T(0)) continue;
      load += inst.size<S>(i, j) * detail::as_scalar<S>(x(i, j));
      if (!leq_abs(load, cap)) report.bins[i].overflow_items.push_back(j);
    }
    report.bins[i].slack = cap - load;
    report.bins[i].satisfies_c1 = leq_abs(load, cap);
  }
  for (std::size_t j = 0; j < n; ++j) {
    S col = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const S e = detail::as_scalar<S>(x(i, j));
      col += e;
      if constexpr (std::is_integral_v<T>) {
        if (x(i, j) != 0 && x(i, j) != 1) report.entries_in_domain = false;
      } else {
        if (is_negative_beyond(e, kAbsTol) || !leq_abs(e, S(1))) report.entries_in_domain = false;
      }
    }
    report.satisfies_c2[j] = leq_abs(col, S(1));
  }
  return report;
}

}  // namespace rogap
