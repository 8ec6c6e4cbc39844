#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loghm/error.hpp"

namespace loghm {

using cplx = std::complex<double>;

/// Value and first two derivatives of an analytic function at a point.
struct Jet3 {
  cplx value{};
  cplx d1{};
  cplx d2{};
};

inline constexpr std::size_t default_order = 32;

/**
 * Truncated Taylor series c_0 + c_1 z + ... + c_N z^N with complex
 * coefficients.
 *
 * The truncation order N is part of the value: binary operations require
 * equal orders and results keep that order. Coefficients are always finite.
 */
class Series {
 public:
  /// The zero series of order N.
  explicit Series(std::size_t order = default_order) : c_(order + 1) {}

  explicit Series(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw Error(Errc::contract_violation, "series needs at least one coefficient");
    check_finite();
  }

  static Series constant(std::size_t order, cplx c) {
    Series s(order);
    s.c_[0] = c;
    return s;
  }
  static Series one(std::size_t order) { return constant(order, 1.0); }
  static Series monomial(std::size_t order, std::size_t k, cplx c = 1.0) {
    Series s(order);
    if (k <= order) s.c_[k] = c;
    return s;
  }
  static Series identity(std::size_t order) { return monomial(order, 1); }

  std::size_t order() const noexcept { return c_.size() - 1; }
  std::span<const cplx> coeffs() const noexcept { return c_; }
  cplx operator[](std::size_t k) const { return c_.at(k); }

  /// Drop or zero-pad coefficients to reach order M.
  Series resized(std::size_t order) const {
    std::vector<cplx> c(c_);
    c.resize(order + 1);
    return Series(std::move(c));
  }

  friend bool operator==(const Series&, const Series&) = default;

 private:
  void check_finite() const {
    for (const auto& v : c_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(Errc::contract_violation, "non-finite series coefficient");
    }
  }

  std::vector<cplx> c_;
};

namespace detail {
inline void require_same_order(const Series& a, const Series& b, const char* op) {
  if (a.order() != b.order())
    throw Error(Errc::contract_violation,
                std::string(op) + ": order mismatch (" + std::to_string(a.order()) + " vs " +
                    std::to_string(b.order()) + ")");
}
}  // namespace detail

inline Series add(const Series& a, const Series& b) {
  detail::require_same_order(a, b, "add");
  std::vector<cplx> c(a.order() + 1);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
  return Series(std::move(c));
}

inline Series scale(const Series& a, cplx s) {
  std::vector<cplx> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& v : c) v *= s;
  return Series(std::move(c));
}

inline Series sub(const Series& a, const Series& b) { return add(a, scale(b, -1.0)); }

/// Cauchy product truncated at the common order.
inline Series mul(const Series& a, const Series& b) {
  detail::require_same_order(a, b, "mul");
  const std::size_t n = a.order();
  std::vector<cplx> c(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) acc += a[j] * b[k - j];
    c[k] = acc;
  }
  return Series(std::move(c));
}

inline Series div(const Series& a, const Series& b) {
  detail::require_same_order(a, b, "div");
  if (b[0] == cplx{0.0}) throw Error(Errc::noninvertible, "divisor has zero constant term");
  const std::size_t n = a.order();
  std::vector<cplx> q(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    cplx acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
    q[k] = acc / b[0];
  }
  return Series(std::move(q));
}

inline Series operator+(const Series& a, const Series& b) { return add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return sub(a, b); }
inline Series operator*(const Series& a, const Series& b) { return mul(a, b); }
inline Series operator/(const Series& a, const Series& b) { return div(a, b); }
inline Series operator*(cplx s, const Series& a) { return scale(a, s); }
inline Series operator-(const Series& a) { return scale(a, -1.0); }

/// Formal derivative; the order is kept by appending a zero coefficient.
inline Series derivative(const Series& a) {
  const std::size_t n = a.order();
  std::vector<cplx> c(n + 1);
  for (std::size_t k = 1; k <= n; ++k) c[k - 1] = static_cast<double>(k) * a[k];
  return Series(std::move(c));
}

/// Term-wise antiderivative with zero constant term, truncated at N.
inline Series integrate(const Series& a) {
  const std::size_t n = a.order();
  std::vector<cplx> c(n + 1);
  for (std::size_t k = 0; k < n; ++k) c[k + 1] = a[k] / static_cast<double>(k + 1);
  return Series(std::move(c));
}

/// exp of a series with zero constant term, via n E_n = sum_k k a_k E_{n-k}.
inline Series exp_series(const Series& a) {
  if (a[0] != cplx{0.0}) throw Error(Errc::normalization, "exp_series needs zero constant term");
  const std::size_t n = a.order();
  std::vector<cplx> e(n + 1);
  e[0] = 1.0;
  for (std::size_t m = 1; m <= n; ++m) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) acc += static_cast<double>(k) * a[k] * e[m - k];
    e[m] = acc / static_cast<double>(m);
  }
  return Series(std::move(e));
}

/// Logarithm of a series with unit constant term: integrate(a'/a).
inline Series log_series(const Series& a) {
  if (std::abs(a[0] - 1.0) > 1e-12)
    throw Error(Errc::normalization, "log_series needs constant term 1");
  return integrate(div(derivative(a), a));
}

/// outer(inner(z)) truncated at the common order; inner must vanish at 0.
inline Series compose(const Series& outer, const Series& inner) {
  detail::require_same_order(outer, inner, "compose");
  if (inner[0] != cplx{0.0})
    throw Error(Errc::composition_domain, "inner series must have zero constant term");
  const std::size_t n = outer.order();
  Series acc = Series::constant(n, outer[n]);
  for (std::size_t k = n; k-- > 0;) acc = add(mul(acc, inner), Series::constant(n, outer[k]));
  return acc;
}

inline cplx eval(const Series& a, cplx z) {
  cplx acc = 0.0;
  for (std::size_t k = a.order() + 1; k-- > 0;) acc = acc * z + a[k];
  return acc;
}

/// Horner evaluation of value, first and second derivative together.
inline Jet3 eval_jet(const Series& a, cplx z) {
  Jet3 j;
  for (std::size_t k = a.order() + 1; k-- > 0;) {
    j.d2 = j.d2 * z + 2.0 * j.d1;
    j.d1 = j.d1 * z + j.value;
    j.value = j.value * z + a[k];
  }
  return j;
}

/**
 * Heuristic bound on the discarded tail sum_{k>N} c_k z^k.
 *
 * The coefficient envelope over the last 8 terms is extrapolated
 * geometrically. Returns +inf when the extrapolated ratio times |z| reaches 1.
 */
inline double tail_estimate(const Series& a, cplx z) {
  const std::size_t n = a.order();
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  if (n < 8) return std::numeric_limits<double>::infinity();
  // envelope over pairs so that parity-sparse series (only even terms) work
  auto envelope = [&](std::size_t k) { return std::max(std::abs(a[k]), std::abs(a[k - 1])); };
  const double last = envelope(n);
  const double first = envelope(n - 6);
  if (last == 0.0 && first == 0.0) return 0.0;
  const double tiny = std::numeric_limits<double>::min();
  const double ratio = std::pow(std::max(last, tiny) / std::max(first, tiny), 1.0 / 6.0);
  const double q = ratio * r;
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return std::max(last, tiny) * std::pow(r, static_cast<double>(n + 1)) * std::max(ratio, 1.0) /
         (1.0 - q);
}

}  // namespace loghm
