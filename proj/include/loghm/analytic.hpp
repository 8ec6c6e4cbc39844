#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "loghm/error.hpp"
#include "loghm/quadrature.hpp"
#include "loghm/series.hpp"

namespace loghm {

namespace detail {
struct FnKind;
}

/**
 * An evaluable analytic function on the unit disk.
 *
 * Wraps one of several representations (closed forms with hand-written
 * derivatives, a truncated series, products and quotients of other
 * functions, or the g-factor produced by the shear construction). Values
 * are immutable and cheap to copy.
 */
class AnalyticFn {
 public:
  template <class Kind>
    requires(!std::is_same_v<std::remove_cvref_t<Kind>, AnalyticFn>)
  explicit AnalyticFn(Kind&& kind, std::string label = {});

  Jet3 jet(cplx z) const;
  cplx value(cplx z) const { return jet(z).value; }
  cplx operator()(cplx z) const { return value(z); }

  /// f'(z) / f(z); avoids the exponential for closed forms.
  cplx log_derivative(cplx z) const;

  /// Exact Taylor coefficients up to order N.
  Series taylor(std::size_t order) const;

  /// Points on (or near) the unit circle where the closed form is singular.
  std::vector<cplx> singularities() const;

  /// Estimated truncation error of the value at z; zero for closed forms.
  double tail_estimate(cplx z) const;

  /// The function divided by z; only for representations that carry an
  /// explicit factor of z.
  AnalyticFn div_z() const;

  bool series_backed() const;

  const std::string& label() const noexcept { return label_; }
  AnalyticFn with_label(std::string label) const {
    AnalyticFn copy = *this;
    copy.label_ = std::move(label);
    return copy;
  }

  const detail::FnKind& kind() const noexcept { return *kind_; }

 private:
  std::shared_ptr<const detail::FnKind> kind_;
  std::string label_;
};

/// (1 - node z)^exponent, principal branch.
struct PowerFactor {
  cplx node;
  double exponent;
};

/// weight * (1 / (1 - node z) - 1), appearing inside an exponential.
struct ExpPole {
  cplx node;
  cplx weight;
};

/**
 * scale * z^zpow * prod (1 - x_k z)^{e_k}
 *         * exp( sum beta_j (1/(1 - y_j z) - 1) + sum_k p_k z^k ).
 *
 * Every named function in the catalog and the discretized Herglotz
 * starlike functions have this shape.
 */
struct FactoredExp {
  cplx scale = 1.0;
  unsigned zpow = 0;
  std::vector<PowerFactor> powers;
  std::vector<ExpPole> poles;
  std::vector<cplx> exp_poly;  // p_1, p_2, ...
};

/// eta * z^zpow * prod (z - a_j) / (1 - conj(a_j) z).
struct BlaschkeProduct {
  cplx eta = 1.0;
  unsigned zpow = 1;
  std::vector<cplx> zeros;
};

struct SeriesFn {
  Series series;
};

/// exp(L(z)) for a truncated series L with L(0) = 0; truncating in the
/// exponent keeps exp-type boundary growth out of the stored coefficients.
struct ExpSeries {
  Series log;
};

/// scale * z^zpow * prod A_i^{p_i} with integer exponents.
struct ProductFn {
  cplx scale = 1.0;
  unsigned zpow = 0;
  std::vector<std::pair<AnalyticFn, int>> factors;
};

inline std::uint64_t next_instance_id() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

/**
 * g(z) = exp(int_0^z mu/(1-mu) * phi'/phi ds), evaluated by quadrature.
 *
 * `phi_over_z` and `mu_over_z` are the pole-free forms used for the
 * derivatives; when absent the raw quotient is used away from 0.
 */
struct ShearedG {
  AnalyticFn phi;
  AnalyticFn mu;
  std::optional<AnalyticFn> phi_over_z;
  std::optional<AnalyticFn> mu_over_z;
  std::uint64_t id = next_instance_id();  // keys the per-thread memo
};

namespace detail {

struct FnKind {
  std::variant<FactoredExp, BlaschkeProduct, SeriesFn, ExpSeries, ProductFn, ShearedG> v;
};

inline void check_domain(const std::vector<cplx>& singular, cplx z) {
  for (const auto& s : singular) {
    if (std::abs(z - s) < 1e-12)
      throw Error(Errc::domain, "evaluation at declared singular point");
  }
}

/// Jet of z^m.
inline Jet3 monomial_jet(unsigned m, cplx z) {
  if (m == 0) return {1.0, 0.0, 0.0};
  if (m == 1) return {z, 1.0, 0.0};
  const double md = m;
  const cplx zm2 = std::pow(z, static_cast<int>(m - 2));
  return {zm2 * z * z, md * zm2 * z, md * (md - 1.0) * zm2};
}

inline Jet3 jet_mul(const Jet3& a, const Jet3& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}

inline Jet3 jet_recip(const Jet3& a) {
  if (a.value == cplx{0.0}) throw Error(Errc::domain, "reciprocal of vanishing factor");
  const cplx inv = 1.0 / a.value;
  return {inv, -a.d1 * inv * inv, (2.0 * a.d1 * a.d1 - a.value * a.d2) * inv * inv * inv};
}

inline Jet3 jet_scale(const Jet3& a, cplx s) { return {a.value * s, a.d1 * s, a.d2 * s}; }

inline Series shift_up(const Series& s, unsigned m, std::size_t order) {
  std::vector<cplx> c(order + 1);
  for (std::size_t k = m; k <= order; ++k) c[k] = s[k - m];
  return Series(std::move(c));
}

inline Jet3 factored_jet(const FactoredExp& f, cplx z) {
  cplx log_e = std::log(f.scale);
  cplx l1 = 0.0, l2 = 0.0;
  for (const auto& p : f.powers) {
    const cplx w = 1.0 - p.node * z;
    if (p.exponent != 0.0 && std::abs(w) < 1e-12 * std::abs(p.node))
      throw Error(Errc::domain, "evaluation at declared singular point");
    log_e += p.exponent * std::log(w);
    const cplx r = p.node / w;
    l1 -= p.exponent * r;
    l2 -= p.exponent * r * r;
  }
  for (const auto& p : f.poles) {
    const cplx w = 1.0 - p.node * z;
    if (p.weight != cplx{0.0} && std::abs(w) < 1e-12 * std::abs(p.node))
      throw Error(Errc::domain, "evaluation at declared singular point");
    const cplx r = 1.0 / w;
    log_e += p.weight * (r - 1.0);
    l1 += p.weight * p.node * r * r;
    l2 += 2.0 * p.weight * p.node * p.node * r * r * r;
  }
  if (!f.exp_poly.empty()) {
    std::vector<cplx> c(f.exp_poly.size() + 1);
    for (std::size_t k = 0; k < f.exp_poly.size(); ++k) c[k + 1] = f.exp_poly[k];
    const Jet3 pj = eval_jet(Series(std::move(c)), z);
    log_e += pj.value;
    l1 += pj.d1;
    l2 += pj.d2;
  }
  const cplx e = std::exp(log_e);
  const Jet3 ej{e, e * l1, e * (l1 * l1 + l2)};
  return jet_mul(monomial_jet(f.zpow, z), ej);
}

inline cplx factored_log_derivative(const FactoredExp& f, cplx z) {
  cplx l1 = f.zpow ? static_cast<double>(f.zpow) / z : cplx{0.0};
  for (const auto& p : f.powers) {
    const cplx w = 1.0 - p.node * z;
    if (p.exponent != 0.0 && std::abs(w) < 1e-12 * std::abs(p.node))
      throw Error(Errc::domain, "evaluation at declared singular point");
    l1 -= p.exponent * p.node / w;
  }
  for (const auto& p : f.poles) {
    const cplx w = 1.0 - p.node * z;
    if (p.weight != cplx{0.0} && std::abs(w) < 1e-12 * std::abs(p.node))
      throw Error(Errc::domain, "evaluation at declared singular point");
    l1 += p.weight * p.node / (w * w);
  }
  cplx dp = 0.0;
  for (std::size_t k = f.exp_poly.size(); k > 0; --k) dp = dp * z + static_cast<double>(k) * f.exp_poly[k - 1];
  return l1 + dp;
}

inline Series factored_taylor(const FactoredExp& f, std::size_t order) {
  std::vector<cplx> log_c(order + 1);
  for (const auto& p : f.powers) {
    cplx xn = 1.0;
    for (std::size_t n = 1; n <= order; ++n) {
      xn *= p.node;
      log_c[n] -= p.exponent * xn / static_cast<double>(n);
    }
  }
  for (const auto& p : f.poles) {
    cplx yn = 1.0;
    for (std::size_t n = 1; n <= order; ++n) {
      yn *= p.node;
      log_c[n] += p.weight * yn;
    }
  }
  for (std::size_t k = 0; k < f.exp_poly.size() && k + 1 <= order; ++k) log_c[k + 1] += f.exp_poly[k];
  const Series e = scale(exp_series(Series(std::move(log_c))), f.scale);
  return shift_up(e, f.zpow, order);
}

inline Jet3 blaschke_jet(const BlaschkeProduct& b, cplx z) {
  Jet3 acc = jet_scale(monomial_jet(b.zpow, z), b.eta);
  for (const auto& a : b.zeros) {
    const cplx ac = std::conj(a);
    const cplx den = 1.0 - ac * z;
    const double s = 1.0 - std::norm(a);
    const Jet3 factor{(z - a) / den, s / (den * den), 2.0 * ac * s / (den * den * den)};
    acc = jet_mul(acc, factor);
  }
  return acc;
}

inline Series blaschke_taylor(const BlaschkeProduct& b, std::size_t order) {
  Series acc = Series::monomial(order, b.zpow, b.eta);
  for (const auto& a : b.zeros) {
    const cplx ac = std::conj(a);
    std::vector<cplx> c(order + 1);
    c[0] = -a;
    cplx pw = 1.0;
    for (std::size_t n = 1; n <= order; ++n) {
      c[n] = pw * (1.0 - std::norm(a));
      pw *= ac;
    }
    acc = mul(acc, Series(std::move(c)));
  }
  return acc;
}

/// Raw shear integrand mu/(1-mu) * phi'/phi.
inline cplx shear_integrand(const AnalyticFn& phi, const AnalyticFn& mu, cplx s) {
  const cplx m = mu.value(s);
  return m / (1.0 - m) * phi.log_derivative(s);
}

inline constexpr double shear_start_fraction = 1e-12;

/**
 * log g(z) by quadrature along [0, z]. The integrand has a removable
 * singularity at 0 with limit mu'(0); the first 1e-12 of the segment is
 * replaced by that limit times its length.
 */
inline cplx shear_log_g(const AnalyticFn& phi, const AnalyticFn& mu, cplx z,
                        const quad::LineIntegralOptions& opt = {}) {
  if (z == cplx{0.0}) return 0.0;
  const cplx start = shear_start_fraction * z;
  const cplx mu_prime0 = mu.jet(0.0).d1;
  const double r = std::abs(z);
  const double depth = r < 0.5 ? 1.0 : std::log2(1.0 / std::max(1.0 - r, 1e-12)) + 1.0;
  const cplx body = quad::line_integral(
      [&](cplx s) { return shear_integrand(phi, mu, s); }, start, z, depth, opt);
  return body + mu_prime0 * start;
}

/// q = g'/g and its derivative for the sheared factor.
inline std::pair<cplx, cplx> shear_log_derivative(const ShearedG& s, cplx z) {
  const Jet3 m = s.mu.jet(z);
  const cplx one_minus = 1.0 - m.value;
  if (s.phi_over_z && s.mu_over_z) {
    const Jet3 u = s.phi_over_z->jet(z);
    const Jet3 nu = s.mu_over_z->jet(z);
    const cplx w = u.d1 / u.value;
    const cplx dw = u.d2 / u.value - w * w;
    const cplx a = nu.value + m.value * w;
    const cplx da = nu.d1 + m.d1 * w + m.value * dw;
    return {a / one_minus, da / one_minus + a * m.d1 / (one_minus * one_minus)};
  }
  if (z == cplx{0.0}) throw Error(Errc::domain, "sheared factor needs pole-free forms at 0");
  const Jet3 p = s.phi.jet(z);
  const cplx pq = p.d1 / p.value;
  const cplx dpq = p.d2 / p.value - pq * pq;
  const cplx mq = m.value / one_minus;
  const cplx dmq = m.d1 / (one_minus * one_minus);
  return {mq * pq, dmq * pq + mq * dpq};
}

/// Series of g for the shear construction: exp(integrate(mu/(1-mu) phi'/phi)).
inline Series shear_g_series(const AnalyticFn& phi, const AnalyticFn& mu, std::size_t order);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

template <class Kind>
  requires(!std::is_same_v<std::remove_cvref_t<Kind>, AnalyticFn>)
AnalyticFn::AnalyticFn(Kind&& kind, std::string label)
    : kind_(std::make_shared<const detail::FnKind>(detail::FnKind{std::forward<Kind>(kind)})),
      label_(std::move(label)) {}

inline std::vector<cplx> AnalyticFn::singularities() const {
  using namespace detail;
  return std::visit(
      overloaded{
          [](const FactoredExp& f) {
            std::vector<cplx> out;
            for (const auto& p : f.powers)
              if (p.exponent != 0.0) out.push_back(1.0 / p.node);
            for (const auto& p : f.poles)
              if (p.weight != cplx{0.0}) out.push_back(1.0 / p.node);
            return out;
          },
          [](const BlaschkeProduct&) { return std::vector<cplx>{}; },
          [](const SeriesFn&) { return std::vector<cplx>{}; },
          [](const ExpSeries&) { return std::vector<cplx>{}; },
          [](const ProductFn& p) {
            std::vector<cplx> out;
            for (const auto& [fn, e] : p.factors) {
              auto s = fn.singularities();
              out.insert(out.end(), s.begin(), s.end());
            }
            return out;
          },
          [](const ShearedG& s) {
            auto out = s.phi.singularities();
            auto m = s.mu.singularities();
            out.insert(out.end(), m.begin(), m.end());
            return out;
          },
      },
      kind_->v);
}

inline cplx AnalyticFn::log_derivative(cplx z) const {
  if (const auto* f = std::get_if<FactoredExp>(&kind_->v)) return detail::factored_log_derivative(*f, z);
  if (const auto* e = std::get_if<ExpSeries>(&kind_->v)) return eval_jet(e->log, z).d1;
  const Jet3 j = jet(z);
  return j.d1 / j.value;
}

inline Jet3 AnalyticFn::jet(cplx z) const {
  using namespace detail;
  return std::visit(
      overloaded{
          [&](const FactoredExp& f) { return factored_jet(f, z); },
          [&](const BlaschkeProduct& b) { return blaschke_jet(b, z); },
          [&](const SeriesFn& s) { return eval_jet(s.series, z); },
          [&](const ExpSeries& s) {
            const Jet3 l = eval_jet(s.log, z);
            const cplx e = std::exp(l.value);
            return Jet3{e, e * l.d1, e * (l.d1 * l.d1 + l.d2)};
          },
          [&](const ProductFn& p) {
            Jet3 acc = jet_scale(monomial_jet(p.zpow, z), p.scale);
            for (const auto& [fn, e] : p.factors) {
              const Jet3 fj = fn.jet(z);
              const Jet3 base = e >= 0 ? fj : jet_recip(fj);
              for (int k = 0; k < std::abs(e); ++k) acc = jet_mul(acc, base);
            }
            return acc;
          },
          [&](const ShearedG& s) {
            // h = (phi/z) g and g are usually evaluated at the same point in turn.
            struct Memo {
              std::uint64_t id = 0;
              cplx z;
              Jet3 jet;
            };
            thread_local Memo memo;
            if (memo.id == s.id && memo.z == z) return memo.jet;
            check_domain(singularities(), z);
            const cplx g = std::exp(shear_log_g(s.phi, s.mu, z));
            const auto [q, dq] = shear_log_derivative(s, z);
            memo = {s.id, z, Jet3{g, g * q, g * (q * q + dq)}};
            return memo.jet;
          },
      },
      kind_->v);
}

inline Series AnalyticFn::taylor(std::size_t order) const {
  using namespace detail;
  return std::visit(
      overloaded{
          [&](const FactoredExp& f) { return factored_taylor(f, order); },
          [&](const BlaschkeProduct& b) { return blaschke_taylor(b, order); },
          [&](const SeriesFn& s) {
            if (s.series.order() < order)
              throw Error(Errc::unsupported_representation,
                          "series-backed function has order " + std::to_string(s.series.order()) +
                              " < requested " + std::to_string(order));
            return s.series.resized(order);
          },
          [&](const ExpSeries& s) {
            if (s.log.order() < order)
              throw Error(Errc::unsupported_representation,
                          "series-backed function has order " + std::to_string(s.log.order()) +
                              " < requested " + std::to_string(order));
            return exp_series(s.log.resized(order));
          },
          [&](const ProductFn& p) {
            Series acc = Series::monomial(order, p.zpow, p.scale);
            for (const auto& [fn, e] : p.factors) {
              const Series fs = fn.taylor(order);
              for (int k = 0; k < std::abs(e); ++k) acc = e >= 0 ? mul(acc, fs) : div(acc, fs);
            }
            return acc;
          },
          [&](const ShearedG& s) { return shear_g_series(s.phi, s.mu, order); },
      },
      kind_->v);
}

inline double AnalyticFn::tail_estimate(cplx z) const {
  using namespace detail;
  return std::visit(
      overloaded{
          [&](const SeriesFn& s) { return loghm::tail_estimate(s.series, z); },
          [&](const ExpSeries& s) { return loghm::tail_estimate(s.log, z) * std::abs(value(z)); },
          [&](const ProductFn& p) {
            double rel = 0.0;
            for (const auto& [fn, e] : p.factors) {
              const double t = fn.tail_estimate(z);
              if (t == 0.0) continue;
              rel += std::abs(e) * t / std::abs(fn.value(z));
            }
            return rel == 0.0 ? 0.0 : rel * std::abs(value(z));
          },
          [](const auto&) { return 0.0; },
      },
      kind_->v);
}

inline AnalyticFn AnalyticFn::div_z() const {
  using namespace detail;
  auto fail = [&]() -> AnalyticFn {
    throw Error(Errc::unsupported_representation, "no explicit factor of z to divide out");
  };
  return std::visit(
      overloaded{
          [&](const FactoredExp& f) {
            if (f.zpow == 0) return fail();
            FactoredExp out = f;
            --out.zpow;
            return AnalyticFn(std::move(out));
          },
          [&](const BlaschkeProduct& b) {
            if (b.zpow == 0) return fail();
            BlaschkeProduct out = b;
            --out.zpow;
            return AnalyticFn(std::move(out));
          },
          [&](const SeriesFn& s) {
            if (std::abs(s.series[0]) > 1e-14 || s.series.order() == 0) return fail();
            std::vector<cplx> c(s.series.coeffs().begin() + 1, s.series.coeffs().end());
            return AnalyticFn(SeriesFn{Series(std::move(c))});
          },
          [&](const ExpSeries&) { return fail(); },
          [&](const ProductFn& p) {
            if (p.zpow == 0) return fail();
            ProductFn out = p;
            --out.zpow;
            return AnalyticFn(std::move(out));
          },
          [&](const ShearedG&) { return fail(); },
      },
      kind_->v);
}

inline bool AnalyticFn::series_backed() const {
  return std::visit(detail::overloaded{
                        [](const SeriesFn&) { return true; },
                        [](const ExpSeries&) { return true; },
                        [](const ProductFn& p) {
                          for (const auto& [fn, e] : p.factors)
                            if (fn.series_backed()) return true;
                          return false;
                        },
                        [](const auto&) { return false; },
                    },
                    kind_->v);
}

namespace detail {

inline std::optional<AnalyticFn> try_div_z(const AnalyticFn& f) {
  try {
    return f.div_z();
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// log g as a series of order N.
inline Series shear_log_g_series(const AnalyticFn& phi, const AnalyticFn& mu, std::size_t order) {
  // phi = z u and mu = z nu, so mu/(1-mu) * phi'/phi = (nu + mu u'/u) / (1 - mu)
  // is a genuine power series.
  const Series phi_s = phi.taylor(order + 1);
  const Series mu_s = mu.taylor(order + 1);
  std::vector<cplx> uc(phi_s.coeffs().begin() + 1, phi_s.coeffs().end());
  std::vector<cplx> nc(mu_s.coeffs().begin() + 1, mu_s.coeffs().end());
  const Series u(std::move(uc));
  const Series nu(std::move(nc));
  const Series m = mu_s.resized(order);
  const Series one = Series::one(order);
  const Series q = div(add(nu, mul(m, div(derivative(u), u))), sub(one, m));
  return integrate(q);
}

inline Series shear_g_series(const AnalyticFn& phi, const AnalyticFn& mu, std::size_t order) {
  return exp_series(shear_log_g_series(phi, mu, order));
}

}  // namespace detail

/// Factory for the g-factor of the shear construction.
inline AnalyticFn make_sheared_g(const AnalyticFn& phi, const AnalyticFn& mu) {
  return AnalyticFn(ShearedG{phi, mu, detail::try_div_z(phi), detail::try_div_z(mu)});
}

}  // namespace loghm
