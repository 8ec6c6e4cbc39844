#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "loghm/analytic.hpp"
#include "loghm/error.hpp"
#include "loghm/series.hpp"

namespace loghm {

/// Value and the five Wirtinger derivatives of a map at one point.
struct WirtingerJet {
  cplx f{};
  cplx f_z{};
  cplx f_zb{};
  cplx f_zz{};
  cplx f_zzb{};
  cplx f_zbzb{};
};

/// f(z) = z h(z) conj(g(z)) with h(0) = g(0) = 1.
class LogHarmonicMap {
 public:
  LogHarmonicMap(AnalyticFn h, AnalyticFn g, std::string label = {})
      : h_(std::move(h)), g_(std::move(g)), label_(std::move(label)) {
    if (std::abs(h_.value(0.0) - 1.0) > 1e-12 || std::abs(g_.value(0.0) - 1.0) > 1e-12)
      throw Error(Errc::normalization, "log-harmonic map needs h(0) = g(0) = 1");
  }

  const AnalyticFn& h() const noexcept { return h_; }
  const AnalyticFn& g() const noexcept { return g_; }
  const std::string& label() const noexcept { return label_; }

  cplx value(cplx z) const { return z * h_.value(z) * std::conj(g_.value(z)); }

  std::vector<cplx> singularities() const {
    auto out = h_.singularities();
    auto s = g_.singularities();
    out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  double tail_estimate(cplx z) const {
    const double th = h_.tail_estimate(z);
    const double tg = g_.tail_estimate(z);
    if (th == 0.0 && tg == 0.0) return 0.0;
    return std::abs(z) * (th * std::abs(g_.value(z)) + tg * std::abs(h_.value(z)) + th * tg);
  }

 private:
  AnalyticFn h_;
  AnalyticFn g_;
  std::string label_;
};

struct PolyTerm {
  unsigned j;  // power of z
  unsigned k;  // power of conj(z)
  cplx c;
};

/// Finite polynomial sum c_jk z^j conj(z)^k.
class PolyZZbarMap {
 public:
  explicit PolyZZbarMap(std::vector<PolyTerm> terms, std::string label = {})
      : terms_(std::move(terms)), label_(std::move(label)) {}

  const std::vector<PolyTerm>& terms() const noexcept { return terms_; }
  const std::string& label() const noexcept { return label_; }

  /// Product with (z conj z)^m.
  PolyZZbarMap times_modulus_power(unsigned m) const {
    std::vector<PolyTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.j + m, t.k + m, t.c});
    return PolyZZbarMap(std::move(out), label_);
  }

  cplx value(cplx z) const {
    cplx acc = 0.0;
    for (const auto& t : terms_) acc += t.c * ipow(z, t.j) * ipow(std::conj(z), t.k);
    return acc;
  }

  static cplx ipow(cplx z, unsigned n) {
    cplx r = 1.0;
    for (unsigned i = 0; i < n; ++i) r *= z;
    return r;
  }

 private:
  std::vector<PolyTerm> terms_;
  std::string label_;
};

/// Any map the analysis code can take a jet of.
using PlaneMap = std::variant<LogHarmonicMap, PolyZZbarMap, AnalyticFn>;

/// Jet of z h conj(g) from the analytic jets of h and g.
inline WirtingerJet jet_zhg(const LogHarmonicMap& m, cplx z) {
  const Jet3 h = m.h().jet(z);
  const Jet3 g = m.g().jet(z);
  if (h.value == cplx{0.0} || g.value == cplx{0.0})
    throw Error(Errc::domain, "h or g vanishes at evaluation point");
  const cplx gb = std::conj(g.value), gb1 = std::conj(g.d1), gb2 = std::conj(g.d2);
  const cplx zh1 = h.value + z * h.d1;  // (z h)'
  return {
      z * h.value * gb,
      zh1 * gb,
      z * h.value * gb1,
      (2.0 * h.d1 + z * h.d2) * gb,
      zh1 * gb1,
      z * h.value * gb2,
  };
}

inline WirtingerJet jet_poly(const PolyZZbarMap& m, cplx z) {
  using P = PolyZZbarMap;
  const cplx zb = std::conj(z);
  WirtingerJet w;
  for (const auto& t : m.terms()) {
    const double j = t.j, k = t.k;
    const cplx zj = P::ipow(z, t.j), zk = P::ipow(zb, t.k);
    const cplx zj1 = t.j >= 1 ? P::ipow(z, t.j - 1) : 0.0;
    const cplx zk1 = t.k >= 1 ? P::ipow(zb, t.k - 1) : 0.0;
    const cplx zj2 = t.j >= 2 ? P::ipow(z, t.j - 2) : 0.0;
    const cplx zk2 = t.k >= 2 ? P::ipow(zb, t.k - 2) : 0.0;
    w.f += t.c * zj * zk;
    w.f_z += t.c * j * zj1 * zk;
    w.f_zb += t.c * k * zj * zk1;
    w.f_zz += t.c * j * (j - 1.0) * zj2 * zk;
    w.f_zzb += t.c * j * k * zj1 * zk1;
    w.f_zbzb += t.c * k * (k - 1.0) * zj * zk2;
  }
  return w;
}

inline WirtingerJet jet_analytic(const AnalyticFn& f, cplx z) {
  const Jet3 j = f.jet(z);
  return {j.value, j.d1, 0.0, j.d2, 0.0, 0.0};
}

inline WirtingerJet jet(const PlaneMap& m, cplx z) {
  return std::visit(detail::overloaded{
                        [&](const LogHarmonicMap& lh) { return jet_zhg(lh, z); },
                        [&](const PolyZZbarMap& p) { return jet_poly(p, z); },
                        [&](const AnalyticFn& f) { return jet_analytic(f, z); },
                    },
                    m);
}

inline cplx value(const PlaneMap& m, cplx z) {
  return std::visit([&](const auto& x) { return x.value(z); }, m);
}

inline std::vector<cplx> singularities(const PlaneMap& m) {
  return std::visit(detail::overloaded{
                        [](const PolyZZbarMap&) { return std::vector<cplx>{}; },
                        [](const auto& x) { return x.singularities(); },
                    },
                    m);
}

inline double tail_estimate(const PlaneMap& m, cplx z) {
  return std::visit(detail::overloaded{
                        [](const PolyZZbarMap&) { return 0.0; },
                        [&](const auto& x) { return x.tail_estimate(z); },
                    },
                    m);
}

inline std::string label(const PlaneMap& m) {
  return std::visit([](const auto& x) { return x.label(); }, m);
}

/// phi = z h / g.
inline AnalyticFn associated_phi(const LogHarmonicMap& m) {
  return AnalyticFn(ProductFn{1.0, 1, {{m.h(), 1}, {m.g(), -1}}},
                    m.label().empty() ? std::string{} : "phi(" + m.label() + ")");
}

/// Second dilatation mu = (z g'/g) / (1 + z h'/h).
inline cplx dilatation(const LogHarmonicMap& m, cplx z) {
  const Jet3 h = m.h().jet(z);
  const Jet3 g = m.g().jet(z);
  const cplx den = 1.0 + z * h.d1 / h.value;
  if (std::abs(den) < 1e-300) throw Error(Errc::degenerate_dilatation, "1 + z h'/h vanishes");
  return (z * g.d1 / g.value) / den;
}

struct LogCoefficients {
  std::vector<cplx> a;  // a[n-1] is a_n
  std::vector<cplx> b;
};

namespace detail {

// log of a normalized FactoredExp, summed termwise.
inline Series factored_log_series(const FactoredExp& f, std::size_t order) {
  std::vector<cplx> c(order + 1);
  for (const auto& p : f.powers) {
    cplx xn = 1.0;
    for (std::size_t n = 1; n <= order; ++n) {
      xn *= p.node;
      c[n] -= p.exponent * xn / static_cast<double>(n);
    }
  }
  for (const auto& q : f.poles) {
    cplx yn = 1.0;
    for (std::size_t n = 1; n <= order; ++n) {
      yn *= q.node;
      c[n] += q.weight * yn;
    }
  }
  for (std::size_t k = 0; k < f.exp_poly.size() && k + 1 <= order; ++k) c[k + 1] += f.exp_poly[k];
  return Series(std::move(c));
}

}  // namespace detail

/// a_n, b_n with h = exp(sum a_n z^n), g = exp(sum b_n z^n), n = 1..N.
inline LogCoefficients coeffs(const LogHarmonicMap& m, std::size_t order) {
  auto log_taylor = [order](const AnalyticFn& f) {
    if (const auto* e = std::get_if<ExpSeries>(&f.kind().v); e && e->log.order() >= order)
      return e->log.resized(order);
    if (const auto* fe = std::get_if<FactoredExp>(&f.kind().v); fe && fe->zpow == 0 && fe->scale == cplx{1.0})
      return detail::factored_log_series(*fe, order);
    return log_series(f.taylor(order));
  };
  const Series la = log_taylor(m.h());
  const Series lb = log_taylor(m.g());
  LogCoefficients out;
  for (std::size_t n = 1; n <= order; ++n) {
    out.a.push_back(la[n]);
    out.b.push_back(lb[n]);
  }
  return out;
}

}  // namespace loghm
