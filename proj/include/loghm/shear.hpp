#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "loghm/analytic.hpp"
#include "loghm/catalog.hpp"
#include "loghm/error.hpp"
#include "loghm/fieldmap.hpp"
#include "loghm/series.hpp"

namespace loghm::shear {

namespace detail {

inline void check_phi(const Series& phi) {
  if (std::abs(phi[0]) > 1e-12 || std::abs(phi[1] - 1.0) > 1e-12)
    throw Error(Errc::inadmissible_phi, "phi must satisfy phi(0) = 0, phi'(0) = 1");
}

inline void check_mu(const Series& mu) {
  if (std::abs(mu[0]) > 1e-12) throw Error(Errc::inadmissible_dilatation, "mu(0) must vanish");
}

}  // namespace detail

/**
 * Shear construction on truncated series.
 *
 * Solves z h / g = phi and (z g'/g) / (1 + z h'/h) = mu with log g and
 * log h truncated at order N: log g = integrate(mu/(1-mu) phi'/phi) and
 * log h = log g + log(phi/z). These are the coefficients b_n and a_n.
 */
inline LogHarmonicMap construct_series(const AnalyticFn& phi, const AnalyticFn& mu,
                                       std::size_t order = default_order) {
  const Series phi_s = phi.taylor(order + 1);
  detail::check_phi(phi_s);
  detail::check_mu(mu.taylor(order + 1));
  const Series log_g = loghm::detail::shear_log_g_series(phi, mu, order);
  std::vector<cplx> uc(phi_s.coeffs().begin() + 1, phi_s.coeffs().end());
  const Series log_h = add(log_g, log_series(Series(std::move(uc)).resized(order)));
  return {AnalyticFn(ExpSeries{log_h}), AnalyticFn(ExpSeries{log_g}),
          "sheared(" + phi.label() + "," + mu.label() + ")"};
}

/// g(z) by adaptive quadrature of the defining integral along [0, z].
inline cplx construct_numeric(const AnalyticFn& phi, const AnalyticFn& mu, cplx z,
                              const quad::LineIntegralOptions& opt = {}) {
  detail::check_mu(mu.taylor(2));
  detail::check_phi(phi.taylor(2));
  return std::exp(loghm::detail::shear_log_g(phi, mu, z, opt));
}

/**
 * Shear construction with g evaluated by quadrature and h = (phi/z) g.
 *
 * Usable up to the unit circle, unlike the truncated series; phi must carry
 * an explicit factor of z (every catalog and Herglotz phi does).
 */
inline LogHarmonicMap construct_quadrature(const AnalyticFn& phi, const AnalyticFn& mu) {
  detail::check_mu(mu.taylor(2));
  detail::check_phi(phi.taylor(2));
  const AnalyticFn g = make_sheared_g(phi, mu);
  const AnalyticFn h(ProductFn{1.0, 0, {{phi.div_z(), 1}, {g, 1}}});
  return {h, g, "sheared(" + phi.label() + "," + mu.label() + ")"};
}

/// Member of C_Lh (phi = z/(1-z)) with dilatation mu, as series.
inline LogHarmonicMap construct_clh(const AnalyticFn& mu, std::size_t order = default_order) {
  return construct_series(catalog::halfplane(), mu, order);
}

inline LogHarmonicMap construct_clh_quadrature(const AnalyticFn& mu) {
  return construct_quadrature(catalog::halfplane(), mu);
}

// Random admissible inputs.
//
// Bits come from std::mt19937_64, whose output sequence is fixed by the
// standard. Doubles are formed as (x >> 11) * 2^-53 and simplex weights as
// spacings of sorted uniforms, so sampling does not depend on the standard
// library's distribution implementations.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  cplx unit() {
    const double t = 2.0 * std::numbers::pi * uniform();
    return {std::cos(t), std::sin(t)};
  }

 private:
  std::mt19937_64 engine_;
};

/// z prod (1 - x_j z)^{-2(1-alpha) lambda_j}; starlike of order alpha when
/// |x_j| = 1, lambda_j >= 0 and sum lambda_j = 1.
inline AnalyticFn herglotz_starlike(double alpha, const std::vector<cplx>& nodes,
                                    const std::vector<double>& weights) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(Errc::parameter_range, "alpha must satisfy 0 <= alpha < 1");
  if (nodes.empty() || nodes.size() != weights.size())
    throw Error(Errc::parameter_range, "need matching non-empty node and weight lists");
  FactoredExp f{1.0, 1, {}, {}, {}};
  for (std::size_t j = 0; j < nodes.size(); ++j)
    f.powers.push_back({nodes[j], -2.0 * (1.0 - alpha) * weights[j]});
  return AnalyticFn(std::move(f), "herglotz");
}

inline AnalyticFn random_starlike(double alpha, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw Error(Errc::parameter_range, "factor count must be >= 1");
  Rng rng(seed);
  std::vector<cplx> nodes;
  for (std::size_t j = 0; j < k; ++j) nodes.push_back(rng.unit());
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t j = 0; j + 1 < k; ++j) cuts.push_back(rng.uniform());
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> weights;
  for (std::size_t j = 0; j < k; ++j) weights.push_back(cuts[j + 1] - cuts[j]);
  return herglotz_starlike(alpha, nodes, weights).with_label("starlike[" + std::to_string(seed) + "]");
}

inline constexpr double max_blaschke_zero = 0.9;

/// eta z prod (z - a_j)/(1 - conj(a_j) z) with |eta| = 1, |a_j| <= 0.9
/// drawn area-uniformly.
inline AnalyticFn random_schwarz(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  BlaschkeProduct b{rng.unit(), 1, {}};
  for (std::size_t j = 0; j < k; ++j) {
    const double r = max_blaschke_zero * std::sqrt(rng.uniform());
    b.zeros.push_back(r * rng.unit());
  }
  return AnalyticFn(std::move(b), "schwarz[" + std::to_string(seed) + "]");
}

/// mu(z) = c z^m.
inline AnalyticFn monomial_dilatation(cplx c, unsigned m) {
  if (std::abs(c) > 1.0) throw Error(Errc::parameter_range, "|c| must be <= 1");
  std::string label = c == cplx{0.0} ? "0" : (m == 1 ? "z" : "z^" + std::to_string(m));
  return AnalyticFn(BlaschkeProduct{c, m, {}}, std::move(label));
}

inline AnalyticFn zero_dilatation() { return AnalyticFn(BlaschkeProduct{0.0, 1, {}}, "0"); }

}  // namespace loghm::shear
