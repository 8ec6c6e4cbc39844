#pragma once

#include <complex>
#include <string>
#include <vector>

#include "loghm/analytic.hpp"
#include "loghm/error.hpp"
#include "loghm/fieldmap.hpp"

// Named maps. Closed forms are written in FactoredExp shape so that values,
// derivatives and Taylor coefficients all come from the same parameters.

namespace loghm::catalog {

struct Params {
  double alpha = 0.0;
  cplx lambda{0.25, 0.0};
  unsigned p = 1;
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw Error(Errc::parameter_range, "alpha must satisfy 0 <= alpha < 1");
}

/// exp(w (1/(1 - z) - 1)) = exp(w z / (1 - z)).
inline ExpPole exp_z_over_1mz(cplx w) { return {1.0, w}; }

}  // namespace detail

inline AnalyticFn one() { return AnalyticFn(FactoredExp{}, "1"); }

inline AnalyticFn identity_fn() { return AnalyticFn(FactoredExp{1.0, 1, {}, {}, {}}, "identity"); }

/// z / (1 - z)^{2(1 - alpha)}, starlike of order alpha.
inline AnalyticFn phi_alpha(double alpha) {
  detail::check_alpha(alpha);
  return AnalyticFn(FactoredExp{1.0, 1, {{1.0, -2.0 * (1.0 - alpha)}}, {}, {}},
                    "phi_alpha(" + std::to_string(alpha) + ")");
}

/// z / (1 - z)^2.
inline AnalyticFn koebe() { return phi_alpha(0.0).with_label("koebe"); }

/// z / (1 - z).
inline AnalyticFn halfplane() { return phi_alpha(0.5).with_label("halfplane"); }

/// z / (1 - z^2).
inline AnalyticFn two_slits() {
  return AnalyticFn(FactoredExp{1.0, 1, {{1.0, -1.0}, {-1.0, -1.0}}, {}, {}}, "two_slits");
}

/// f_alpha: phi = z/(1-z)^{2(1-alpha)}, mu = z.
///   g = (1-z)^{1-2 alpha} exp(2(1-alpha) z/(1-z)),  h = (1-z)^{-1} exp(2(1-alpha) z/(1-z)).
inline LogHarmonicMap f_alpha(double alpha) {
  detail::check_alpha(alpha);
  const cplx w = 2.0 * (1.0 - alpha);
  AnalyticFn g(FactoredExp{1.0, 0, {{1.0, 1.0 - 2.0 * alpha}}, {detail::exp_z_over_1mz(w)}, {}});
  AnalyticFn h(FactoredExp{1.0, 0, {{1.0, -1.0}}, {detail::exp_z_over_1mz(w)}, {}});
  return {h, g, "f_alpha(" + std::to_string(alpha) + ")"};
}

/// Log-harmonic Koebe function f_0.
inline LogHarmonicMap koebe_lh() {
  const auto m = f_alpha(0.0);
  return {m.h(), m.g(), "koebe_lh"};
}

/// Log-harmonic right half-plane map f_{1/2}.
inline LogHarmonicMap halfplane_lh() {
  const auto m = f_alpha(0.5);
  return {m.h(), m.g(), "halfplane_lh"};
}

/// Log-harmonic two-slits map: phi = z/(1-z^2), mu = z^2.
///   g = sqrt(1-z^2) exp(z^2/(1-z^2)),  h = g / (1-z^2).
/// z^2/(1-z^2) = (1/2)(z/(1-z)) + (1/2)(-z/(1+z)).
inline LogHarmonicMap two_slits_lh() {
  const std::vector<ExpPole> poles{{1.0, 0.5}, {-1.0, 0.5}};
  AnalyticFn g(FactoredExp{1.0, 0, {{1.0, 0.5}, {-1.0, 0.5}}, poles, {}});
  AnalyticFn h(FactoredExp{1.0, 0, {{1.0, -0.5}, {-1.0, -0.5}}, poles, {}});
  return {h, g, "two_slits_lh"};
}

/// Univalent but non-convex map phi |g|^2 with phi = z/(1-z) and
/// g = ((1-z)/(1+z))^{1/4} exp(z/(2(1-z))); h = g/(1-z).
inline LogHarmonicMap counterexample() {
  AnalyticFn g(FactoredExp{1.0, 0, {{1.0, 0.25}, {-1.0, -0.25}}, {detail::exp_z_over_1mz(0.5)}, {}});
  AnalyticFn h(FactoredExp{1.0, 0, {{1.0, -0.75}, {-1.0, -0.25}}, {detail::exp_z_over_1mz(0.5)}, {}});
  return {h, g, "counterexample"};
}

/// The g-factor of the counterexample on its own.
inline AnalyticFn counterexample_g() { return counterexample().g(); }

/// phi(z) = z - lambda |z|^2, times |z|^{2(p-1)}.
inline PolyZZbarMap lambda_map(cplx lambda, unsigned p = 1) {
  const double a = std::abs(lambda);
  if (!(a > 0.0 && a < 0.5)) throw Error(Errc::parameter_range, "lambda must satisfy 0 < |lambda| < 1/2");
  if (p < 1) throw Error(Errc::parameter_range, "p must be >= 1");
  PolyZZbarMap phi({{1, 0, 1.0}, {1, 1, -lambda}}, "lambda");
  return p == 1 ? phi : PolyZZbarMap(phi.times_modulus_power(p - 1).terms(), "lambda_p" + std::to_string(p));
}

inline LogHarmonicMap identity_lh() { return {one(), one(), "identity_lh"}; }

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> all{
      "f_alpha",  "koebe_lh", "halfplane_lh", "two_slits_lh", "counterexample", "identity_lh",
      "lambda",   "identity", "koebe",        "halfplane",    "two_slits",      "phi_alpha",
  };
  return all;
}

inline PlaneMap lookup(const std::string& name, const Params& p = {}) {
  if (name == "f_alpha") return f_alpha(p.alpha);
  if (name == "koebe_lh" || name == "f0") return koebe_lh();
  if (name == "halfplane_lh" || name == "f_half") return halfplane_lh();
  if (name == "two_slits_lh" || name == "ls" || name == "LS") return two_slits_lh();
  if (name == "counterexample") return counterexample();
  if (name == "identity_lh") return identity_lh();
  if (name == "lambda") return lambda_map(p.lambda, p.p);
  if (name == "identity") return identity_fn();
  if (name == "koebe") return koebe();
  if (name == "halfplane") return halfplane();
  if (name == "two_slits") return two_slits();
  if (name == "phi_alpha") return phi_alpha(p.alpha);
  throw Error(Errc::unknown_name, "no catalog entry named '" + name + "'");
}

}  // namespace loghm::catalog
