#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "loghm/analytic.hpp"
#include "loghm/catalog.hpp"
#include "loghm/error.hpp"
#include "loghm/fieldmap.hpp"
#include "loghm/shear.hpp"

namespace loghm::analysis {

inline constexpr double pass_tolerance = -1e-6;
inline constexpr double violation_threshold = -1e-4;
inline constexpr double reliable_tail = 1e-8;

/// Df = z f_z - conj(z) f_zb.
inline cplx D(const WirtingerJet& j, cplx z) { return z * j.f_z - std::conj(z) * j.f_zb; }

/// D^2 f = z f_z + zb f_zb - 2|z|^2 f_zzb + z^2 f_zz + zb^2 f_zbzb.
inline cplx D2(const WirtingerJet& j, cplx z) {
  const cplx zb = std::conj(z);
  return z * j.f_z + zb * j.f_zb - 2.0 * std::norm(z) * j.f_zzb + z * z * j.f_zz + zb * zb * j.f_zbzb;
}

inline cplx D(const PlaneMap& m, cplx z) { return D(jet(m, z), z); }
inline cplx D2(const PlaneMap& m, cplx z) { return D2(jet(m, z), z); }

struct GridSpec {
  std::vector<double> radii;
  std::size_t angles = 720;
  double exclusion = 1e-9;

  std::size_t size() const noexcept { return radii.size() * angles; }
  double theta(std::size_t j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angles);
  }
  cplx point(std::size_t index) const {
    return std::polar(radii[index / angles], theta(index % angles));
  }
  void validate() const {
    if (radii.empty()) throw Error(Errc::parameter_range, "grid needs at least one radius");
    for (double r : radii)
      if (!(r > 0.0 && r < 1.0)) throw Error(Errc::parameter_range, "grid radii must lie in (0, 1)");
    if (angles < 8) throw Error(Errc::parameter_range, "grid needs at least 8 angles");
  }
};

/// Radii 0.1, 0.2, ..., 0.9, 0.95 with 720 angles.
inline GridSpec default_grid() {
  GridSpec g;
  for (int k = 1; k <= 9; ++k) g.radii.push_back(0.1 * k);
  g.radii.push_back(0.95);
  return g;
}

inline GridSpec circle_grid(double r, std::size_t angles) { return GridSpec{{r}, angles, 1e-9}; }

/// True when the direction of z is within `tol` of a singular direction.
inline bool near_singular_direction(cplx z, const std::vector<cplx>& singular, double tol) {
  const double t = std::arg(z);
  for (const auto& s : singular) {
    double d = std::abs(t - std::arg(s));
    d = std::min(d, 2.0 * std::numbers::pi - d);
    if (d < tol) return true;
  }
  return false;
}

/// Runs body(i) for i in [0, n) over `workers` threads in contiguous chunks.
template <class Body>
void parallel_for(std::size_t n, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct MarginReport {
  std::string quantity;
  double min_value = std::numeric_limits<double>::infinity();
  cplx argmin{};
  std::size_t argmin_index = 0;
  double max_violation = 0.0;
  GridSpec grid;
  std::size_t evaluated = 0;
  std::size_t skipped_singular = 0;
  std::size_t unreliable = 0;
  std::vector<cplx> degenerate;

  bool passed(double tolerance = pass_tolerance) const { return evaluated > 0 && min_value >= tolerance; }
};

namespace detail {

enum class PointState { ok, singular, unreliable, degenerate };

struct PointValue {
  PointState state = PointState::ok;
  double value = 0.0;
};

/// Evaluates `fn` over the grid and reduces to the minimum. Ties go to the
/// lowest grid index, so the result does not depend on the worker count.
template <class Fn>
MarginReport scan_min(const std::string& quantity, const PlaneMap& map, const GridSpec& grid,
                      std::size_t workers, Fn&& fn) {
  grid.validate();
  const auto singular = singularities(map);
  std::vector<PointValue> values(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const cplx z = grid.point(i);
    if (near_singular_direction(z, singular, grid.exclusion)) {
      values[i].state = PointState::singular;
      return;
    }
    if (tail_estimate(map, z) > reliable_tail) {
      values[i].state = PointState::unreliable;
      return;
    }
    std::optional<double> v;
    try {
      v = fn(z);
    } catch (const Error& e) {
      if (e.code() != Errc::domain) throw;
    }
    if (!v || !std::isfinite(*v)) {
      values[i].state = PointState::degenerate;
      return;
    }
    values[i].value = *v;
  });
  MarginReport rep;
  rep.quantity = quantity;
  rep.grid = grid;
  for (std::size_t i = 0; i < values.size(); ++i) {
    switch (values[i].state) {
      case PointState::singular: ++rep.skipped_singular; break;
      case PointState::unreliable: ++rep.unreliable; break;
      case PointState::degenerate: rep.degenerate.push_back(grid.point(i)); break;
      case PointState::ok:
        ++rep.evaluated;
        if (values[i].value < rep.min_value) {
          rep.min_value = values[i].value;
          rep.argmin_index = i;
          rep.argmin = grid.point(i);
        }
        break;
    }
  }
  rep.max_violation = rep.evaluated > 0 ? std::max(0.0, -rep.min_value) : 0.0;
  return rep;
}

}  // namespace detail

/// min over the grid of Re(Df/f) - alpha.
inline MarginReport starlike_margin(const PlaneMap& map, const GridSpec& grid, double alpha,
                                    std::size_t workers = 1) {
  return detail::scan_min("starlike", map, grid, workers, [&](cplx z) -> std::optional<double> {
    const WirtingerJet j = jet(map, z);
    if (j.f == cplx{0.0}) return std::nullopt;
    return std::real(D(j, z) / j.f) - alpha;
  });
}

/// min over the grid of Re(D^2 f / Df) - alpha.
inline MarginReport convex_margin(const PlaneMap& map, const GridSpec& grid, double alpha,
                                  std::size_t workers = 1) {
  return detail::scan_min("convex", map, grid, workers, [&](cplx z) -> std::optional<double> {
    const WirtingerJet j = jet(map, z);
    const cplx d = D(j, z);
    if (d == cplx{0.0}) return std::nullopt;
    return std::real(D2(j, z) / d) - alpha;
  });
}

/// min over the grid of |f_z|^2 - |f_zb|^2.
inline MarginReport jacobian_margin(const PlaneMap& map, const GridSpec& grid, std::size_t workers = 1) {
  return detail::scan_min("jacobian", map, grid, workers, [&](cplx z) -> std::optional<double> {
    const WirtingerJet j = jet(map, z);
    return std::norm(j.f_z) - std::norm(j.f_zb);
  });
}

/// Re(D^2 f / Df) at r e^{i theta} for the non-convex counterexample.
inline double V(double r, double theta) {
  static const PlaneMap f = catalog::counterexample();
  const cplx z = std::polar(r, theta);
  const WirtingerJet j = jet(f, z);
  return std::real(D2(j, z) / D(j, z));
}

struct TracePoint {
  double theta;
  cplx w;
};

/// f(r e^{i theta_m}), theta_m = 2 pi m / M, skipping singular directions.
inline std::vector<TracePoint> boundary_trace(const PlaneMap& map, double r, std::size_t samples) {
  if (!(r > 0.0 && r < 1.0)) throw Error(Errc::parameter_range, "trace radius must lie in (0, 1)");
  const auto singular = singularities(map);
  std::vector<TracePoint> out;
  out.reserve(samples);
  for (std::size_t m = 0; m < samples; ++m) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(samples);
    const cplx z = std::polar(r, t);
    if (near_singular_direction(z, singular, 1e-9)) continue;
    out.push_back({t, value(map, z)});
  }
  return out;
}

/// min over the circle |z| = r of |f(z)|: a lower-envelope proxy for the
/// radius of the largest disk about 0 covered by f.
inline double covering_radius(const PlaneMap& map, double r, std::size_t samples, std::size_t workers = 1) {
  if (!(r > 0.0 && r < 1.0)) throw Error(Errc::parameter_range, "covering radius needs 0 < r < 1");
  const auto singular = singularities(map);
  std::vector<double> mod(samples, std::numeric_limits<double>::infinity());
  parallel_for(samples, workers, [&](std::size_t m) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(samples);
    const cplx z = std::polar(r, t);
    if (near_singular_direction(z, singular, 1e-9)) return;
    mod[m] = std::abs(value(map, z));
  });
  return *std::min_element(mod.begin(), mod.end());
}

struct CoeffCertificate {
  double alpha = 0.0;
  std::vector<double> ratios;  // n |a_n - b_n| / (2(1 - alpha)), n = 1..N
  double max_ratio = 0.0;
  std::size_t argmax_n = 0;
  bool pass = false;
};

inline CoeffCertificate coeff_certificate(const LogCoefficients& c, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(Errc::parameter_range, "alpha must satisfy 0 <= alpha < 1");
  CoeffCertificate out;
  out.alpha = alpha;
  for (std::size_t n = 1; n <= c.a.size(); ++n) {
    const double v = static_cast<double>(n) * std::abs(c.a[n - 1] - c.b[n - 1]) / (2.0 * (1.0 - alpha));
    out.ratios.push_back(v);
    if (v > out.max_ratio) {
      out.max_ratio = v;
      out.argmax_n = n;
    }
  }
  out.pass = out.max_ratio <= 1.0 + 1e-8;
  return out;
}

inline CoeffCertificate coeff_certificate(const LogHarmonicMap& map, double alpha, std::size_t order) {
  return coeff_certificate(coeffs(map, order), alpha);
}

/// z exp(sum a_n z^n) conj(exp(sum b_n z^n)) in closed form.
inline LogHarmonicMap map_from_log_coefficients(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  return {AnalyticFn(FactoredExp{1.0, 0, {}, {}, a}), AnalyticFn(FactoredExp{1.0, 0, {}, {}, b}), "from_coefficients"};
}

struct SufficientResult {
  bool holds = false;
  double weighted_sum = 0.0;  // sum n |a_n - b_n|
  std::optional<MarginReport> margin;
};

/// Checks sum n |a_n - b_n| <= 1 - alpha; when it holds and a grid is
/// given, also measures the starlike margin of the resulting map.
inline SufficientResult sufficient_starlike(const std::vector<cplx>& a, const std::vector<cplx>& b, double alpha,
                                            const std::optional<GridSpec>& grid = std::nullopt) {
  const std::size_t n = std::max(a.size(), b.size());
  SufficientResult out;
  for (std::size_t k = 1; k <= n; ++k) {
    const cplx ak = k <= a.size() ? a[k - 1] : 0.0;
    const cplx bk = k <= b.size() ? b[k - 1] : 0.0;
    out.weighted_sum += static_cast<double>(k) * std::abs(ak - bk);
  }
  out.holds = out.weighted_sum <= 1.0 - alpha + 1e-12;
  if (out.holds && grid) out.margin = starlike_margin(map_from_log_coefficients(a, b), *grid, alpha);
  return out;
}

inline constexpr std::array<const char*, 6> growth_quantities{"|h|", "|g|", "|f|", "|f_z|", "|f_zb|", "|Df|"};

struct GrowthPoint {
  std::array<double, 6> bound{};
  std::array<double, 6> measured{};
  std::array<double, 6> margin{};  // bound - measured
};

/// Growth and distortion bounds for C_Lh at one point.
inline GrowthPoint growth_distortion_at(const LogHarmonicMap& map, cplx z) {
  const double r = std::abs(z);
  const double e1 = std::exp(r / (1.0 - r));
  const double e2 = e1 * e1;
  const double c3 = (1.0 - r) * (1.0 - r) * (1.0 - r);
  GrowthPoint p;
  p.bound = {e1 / (1.0 - r), e1, r / (1.0 - r) * e2, e2 / c3, r * e2 / c3, r * (1.0 + r) * e2 / c3};
  const WirtingerJet j = jet_zhg(map, z);
  p.measured = {std::abs(map.h().value(z)), std::abs(map.g().value(z)), std::abs(j.f), std::abs(j.f_z),
                std::abs(j.f_zb), std::abs(D(j, z))};
  for (std::size_t k = 0; k < 6; ++k) p.margin[k] = p.bound[k] - p.measured[k];
  return p;
}

struct GrowthReport {
  std::array<double, 6> min_margin{};
  std::array<double, 6> min_relative_margin{};  // margin / max(1, bound)
  std::array<cplx, 6> argmin{};
  GridSpec grid;
  std::size_t evaluated = 0;
  std::size_t skipped_singular = 0;
  bool pass = false;
};

inline void require_clh(const LogHarmonicMap& map) {
  const AnalyticFn phi = associated_phi(map);
  for (cplx z : {cplx{0.3, 0.0}, cplx{0.0, 0.5}, cplx{-0.4, 0.2}}) {
    const cplx expect = z / (1.0 - z);
    if (std::abs(phi.value(z) - expect) > 1e-8 * std::abs(expect))
      throw Error(Errc::precondition, "map is not in C_Lh (z h / g != z / (1 - z))");
  }
}

/**
 * Minimum of (bound - measured) over the grid for the six growth and
 * distortion quantities of a C_Lh map.
 *
 * Bounds reach ~1e20 near r = 0.95, so the pass criterion is applied to
 * the margin relative to max(1, bound): >= -1e-8.
 */
inline GrowthReport growth_distortion_certificate(const LogHarmonicMap& map, const GridSpec& grid,
                                                  std::size_t workers = 1) {
  grid.validate();
  require_clh(map);
  const auto singular = map.singularities();
  std::vector<std::optional<GrowthPoint>> points(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const cplx z = grid.point(i);
    if (near_singular_direction(z, singular, grid.exclusion)) return;
    points[i] = growth_distortion_at(map, z);
  });
  GrowthReport rep;
  rep.grid = grid;
  rep.min_margin.fill(std::numeric_limits<double>::infinity());
  rep.min_relative_margin.fill(std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i]) {
      ++rep.skipped_singular;
      continue;
    }
    ++rep.evaluated;
    for (std::size_t k = 0; k < 6; ++k) {
      const double rel = points[i]->margin[k] / std::max(1.0, points[i]->bound[k]);
      if (points[i]->margin[k] < rep.min_margin[k]) {
        rep.min_margin[k] = points[i]->margin[k];
        rep.argmin[k] = grid.point(i);
      }
      rep.min_relative_margin[k] = std::min(rep.min_relative_margin[k], rel);
    }
  }
  rep.pass = rep.evaluated > 0;
  for (double m : rep.min_relative_margin) rep.pass = rep.pass && m >= -1e-8;
  return rep;
}

struct DeviationReport {
  std::string quantity;
  double max_deviation = 0.0;
  cplx argmax{};
  GridSpec grid;
  std::size_t evaluated = 0;
  std::size_t skipped_singular = 0;
  std::vector<cplx> degenerate;
};

namespace detail {

template <class Fn>
DeviationReport scan_max(const std::string& quantity, const std::vector<cplx>& singular, const GridSpec& grid,
                         Fn&& fn) {
  grid.validate();
  DeviationReport rep;
  rep.quantity = quantity;
  rep.grid = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx z = grid.point(i);
    if (near_singular_direction(z, singular, grid.exclusion)) {
      ++rep.skipped_singular;
      continue;
    }
    const std::optional<double> v = fn(z);
    if (!v || !std::isfinite(*v)) {
      rep.degenerate.push_back(z);
      continue;
    }
    ++rep.evaluated;
    if (*v > rep.max_deviation) {
      rep.max_deviation = *v;
      rep.argmax = z;
    }
  }
  return rep;
}

inline std::vector<cplx> joined_singularities(const PlaneMap& a, const PlaneMap& b) {
  auto s = singularities(a);
  auto t = singularities(b);
  s.insert(s.end(), t.begin(), t.end());
  return s;
}

}  // namespace detail

/// max |Re(Df/f) - Re(D phi / phi)| for a pairing f = phi |g|^2.
inline DeviationReport starlike_identity(const PlaneMap& f, const PlaneMap& phi, const GridSpec& grid) {
  return detail::scan_max("starlike-identity", detail::joined_singularities(f, phi), grid,
                          [&](cplx z) -> std::optional<double> {
                            const WirtingerJet jf = jet(f, z);
                            const WirtingerJet jp = jet(phi, z);
                            if (jf.f == cplx{0.0} || jp.f == cplx{0.0}) return std::nullopt;
                            return std::abs(std::real(D(jf, z) / jf.f) - std::real(D(jp, z) / jp.f));
                          });
}

/// max |D^2 f / Df - D^2 phi / D phi| for a pairing f = phi |z|^{2(p-1)}.
inline DeviationReport convex_identity(const PlaneMap& f, const PlaneMap& phi, const GridSpec& grid) {
  return detail::scan_max("convex-identity", detail::joined_singularities(f, phi), grid,
                          [&](cplx z) -> std::optional<double> {
                            const WirtingerJet jf = jet(f, z);
                            const WirtingerJet jp = jet(phi, z);
                            const cplx df = D(jf, z), dp = D(jp, z);
                            if (df == cplx{0.0} || dp == cplx{0.0}) return std::nullopt;
                            return std::abs(D2(jf, z) / df - D2(jp, z) / dp);
                          });
}

// Conjecture explorer.

struct ScanConfig {
  std::size_t trials = 100;
  std::size_t k_phi = 3;
  std::size_t k_mu = 2;
  std::size_t order = 20;
  double r_cover = 0.99;
  std::size_t cover_angles = 512;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double diff_ratio = 0.0;      // max_n n |a_n - b_n| / 2
  double a_ratio = 0.0;         // max_n |a_n| / (2 + 1/n)
  double b_ratio = 0.0;         // max_n |b_n| / (2 - 1/n)
  double a_ratio_swapped = 0.0; // max_n |a_n| / (2 - 1/n)
  double b_ratio_swapped = 0.0; // max_n |b_n| / (2 + 1/n)
  double covering = 0.0;
};

inline constexpr double inv_e2 = 0.1353352832366127;  // e^-2
inline constexpr double sixteenth = 1.0 / 16.0;

/// Coefficient ratios and covering proxy for one (phi, mu) pair.
inline TrialResult scan_trial(const AnalyticFn& phi, const AnalyticFn& mu, const ScanConfig& cfg) {
  TrialResult t;
  const LogCoefficients c = coeffs(shear::construct_series(phi, mu, cfg.order), cfg.order);
  for (std::size_t n = 1; n <= cfg.order; ++n) {
    const double nd = static_cast<double>(n);
    const double an = std::abs(c.a[n - 1]), bn = std::abs(c.b[n - 1]);
    t.diff_ratio = std::max(t.diff_ratio, nd * std::abs(c.a[n - 1] - c.b[n - 1]) / 2.0);
    t.a_ratio = std::max(t.a_ratio, an / (2.0 + 1.0 / nd));
    t.b_ratio = std::max(t.b_ratio, bn / (2.0 - 1.0 / nd));
    t.a_ratio_swapped = std::max(t.a_ratio_swapped, an / (2.0 - 1.0 / nd));
    t.b_ratio_swapped = std::max(t.b_ratio_swapped, bn / (2.0 + 1.0 / nd));
  }
  const PlaneMap f = shear::construct_quadrature(phi, mu);
  t.covering = covering_radius(f, cfg.r_cover, cfg.cover_angles);
  if (t.covering < sixteenth) {
    // confirm on a 4x denser circle before reporting
    t.covering = std::min(t.covering, covering_radius(f, cfg.r_cover, 4 * cfg.cover_angles));
  }
  return t;
}

inline std::uint64_t trial_seed(std::uint64_t base, std::size_t index) { return base + index; }

inline TrialResult run_trial(const ScanConfig& cfg, std::size_t index) {
  const std::uint64_t seed = trial_seed(cfg.seed, index);
  TrialResult t;
  try {
    const AnalyticFn phi = shear::random_starlike(0.0, cfg.k_phi, shear::splitmix64(2 * seed));
    const AnalyticFn mu = shear::random_schwarz(cfg.k_mu, shear::splitmix64(2 * seed + 1));
    t = scan_trial(phi, mu, cfg);
  } catch (const std::exception& e) {
    t.ok = false;
    t.error = e.what();
  }
  t.index = index;
  t.seed = seed;
  return t;
}

struct Worst {
  double value = 0.0;
  std::uint64_t seed = 0;
};

struct ScanReport {
  ScanConfig config;
  std::vector<TrialResult> trials;
  std::size_t failures = 0;
  Worst diff_ratio, a_ratio, b_ratio, a_ratio_swapped, b_ratio_swapped;
  Worst min_covering{std::numeric_limits<double>::infinity(), 0};
  std::size_t diff_violations = 0;       // n |a_n - b_n| > 2
  std::size_t coefficient_candidates = 0; // (a) or (b) exceeded, closed-form role assignment
  std::size_t cover16_violations = 0;
  std::size_t below_inv_e2 = 0;

  bool clean() const { return diff_violations == 0 && cover16_violations == 0 && coefficient_candidates == 0; }
};

inline void accumulate(ScanReport& rep, const TrialResult& t) {
  rep.trials.push_back(t);
  if (!t.ok) {
    ++rep.failures;
    return;
  }
  auto upd = [&](Worst& w, double v) {
    if (v > w.value) w = {v, t.seed};
  };
  upd(rep.diff_ratio, t.diff_ratio);
  upd(rep.a_ratio, t.a_ratio);
  upd(rep.b_ratio, t.b_ratio);
  upd(rep.a_ratio_swapped, t.a_ratio_swapped);
  upd(rep.b_ratio_swapped, t.b_ratio_swapped);
  if (t.covering < rep.min_covering.value) rep.min_covering = {t.covering, t.seed};
  constexpr double tol = 1.0 + 1e-8;
  if (t.diff_ratio > tol) ++rep.diff_violations;
  if (t.a_ratio > tol || t.b_ratio > tol) ++rep.coefficient_candidates;
  if (t.covering < sixteenth) ++rep.cover16_violations;
  if (t.covering < inv_e2) ++rep.below_inv_e2;
}

/// Runs cfg.trials seeded trials; per-trial results are reported in trial
/// order regardless of the worker count.
inline ScanReport conjecture_scan(const ScanConfig& cfg,
                                  const std::function<void(const TrialResult&)>& on_trial = {}) {
  if (cfg.trials < 1) throw Error(Errc::parameter_range, "need at least one trial");
  std::vector<TrialResult> results(cfg.trials);
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t i) { results[i] = run_trial(cfg, i); });
  ScanReport rep;
  rep.config = cfg;
  for (const auto& t : results) {
    accumulate(rep, t);
    if (on_trial) on_trial(t);
  }
  return rep;
}

}  // namespace loghm::analysis
