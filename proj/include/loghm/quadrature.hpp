#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "loghm/error.hpp"

namespace loghm::quad {

using cplx = std::complex<double>;

inline constexpr std::size_t gauss_points = 10;

struct GaussRule {
  std::array<double, gauss_points> nodes{};  // on [-1, 1]
  std::array<double, gauss_points> weights{};
};

/// Gauss-Legendre rule computed once by Newton iteration on P_n.
inline const GaussRule& gauss_legendre() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr std::size_t n = gauss_points;
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

struct LineIntegralOptions {
  double tolerance = 1e-11;
  std::size_t max_panels = std::size_t{1} << 14;
};

/**
 * Integral of f along the straight segment from a to b.
 *
 * The segment is cut into a base mesh graded geometrically towards b (the
 * end nearest the unit circle, where integrands of interest blow up), then
 * each base interval is split into n equal panels with n doubling until two
 * successive totals differ by less than the tolerance.
 */
template <class F>
cplx line_integral(F&& f, cplx a, cplx b, double grading_depth,
                   const LineIntegralOptions& opt = {}) {
  const GaussRule& rule = gauss_legendre();
  const cplx delta = b - a;
  std::vector<double> breaks{0.0};
  const int levels = std::max(1, static_cast<int>(std::ceil(grading_depth)));
  for (int l = 1; l <= levels; ++l) breaks.push_back(1.0 - std::ldexp(1.0, -l));
  breaks.push_back(1.0);

  auto estimate = [&](std::size_t split) {
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double h = (breaks[i + 1] - breaks[i]) / static_cast<double>(split);
      for (std::size_t p = 0; p < split; ++p) {
        const double lo = breaks[i] + h * static_cast<double>(p);
        cplx panel = 0.0;
        for (std::size_t q = 0; q < gauss_points; ++q) {
          const double t = lo + 0.5 * h * (rule.nodes[q] + 1.0);
          panel += rule.weights[q] * f(a + t * delta);
        }
        total += 0.5 * h * panel;
      }
    }
    return total * delta;
  };

  const std::size_t base = breaks.size() - 1;
  std::size_t split = 1;
  cplx older = estimate(split);
  cplx previous = older;
  while (true) {
    split *= 2;
    if (split * base > opt.max_panels)
      throw QuadratureError("line integral refinement did not converge", older, previous);
    const cplx current = estimate(split);
    if (std::abs(current - previous) < opt.tolerance) return current;
    older = previous;
    previous = current;
  }
}

}  // namespace loghm::quad
