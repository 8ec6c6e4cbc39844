#pragma once

#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loghm/analysis.hpp"
#include "loghm/analytic.hpp"
#include "loghm/error.hpp"
#include "loghm/series.hpp"
#include "loghm/shear.hpp"

// JSON forms of series and reports, plus parsing of phi / mu descriptions.

namespace loghm::io {

using json = nlohmann::json;

inline json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(Errc::parameter_range, "complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(to_json(c));
  return out;
}

/// {"order": N, "coeffs": [[re, im], ...]}
inline json to_json(const Series& s) {
  json c = json::array();
  for (const auto& v : s.coeffs()) c.push_back(to_json(v));
  return {{"order", s.order()}, {"coeffs", c}};
}

inline Series series_from_json(const json& j) {
  const auto order = j.at("order").get<std::size_t>();
  std::vector<cplx> c;
  for (const auto& v : j.at("coeffs")) c.push_back(complex_from_json(v));
  if (c.size() != order + 1) throw Error(Errc::contract_violation, "coeffs length must be order + 1");
  return Series(std::move(c));
}

inline json to_json(const analysis::GridSpec& g) {
  return {{"radii", g.radii}, {"angles", g.angles}, {"exclusion", g.exclusion}};
}

inline json to_json(const analysis::MarginReport& r) {
  json degenerate = json::array();
  for (const auto& z : r.degenerate) degenerate.push_back(to_json(z));
  return {{"quantity", r.quantity},
          {"min_value", r.evaluated ? json(r.min_value) : json(nullptr)},
          {"argmin", to_json(r.argmin)},
          {"max_violation", r.max_violation},
          {"evaluated", r.evaluated},
          {"skipped_singular", r.skipped_singular},
          {"unreliable", r.unreliable},
          {"degenerate", degenerate},
          {"grid", to_json(r.grid)}};
}

inline json to_json(const analysis::DeviationReport& r) {
  json degenerate = json::array();
  for (const auto& z : r.degenerate) degenerate.push_back(to_json(z));
  return {{"quantity", r.quantity},       {"max_deviation", r.max_deviation}, {"argmax", to_json(r.argmax)},
          {"evaluated", r.evaluated},     {"skipped_singular", r.skipped_singular},
          {"degenerate", degenerate},     {"grid", to_json(r.grid)}};
}

inline json to_json(const analysis::CoeffCertificate& c) {
  return {{"alpha", c.alpha}, {"ratios", c.ratios}, {"max_ratio", c.max_ratio}, {"argmax_n", c.argmax_n},
          {"pass", c.pass}};
}

inline json to_json(const analysis::GrowthReport& r) {
  json q = json::array();
  for (std::size_t k = 0; k < 6; ++k)
    q.push_back({{"quantity", analysis::growth_quantities[k]},
                 {"min_margin", r.min_margin[k]},
                 {"min_relative_margin", r.min_relative_margin[k]},
                 {"argmin", to_json(r.argmin[k])}});
  return {{"quantities", q},
          {"evaluated", r.evaluated},
          {"skipped_singular", r.skipped_singular},
          {"pass", r.pass},
          {"grid", to_json(r.grid)}};
}

inline json to_json(const analysis::TrialResult& t) {
  json j = {{"trial", t.index}, {"seed", t.seed}, {"ok", t.ok}};
  if (!t.ok) {
    j["error"] = t.error;
    return j;
  }
  j["diff_ratio"] = t.diff_ratio;
  j["a_ratio"] = t.a_ratio;
  j["b_ratio"] = t.b_ratio;
  j["a_ratio_swapped"] = t.a_ratio_swapped;
  j["b_ratio_swapped"] = t.b_ratio_swapped;
  j["covering"] = t.covering;
  return j;
}

inline json to_json(const analysis::ScanReport& r) {
  auto worst = [](const analysis::Worst& w) { return json{{"value", w.value}, {"seed", w.seed}}; };
  return {{"summary", true},
          {"trials", r.trials.size()},
          {"failures", r.failures},
          {"worst_diff_ratio", worst(r.diff_ratio)},
          {"worst_a_ratio", worst(r.a_ratio)},
          {"worst_b_ratio", worst(r.b_ratio)},
          {"worst_a_ratio_swapped", worst(r.a_ratio_swapped)},
          {"worst_b_ratio_swapped", worst(r.b_ratio_swapped)},
          {"min_covering", worst(r.min_covering)},
          {"diff_violations", r.diff_violations},
          {"coefficient_candidates", r.coefficient_candidates},
          {"cover16_violations", r.cover16_violations},
          {"below_inv_e2", r.below_inv_e2},
          {"covering_note", "min |f| on |z| = r_cover; proxy for the covering radius, not a proof"}};
}

/**
 * Parses a dilatation description: "0", "z", "z^k", or JSON
 *   {"blaschke": {"eta": [re, im], "zpow": 1, "zeros": [[re, im], ...]}}
 *   {"random": {"k": 2, "seed": 7}}
 *   {"series": {"order": N, "coeffs": [...]}}
 */
inline AnalyticFn parse_mu(const std::string& text) {
  if (text == "0") return AnalyticFn(BlaschkeProduct{0.0, 1, {}}, "0");
  if (text == "z") return AnalyticFn(BlaschkeProduct{1.0, 1, {}}, "z");
  if (text.size() > 2 && text.rfind("z^", 0) == 0) {
    const int k = std::stoi(text.substr(2));
    if (k < 1) throw Error(Errc::inadmissible_dilatation, "mu = z^k needs k >= 1");
    return AnalyticFn(BlaschkeProduct{1.0, static_cast<unsigned>(k), {}}, text);
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw Error(Errc::unknown_name, "cannot parse dilatation '" + text + "'");
  }
  if (j.contains("blaschke")) {
    const auto& b = j["blaschke"];
    BlaschkeProduct out{b.contains("eta") ? complex_from_json(b["eta"]) : cplx{1.0},
                        b.value("zpow", 1u), {}};
    if (std::abs(out.eta) > 1.0 + 1e-15) throw Error(Errc::parameter_range, "|eta| must be <= 1");
    for (const auto& a : b.value("zeros", json::array())) {
      out.zeros.push_back(complex_from_json(a));
      if (std::abs(out.zeros.back()) >= 1.0) throw Error(Errc::parameter_range, "Blaschke zeros must lie in the disk");
    }
    return AnalyticFn(std::move(out), "blaschke");
  }
  if (j.contains("random"))
    return shear::random_schwarz(j["random"].value("k", 2u), j["random"].value("seed", std::uint64_t{1}));
  if (j.contains("series")) return AnalyticFn(SeriesFn{series_from_json(j["series"])}, "series");
  throw Error(Errc::unknown_name, "dilatation JSON needs a 'blaschke', 'random' or 'series' key");
}

/**
 * Parses a starlike phi: a catalog name (koebe, halfplane, two_slits,
 * identity, phi_alpha) or JSON
 *   {"herglotz": {"alpha": 0, "nodes": [[re, im], ...], "weights": [...]}}
 *   {"random": {"alpha": 0, "k": 3, "seed": 7}}
 */
inline AnalyticFn parse_phi(const std::string& text, double alpha = 0.0) {
  if (text == "koebe") return catalog::koebe();
  if (text == "halfplane") return catalog::halfplane();
  if (text == "two_slits") return catalog::two_slits();
  if (text == "identity") return catalog::identity_fn();
  if (text == "phi_alpha") return catalog::phi_alpha(alpha);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw Error(Errc::unknown_name, "unknown phi '" + text + "'");
  }
  if (j.contains("herglotz")) {
    const auto& h = j["herglotz"];
    std::vector<cplx> nodes;
    for (const auto& x : h.at("nodes")) nodes.push_back(complex_from_json(x));
    return shear::herglotz_starlike(h.value("alpha", 0.0), nodes, h.at("weights").get<std::vector<double>>());
  }
  if (j.contains("random")) {
    const auto& r = j["random"];
    return shear::random_starlike(r.value("alpha", 0.0), r.value("k", 3u), r.value("seed", std::uint64_t{1}));
  }
  throw Error(Errc::unknown_name, "phi JSON needs a 'herglotz' or 'random' key");
}

}  // namespace loghm::io
