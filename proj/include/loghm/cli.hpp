#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "loghm/analysis.hpp"
#include "loghm/catalog.hpp"
#include "loghm/error.hpp"
#include "loghm/fieldmap.hpp"
#include "loghm/io.hpp"
#include "loghm/render.hpp"
#include "loghm/shear.hpp"

namespace loghm::cli {

using json = nlohmann::json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

struct Options {
  // map selection
  std::string map = "koebe_lh";
  double alpha = 0.0;
  double lambda_re = 0.25;
  double lambda_im = 0.0;
  unsigned p = 1;
  std::size_t order = default_order;
  std::string out;
  std::size_t workers = 1;
  bool json_output = false;
  // verify
  std::string check = "starlike";
  std::optional<double> check_alpha;
  std::vector<double> radii;
  std::size_t angles = 720;
  // construct / bounds
  std::string phi = "koebe";
  std::string mu = "z";
  std::string emit;
  std::string kind = "growth";
  std::string a_coeffs;
  std::string b_coeffs;
  // trace
  double r = 0.999;
  std::size_t samples = 2048;
  // render
  std::string format = "svg";
  std::size_t circles = 12;
  std::size_t rays = 24;
  std::size_t curve_samples = 512;
  double r_max = 0.97;
  std::size_t resolution = 512;
  std::vector<double> viewport;
  // explore
  std::size_t trials = 100;
  std::size_t k_phi = 3;
  std::size_t k_mu = 2;
  double r_cover = 0.99;
  std::size_t cover_angles = 512;
  std::uint64_t seed = 1;
};

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline catalog::Params params(const Options& o) { return {o.alpha, {o.lambda_re, o.lambda_im}, o.p}; }

inline analysis::GridSpec grid(const Options& o) {
  analysis::GridSpec g = analysis::default_grid();
  if (!o.radii.empty()) g.radii = o.radii;
  g.angles = o.angles;
  return g;
}

inline json map_config(const Options& o) {
  return {{"map", o.map}, {"alpha", o.alpha}, {"lambda-re", o.lambda_re}, {"lambda-im", o.lambda_im}, {"p", o.p}};
}

/// Reads an argument that is either inline text or a path to a file.
inline std::string text_or_file(const std::string& s) {
  std::ifstream in(s);
  if (!in) return s;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const Options& o, const std::string& content, std::ostream& out) {
  if (o.out.empty()) {
    out << content;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write output file '" + o.out + "'");
  f << content;
  if (!f) throw UsageError("failed writing output file '" + o.out + "'");
}

inline std::string num(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << std::fixed << v;
  return s.str();
}

inline std::vector<cplx> parse_coefficient_list(const std::string& text) {
  std::vector<cplx> out;
  if (text.empty()) return out;
  const json j = json::parse(text_or_file(text));
  for (const auto& v : j) out.push_back(io::complex_from_json(v));
  return out;
}

inline int emit_report(const Options& o, json report, const std::string& text, std::ostream& out, bool pass) {
  report["pass"] = pass;
  if (o.json_output || !o.out.empty()) {
    write_output(o, report.dump(2) + "\n", out);
    if (!o.out.empty()) out << text;
  } else {
    out << "# config: " << report["config"].dump() << "\n" << text;
  }
  return pass ? exit_ok : exit_check_failed;
}

// Subcommands.

inline int cmd_catalog(const Options& o, bool map_given, std::ostream& out) {
  if (!map_given) {
    for (const auto& n : catalog::names()) out << n << "\n";
    return exit_ok;
  }
  const PlaneMap m = catalog::lookup(o.map, params(o));
  json j{{"config", map_config(o)}, {"label", label(m)}};
  j["singularities"] = io::to_json(singularities(m));
  std::visit(loghm::detail::overloaded{
                 [&](const LogHarmonicMap& lh) {
                   j["type"] = "log-harmonic";
                   const auto c = coeffs(lh, o.order);
                   j["a"] = io::to_json(c.a);
                   j["b"] = io::to_json(c.b);
                 },
                 [&](const PolyZZbarMap& p) {
                   j["type"] = "polynomial-z-zbar";
                   json t = json::array();
                   for (const auto& term : p.terms()) t.push_back({{"j", term.j}, {"k", term.k}, {"c", io::to_json(term.c)}});
                   j["terms"] = t;
                 },
                 [&](const AnalyticFn& f) {
                   j["type"] = "analytic";
                   j["taylor"] = io::to_json(f.taylor(o.order));
                 },
             },
             m);
  write_output(o, j.dump(2) + "\n", out);
  return exit_ok;
}

inline json construct_config(const Options& o) {
  return {{"phi", o.phi}, {"mu", o.mu}, {"order", o.order}, {"alpha", o.alpha}};
}

inline int cmd_construct(const Options& o, std::ostream& out) {
  const AnalyticFn phi = io::parse_phi(text_or_file(o.phi), o.alpha);
  const AnalyticFn mu = io::parse_mu(text_or_file(o.mu));
  const LogHarmonicMap m = shear::construct_series(phi, mu, o.order);
  const auto c = coeffs(m, o.order);
  json j{{"config", construct_config(o)},
         {"h", io::to_json(m.h().taylor(o.order))},
         {"g", io::to_json(m.g().taylor(o.order))},
         {"a", io::to_json(c.a)},
         {"b", io::to_json(c.b)}};
  const std::string doc = j.dump(2) + "\n";
  if (!o.emit.empty()) {
    std::ofstream f(o.emit);
    if (!f) throw UsageError("cannot write '" + o.emit + "'");
    f << doc;
  }
  if (o.emit.empty() || o.json_output) {
    out << doc;
  } else {
    out << "# config: " << j["config"].dump() << "\n";
    out << "n,re_a,im_a,re_b,im_b\n";
    for (std::size_t n = 1; n <= std::min<std::size_t>(o.order, 8); ++n)
      out << n << "," << num(c.a[n - 1].real(), 10) << "," << num(c.a[n - 1].imag(), 10) << ","
          << num(c.b[n - 1].real(), 10) << "," << num(c.b[n - 1].imag(), 10) << "\n";
  }
  return exit_ok;
}

inline int cmd_coeffs(const Options& o, std::ostream& out) {
  const PlaneMap m = catalog::lookup(o.map, params(o));
  json j{{"config", map_config(o)}};
  j["config"]["order"] = o.order;
  if (const auto* lh = std::get_if<LogHarmonicMap>(&m)) {
    const auto c = coeffs(*lh, o.order);
    j["h"] = io::to_json(lh->h().taylor(o.order));
    j["g"] = io::to_json(lh->g().taylor(o.order));
    j["a"] = io::to_json(c.a);
    j["b"] = io::to_json(c.b);
  } else if (const auto* f = std::get_if<AnalyticFn>(&m)) {
    j["taylor"] = io::to_json(f->taylor(o.order));
  } else {
    throw Error(Errc::unsupported_representation, "map '" + o.map + "' has no Taylor coefficients");
  }
  write_output(o, j.dump(2) + "\n", out);
  return exit_ok;
}

inline std::string margin_text(const analysis::MarginReport& r) {
  std::ostringstream s;
  s << std::left << std::setw(12) << "quantity" << r.quantity << "\n"
    << std::setw(12) << "min" << (r.evaluated ? num(r.min_value, 9) : "n/a") << "\n"
    << std::setw(12) << "argmin" << num(r.argmin.real(), 6) << (r.argmin.imag() < 0 ? "" : "+") << num(r.argmin.imag(), 6)
    << "i\n"
    << std::setw(12) << "violation" << num(r.max_violation, 9) << "\n"
    << std::setw(12) << "evaluated" << r.evaluated << "\n"
    << std::setw(12) << "skipped" << r.skipped_singular << "\n"
    << std::setw(12) << "unreliable" << r.unreliable << "\n"
    << std::setw(12) << "degenerate" << r.degenerate.size() << "\n";
  return s.str();
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const PlaneMap m = catalog::lookup(o.map, params(o));
  const analysis::GridSpec g = grid(o);
  const double order_alpha = o.check_alpha.value_or(o.map == "f_alpha" || o.map == "phi_alpha" ? o.alpha : 0.0);
  json config = map_config(o);
  config["check"] = o.check;
  config["check-alpha"] = order_alpha;
  config["radii"] = g.radii;
  config["angles"] = g.angles;
  config["workers"] = o.workers;

  if (o.check == "identity") {
    analysis::DeviationReport rep;
    if (const auto* poly = std::get_if<PolyZZbarMap>(&m)) {
      const PlaneMap phi = catalog::lambda_map({o.lambda_re, o.lambda_im}, 1);
      rep = analysis::convex_identity(*poly, phi, g);
    } else if (const auto* lh = std::get_if<LogHarmonicMap>(&m)) {
      const PlaneMap phi = o.map == "counterexample" ? catalog::halfplane() : associated_phi(*lh);
      rep = analysis::starlike_identity(*lh, phi, g);
    } else {
      rep = analysis::starlike_identity(m, m, g);
    }
    const bool pass = rep.evaluated > 0 && rep.max_deviation < 1e-9;
    std::ostringstream s;
    s << "quantity    " << rep.quantity << "\nmax_dev     " << std::scientific << rep.max_deviation << "\nevaluated   "
      << rep.evaluated << "\n";
    return emit_report(o, {{"config", config}, {"report", io::to_json(rep)}}, s.str(), out, pass);
  }

  auto run_check = [&](const analysis::GridSpec& gs) {
    if (o.check == "starlike") return analysis::starlike_margin(m, gs, order_alpha, o.workers);
    if (o.check == "convex") return analysis::convex_margin(m, gs, order_alpha, o.workers);
    if (o.check == "jacobian") return analysis::jacobian_margin(m, gs, o.workers);
    throw UsageError("unknown check '" + o.check + "' (starlike, convex, jacobian, identity)");
  };
  const analysis::MarginReport rep = run_check(g);
  json report{{"config", config}, {"report", io::to_json(rep)}};
  std::string text = margin_text(rep);
  if (rep.evaluated > 0 && rep.min_value < analysis::violation_threshold) {
    analysis::GridSpec dense = g;
    dense.angles *= 4;
    const auto confirm = run_check(dense);
    report["confirmation_4x"] = io::to_json(confirm);
    const bool confirmed = confirm.min_value < analysis::violation_threshold;
    report["candidate_violation"] = confirmed;
    text += std::string("candidate   ") + (confirmed ? "confirmed" : "not confirmed") + " on 4x angular grid\n";
  }
  return emit_report(o, report, text, out, rep.passed());
}

inline int cmd_table1(const Options& o, std::ostream& out) {
  std::ostringstream s;
  s << "r,theta,V\n";
  const double r = 8.0 / 9.0;
  for (double t : {std::numbers::pi / 4.0, std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0})
    s << num(r, 12) << "," << num(t, 12) << "," << num(analysis::V(r, t), 6) << "\n";
  write_output(o, s.str(), out);
  return exit_ok;
}

inline int cmd_bounds(const Options& o, std::ostream& out) {
  if (o.kind == "growth") {
    const AnalyticFn mu = io::parse_mu(text_or_file(o.mu));
    const LogHarmonicMap m = shear::construct_clh_quadrature(mu);
    const analysis::GridSpec g = grid(o);
    const auto rep = analysis::growth_distortion_certificate(m, g, o.workers);
    json config{{"kind", o.kind}, {"mu", o.mu}, {"radii", g.radii}, {"angles", g.angles}};
    std::ostringstream s;
    s << std::left << std::setw(8) << "bound" << std::setw(22) << "min_margin" << "min_relative_margin\n";
    for (std::size_t k = 0; k < 6; ++k)
      s << std::setw(8) << analysis::growth_quantities[k] << std::setw(22) << std::scientific << rep.min_margin[k]
        << rep.min_relative_margin[k] << "\n";
    return emit_report(o, {{"config", config}, {"report", io::to_json(rep)}}, s.str(), out, rep.pass);
  }
  if (o.kind == "coefficient") {
    LogCoefficients c;
    json config{{"kind", o.kind}, {"alpha", o.alpha}, {"order", o.order}};
    if (o.map == "construct") {
      c = coeffs(shear::construct_series(io::parse_phi(text_or_file(o.phi), o.alpha), io::parse_mu(text_or_file(o.mu)),
                                         o.order),
                 o.order);
      config["phi"] = o.phi;
      config["mu"] = o.mu;
    } else {
      const PlaneMap m = catalog::lookup(o.map, params(o));
      const auto* lh = std::get_if<LogHarmonicMap>(&m);
      if (!lh) throw Error(Errc::unsupported_representation, "coefficient bound needs a log-harmonic map");
      c = coeffs(*lh, o.order);
      config["map"] = o.map;
    }
    const auto cert = analysis::coeff_certificate(c, o.check_alpha.value_or(o.alpha));
    std::ostringstream s;
    s << "max n|a_n-b_n|/(2(1-alpha)) = " << num(cert.max_ratio, 12) << " at n = " << cert.argmax_n << "\n";
    return emit_report(o, {{"config", config}, {"report", io::to_json(cert)}}, s.str(), out, cert.pass);
  }
  if (o.kind == "sufficient") {
    const auto a = parse_coefficient_list(o.a_coeffs);
    const auto b = parse_coefficient_list(o.b_coeffs);
    const auto res = analysis::sufficient_starlike(a, b, o.alpha, grid(o));
    json report{{"holds", res.holds}, {"weighted_sum", res.weighted_sum}};
    if (res.margin) report["margin"] = io::to_json(*res.margin);
    std::ostringstream s;
    s << "sum n|a_n-b_n| = " << num(res.weighted_sum, 12) << (res.holds ? " <= " : " > ") << "1 - alpha\n";
    if (res.margin) s << margin_text(*res.margin);
    const bool pass = res.holds && (!res.margin || res.margin->passed());
    return emit_report(o, {{"config", {{"kind", o.kind}, {"alpha", o.alpha}, {"a", o.a_coeffs}, {"b", o.b_coeffs}}},
                           {"report", report}},
                       s.str(), out, pass);
  }
  throw UsageError("unknown bounds kind '" + o.kind + "' (growth, coefficient, sufficient)");
}

inline int cmd_trace(const Options& o, std::ostream& out) {
  const PlaneMap m = catalog::lookup(o.map, params(o));
  const auto pts = analysis::boundary_trace(m, o.r, o.samples);
  const double cover = analysis::covering_radius(m, o.r, o.samples);
  double min_re = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) min_re = std::min(min_re, p.w.real());
  json config = map_config(o);
  config["r"] = o.r;
  config["samples"] = o.samples;
  if (o.json_output) {
    json tr = json::array();
    for (const auto& p : pts) tr.push_back({p.theta, p.w.real(), p.w.imag()});
    write_output(o,
                 json{{"config", config}, {"min_re", min_re}, {"covering_proxy", cover}, {"trace", tr}}.dump(2) + "\n",
                 out);
    return exit_ok;
  }
  std::ostringstream s;
  s << "# config: " << config.dump() << "\n";
  s << "# min_re: " << num(min_re, 9) << "\n# covering_proxy: " << num(cover, 9) << "\n";
  s << "theta,re,im\n";
  for (const auto& p : pts) s << num(p.theta, 9) << "," << num(p.w.real(), 9) << "," << num(p.w.imag(), 9) << "\n";
  write_output(o, s.str(), out);
  return exit_ok;
}

inline int cmd_render(const Options& o, std::ostream& out) {
  const PlaneMap m = catalog::lookup(o.map, params(o));
  render::RenderSpec spec;
  spec.circles = o.circles;
  spec.rays = o.rays;
  spec.samples = o.curve_samples;
  spec.r_max = o.r_max;
  if (!o.viewport.empty()) {
    if (o.viewport.size() != 4 || !(o.viewport[0] < o.viewport[1] && o.viewport[2] < o.viewport[3]))
      throw UsageError("viewport needs xmin < xmax, ymin < ymax");
    spec.viewport = render::Viewport{o.viewport[0], o.viewport[1], o.viewport[2], o.viewport[3]};
  }
  json config = map_config(o);
  config["format"] = o.format;
  config["circles"] = o.circles;
  config["rays"] = o.rays;
  config["samples"] = o.curve_samples;
  config["r-max"] = o.r_max;
  if (o.format == "ppm") config["resolution"] = o.resolution;
  if (!o.viewport.empty()) config["viewport"] = o.viewport;
  Options target = o;
  if (o.format != "svg" && o.format != "ppm") throw UsageError("format must be svg or ppm");
  if (target.out.empty()) target.out = render::default_filename(label(m), o.r_max, o.format);
  const std::string doc = o.format == "svg" ? render::render_svg(m, spec)
                                            : render::render_raster(m, spec, o.resolution).to_ppm();
  write_output(target, doc, out);
  out << "# config: " << config.dump() << "\n";
  out << "wrote " << target.out << "\n";
  return exit_ok;
}

inline int cmd_explore(const Options& o, std::ostream& out) {
  analysis::ScanConfig cfg;
  cfg.trials = o.trials;
  cfg.k_phi = o.k_phi;
  cfg.k_mu = o.k_mu;
  cfg.order = o.order;
  cfg.r_cover = o.r_cover;
  cfg.cover_angles = o.cover_angles;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  const json config{{"trials", cfg.trials}, {"k-phi", cfg.k_phi},         {"k-mu", cfg.k_mu},
                    {"order", cfg.order},   {"r-cover", cfg.r_cover},     {"cover-angles", cfg.cover_angles},
                    {"seed", cfg.seed},     {"workers", cfg.workers}};
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw UsageError("cannot write output file '" + o.out + "'");
    sink = &file;
  }
  *sink << json{{"config", config}}.dump() << "\n";
  const auto rep = analysis::conjecture_scan(cfg, [&](const analysis::TrialResult& t) {
    *sink << io::to_json(t).dump() << "\n";
  });
  *sink << io::to_json(rep).dump() << "\n";
  return rep.clean() ? exit_ok : exit_check_failed;
}

/// Flag names present on the command line, for config-file precedence.
inline bool flag_given(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

/// Expands `--config file.json` into flags; explicit flags take precedence.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config file: ") + e.what());
  }
  std::vector<std::string> extra;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (flag_given(args, it.key())) continue;
    const json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) extra.push_back("--" + it.key());
      continue;
    }
    extra.push_back("--" + it.key());
    auto scalar = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    if (v.is_array()) {
      for (const auto& x : v) extra.push_back(scalar(x));
    } else {
      extra.push_back(scalar(v));
    }
  }
  // insert after the subcommand name so the options bind to it
  const std::size_t at = args.size() >= 2 ? 2 : args.size();
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
  return args;
}

}  // namespace detail

/**
 * Entry point. Exit codes: 0 success or all checks passed, 1 a checked
 * property failed or a conjecture candidate was found, 2 usage or input
 * error.
 */
inline int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Construct, verify and render univalent log-harmonic mappings of the unit disk", "loghm"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto add_map = [&](CLI::App* c) {
    c->add_option("--map", o.map, "catalog name (see `catalog`)");
    c->add_option("--alpha", o.alpha, "order alpha (f_alpha, phi_alpha, checks)");
    c->add_option("--lambda-re", o.lambda_re, "Re lambda for the lambda-map");
    c->add_option("--lambda-im", o.lambda_im, "Im lambda for the lambda-map");
    c->add_option("--p", o.p, "power p >= 1 in phi |z|^{2(p-1)}");
  };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--order", o.order, "series truncation order");
    c->add_option("--out", o.out, "output file");
    c->add_option("--workers", o.workers, "worker threads");
    c->add_flag("--json", o.json_output, "JSON output on stdout");
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--radii", o.radii, "grid radii in (0,1), comma separated")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    c->add_option("--angles", o.angles, "angles per radius");
  };

  auto* catalog_cmd = app.add_subcommand("catalog", "list catalog entries or describe one");
  add_map(catalog_cmd);
  add_common(catalog_cmd);

  auto* construct = app.add_subcommand("construct", "shear construction from phi and mu");
  construct->add_option("--phi", o.phi, "catalog phi name or Herglotz JSON (inline or file)");
  construct->add_option("--mu", o.mu, "0, z, z^k or Blaschke JSON (inline or file)");
  construct->add_option("--alpha", o.alpha, "alpha for phi_alpha");
  construct->add_option("--emit", o.emit, "write coefficients JSON here");
  add_common(construct);

  auto* coeffs_cmd = app.add_subcommand("coeffs", "Taylor and log-coefficients as JSON");
  add_map(coeffs_cmd);
  add_common(coeffs_cmd);

  auto* verify = app.add_subcommand("verify", "grid check of starlike/convex/jacobian margins or identities");
  add_map(verify);
  add_common(verify);
  add_grid(verify);
  verify->add_option("--check", o.check, "starlike | convex | jacobian | identity");
  verify->add_option("--check-alpha", o.check_alpha, "order used by the check (default: --alpha for f_alpha)");

  auto* table1 = app.add_subcommand("table1", "V(r, theta) of the non-convex example as CSV");
  table1->add_option("--out", o.out, "output file");

  auto* bounds = app.add_subcommand("bounds", "growth/distortion, coefficient or sufficient-condition certificates");
  add_map(bounds);
  add_common(bounds);
  add_grid(bounds);
  bounds->add_option("--kind", o.kind, "growth | coefficient | sufficient");
  bounds->add_option("--phi", o.phi, "phi for --map construct");
  bounds->add_option("--mu", o.mu, "dilatation (growth: C_Lh map with this mu)");
  bounds->add_option("--a", o.a_coeffs, "JSON list of a_n (sufficient)");
  bounds->add_option("--b", o.b_coeffs, "JSON list of b_n (sufficient)");
  bounds->add_option("--check-alpha", o.check_alpha, "order for the coefficient bound");

  auto* trace = app.add_subcommand("trace", "image of the circle |z| = r");
  add_map(trace);
  add_common(trace);
  trace->add_option("--r", o.r, "radius in (0,1)");
  trace->add_option("--samples,--M", o.samples, "number of angles");

  auto* render_cmd = app.add_subcommand("render", "SVG polar-grid picture or PPM mask of f(D)");
  add_map(render_cmd);
  add_common(render_cmd);
  render_cmd->add_option("--format", o.format, "svg | ppm");
  render_cmd->add_option("--circles", o.circles, "number of circles");
  render_cmd->add_option("--rays", o.rays, "number of rays");
  render_cmd->add_option("--samples", o.curve_samples, "samples per curve (>= 64)");
  render_cmd->add_option("--r-max", o.r_max, "largest radius (< 1)");
  render_cmd->add_option("--resolution", o.resolution, "raster width in pixels");
  render_cmd->add_option("--viewport", o.viewport, "xmin,xmax,ymin,ymax (default: auto)")
      ->delimiter(',')
      ->expected(4)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* explore = app.add_subcommand("explore", "Monte-Carlo scan of the coefficient and covering conjectures");
  add_common(explore);
  explore->add_option("--trials", o.trials, "number of trials");
  explore->add_option("--k-phi", o.k_phi, "Herglotz factors in phi");
  explore->add_option("--k-mu", o.k_mu, "Blaschke zeros in mu");
  explore->add_option("--r-cover", o.r_cover, "radius of the covering proxy");
  explore->add_option("--cover-angles", o.cover_angles, "angles for the covering proxy");
  explore->add_option("--seed", o.seed, "base seed (trial i uses seed + i)");
  // the conjecture scan truncates at n = 20 by default
  o.order = 20;

  std::vector<std::string> args;
  try {
    args = detail::expand_config(raw_args);
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  if (args.size() >= 2 && args[1] != "explore") o.order = default_order;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (*catalog_cmd) return detail::cmd_catalog(o, catalog_cmd->count("--map") > 0, out);
    if (*construct) return detail::cmd_construct(o, out);
    if (*coeffs_cmd) return detail::cmd_coeffs(o, out);
    if (*verify) return detail::cmd_verify(o, out);
    if (*table1) return detail::cmd_table1(o, out);
    if (*bounds) return detail::cmd_bounds(o, out);
    if (*trace) return detail::cmd_trace(o, out);
    if (*render_cmd) return detail::cmd_render(o, out);
    if (*explore) return detail::cmd_explore(o, out);
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace loghm::cli
