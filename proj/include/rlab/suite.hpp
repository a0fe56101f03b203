#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/formulas.hpp"
#include "rlab/generator.hpp"
#include "rlab/geometry.hpp"
#include "rlab/io.hpp"
#include "rlab/report.hpp"
#include "rlab/resolvent.hpp"
#include "rlab/semigroup.hpp"

namespace rlab {

struct NamedGenerator {
  std::string name;
  GeneratorSpec spec;
};

struct SuiteConfig {
  std::vector<NamedGenerator> generators;
  std::vector<double> r_values;
  SamplingGrid grid;
  SamplingGrid flow_grid{8, 32, 1.0 - 1e-3};  // trajectory-based checks
  double solver_tol = 1e-13;
  std::optional<double> check_slack;
  std::vector<std::string> checks;
  std::string output_dir = "suite_out";
  long long seed = 0;  // reserved; every check is deterministic

  SolverConfig solver() const {
    SolverConfig c;
    c.tol = solver_tol;
    return c;
  }

  double slack(double fallback) const { return check_slack.value_or(fallback); }
};

/// Per-check context handed to a registered check.
struct CheckContext {
  const SuiteConfig& config;
  const NamedGenerator& generator;
  std::optional<double> r;  // set for per-r checks
};

struct CheckInfo {
  enum class Scope { per_generator, per_r };

  std::string name;
  std::string description;
  Scope scope;
  // Returns an explanation when (generator, r) is outside the check's domain.
  std::function<std::optional<std::string>(const SuiteConfig&, const GeneratorSpec&, std::optional<double>)> precondition;
  std::function<CheckReport(const CheckContext&)> run;
};

namespace suite_detail {

inline std::optional<std::string> need_centered(const GeneratorSpec& g) {
  if (!g.centered()) return "requires tau = 0";
  return std::nullopt;
}

inline std::optional<std::string> need_above_r0(const GeneratorSpec& g, double r) {
  if (auto e = need_centered(g)) return e;
  const double s = r * g.q().real();
  if (!(s > rlab::r0()))
    return "requires r Re q > r0 = " + std::to_string(rlab::r0()) + " (r Re q = " + std::to_string(s) + ")";
  return std::nullopt;
}

// Constants the formulas consumed, so a report can be audited on its own.
inline void add_formula_inputs(CheckReport& rep, const GeneratorSpec& g, double r) {
  const cplx q = g.q();
  const double s = r * q.real();
  rep.params["alpha"] = 2.0 * s;
  rep.params["beta"] = {1.0 + r * q.real(), r * q.imag()};
  if (s > rlab::r0()) {
    const OrderReport o = orders(q, r);
    rep.params["A"] = o.A;
    rep.params["gamma_r"] = o.gamma_r;
    rep.params["kappa_r"] = o.kappa_r;
  }
}

}  // namespace suite_detail

/// Every check the suite runner knows, in a fixed order.
inline const std::vector<CheckInfo>& check_registry() {
  using namespace suite_detail;
  using Scope = CheckInfo::Scope;
  using Opt = std::optional<std::string>;
  static const std::vector<CheckInfo> registry = {
      {"validate_generator", "min Re p over the grid and f(tau) = 0", Scope::per_generator,
       [](const SuiteConfig&, const GeneratorSpec&, std::optional<double>) -> Opt { return std::nullopt; },
       [](const CheckContext& c) { return validate_generator(c.generator.spec, c.config.grid); }},
      {"univalence", "pairwise injectivity probe of G_r on D_1", Scope::per_r,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double>) -> Opt { return need_centered(g); },
       [](const CheckContext& c) { return univalence_probe(c.generator.spec, *c.r, 1.0, 12, c.config.solver()); }},
      {"starlike_disk", "w G_r'/G_r in the disk centred 1/(1-A^2), radius A/(1-A^2)", Scope::per_r,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double> r) -> Opt { return need_above_r0(g, *r); },
       [](const CheckContext& c) {
         return check_starlike_disk(c.generator.spec, *c.r, c.config.grid, c.config.solver(), c.config.slack(1e-9));
       }},
      {"hyperbolic_convexity", "differential inequality of hyperbolic convexity for G_r", Scope::per_r,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double>) -> Opt { return need_centered(g); },
       [](const CheckContext& c) {
         return check_hyperbolic_convexity(c.generator.spec, *c.r, c.config.grid, c.config.solver(),
                                           c.config.slack(1e-7));
       }},
      {"lemma_bounds", "A_r(z,zeta) <= A and |r z p'/(1+rp)| <= C_r/B_r <= A on |z| <= 3/(1+r Re q)", Scope::per_r,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double> r) -> Opt {
         if (!g.herglotz().is_atomic()) return "requires an atomic Herglotz measure";
         return need_above_r0(g, *r);
       },
       [](const CheckContext& c) {
         return check_lemma_bounds(c.generator.spec, *c.r, c.config.grid, c.config.slack(1e-9));
       }},
      {"subordination", "Id + r f belongs to A_{2r Re q, 1+rq}", Scope::per_r,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double>) -> Opt { return need_centered(g); },
       [](const CheckContext& c) { return check_subordination(c.generator.spec, *c.r, c.config.grid, c.config.slack(1e-9)); }},
      {"squeezing", "|u(t,z)| <= |z| exp(-kappa t) with kappa from a boundary scan of Re p", Scope::per_generator,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double>) -> Opt { return need_centered(g); },
       [](const CheckContext& c) {
         const double kappa = std::max(0.0, boundary_kappa(c.generator.spec.herglotz()));
         return check_squeezing(c.generator.spec, c.config.flow_grid, default_squeeze_times(), kappa,
                                c.config.slack(1e-9));
       }},
      {"sector", "flow along complex-time rays inside the sector allowed by arg p", Scope::per_generator,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double>) -> Opt { return need_centered(g); },
       [](const CheckContext& c) {
         const ArgRange range = arg_p_range(c.generator.spec, c.config.grid);
         const SectorSpec sector = sector_from_arg_range(range.inf, range.sup);
         return check_sector(c.generator.spec, 0.5, sector, 20.0, 5, &c.config.grid);
       }},
      {"resolvent_generator", "Re-bounds on G_r(z)/z and squeezing of the flow generated by G_r", Scope::per_r,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double> r) -> Opt {
         if (auto e = need_centered(g)) return e;
         if (!(*r * g.q().real() >= 6.0) && g.q().imag() != 0.0) return "requires r Re q >= 6 or real q";
         return std::nullopt;
       },
       [](const CheckContext& c) {
         return resolvent_generator_suite(c.generator.spec, *c.r, c.config.grid, c.config.flow_grid, c.config.solver(),
                                          c.config.slack(1e-9));
       }},
      {"resolvent_sector", "flow of G_r along rays inside |arg t - arg(1+rq)| < pi gamma_r/2", Scope::per_r,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double> r) -> Opt { return need_above_r0(g, *r); },
       [](const CheckContext& c) {
         return check_resolvent_sector(c.generator.spec, *c.r, 0.5, 20.0, 5, 0.02, {}, c.config.solver());
       }},
      {"uniform_bound", "sup |G_r| <= 3/(1 + r Re q) for every r", Scope::per_generator,
       [](const SuiteConfig& cfg, const GeneratorSpec& g, std::optional<double>) -> Opt {
         if (auto e = need_centered(g)) return e;
         for (double r : cfg.r_values)
           if (!(r * g.q().real() > 2.0)) return "requires r Re q > 2 for every r (r = " + std::to_string(r) + ")";
         return std::nullopt;
       },
       [](const CheckContext& c) {
         return check_uniform_bound(c.generator.spec, c.config.r_values, c.config.grid, c.config.solver(),
                                    c.config.slack(1e-9));
       }},
      {"normalized_convergence", "(1+rq) G_r -> Id on |z| <= 0.9 along increasing r", Scope::per_generator,
       [](const SuiteConfig&, const GeneratorSpec& g, std::optional<double>) -> Opt { return need_centered(g); },
       [](const CheckContext& c) {
         return check_normalized_convergence(c.generator.spec, c.config.r_values, 0.9, c.config.solver());
       }},
  };
  return registry;
}

inline const CheckInfo* find_check(const std::string& name) {
  for (const auto& c : check_registry())
    if (c.name == name) return &c;
  return nullptr;
}

namespace suite_detail {

using json = nlohmann::json;

inline int positive_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw ConfigError(path, "expected an integer >= 1");
  return j.get<int>();
}

inline SamplingGrid parse_grid(const json& j, const std::string& path, SamplingGrid g) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("radii")) g.radii = positive_int(j["radii"], path + ".radii");
  if (j.contains("angles")) g.angles = positive_int(j["angles"], path + ".angles");
  if (j.contains("outer_radius")) {
    if (!j["outer_radius"].is_number()) throw ConfigError(path + ".outer_radius", "expected a number");
    g.outer_radius = j["outer_radius"].get<double>();
  }
  if (!(g.outer_radius > 0.0 && g.outer_radius < 1.0)) throw ConfigError(path + ".outer_radius", "must lie in (0, 1)");
  return g;
}

}  // namespace suite_detail

/// Parses a suite document. Generator entries are inline generator objects
/// (optionally with "name") or {"name", "file"} with a path relative to
/// `base_dir`. Every (generator, r, check) combination is validated against
/// the check's precondition here, before anything runs.
inline SuiteConfig suite_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  using namespace suite_detail;
  if (!j.is_object()) throw ConfigError("", "suite config must be an object");
  SuiteConfig cfg;
  const json& gens = j.contains("generators") ? j["generators"] : json();
  if (!gens.is_array() || gens.empty()) throw ConfigError("generators", "expected a non-empty array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string path = "generators[" + std::to_string(i) + "]";
    const json& e = gens[i];
    if (!e.is_object()) throw ConfigError(path, "expected an object");
    std::string name = "gen" + std::to_string(i);
    if (e.contains("name")) {
      if (!e["name"].is_string()) throw ConfigError(path + ".name", "expected a string");
      name = e["name"].get<std::string>();
    }
    if (e.contains("file")) {
      if (!e["file"].is_string()) throw ConfigError(path + ".file", "expected a string");
      const auto file = base_dir / e["file"].get<std::string>();
      cfg.generators.push_back({name, generator_from_json(read_json_file(file.string()), path)});
    } else {
      cfg.generators.push_back({name, generator_from_json(e, path)});
    }
  }
  const json& rs = j.contains("r_values") ? j["r_values"] : json();
  if (!rs.is_array() || rs.empty()) throw ConfigError("r_values", "expected a non-empty array");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!rs[i].is_number() || !(rs[i].get<double>() > 0.0))
      throw ConfigError("r_values[" + std::to_string(i) + "]", "expected a positive number");
    cfg.r_values.push_back(rs[i].get<double>());
  }
  std::sort(cfg.r_values.begin(), cfg.r_values.end());
  cfg.r_values.erase(std::unique(cfg.r_values.begin(), cfg.r_values.end()), cfg.r_values.end());
  if (j.contains("grid")) cfg.grid = parse_grid(j["grid"], "grid", cfg.grid);
  cfg.flow_grid.outer_radius = cfg.grid.outer_radius;
  if (j.contains("flow_grid")) cfg.flow_grid = parse_grid(j["flow_grid"], "flow_grid", cfg.flow_grid);
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    if (t.contains("solver")) {
      if (!t["solver"].is_number() || !(t["solver"].get<double>() > 0.0))
        throw ConfigError("tolerances.solver", "expected a positive number");
      cfg.solver_tol = t["solver"].get<double>();
    }
    if (t.contains("check_slack")) {
      if (!t["check_slack"].is_number() || !(t["check_slack"].get<double>() >= 0.0))
        throw ConfigError("tolerances.check_slack", "expected a nonnegative number");
      cfg.check_slack = t["check_slack"].get<double>();
    }
  }
  const json& checks = j.contains("checks") ? j["checks"] : json();
  if (!checks.is_array() || checks.empty()) throw ConfigError("checks", "expected a non-empty array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string path = "checks[" + std::to_string(i) + "]";
    if (!checks[i].is_string()) throw ConfigError(path, "expected a string");
    const std::string name = checks[i].get<std::string>();
    if (!find_check(name)) throw ConfigError(path, "unknown check '" + name + "' (see --list-checks)");
    cfg.checks.push_back(name);
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw ConfigError("seed", "expected an integer");
    cfg.seed = j["seed"].get<long long>();
  }
  for (std::size_t c = 0; c < cfg.checks.size(); ++c) {
    const CheckInfo& info = *find_check(cfg.checks[c]);
    for (std::size_t gi = 0; gi < cfg.generators.size(); ++gi) {
      const auto& g = cfg.generators[gi];
      const auto fail = [&](const std::string& why, std::optional<double> r) {
        std::string where = "checks[" + std::to_string(c) + "] '" + info.name + "' on generators[" +
                            std::to_string(gi) + "] '" + g.name + "'";
        if (r) where += " with r = " + std::to_string(*r);
        throw ConfigError(where, why);
      };
      if (info.scope == CheckInfo::Scope::per_generator) {
        if (auto e = info.precondition(cfg, g.spec, std::nullopt)) fail(*e, std::nullopt);
      } else {
        for (double r : cfg.r_values)
          if (auto e = info.precondition(cfg, g.spec, r)) fail(*e, r);
      }
    }
  }
  return cfg;
}

inline SuiteConfig load_suite_config(const std::string& path) {
  return suite_config_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

struct SuiteResult {
  int exit_status = 0;  // 0 all pass, 1 check failure, 3 numerical failure
  int total = 0;
  int passed = 0;
  std::vector<std::string> files;
  ordered_json summary;
};

namespace suite_detail {

inline std::string format_r(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", r);
  return buf;
}

inline std::string sanitize(std::string s) {
  for (char& ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) ch = '_';
  return s;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string(), "cannot write file");
  out << text;
}

}  // namespace suite_detail

/// Runs every requested check for every (generator, r) pair, writing one
/// JSON report per check and summary.json into config.output_dir.
inline SuiteResult run_suite(const SuiteConfig& config) {
  using namespace suite_detail;
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  SuiteResult result;
  bool numerical_failure = false;
  struct Worst {
    bool set = false;
    double margin = 0.0;
    std::string check, generator, file;
    cplx witness;
  } worst;
  int index = 0;
  ordered_json listing = ordered_json::array();
  const auto run_one = [&](const CheckInfo& info, const NamedGenerator& g, std::optional<double> r) {
    CheckReport rep;
    try {
      rep = info.run(CheckContext{config, g, r});
    } catch (const Error& e) {
      rep = CheckReport{};
      rep.pass = false;
      rep.worst_margin = -std::numeric_limits<double>::infinity();
      rep.params["error"] = e.what();
      numerical_failure = true;
    }
    rep.check = info.name;
    ordered_json j;
    j["check"] = info.name;
    j["pass"] = rep.pass;
    j["worst_margin"] = rep.worst_margin;
    j["witness"] = {rep.witness.real(), rep.witness.imag()};
    ordered_json params;
    params["generator"] = g.name;
    params["generator_spec"] = generator_to_json(g.spec);
    if (r) {
      params["r"] = *r;
      CheckReport tmp;
      if (g.spec.centered()) {
        add_formula_inputs(tmp, g.spec, *r);
        for (const auto& [k, v] : tmp.params.items()) params[k] = v;
      }
    }
    for (const auto& [k, v] : rep.params.items()) params[k] = v;
    j["params"] = params;
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%03d_", index++);
    std::string file = std::string(prefix) + info.name + "__" + sanitize(g.name);
    if (r) file += "__r" + sanitize(format_r(*r));
    file += ".json";
    write_file(fs::path(config.output_dir) / file, dump_deterministic(j));
    result.files.push_back(file);
    ++result.total;
    if (rep.pass) ++result.passed;
    if (!worst.set || rep.worst_margin < worst.margin) {
      worst = {true, rep.worst_margin, info.name, g.name, file, rep.witness};
    }
    listing.push_back({{"file", file}, {"check", info.name}, {"pass", rep.pass}});
  };
  for (const std::string& name : config.checks) {
    const CheckInfo& info = *find_check(name);
    for (const auto& g : config.generators) {
      if (info.scope == CheckInfo::Scope::per_generator)
        run_one(info, g, std::nullopt);
      else
        for (double r : config.r_values) run_one(info, g, r);
    }
  }
  ordered_json summary;
  summary["total"] = result.total;
  summary["passed"] = result.passed;
  summary["failed"] = result.total - result.passed;
  summary["worst"] = {{"check", worst.check},
                      {"generator", worst.generator},
                      {"file", worst.file},
                      {"margin", worst.margin},
                      {"witness", {worst.witness.real(), worst.witness.imag()}}};
  summary["reports"] = listing;
  write_file(fs::path(config.output_dir) / "summary.json", dump_deterministic(summary));
  result.summary = summary;
  result.exit_status = numerical_failure ? 3 : (result.passed == result.total ? 0 : 1);
  return result;
}

/// Image of a circle (or a reference circle) as a closed polyline.
struct ImageCurve {
  std::string label;
  std::vector<cplx> points;
};

/// Images G_r(c e^{i phi}) of the circles |z| = c with reference circles
/// rho1, rho2, rho3 and 3/(1 + r Re q) (the first three need r Re q > 2).
/// Each curve has `angles` points sweeping [0, 2 pi], so it closes on itself.
inline std::vector<ImageCurve> render_image_curves(const GeneratorSpec& g, double r,
                                                   const std::vector<double>& circle_radii, int angles,
                                                   const SolverConfig& cfg = {}) {
  if (angles < 2) throw OutOfRange("render needs at least 2 angles");
  const cplx q = g.q();
  const bool continued = g.centered() && r * q.real() > 2.0;
  const double limit = continued ? continuation_radius(q, r) * (1.0 - kContinuationMargin) : 1.0;
  for (double c : circle_radii)
    if (!(c > 0.0 && c < limit))
      throw RadiusExceeded("circle radius " + std::to_string(c) + " must lie in (0, " + std::to_string(limit) + ")");
  std::vector<ImageCurve> out;
  const auto circle = [&](const std::string& label, double radius, bool image) {
    ImageCurve curve{label, {}};
    curve.points.resize(static_cast<std::size_t>(angles));
    parallel_for(curve.points.size(), [&](std::size_t k) {
      const cplx z = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / (angles - 1));
      curve.points[k] = image ? resolve_any(g, r, z, cfg).value : z;
    });
    out.push_back(std::move(curve));
  };
  for (double c : circle_radii) circle("image:" + suite_detail::format_r(c), c, true);
  if (continued) {
    const ResolventRadii radii = radii_resolvent(q, r);
    circle("ref:rho1", radii.rho1, false);
    circle("ref:rho2", radii.rho2, false);
    circle("ref:uniform_bound", uniform_bound(q, r), false);
  }
  if (g.centered()) circle("ref:rho3", rho3(q, r), false);
  return out;
}

inline std::string curves_csv(const std::vector<ImageCurve>& curves) {
  std::string out = "label,index,re,im\n";
  char buf[128];
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%zu,%.17g,%.17g\n", k, c.points[k].real(), c.points[k].imag());
      out += c.label;
      out += buf;
    }
  return out;
}

/// Raw SVG polylines, y axis flipped so the picture matches the complex plane.
inline std::string curves_svg(const std::vector<ImageCurve>& curves, double size = 800.0) {
  double extent = 0.0;
  for (const auto& c : curves)
    for (const cplx& p : c.points) extent = std::max({extent, std::abs(p.real()), std::abs(p.imag())});
  if (extent == 0.0) extent = 1.0;
  extent *= 1.05;
  const double scale = size / (2.0 * extent);
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  char buf[96];
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  std::size_t k = 0;
  for (const auto& c : curves) {
    const bool ref = c.label.rfind("ref:", 0) == 0;
    svg << "  <polyline data-label=\"" << c.label << "\" fill=\"none\" stroke=\""
        << (ref ? "#888888" : palette[k++ % 6]) << "\" stroke-width=\"1\"" << (ref ? " stroke-dasharray=\"4 3\"" : "")
        << " points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.4f,%.4f", i ? " " : "", size / 2.0 + scale * c.points[i].real(),
                    size / 2.0 - scale * c.points[i].imag());
      svg << buf;
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rlab
