#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rlab/rlab.hpp"

namespace {

using rlab::cplx;
using rlab::ordered_json;

// A generator file, "koebe", or "linear:<q>".
rlab::GeneratorSpec load_generator(const std::string& arg) {
  if (arg == "koebe") return rlab::GeneratorSpec::koebe();
  if (arg.rfind("linear:", 0) == 0) return rlab::GeneratorSpec::linear(rlab::parse_complex(arg.substr(7)));
  return rlab::generator_from_json(rlab::read_json_file(arg), arg);
}

ordered_json pair(cplx z) { return {z.real(), z.imag()}; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw rlab::ConfigError("--circles", "cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw rlab::ConfigError("--circles", "empty list");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rlab::ConfigError(path, "cannot write file");
  out << text;
}

ordered_json orders_json(cplx q, double r) {
  const rlab::OrderReport o = rlab::orders(q, r);
  ordered_json j;
  j["q"] = pair(q);
  j["r"] = r;
  j["A"] = o.A;
  j["r0"] = o.r0;
  j["alpha_star"] = o.alpha_star;
  j["beta_star"] = o.beta_star;
  j["gamma_r"] = o.gamma_r;
  j["kappa_r"] = o.kappa_r;
  j["kappa_informative"] = o.kappa_informative;
  j["k_qc"] = o.k_qc;
  j["sector_center"] = o.sector_center;
  j["sector_half_angle"] = o.sector_half_angle;
  const rlab::ResolventRadii radii = rlab::radii_resolvent(q, r);
  j["rho"] = radii.rho;
  j["rho1"] = radii.rho1;
  j["rho2"] = radii.rho2;
  j["rho3"] = radii.rho3;
  j["uniform_bound"] = rlab::uniform_bound(q, r);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear resolvents of semigroup generators on the unit disk"};
  app.require_subcommand(0, 1);
  bool list_checks = false;
  app.add_flag("--list-checks", list_checks, "List every registered suite check");

  std::string gen_arg, w_arg, q_arg, z_arg, config_path, circles_arg, out_prefix = "curves", output_dir;
  double r = 0.0, tol = 1e-13, t_end = 1.0, phase = 0.0;
  int angles = 256, samples = 20;

  auto* resolve = app.add_subcommand("resolve", "Evaluate G_r(w) with its first two derivatives");
  resolve->add_option("--gen", gen_arg, "Generator JSON file, 'koebe' or 'linear:<q>'")->required();
  resolve->add_option("--r", r, "Resolvent parameter r > 0")->required();
  resolve->add_option("--w", w_arg, "Point w, e.g. 0.3+0.1i")->required();
  resolve->add_option("--tol", tol, "Newton tolerance");

  auto* suite = app.add_subcommand("suite", "Run a suite of checks from a JSON config");
  suite->add_option("--config", config_path, "Suite config JSON")->required();
  suite->add_option("--output-dir", output_dir, "Override the config's output_dir");

  auto* render = app.add_subcommand("render", "Image curves G_r(|z| = c) as CSV and SVG");
  render->add_option("--gen", gen_arg, "Generator JSON file, 'koebe' or 'linear:<q>'")->required();
  render->add_option("--r", r, "Resolvent parameter r > 0")->required();
  render->add_option("--circles", circles_arg, "Comma-separated circle radii")->required();
  render->add_option("--angles", angles, "Points per curve");
  render->add_option("--out", out_prefix, "Output prefix for .csv and .svg");

  auto* r0cmd = app.add_subcommand("r0", "Print r0 by bisection and in closed form");

  auto* orders = app.add_subcommand("orders", "Print the order report for (q, r)");
  orders->add_option("--q", q_arg, "q = p(0)")->required();
  orders->add_option("--r", r, "Resolvent parameter r")->required();

  auto* flow = app.add_subcommand("flow", "Trajectory of the semigroup (or of the one generated by G_r) as CSV");
  flow->add_option("--gen", gen_arg, "Generator JSON file, 'koebe' or 'linear:<q>'")->required();
  flow->add_option("--z", z_arg, "Initial point")->required();
  flow->add_option("--t", t_end, "Final |t|");
  flow->add_option("--phase", phase, "arg t of the time ray");
  flow->add_option("--samples", samples, "Number of output checkpoints");
  auto* flow_r = flow->add_option("--r", r, "Use the flow generated by G_r instead of f");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_checks) {
      for (const auto& c : rlab::check_registry())
        std::printf("%-24s %-14s %s\n", c.name.c_str(),
                    c.scope == rlab::CheckInfo::Scope::per_r ? "per (gen, r)" : "per generator", c.description.c_str());
      return 0;
    }
    if (*resolve) {
      const auto g = load_generator(gen_arg);
      rlab::SolverConfig cfg;
      cfg.tol = tol;
      cfg.validate();
      const cplx w = rlab::parse_complex(w_arg);
      const auto e = rlab::resolve_any(g, r, w, cfg);
      ordered_json j;
      j["w"] = pair(w);
      j["r"] = r;
      j["value"] = pair(e.value);
      j["d1"] = pair(e.d1);
      j["d2"] = pair(e.d2);
      j["iterations"] = e.iterations;
      j["residual"] = e.residual;
      std::cout << rlab::dump_deterministic(j);
      return 0;
    }
    if (*suite) {
      auto cfg = rlab::load_suite_config(config_path);
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      const auto res = rlab::run_suite(cfg);
      std::cout << rlab::dump_deterministic(res.summary);
      return res.exit_status;
    }
    if (*render) {
      const auto g = load_generator(gen_arg);
      const auto curves = rlab::render_image_curves(g, r, parse_list(circles_arg), angles);
      write_text(out_prefix + ".csv", rlab::curves_csv(curves));
      write_text(out_prefix + ".svg", rlab::curves_svg(curves));
      std::cout << out_prefix << ".csv\n" << out_prefix << ".svg\n";
      return 0;
    }
    if (*r0cmd) {
      const auto res = rlab::find_r0();
      ordered_json j;
      j["bisection"] = res.bisection;
      j["closed_form"] = res.closed_form;
      j["difference"] = res.bisection - res.closed_form;
      std::cout << rlab::dump_deterministic(j);
      return 0;
    }
    if (*orders) {
      std::cout << rlab::dump_deterministic(orders_json(rlab::parse_complex(q_arg), r));
      return 0;
    }
    if (*flow) {
      const auto g = load_generator(gen_arg);
      const cplx z = rlab::parse_complex(z_arg);
      if (samples < 1) throw rlab::OutOfRange("--samples must be >= 1");
      std::vector<double> ts;
      for (int k = 1; k <= samples; ++k) ts.push_back(t_end * k / samples);
      std::vector<rlab::FlowPoint> traj;
      if (flow_r->count() > 0) {
        traj = rlab::resolvent_flow_along_ray(g, r, z, ts, phase);
      } else {
        traj = rlab::flow_along_ray(g, z, ts, phase);
      }
      std::cout << rlab::trajectory_csv(traj);
      return traj.back().escaped ? 3 : 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const rlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const rlab::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return 2;
  } catch (const rlab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
