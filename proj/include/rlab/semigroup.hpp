#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "rlab/formulas.hpp"
#include "rlab/generator.hpp"
#include "rlab/ode.hpp"
#include "rlab/parallel.hpp"
#include "rlab/report.hpp"
#include "rlab/resolvent.hpp"

namespace rlab {

/// Checkpoints used by the squeezing checks.
inline const std::vector<double>& default_squeeze_times() {
  static const std::vector<double> t{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  return t;
}

/// Flow of du/ds = -e^{i phase} f(u), u(0) = z, along the ray t = s e^{i phase}.
/// Returns the start point and one point per checkpoint; an escape ends the
/// trajectory with a flagged point.
inline std::vector<FlowPoint> flow_along_ray(const GeneratorSpec& g, cplx z, const std::vector<double>& checkpoints,
                                             double phase, const FlowOptions& opts = {}) {
  detail::require_open_disk(z, "flow_along_ray");
  const cplx dir = std::polar(1.0, phase);
  return integrate_dopri([&](cplx u) { return -dir * g.eval(u).value; }, z, checkpoints, phase, opts);
}

/// Real or complex-time flow up to t_end (or the given checkpoints). On the
/// real axis an escape means the generator is broken and throws; on other
/// rays it is reported as the final, flagged point.
inline std::vector<FlowPoint> evolve_ode(const GeneratorSpec& g, cplx z, double t_end, double phase = 0.0,
                                         const FlowOptions& opts = {}, std::vector<double> checkpoints = {}) {
  if (!(t_end >= 0.0)) throw OutOfRange("evolve_ode needs t_end >= 0");
  if (checkpoints.empty()) checkpoints = {t_end};
  auto traj = flow_along_ray(g, z, checkpoints, phase, opts);
  if (phase == 0.0 && traj.back().escaped)
    throw TrajectoryEscaped("real-time trajectory reached the unit circle at t = " + std::to_string(traj.back().s));
  return traj;
}

/// Flow of the semigroup generated by the resolvent, dv/ds = -e^{i phase} G_r(v).
inline std::vector<FlowPoint> resolvent_flow_along_ray(const GeneratorSpec& g, double r, cplx z,
                                                       const std::vector<double>& checkpoints, double phase,
                                                       const FlowOptions& opts = {}, const SolverConfig& cfg = {}) {
  detail::require_open_disk(z, "resolvent_flow_along_ray");
  const cplx dir = std::polar(1.0, phase);
  return integrate_dopri([&](cplx v) { return -dir * resolve(g, r, v, cfg).value; }, z, checkpoints, phase, opts);
}

inline std::vector<FlowPoint> evolve_resolvent_flow(const GeneratorSpec& g, double r, cplx z,
                                                    const std::vector<double>& checkpoints, const FlowOptions& opts = {},
                                                    const SolverConfig& cfg = {}) {
  auto traj = resolvent_flow_along_ray(g, r, z, checkpoints, 0.0, opts, cfg);
  if (traj.back().escaped) throw TrajectoryEscaped("resolvent flow reached the unit circle");
  return traj;
}

/// Exponential formula: n-fold iterate of G_{t/n} applied to z.
inline cplx evolve_expo(const GeneratorSpec& g, cplx z, double t, int n, const SolverConfig& cfg = {}) {
  if (n < 1) throw OutOfRange("evolve_expo needs n >= 1");
  if (!(t > 0.0)) throw OutOfRange("evolve_expo needs t > 0");
  detail::require_open_disk(z, "evolve_expo");
  const double step = t / n;
  cplx u = z;
  for (int k = 0; k < n; ++k) u = resolve(g, step, u, cfg).value;
  return u;
}

/// Squeezing |u(t,z)| <= |z| e^{-kappa t} for a flow given as
/// flow(z, times) -> trajectory, over every grid point and checkpoint.
template <class Flow>
CheckReport check_squeezing_flow(Flow&& flow, const std::vector<cplx>& zs, const std::vector<double>& times,
                                 double kappa, double slack, const char* name) {
  std::vector<MarginTracker> per(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) {
    const auto traj = flow(zs[i], times);
    for (std::size_t k = 1; k < traj.size(); ++k)
      per[i].update(std::abs(zs[i]) * std::exp(-kappa * traj[k].s) - std::abs(traj[k].u), zs[i]);
  });
  MarginTracker t;
  for (const auto& m : per) t.merge(m);
  CheckReport rep;
  rep.check = name;
  rep.worst_margin = t.worst();
  rep.witness = t.witness();
  rep.pass = t.worst() >= -slack;
  rep.params["kappa"] = kappa;
  rep.params["times"] = times;
  rep.params["slack"] = slack;
  return rep;
}

inline CheckReport check_squeezing(const GeneratorSpec& g, const SamplingGrid& grid,
                                   const std::vector<double>& times, double kappa, double slack = 1e-9,
                                   const FlowOptions& opts = {}) {
  detail::require_centered(g, "check_squeezing");
  return check_squeezing_flow(
      [&](cplx z, const std::vector<double>& ts) { return evolve_ode(g, z, ts.back(), 0.0, opts, ts); },
      grid.points(), times, kappa, slack, "squeezing");
}

/// Open sector {t : |arg t - center_arg| < half_angle}.
struct SectorSpec {
  double center_arg = 0.0;
  double half_angle = 0.0;

  SectorSpec() = default;
  SectorSpec(double center, double half) : center_arg(center), half_angle(half) {
    if (!(half >= 0.0 && half <= std::numbers::pi / 2.0 + 1e-15))
      throw OutOfRange("sector half angle must lie in [0, pi/2]");
  }

  double lower() const { return center_arg - half_angle; }
  double upper() const { return center_arg + half_angle; }
};

/// Sector of analytic extension allowed by inf/sup of arg p: t with
/// -pi/2 - arg_min < arg t < pi/2 - arg_max.
inline SectorSpec sector_from_arg_range(double arg_min, double arg_max) {
  const double lo = -std::numbers::pi / 2.0 - arg_min;
  const double hi = std::numbers::pi / 2.0 - arg_max;
  if (hi <= lo) return {0.5 * (lo + hi), 0.0};
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

struct ArgRange {
  double inf;
  double sup;
};

inline ArgRange arg_p_range(const GeneratorSpec& g, const SamplingGrid& grid) {
  ArgRange out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const cplx z : grid.points()) {
    const double a = std::arg(g.herglotz().jet(z).value);
    out.inf = std::min(out.inf, a);
    out.sup = std::max(out.sup, a);
  }
  return out;
}

/// Phases strictly inside the sector, `margin` away from its edges. A sector
/// narrower than twice the margin is probed along its bisector only.
inline std::vector<double> ray_phases(const SectorSpec& sector, int n_rays, double margin = 0.02) {
  std::vector<double> out;
  if (sector.half_angle <= 0.0 || n_rays < 1) return out;
  const double span = sector.half_angle - margin;
  if (span <= 0.0 || n_rays == 1) return {sector.center_arg};
  for (int k = 0; k < n_rays; ++k)
    out.push_back(sector.center_arg - span + 2.0 * span * k / (n_rays - 1));
  return out;
}

namespace detail {

template <class RayFlow>
CheckReport sector_report(RayFlow&& ray_flow, cplx z, const SectorSpec& sector, double s_end, int n_rays,
                          double margin, const char* name) {
  const auto phases = ray_phases(sector, n_rays, margin);
  std::vector<std::vector<FlowPoint>> trajs(phases.size());
  parallel_for(phases.size(), [&](std::size_t k) { trajs[k] = ray_flow(phases[k]); });
  CheckReport rep;
  rep.check = name;
  MarginTracker t;
  int escaped = 0;
  for (const auto& traj : trajs) {
    double peak = 0.0;
    for (const auto& p : traj) peak = std::max(peak, std::abs(p.u));
    if (traj.back().escaped) ++escaped;
    t.update(1.0 - peak, std::polar(1.0, traj.front().phase));
  }
  rep.worst_margin = t.seen() ? t.worst() : std::numeric_limits<double>::infinity();
  rep.witness = t.witness();
  rep.pass = escaped == 0;
  rep.params["z"] = {z.real(), z.imag()};
  rep.params["center_arg"] = sector.center_arg;
  rep.params["half_angle"] = sector.half_angle;
  rep.params["s_end"] = s_end;
  rep.params["rays"] = phases.size();
  rep.params["escaped_rays"] = escaped;
  return rep;
}

}  // namespace detail

/// Integrates the flow of f along rays strictly inside `sector`; passes iff
/// no ray escapes the disk before s_end. When `arg_grid` is given, the
/// empirical inf/sup of arg p over it is reported alongside.
inline CheckReport check_sector(const GeneratorSpec& g, cplx z, const SectorSpec& sector, double s_end, int n_rays,
                                const SamplingGrid* arg_grid = nullptr, double margin = 0.02,
                                const FlowOptions& opts = {}) {
  detail::require_open_disk(z, "check_sector");
  CheckReport rep = detail::sector_report(
      [&](double phase) { return flow_along_ray(g, z, {s_end}, phase, opts); }, z, sector, s_end,
      n_rays, margin, "sector");
  if (arg_grid) {
    const ArgRange range = arg_p_range(g, *arg_grid);
    rep.params["arg_p_inf"] = range.inf;
    rep.params["arg_p_sup"] = range.sup;
  }
  return rep;
}

/// Sector check for the semigroup generated by G_r, with the sector
/// |arg t - arg(1 + rq)| < pi gamma_r / 2.
inline CheckReport check_resolvent_sector(const GeneratorSpec& g, double r, cplx z, double s_end, int n_rays,
                                          double margin = 0.02, const FlowOptions& opts = {},
                                          const SolverConfig& cfg = {}) {
  detail::require_centered(g, "check_resolvent_sector");
  const OrderReport o = orders(g.q(), r);
  const SectorSpec sector(o.sector_center, o.sector_half_angle);
  CheckReport rep = detail::sector_report(
      [&](double phase) { return resolvent_flow_along_ray(g, r, z, {s_end}, phase, opts, cfg); },
      z, sector, s_end, n_rays, margin, "resolvent_sector");
  rep.params["r"] = r;
  rep.params["gamma_r"] = o.gamma_r;
  return rep;
}

/// Resolvent-as-generator checks on the grid:
///  (a) Re((1+rq) G_r(z)/z)^{1/(1-gamma_r)} >= 1/2,
///  (b) Re(G_r(z)/z) >= kappa(r),
///  (c) for real q, Re(G_r(z)/z) >= 1/(2(1+rq)),
/// then squeezing of the flow dv/dt = -G_r(v) with coefficient kappa(r) on
/// `flow_grid`. (a), (b) and the flow need r Re q >= 6; (c) needs real q.
inline CheckReport resolvent_generator_suite(const GeneratorSpec& g, double r, const SamplingGrid& grid,
                                             const SamplingGrid& flow_grid, const SolverConfig& cfg = {},
                                             double slack = 1e-9, const FlowOptions& opts = {}) {
  detail::require_centered(g, "resolvent_generator_suite");
  const cplx q = g.q();
  const double s = r * q.real();
  const bool real_q = q.imag() == 0.0;
  const bool kappa_part = s >= 6.0;
  if (!kappa_part && !real_q)
    throw OutOfRange("resolvent_generator_suite needs r Re q >= 6 or real q");
  const auto zs = grid.points();
  const auto vals = resolve_grid(g, r, zs, cfg);
  const cplx beta = 1.0 + r * q;
  OrderReport o{};
  if (kappa_part) o = orders(q, r);
  MarginTracker a, b, c;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const cplx ratio = vals[i].value / zs[i];
    if (kappa_part) {
      a.update(std::pow(beta * ratio, 1.0 / (1.0 - o.gamma_r)).real() - 0.5, zs[i]);
      b.update(ratio.real() - o.kappa_r, zs[i]);
    }
    if (real_q) c.update(ratio.real() - 1.0 / (2.0 * beta.real()), zs[i]);
  }
  CheckReport rep;
  rep.check = "resolvent_generator";
  MarginTracker worst;
  worst.merge(a);
  worst.merge(b);
  worst.merge(c);
  rep.params["r"] = r;
  rep.params["q"] = {q.real(), q.imag()};
  bool pass = true;
  if (kappa_part) {
    rep.params["A"] = o.A;
    rep.params["gamma_r"] = o.gamma_r;
    rep.params["kappa_r"] = o.kappa_r;
    rep.params["kappa_informative"] = o.kappa_informative;
    rep.params["margin_a"] = a.worst();
    rep.params["margin_b"] = b.worst();
    pass = a.worst() >= -slack && b.worst() >= -slack;
    const CheckReport flow = check_squeezing_flow(
        [&](cplx z, const std::vector<double>& ts) { return evolve_resolvent_flow(g, r, z, ts, opts, cfg); },
        flow_grid.points(), default_squeeze_times(), o.kappa_r, slack, "resolvent_flow_squeezing");
    rep.params["flow_margin"] = flow.worst_margin;
    rep.params["flow_witness"] = {flow.witness.real(), flow.witness.imag()};
    pass = pass && flow.pass;
    worst.update(flow.worst_margin, flow.witness);
  }
  if (real_q) {
    rep.params["margin_c"] = c.worst();
    pass = pass && c.worst() >= -slack;
  }
  rep.worst_margin = worst.worst();
  rep.witness = worst.witness();
  rep.pass = pass;
  rep.params["slack"] = slack;
  return rep;
}

/// sup |G_r| <= 3/(1 + r Re q) together with |G_r(z)| <= rho1 |z| / rho,
/// for every r in rs (each r Re q > 2).
inline CheckReport check_uniform_bound(const GeneratorSpec& g, const std::vector<double>& rs,
                                       const SamplingGrid& grid, const SolverConfig& cfg = {}, double slack = 1e-9) {
  detail::require_centered(g, "check_uniform_bound");
  const cplx q = g.q();
  for (const double r : rs)
    if (!(r * q.real() > 2.0)) throw OutOfRange("check_uniform_bound needs r Re q > 2 for every r");
  const auto zs = grid.points();
  MarginTracker worst;
  ordered_json per_r = ordered_json::array();
  for (const double r : rs) {
    const auto vals = resolve_grid(g, r, zs, cfg);
    const double bound = uniform_bound(q, r);
    const double schwarz = image_radius(q, r) / continuation_radius(q, r);
    MarginTracker m3, ms;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double a = std::abs(vals[i].value);
      max_abs = std::max(max_abs, a);
      m3.update(bound - a, zs[i]);
      ms.update(schwarz * std::abs(zs[i]) - a, zs[i]);
    }
    worst.merge(m3);
    worst.merge(ms);
    per_r.push_back({{"r", r}, {"max_abs", max_abs}, {"bound", bound}, {"margin", m3.worst()},
                     {"schwarz_margin", ms.worst()}});
  }
  CheckReport rep;
  rep.check = "uniform_bound";
  rep.worst_margin = worst.worst();
  rep.witness = worst.witness();
  rep.pass = worst.worst() >= -slack;
  rep.params["per_r"] = per_r;
  rep.params["slack"] = slack;
  return rep;
}

/// d(r) = max over D_{compact_radius} of |(1+rq) G_r(z) - z| must strictly
/// decrease along rs, and d(last) <= 0.05 compact_radius once the last
/// r Re q >= 1e3.
inline CheckReport check_normalized_convergence(const GeneratorSpec& g, const std::vector<double>& rs,
                                                double compact_radius, const SolverConfig& cfg = {},
                                                int radii = 16, int angles = 64) {
  detail::require_centered(g, "check_normalized_convergence");
  if (!(compact_radius > 0.0 && compact_radius <= 0.9))
    throw OutOfRange("compact radius must lie in (0, 0.9]");
  if (rs.empty()) throw OutOfRange("check_normalized_convergence needs at least one r");
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (!(rs[i] > rs[i - 1])) throw OutOfRange("rs must be increasing");
  const cplx q = g.q();
  SamplingGrid grid;
  grid.radii = radii;
  grid.angles = angles;
  grid.outer_radius = compact_radius;
  const auto zs = grid.points();
  std::vector<double> d;
  cplx last_witness{};
  for (const double r : rs) {
    const auto vals = resolve_grid(g, r, zs, cfg);
    double best = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double e = std::abs((1.0 + r * q) * vals[i].value - zs[i]);
      if (e > best) {
        best = e;
        last_witness = zs[i];
      }
    }
    d.push_back(best);
  }
  // Margin: smallest strict decrease, then the threshold slack. Values at
  // the rounding floor (the linear generator has d == 0) count as converged.
  constexpr double floor = 1e-12;
  double margin = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] <= floor && d[i - 1] <= floor) continue;
    margin = std::min(margin, d[i - 1] - d[i]);
    decreasing = decreasing && d[i] < d[i - 1];
  }
  const bool threshold_applies = rs.back() * q.real() >= 1e3;
  const double threshold = 0.05 * compact_radius;
  if (threshold_applies) margin = std::min(margin, threshold - d.back());
  CheckReport rep;
  rep.check = "normalized_convergence";
  rep.worst_margin = margin;
  rep.witness = last_witness;
  rep.pass = decreasing && (!threshold_applies || d.back() <= threshold);
  rep.params["rs"] = rs;
  rep.params["d"] = d;
  rep.params["compact_radius"] = compact_radius;
  rep.params["threshold_applies"] = threshold_applies;
  rep.params["noise_floor"] = floor;
  return rep;
}

}  // namespace rlab
