#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "rlab/formulas.hpp"
#include "rlab/generator.hpp"
#include "rlab/parallel.hpp"
#include "rlab/report.hpp"
#include "rlab/resolvent.hpp"

namespace rlab {

namespace detail {

inline void require_above_r0(const GeneratorSpec& g, double r, const char* who) {
  const double s = r * g.q().real();
  if (!(s > r0()))
    throw OutOfRange(std::string(who) + " needs r Re q > r0 = " + std::to_string(r0()) +
                     " (got " + std::to_string(s) + ")");
}

// (1 + r p(z)) / (1 + r (p(z) + z p'(z))) at z = G_r(w).
inline cplx starlike_ratio(const GeneratorSpec& g, double r, cplx z) {
  const Jet p = g.herglotz().jet(z);
  return (1.0 + r * p.value) / (1.0 + r * (p.value + z * p.d1));
}

}  // namespace detail

/// S(w) = w G_r'(w) / G_r(w), evaluated through the Herglotz part at
/// z = G_r(w); S(0) = 1.
inline cplx starlike_functional(const GeneratorSpec& g, double r, cplx w, const SolverConfig& cfg = {}) {
  detail::require_centered(g, "starlike_functional");
  if (w == cplx(0.0)) return 1.0;
  return detail::starlike_ratio(g, r, resolve(g, r, w, cfg).value);
}

/// Same functional from the resolvent derivative, w G_r'(w) / G_r(w).
inline cplx starlike_functional_direct(const GeneratorSpec& g, double r, cplx w, const SolverConfig& cfg = {}) {
  if (w == cplx(0.0)) return 1.0;
  const ResolventEval e = resolve(g, r, w, cfg);
  return w * e.d1 / e.value;
}

/// Checks that S(w) lies in the closed disk centred at 1/(1-A^2) of radius
/// A/(1-A^2), A = A(r Re q), together with its consequences Re S >= alpha_r
/// and |arg S| <= pi beta_r / 2.
inline CheckReport check_starlike_disk(const GeneratorSpec& g, double r, const SamplingGrid& grid,
                                       const SolverConfig& cfg = {}, double slack = 1e-9) {
  detail::require_centered(g, "check_starlike_disk");
  detail::require_above_r0(g, r, "check_starlike_disk");
  const OrderReport o = orders(g.q(), r);
  const double center = 1.0 / (1.0 - o.A * o.A);
  const double radius = o.A / (1.0 - o.A * o.A);
  const auto ws = grid.points();
  std::vector<cplx> S(ws.size());
  parallel_for(ws.size(), [&](std::size_t i) { S[i] = starlike_functional(g, r, ws[i], cfg); });
  MarginTracker disk, re_part, arg_part;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    disk.update(radius - std::abs(S[i] - center), ws[i]);
    re_part.update(S[i].real() - o.alpha_star, ws[i]);
    arg_part.update(std::numbers::pi * o.beta_star / 2.0 - std::abs(std::arg(S[i])), ws[i]);
  }
  CheckReport rep;
  rep.check = "starlike_disk";
  rep.worst_margin = disk.worst();
  rep.witness = disk.witness();
  rep.pass = disk.worst() >= -slack && re_part.worst() >= -slack && arg_part.worst() >= -slack;
  rep.params["r"] = r;
  rep.params["q"] = {g.q().real(), g.q().imag()};
  rep.params["A"] = o.A;
  rep.params["center"] = center;
  rep.params["radius"] = radius;
  rep.params["alpha_r"] = o.alpha_star;
  rep.params["beta_r"] = o.beta_star;
  rep.params["re_margin"] = re_part.worst();
  rep.params["arg_margin"] = arg_part.worst();
  rep.params["slack"] = slack;
  return rep;
}

/// min over the grid of
///   Re( w G''/G' + 1 + 2 w conj(G) G' / (1 - |G|^2) ),
/// the differential form of hyperbolic convexity.
inline CheckReport check_hyperbolic_convexity(const GeneratorSpec& g, double r, const SamplingGrid& grid,
                                              const SolverConfig& cfg = {}, double slack = 1e-7) {
  detail::require_centered(g, "check_hyperbolic_convexity");
  const auto ws = grid.points();
  std::vector<double> val(ws.size());
  parallel_for(ws.size(), [&](std::size_t i) {
    const cplx w = ws[i];
    const ResolventEval e = resolve(g, r, w, cfg);
    const cplx G = e.value;
    val[i] = (w * e.d2 / e.d1 + 1.0 + 2.0 * w * std::conj(G) * e.d1 / (1.0 - std::norm(G))).real();
  });
  MarginTracker t;
  for (std::size_t i = 0; i < ws.size(); ++i) t.update(val[i], ws[i]);
  CheckReport rep;
  rep.check = "hyperbolic_convexity";
  rep.worst_margin = t.worst();
  rep.witness = t.witness();
  rep.pass = t.worst() >= -slack;
  rep.params["r"] = r;
  rep.params["slack"] = slack;
  return rep;
}

/// A_r(z, zeta) = 2 s |z| / (1 + s - 2 Re(z conj zeta) + |z|^2 (1 - s)), s = r Re q.
inline double lemma_A(double s, cplx z, cplx zeta) {
  const cplx u = z * std::conj(zeta);
  return 2.0 * s * std::abs(u) / (1.0 + s - 2.0 * u.real() + std::norm(u) * (1.0 - s));
}

/// B_r(z) = Re(1 + r p(z)), written as an integral against the atoms.
inline double lemma_B(const AtomicHerglotz& h, double re_q, double s, cplx z) {
  double sum = 0.0;
  for (const Atom& a : h.atoms) {
    const cplx u = z * std::polar(1.0, -a.angle);
    sum += a.mass * (1.0 + s - 2.0 * u.real() + std::norm(u) * (1.0 - s)) / (re_q * std::norm(1.0 - u));
  }
  return sum;
}

/// Upper bound of C_r(z) = |r z p'(z)| by the integral of 2r|z|/|1 - z conj zeta|^2.
inline double lemma_C_bound(const AtomicHerglotz& h, double r, cplx z) {
  double sum = 0.0;
  for (const Atom& a : h.atoms) {
    const cplx u = z * std::polar(1.0, -a.angle);
    sum += a.mass * 2.0 * r * std::abs(u) / std::norm(1.0 - u);
  }
  return sum;
}

/// Bounds used to confine S: on |z| <= 3/(1 + r Re q) and for every atom zeta,
///   A_r(z, zeta) <= A(r Re q)   and   |r z p'/(1 + r p)| <= C_r/B_r <= A(r Re q).
/// The grid's counts are used; its outer radius is replaced by 3/(1 + r Re q).
inline CheckReport check_lemma_bounds(const GeneratorSpec& g, double r, const SamplingGrid& grid,
                                      double slack = 1e-9) {
  detail::require_centered(g, "check_lemma_bounds");
  if (!g.herglotz().is_atomic())
    throw VariantUnsupported("check_lemma_bounds needs an atomic Herglotz measure");
  detail::require_above_r0(g, r, "check_lemma_bounds");
  const auto& h = g.herglotz().atomic_data();
  const double re_q = g.q().real();
  const double s = r * re_q;
  const double A = A_of_r(s);
  const double rad = 3.0 / (1.0 + s);
  const auto zs = grid.with_outer(rad).points();
  MarginTracker a_margin, ratio_margin, chain_margin, b_consistency;
  for (const cplx z : zs) {
    for (const Atom& atom : h.atoms) {
      if (atom.mass == 0.0) continue;
      a_margin.update(A - lemma_A(s, z, std::polar(1.0, atom.angle)), z);
    }
    const Jet p = g.herglotz().jet(z);
    const double B = lemma_B(h, re_q, s, z);
    const double C = std::abs(r * z * p.d1);
    const double Cb = lemma_C_bound(h, r, z);
    const double lhs = std::abs(r * z * p.d1 / (1.0 + r * p.value));
    b_consistency.update(-std::abs(B - (1.0 + r * p.value.real())) / std::max(1.0, std::abs(B)), z);
    ratio_margin.update(A - Cb / B, z);
    chain_margin.update(std::min(Cb - C, C / B - lhs), z);
  }
  MarginTracker worst;
  worst.merge(a_margin);
  worst.merge(ratio_margin);
  CheckReport rep;
  rep.check = "lemma_bounds";
  rep.worst_margin = worst.worst();
  rep.witness = worst.witness();
  rep.pass = a_margin.worst() >= -slack && ratio_margin.worst() >= -slack && chain_margin.worst() >= -slack &&
             b_consistency.worst() >= -1e-10;
  rep.params["r"] = r;
  rep.params["A"] = A;
  rep.params["disk_radius"] = rad;
  rep.params["A_r_margin"] = a_margin.worst();
  rep.params["ratio_margin"] = ratio_margin.worst();
  rep.params["chain_margin"] = chain_margin.worst();
  rep.params["B_identity_error"] = -b_consistency.worst();
  rep.params["slack"] = slack;
  return rep;
}

/// Membership F in A_{alpha,beta}: min Re((F(z)/z - beta)/alpha) + 1/2 over
/// the grid (at z = 0 the quotient is F'(0) = beta).
inline CheckReport subordination_membership(const std::function<cplx(cplx)>& F, const ClassParams& c,
                                            const SamplingGrid& grid, double slack = 1e-9) {
  MarginTracker t;
  for (const cplx z : grid.points()) {
    const cplx quotient = z == cplx(0.0) ? c.beta : F(z) / z;
    t.update(((quotient - c.beta) / c.alpha).real() + 0.5, z);
  }
  CheckReport rep;
  rep.check = "subordination";
  rep.worst_margin = t.worst();
  rep.witness = t.witness();
  rep.pass = t.worst() >= -slack;
  rep.params["alpha"] = {c.alpha.real(), c.alpha.imag()};
  rep.params["beta"] = {c.beta.real(), c.beta.imag()};
  rep.params["slack"] = slack;
  return rep;
}

/// Id + r f tested against A_{2r Re q, 1 + rq}.
inline CheckReport check_subordination(const GeneratorSpec& g, double r, const SamplingGrid& grid,
                                       double slack = 1e-9) {
  detail::require_centered(g, "check_subordination");
  const cplx q = g.q();
  const ClassParams c(2.0 * r * q.real(), 1.0 + r * q);
  CheckReport rep = subordination_membership([&](cplx z) { return z + r * g.eval(z).value; }, c, grid, slack);
  rep.params["r"] = r;
  return rep;
}

}  // namespace rlab
