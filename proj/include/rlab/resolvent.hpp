#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/formulas.hpp"
#include "rlab/generator.hpp"
#include "rlab/parallel.hpp"
#include "rlab/report.hpp"

namespace rlab {

struct SolverConfig {
  double tol = 1e-13;
  int max_iter = 64;
  int continuation_steps = 16;

  void validate() const {
    if (!(tol > 0.0)) throw OutOfRange("solver tol must be positive");
    if (max_iter < 1) throw OutOfRange("solver max_iter must be >= 1");
    if (continuation_steps < 1) throw OutOfRange("continuation_steps must be >= 1");
  }
};

/// G_r(w) and its first two derivatives with solver diagnostics.
struct ResolventEval {
  cplx value;
  cplx d1;
  cplx d2;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

// Radius of the closed disk known to contain every value of G_r on its
// domain: rho1(r) once r Re q > 2, the unit disk otherwise. Newton damping
// keeps iterates inside it.
inline double damping_radius(const GeneratorSpec& g, double r) {
  if (g.centered() && r * g.q().real() > 2.0) return image_radius(g.q(), r);
  return 1.0;
}

inline bool inside_damping(cplx z, double bound) {
  const double a = std::abs(z);
  return std::isfinite(a) && (bound < 1.0 ? a <= bound : a < 1.0);
}

struct NewtonOutcome {
  cplx z;
  Jet f;
  int iterations;
  double residual;
};

// Newton on z + r f(z) = w from z0, damped by step halving (at most 40
// times) so that iterates stay in the a priori disk.
inline NewtonOutcome newton(const GeneratorSpec& g, double r, cplx w, cplx z0, double bound,
                            const SolverConfig& cfg) {
  const double tol = cfg.tol * std::max(1.0, std::abs(w));
  if (!inside_damping(z0, bound)) z0 *= 0.5 * bound / std::max(std::abs(z0), 1e-300);
  cplx z = z0;
  for (int it = 0; it <= cfg.max_iter; ++it) {
    const Jet f = g.eval(z);
    const cplx F = z + r * f.value - w;
    const double res = std::abs(F);
    if (res <= tol) return {z, f, it, res};
    if (it == cfg.max_iter) break;
    const cplx dz = F / (1.0 + r * f.d1);
    cplx next = z - dz;
    double lambda = 1.0;
    int halvings = 0;
    while (!inside_damping(next, bound) && halvings < 40) {
      lambda *= 0.5;
      next = z - lambda * dz;
      ++halvings;
    }
    if (!inside_damping(next, bound))
      throw IterateEscaped("Newton iterate left the disk of radius " + std::to_string(bound));
    z = next;
  }
  throw NoConvergence("Newton did not reach tol " + std::to_string(cfg.tol) + " in " +
                      std::to_string(cfg.max_iter) + " iterations");
}

inline ResolventEval finish(const NewtonOutcome& n, double r, int iterations) {
  ResolventEval out;
  out.value = n.z;
  out.d1 = 1.0 / (1.0 + r * n.f.d1);
  out.d2 = -r * n.f.d2 * out.d1 * out.d1 * out.d1;
  out.iterations = iterations;
  out.residual = n.residual;
  return out;
}

inline cplx initial_guess(const GeneratorSpec& g, double r, cplx w) {
  if (g.centered()) return w / (1.0 + r * g.q());
  if (std::abs(g.tau()) < 1.0) {
    const cplx t = g.tau();
    return t + (w - t) / (1.0 + r * g.eval(t).d1);
  }
  return w;
}

// Homotopy in w along the segment [w_from, w_to], warm-starting each
// segment with the tangent predictor z + G_r'(w) dw. Failed segments are
// bisected up to depth 12.
inline ResolventEval continue_along(const GeneratorSpec& g, double r, cplx w_from, ResolventEval start,
                                    cplx w_to, double bound, const SolverConfig& cfg) {
  int total = start.iterations;
  ResolventEval cur = start;
  cplx w_cur = w_from;
  const int steps = cfg.continuation_steps;
  for (int k = 1; k <= steps; ++k) {
    const cplx target = w_from + (w_to - w_from) * (static_cast<double>(k) / steps);
    int depth = 0;
    while (true) {
      const cplx dw = target - w_cur;
      try {
        const NewtonOutcome n = newton(g, r, target, cur.value + cur.d1 * dw, bound, cfg);
        total += n.iterations;
        cur = finish(n, r, total);
        w_cur = target;
        break;
      } catch (const NumericalError&) {
        if (++depth > 12) throw;
        // Retreat: solve at the midpoint, then retry the target.
        const cplx mid = w_cur + 0.5 * dw;
        const NewtonOutcome n = newton(g, r, mid, cur.value + cur.d1 * 0.5 * dw, bound, cfg);
        total += n.iterations;
        cur = finish(n, r, total);
        w_cur = mid;
      }
    }
  }
  return cur;
}

}  // namespace detail

/// Solves z + r f(z) = w for the resolvent value z = G_r(w), |w| < 1.
/// Generators with tau != 0 are accepted but experimental.
inline ResolventEval resolve(const GeneratorSpec& g, double r, cplx w, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (!(r > 0.0) || !std::isfinite(r)) throw OutOfRange("resolvent parameter r must be positive");
  detail::require_open_disk(w, "resolve");
  const double bound = detail::damping_radius(g, r);
  try {
    const auto n = detail::newton(g, r, w, detail::initial_guess(g, r, w), bound, cfg);
    return detail::finish(n, r, n.iterations);
  } catch (const NumericalError&) {
    // fall through to continuation from the fixed point
  }
  cplx w0 = g.centered() ? cplx(0.0) : (std::abs(g.tau()) < 1.0 ? g.tau() : cplx(0.0));
  const auto n0 = detail::newton(g, r, w0, detail::initial_guess(g, r, w0), bound, cfg);
  return detail::continue_along(g, r, w0, detail::finish(n0, r, n0.iterations), w, bound, cfg);
}

/// Margin kept inside the continuation disk D_rho(r).
inline constexpr double kContinuationMargin = 1e-6;

/// Analytic continuation of G_r to |w| < rho(r) (needs tau = 0 and
/// r Re q > 2) by homotopy along the radius [0, w].
inline ResolventEval resolve_continued(const GeneratorSpec& g, double r, cplx w, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (!g.centered()) throw OutOfRange("continued resolvent needs tau = 0");
  if (!(r > 0.0)) throw OutOfRange("resolvent parameter r must be positive");
  const double rho = continuation_radius(g.q(), r);
  if (!(std::abs(w) < rho * (1.0 - kContinuationMargin)))
    throw RadiusExceeded("|w| = " + std::to_string(std::abs(w)) + " is not below rho(r) = " + std::to_string(rho));
  if (std::abs(w) < 1.0) return resolve(g, r, w, cfg);
  const double bound = detail::damping_radius(g, r);
  const cplx w0 = w * (0.5 / std::abs(w));
  const ResolventEval start = resolve(g, r, w0, cfg);
  return detail::continue_along(g, r, w0, start, w, bound, cfg);
}

/// Resolvent on the unit disk or, past it, on the continuation disk.
inline ResolventEval resolve_any(const GeneratorSpec& g, double r, cplx w, const SolverConfig& cfg = {}) {
  if (std::abs(w) < 1.0) return resolve(g, r, w, cfg);
  return resolve_continued(g, r, w, cfg);
}

/// Evaluates G_r on the grid in grid order.
inline std::vector<ResolventEval> resolve_grid(const GeneratorSpec& g, double r, const std::vector<cplx>& ws,
                                               const SolverConfig& cfg = {}) {
  std::vector<ResolventEval> out(ws.size());
  parallel_for(ws.size(), [&](std::size_t i) { out[i] = resolve_any(g, r, ws[i], cfg); });
  return out;
}

/// Brute-force injectivity probe on an n x n polar grid in D_R: reports
/// min_{i != j} |G(w_i) - G(w_j)| / |w_i - w_j|, passing iff positive.
inline CheckReport univalence_probe(const GeneratorSpec& g, double r, double R, int n,
                                    const SolverConfig& cfg = {}) {
  if (n < 1) throw OutOfRange("univalence probe needs n >= 1");
  if (!(R > 0.0)) throw OutOfRange("univalence probe needs R > 0");
  const double limit = (g.centered() && r * g.q().real() > 2.0) ? continuation_radius(g.q(), r) : 1.0;
  if (R > limit) throw RadiusExceeded("univalence probe radius exceeds the resolvent domain");
  std::vector<cplx> ws;
  ws.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      ws.push_back(std::polar(R * (i + 0.5) / n, 2.0 * std::numbers::pi * j / n));
  const auto vals = resolve_grid(g, r, ws, cfg);
  CheckReport rep;
  rep.check = "univalence";
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (std::size_t j = i + 1; j < ws.size(); ++j) {
      const double ratio = std::abs(vals[i].value - vals[j].value) / std::abs(ws[i] - ws[j]);
      if (ratio < best) {
        best = ratio;
        rep.witness = ws[i];
      }
    }
  rep.worst_margin = best;
  rep.pass = best > 0.0;
  rep.params["r"] = r;
  rep.params["R"] = R;
  rep.params["n"] = n;
  rep.params["pairs"] = ws.size() * (ws.size() - 1) / 2;
  return rep;
}

}  // namespace rlab
