#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/grid.hpp"

namespace rlab {

struct FlowOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double escape_radius = 1.0 - 1e-12;
  std::size_t max_steps = 2'000'000;
};

/// Trajectory sample: ray parameter s, ray phase, value u and the error
/// estimate of the last accepted step. `escaped` marks the point where the
/// trajectory reached the escape radius (or could not be continued inside
/// the disk); it is the last point of such a run.
struct FlowPoint {
  double s = 0.0;
  double phase = 0.0;
  cplx u{};
  double local_error = 0.0;
  bool escaped = false;
};

/// Dormand-Prince 5(4) integration of the scalar complex ODE u' = rhs(u)
/// from u(0) = u0, reporting the state at the increasing checkpoints. The
/// state must stay below opts.escape_radius in modulus; an rhs that throws
/// DomainError rejects the step.
template <class Rhs>
std::vector<FlowPoint> integrate_dopri(Rhs&& rhs, cplx u0, const std::vector<double>& checkpoints, double phase,
                                       const FlowOptions& opts = {}) {
  // Butcher tableau
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;  // autonomous system

  std::vector<FlowPoint> out;
  out.push_back({0.0, phase, u0, 0.0, false});
  if (!(std::abs(u0) < opts.escape_radius)) {
    out.back().escaped = true;
    return out;
  }
  double s = 0.0;
  cplx u = u0;
  cplx k1 = rhs(u);
  double h = 1e-3;
  double last_err = 0.0;
  std::size_t steps = 0;
  for (const double target : checkpoints) {
    if (target < s) throw OutOfRange("checkpoints must be nondecreasing and nonnegative");
    while (s < target) {
      if (++steps > opts.max_steps) throw NoConvergence("ODE step budget exhausted");
      const bool last = s + h >= target;
      const double hh = last ? target - s : h;
      cplx k2, k3, k4, k5, k6, k7, un;
      bool ok = true;
      try {
        k2 = rhs(u + hh * (a21 * k1));
        k3 = rhs(u + hh * (a31 * k1 + a32 * k2));
        k4 = rhs(u + hh * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = rhs(u + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = rhs(u + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        un = u + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        if (!(std::abs(un) < 1.0)) throw DomainError("stage left the disk");
        k7 = rhs(un);
      } catch (const DomainError&) {
        ok = false;
      }
      double err_ratio = 0.0;
      double err_abs = 0.0;
      if (ok) {
        err_abs = std::abs(hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        const double scale = opts.atol + opts.rtol * std::max(std::abs(u), std::abs(un));
        err_ratio = err_abs / scale;
        ok = std::isfinite(err_ratio);
      }
      if (!ok) {
        h = 0.25 * hh;
        if (h < 1e-14 * std::max(1.0, s)) {
          out.push_back({s, phase, u, last_err, true});
          return out;
        }
        continue;
      }
      if (err_ratio <= 1.0) {
        s = last ? target : s + hh;
        u = un;
        k1 = k7;
        last_err = err_abs;
        if (!(std::abs(u) < opts.escape_radius)) {
          out.push_back({s, phase, u, last_err, true});
          return out;
        }
      }
      const double factor =
          err_ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_ratio, -0.2), 0.2, 5.0);
      // Keep the pre-clip step so short final segments do not shrink h.
      h = (last && err_ratio <= 1.0) ? std::max(h, hh * factor) : hh * factor;
    }
    if (target > 0.0) out.push_back({s, phase, u, last_err, false});
  }
  return out;
}

}  // namespace rlab
