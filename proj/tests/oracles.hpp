#pragma once

// Independent reference values. Nothing here calls the library's solvers.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;

inline std::array<cplx, 2> quadratic_roots(cplx a, cplx b, cplx c) {
  if (std::abs(a) == 0.0) return {-c / b, -c / b};
  const cplx d = std::sqrt(b * b - 4.0 * a * c);
  // avoid cancellation
  const cplx qq = -0.5 * (b + (std::real(std::conj(b) * d) >= 0.0 ? d : -d));
  return {qq / a, c / qq};
}

/// G_r(w) for f(z) = z (q + conj(q) z)/(1 - z): the root of
/// (r conj(q) - 1) z^2 + (1 + rq + w) z - w = 0 reached by tracking
/// the root z = 0 at w = 0 along the segment [0, w].
inline cplx koebe_resolvent(cplx q, double r, cplx w, int steps = 64) {
  cplx z = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const cplx wk = w * (static_cast<double>(k) / steps);
    const auto roots = quadratic_roots(r * std::conj(q) - 1.0, 1.0 + r * q + wk, -wk);
    z = std::abs(roots[0] - z) <= std::abs(roots[1] - z) ? roots[0] : roots[1];
  }
  return z;
}

inline cplx linear_resolvent(cplx q, double r, cplx w) { return w / (1.0 + r * q); }

/// Flow of f(z) = z (1+z)/(1-z): h(u) = u/(1+u)^2 satisfies h(u(t)) = e^{-t} h(z),
/// so u solves c u^2 + (2c-1) u + c = 0 with c = e^{-t} z/(1+z)^2 (inner root).
inline cplx koebe_flow(cplx z, cplx t) {
  if (z == cplx(0.0)) return 0.0;
  const cplx c = std::exp(-t) * z / ((1.0 + z) * (1.0 + z));
  const auto roots = quadratic_roots(c, 2.0 * c - 1.0, c);
  return std::abs(roots[0]) < std::abs(roots[1]) ? roots[0] : roots[1];
}

inline cplx linear_flow(cplx q, cplx z, cplx t) { return std::exp(-q * t) * z; }

/// Exponential-formula iterate for the linear generator: (1 + t q / n)^{-n} z.
inline cplx linear_expo(cplx q, cplx z, double t, int n) { return z * std::pow(1.0 + t * q / static_cast<double>(n), -n); }

/// Largest real root of r^3 - 3r^2 - 18r + 4 (A(r) = 1) by Newton from r = 7.
inline double r0_newton() {
  double r = 7.0;
  for (int k = 0; k < 60; ++k) r -= (r * r * r - 3 * r * r - 18 * r + 4) / (3 * r * r - 6 * r - 18);
  return r;
}

/// Central difference along the real direction (valid for holomorphic f).
template <class F>
cplx derivative(F&& f, cplx z, double h = 1e-5) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

}  // namespace oracle
