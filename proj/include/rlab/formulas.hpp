#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <complex>
#include <numbers>
#include <string>

#include "rlab/errors.hpp"
#include "rlab/grid.hpp"

namespace rlab {

/// A(r) = 6r(1+r) / ((1+r)^3 - 3(5r-1)).
inline double A_of_r(double r) {
  const double cube = (1.0 + r) * (1.0 + r) * (1.0 + r);
  const double den = cube - 3.0 * (5.0 * r - 1.0);
  if (den == 0.0 || std::abs(den) <= 1e-14 * std::max(1.0, std::abs(cube)))
    throw PoleAtR("A(r) has a pole at r = " + std::to_string(r));
  return 6.0 * r * (1.0 + r) / den;
}

/// Closed form of the largest root of A(r) = 1 (the depressed cubic
/// x^3 - 21x - 16 = 0 with r = 1 + x, trigonometric solution).
inline double r0_closed_form() {
  return 1.0 + 2.0 * std::sqrt(7.0) * std::cos(std::atan(3.0 * std::sqrt(31.0) / 8.0) / 3.0);
}

struct R0Result {
  double bisection;
  double closed_form;
};

/// Largest root of A(r) = 1 by bisection on [5, 7], returned with the
/// closed form. A is continuous and decreasing through 1 on that bracket.
inline R0Result find_r0() {
  double lo = 5.0;
  double hi = 7.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (A_of_r(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi), r0_closed_form()};
}

inline double r0() {
  static const double value = find_r0().bisection;
  return value;
}

/// Parameters (alpha, beta) of the class A_{alpha,beta}; Re(alpha conj(beta)) > 0.
struct ClassParams {
  cplx alpha;
  cplx beta;

  ClassParams(cplx a, cplx b) : alpha(a), beta(b) {
    if (!((alpha * std::conj(beta)).real() > 0.0))
      throw OutOfRange("class parameters need Re(alpha conj(beta)) > 0");
  }

  /// psi(z) = beta + alpha z / (1 - z); z psi(z) is the extremal member.
  cplx psi(cplx z) const { return beta + alpha * z / (1.0 - z); }
};

struct RadiiReport {
  enum class Branch { half_disk, root };  // Re(beta/alpha) > 3/4, resp. <= 3/4

  double M;
  double R;
  double R1;
  double R2;
  double R2_alt;
  Branch branch;
};

/// Univalence radius R, image bound R1 and covering radii R2, R2_alt for
/// inverses of the class A_{alpha,beta}.
inline RadiiReport radii_general(const ClassParams& c) {
  const double ratio = (c.beta / c.alpha).real();
  const double abs_alpha = std::abs(c.alpha);
  const double abs_beta = std::abs(c.beta);
  RadiiReport out{};
  out.M = 1.0 - ratio;
  if (ratio > 0.75) {
    out.branch = RadiiReport::Branch::half_disk;
    out.R = abs_alpha * (0.5 - out.M);
    out.R1 = 1.0;
  } else {
    out.branch = RadiiReport::Branch::root;
    if (out.M < 0.0) throw NegativeM("M = 1 - Re(beta/alpha) is negative");
    const double sm = std::sqrt(out.M);
    out.R = abs_alpha * (1.0 - sm) * (1.0 - sm);
    out.R1 = 1.0 / sm - 1.0;
  }
  const double disc = out.R1 * out.R1 * abs_beta * abs_beta - out.R * out.R;
  out.R2 = out.R * out.R1 / (out.R1 * abs_beta + std::sqrt(std::max(0.0, disc)));
  out.R2_alt = abs_beta * out.R / (abs_beta * abs_beta + std::abs(c.beta.real()) * out.R);
  return out;
}

struct ResolventRadii {
  double rho;   // continuation radius
  double rho1;  // G_r(D_rho) inside D_rho1
  double rho2;  // G_r(D_rho) covers D_rho2
  double rho3;  // G_r(D) covers D_rho3
};

/// Covering radius of G_r(D), valid for every r > 0.
inline double rho3(cplx q, double r) {
  if (!(r > 0.0)) throw OutOfRange("rho3 needs r > 0");
  const double b = std::abs(1.0 + r * q);
  return 1.0 / (b + std::sqrt(b * b - 1.0));
}

inline double continuation_radius(cplx q, double r) {
  const double s = r * q.real();
  if (!(s > 2.0)) throw OutOfRange("continuation radius needs r Re q > 2");
  const double d = std::sqrt(2.0 * s) - std::sqrt(s - 1.0);
  return d * d;
}

inline double image_radius(cplx q, double r) {
  const double s = r * q.real();
  if (!(s > 2.0)) throw OutOfRange("image radius needs r Re q > 2");
  return std::sqrt(2.0 * s / (s - 1.0)) - 1.0;
}

inline ResolventRadii radii_resolvent(cplx q, double r) {
  const double s = r * q.real();
  if (!(s > 2.0)) throw OutOfRange("rho, rho1, rho2 need r Re q > 2 (got " + std::to_string(s) + ")");
  ResolventRadii out{};
  out.rho = continuation_radius(q, r);
  out.rho1 = image_radius(q, r);
  out.rho2 = out.rho / (std::abs(1.0 + r * q) + std::sqrt(2.0 + s + r * r * std::norm(q)));
  out.rho3 = rho3(q, r);
  if (!(out.rho > 1.0 - 1e-12)) throw std::logic_error("continuation radius must exceed 1");
  return out;
}

/// Bound sup_D |G_r| <= 3 / (1 + r Re q), valid for r Re q > 2.
inline double uniform_bound(cplx q, double r) { return 3.0 / (1.0 + r * q.real()); }

struct OrderReport {
  double A;
  double r0;
  double alpha_star;  // order of starlikeness
  double beta_star;   // order of strong starlikeness
  double gamma_r;
  double kappa_r;     // squeezing coefficient of the semigroup generated by G_r
  bool kappa_informative;
  double k_qc;        // quasiconformality constant
  double sector_half_angle;
  double sector_center;
};

/// Literal principal-branch form (Re (1+rq)^{1/gamma})^gamma / (2^{1-gamma}|1+rq|^2).
/// Overflows for small gamma; orders() uses an equivalent stable form.
inline double kappa_power_form(cplx q, double r, double gamma) {
  const cplx b = 1.0 + r * q;
  const double re = std::pow(b, 1.0 / gamma).real();
  return std::pow(re, gamma) / (std::pow(2.0, 1.0 - gamma) * std::norm(b));
}

inline OrderReport orders(cplx q, double r) {
  const double s = r * q.real();
  const double root = r0();
  if (!(s > root))
    throw OutOfRange("orders need r Re q > r0 = " + std::to_string(root) + " (got " + std::to_string(s) + ")");
  OrderReport o{};
  o.A = A_of_r(s);
  o.r0 = root;
  o.alpha_star = 1.0 / (1.0 + o.A);
  o.beta_star = 2.0 / std::numbers::pi * std::asin(o.A);
  o.gamma_r = (1.0 - o.A) / (1.0 + o.A);
  o.k_qc = o.A;
  const cplx b = 1.0 + r * q;
  o.sector_center = std::arg(b);
  o.sector_half_angle = std::numbers::pi * o.gamma_r / 2.0;
  // Re((1+rq)^{1/g})^g = |1+rq| cos(phi/g)^g, meaningful only for |phi| < pi g / 2.
  if (std::abs(o.sector_center) < o.sector_half_angle) {
    o.kappa_informative = true;
    o.kappa_r = std::pow(std::cos(o.sector_center / o.gamma_r), o.gamma_r) /
                (std::pow(2.0, 1.0 - o.gamma_r) * std::abs(b));
  } else {
    o.kappa_informative = false;
    o.kappa_r = 0.0;
  }
  return o;
}

struct SpirallikeOrder {
  double order;
  double estimate;  // lower estimate from A(s) < 6/s
};

/// Order of theta-spirallikeness; needs r Re q >= 6 and |theta| <= arccos(6/(r Re q)).
inline SpirallikeOrder spirallike_order(cplx q, double r, double theta) {
  const double s = r * q.real();
  if (!(s >= 6.0)) throw OutOfRange("spirallike order needs r Re q >= 6");
  const double limit = std::acos(6.0 / s);
  if (!(std::abs(theta) <= limit + 1e-15))
    throw OutOfRange("spirallike order needs |theta| <= arccos(6/(r Re q))");
  const double A = A_of_r(s);
  const double c = std::cos(theta);
  SpirallikeOrder out{};
  out.order = (c - A) / ((1.0 - A * A) * c);
  if (s * s - 36.0 == 0.0)
    out.estimate = s / (s + 6.0);  // s = 6 forces theta = 0
  else
    out.estimate = s * (s * c - 6.0) / ((s * s - 36.0) * c);
  if (!(out.order >= out.estimate - 1e-12)) throw std::logic_error("spirallike order below its estimate");
  return out;
}

/// The chain of elementary bounds valid for r Re q > 6.
struct OrderBounds {
  double A;
  double A_upper;          // 6 / (6 - r0 + s)
  double A_upper_coarse;   // 6 / s
  double alpha_lower;      // (6 - r0 + s) / (12 - r0 + s)
  double alpha_lower_coarse;  // s / (6 + s)
  double beta_upper;       // (2/pi) asin(6 / (6 - r0 + s))
  double beta_upper_coarse;   // (2/pi) asin(6 / s)
  double gamma_lower;      // (s - r0) / (12 - r0 + s)
  double gamma_lower_coarse;  // (s - 6) / (s + 6)
};

inline OrderBounds order_bounds(double s) {
  if (!(s > 6.0)) throw OutOfRange("order bounds need r Re q > 6");
  const double root = r0();
  OrderBounds b{};
  b.A = A_of_r(s);
  b.A_upper = 6.0 / (6.0 - root + s);
  b.A_upper_coarse = 6.0 / s;
  b.alpha_lower = (6.0 - root + s) / (12.0 - root + s);
  b.alpha_lower_coarse = s / (6.0 + s);
  b.beta_upper = 2.0 / std::numbers::pi * std::asin(b.A_upper);
  b.beta_upper_coarse = 2.0 / std::numbers::pi * std::asin(b.A_upper_coarse);
  b.gamma_lower = (s - root) / (12.0 - root + s);
  b.gamma_lower_coarse = (s - 6.0) / (s + 6.0);
  return b;
}

}  // namespace rlab
