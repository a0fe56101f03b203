#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/grid.hpp"
#include "rlab/report.hpp"

namespace rlab {

/// Value with first and second complex derivatives.
struct Jet {
  cplx value{};
  cplx d1{};
  cplx d2{};

  friend Jet operator*(const Jet& a, const Jet& b) {
    return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
            a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
  }
};

namespace detail {

inline void require_open_disk(cplx z, const char* who) {
  if (!(std::abs(z) < 1.0))
    throw DomainError(std::string(who) + ": |z| >= 1 (z = " + std::to_string(z.real()) +
                      (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i)");
}

}  // namespace detail

/// Finite Blaschke-structured Schwarz function
///   omega(z) = rotation * z^power * prod_j (z - a_j) / (1 - conj(a_j) z),
/// or the distinguished omega == 0. Self-mapping of the disk with
/// omega(0) = 0 holds by construction.
class SchwarzFunction {
 public:
  static SchwarzFunction zero() { return SchwarzFunction(); }
  static SchwarzFunction identity() { return SchwarzFunction(0.0, 1, {}); }

  SchwarzFunction(double rotation_angle, int power, std::vector<cplx> zeros)
      : is_zero_(false),
        rotation_angle_(rotation_angle),
        rotation_(std::polar(1.0, rotation_angle)),
        power_(power),
        zeros_(std::move(zeros)) {
    if (!std::isfinite(rotation_angle)) throw OutOfRange("omega rotation angle must be finite");
    if (power_ < 1) throw OutOfRange("omega power must be >= 1");
    for (const cplx& a : zeros_)
      if (!(std::abs(a) < 1.0)) throw OutOfRange("omega zeros must lie in the open disk");
  }

  bool is_zero() const { return is_zero_; }
  double rotation_angle() const { return rotation_angle_; }
  cplx rotation() const { return rotation_; }
  int power() const { return power_; }
  const std::vector<cplx>& zeros() const { return zeros_; }

  Jet eval(cplx z) const {
    if (is_zero_) return {};
    Jet acc{rotation_, 0.0, 0.0};
    // z^m with its two derivatives
    const double m = power_;
    cplx zm2 = 1.0;  // z^(m-2) for m >= 2
    for (int k = 0; k < power_ - 2; ++k) zm2 *= z;
    Jet mono;
    if (power_ == 1) {
      mono = {z, 1.0, 0.0};
    } else {
      mono = {zm2 * z * z, m * zm2 * z, m * (m - 1.0) * zm2};
    }
    acc = acc * mono;
    for (const cplx& a : zeros_) {
      const cplx den = 1.0 - std::conj(a) * z;
      const double w = 1.0 - std::norm(a);
      acc = acc * Jet{(z - a) / den, w / (den * den), 2.0 * std::conj(a) * w / (den * den * den)};
    }
    return acc;
  }

 private:
  SchwarzFunction() = default;

  bool is_zero_ = true;
  double rotation_angle_ = 0.0;
  cplx rotation_{1.0, 0.0};
  int power_ = 1;
  std::vector<cplx> zeros_;
};

struct Atom {
  double angle;  // radians, normalised to [0, 2pi)
  double mass;   // >= 0
};

/// Riesz-Herglotz data with a finite atomic measure:
///   p(z) = sum_k m_k (1 + z e^{-i theta_k}) / (1 - z e^{-i theta_k}) + i gamma.
struct AtomicHerglotz {
  std::vector<Atom> atoms;
  double gamma = 0.0;
};

/// p(z) = (q + conj(q) omega(z)) / (1 - omega(z)) with Re q > 0.
struct SchwarzHerglotz {
  cplx q;
  SchwarzFunction omega;
};

/// Herglotz part p of a generator (Re p >= 0 on the disk by construction).
class HerglotzData {
 public:
  static HerglotzData atomic(std::vector<Atom> atoms, double gamma) {
    bool any_mass = false;
    for (Atom& a : atoms) {
      if (!std::isfinite(a.angle)) throw OutOfRange("atom angle must be finite");
      if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
        throw OutOfRange("atom masses must be nonnegative");
      a.angle = std::fmod(a.angle, 2.0 * std::numbers::pi);
      if (a.angle < 0.0) a.angle += 2.0 * std::numbers::pi;
      any_mass = any_mass || a.mass > 0.0;
    }
    if (!std::isfinite(gamma)) throw OutOfRange("gamma must be finite");
    if (!any_mass && gamma == 0.0)
      throw OutOfRange("atomic Herglotz data needs a positive mass or gamma != 0");
    return HerglotzData(AtomicHerglotz{std::move(atoms), gamma});
  }

  static HerglotzData schwarz(cplx q, SchwarzFunction omega) {
    if (!(q.real() > 0.0) || !std::isfinite(q.imag())) throw OutOfRange("Schwarz form needs Re q > 0");
    return HerglotzData(SchwarzHerglotz{q, std::move(omega)});
  }

  /// Canonical encoding of p == q.
  static HerglotzData constant(cplx q) { return schwarz(q, SchwarzFunction::zero()); }

  bool is_atomic() const { return std::holds_alternative<AtomicHerglotz>(data_); }
  const AtomicHerglotz& atomic_data() const { return std::get<AtomicHerglotz>(data_); }
  const SchwarzHerglotz& schwarz_data() const { return std::get<SchwarzHerglotz>(data_); }

  /// p(0).
  cplx at_origin() const {
    if (is_atomic()) {
      const auto& a = atomic_data();
      double mass = 0.0;
      for (const Atom& atom : a.atoms) mass += atom.mass;
      return {mass, a.gamma};
    }
    return schwarz_data().q;
  }

  /// p, p', p'' at z without the domain check.
  Jet jet_unchecked(cplx z) const {
    if (is_atomic()) {
      const auto& a = atomic_data();
      Jet out{cplx(0.0, a.gamma), 0.0, 0.0};
      for (const Atom& atom : a.atoms) {
        if (atom.mass == 0.0) continue;
        const cplx t = std::polar(1.0, -atom.angle);
        const cplx den = 1.0 - z * t;
        const cplx inv = 1.0 / den;
        out.value += atom.mass * (1.0 + z * t) * inv;
        out.d1 += atom.mass * 2.0 * t * inv * inv;
        out.d2 += atom.mass * 4.0 * t * t * inv * inv * inv;
      }
      return out;
    }
    const auto& s = schwarz_data();
    const Jet w = s.omega.eval(z);
    const cplx inv = 1.0 / (1.0 - w.value);
    const double two_re_q = 2.0 * s.q.real();
    const cplx dp_dw = two_re_q * inv * inv;
    const cplx d2p_dw2 = 2.0 * two_re_q * inv * inv * inv;
    return {(s.q + std::conj(s.q) * w.value) * inv, dp_dw * w.d1,
            d2p_dw2 * w.d1 * w.d1 + dp_dw * w.d2};
  }

  Jet jet(cplx z) const {
    detail::require_open_disk(z, "herglotz_eval");
    return jet_unchecked(z);
  }

 private:
  explicit HerglotzData(std::variant<AtomicHerglotz, SchwarzHerglotz> d) : data_(std::move(d)) {}

  std::variant<AtomicHerglotz, SchwarzHerglotz> data_;
};

/// Berkson-Porta generator f(z) = (z - tau)(1 - z conj(tau)) p(z).
class GeneratorSpec {
 public:
  GeneratorSpec(cplx tau, HerglotzData herglotz) : tau_(tau), herglotz_(std::move(herglotz)) {
    if (!(std::abs(tau_) <= 1.0)) throw OutOfRange("Denjoy-Wolff point must satisfy |tau| <= 1");
  }

  static GeneratorSpec linear(cplx q) { return {0.0, HerglotzData::constant(q)}; }

  /// f(z) = z (q + conj(q) z) / (1 - z); q = 1 is the Koebe-flow generator.
  static GeneratorSpec koebe(cplx q = 1.0) {
    return {0.0, HerglotzData::schwarz(q, SchwarzFunction::identity())};
  }

  cplx tau() const { return tau_; }
  const HerglotzData& herglotz() const { return herglotz_; }
  bool centered() const { return tau_ == cplx(0.0, 0.0); }

  /// f'(0); equals p(0) when tau = 0.
  cplx q() const {
    if (centered()) return herglotz_.at_origin();
    return eval(0.0).d1;
  }

  /// f, f', f'' at z.
  Jet eval(cplx z) const {
    detail::require_open_disk(z, "generator_eval");
    const Jet p = herglotz_.jet_unchecked(z);
    if (centered()) return {z * p.value, p.value + z * p.d1, 2.0 * p.d1 + z * p.d2};
    const cplx tc = std::conj(tau_);
    const double t2 = std::norm(tau_);
    const cplx h = (z - tau_) * (1.0 - z * tc);
    const cplx h1 = 1.0 + t2 - 2.0 * tc * z;
    const cplx h2 = -2.0 * tc;
    return {h * p.value, h1 * p.value + h * p.d1, h2 * p.value + 2.0 * h1 * p.d1 + h * p.d2};
  }

 private:
  cplx tau_;
  HerglotzData herglotz_;
};

struct HerglotzValue {
  cplx p;
  cplx dp;
};

struct GeneratorValue {
  cplx f;
  cplx df;
};

inline HerglotzValue herglotz_eval(const HerglotzData& h, cplx z) {
  const Jet j = h.jet(z);
  return {j.value, j.d1};
}

inline GeneratorValue generator_eval(const GeneratorSpec& g, cplx z) {
  const Jet j = g.eval(z);
  return {j.value, j.d1};
}

namespace detail {

inline void require_centered(const GeneratorSpec& g, const char* who) {
  if (!g.centered()) throw OutOfRange(std::string(who) + " needs tau = 0");
}

}  // namespace detail

/// min Re p over the grid (pass iff >= -tolerance) and |f(tau)| when tau is
/// interior.
inline CheckReport validate_generator(const GeneratorSpec& g, const SamplingGrid& grid,
                                      double tolerance = 1e-12) {
  CheckReport rep;
  rep.check = "validate_generator";
  MarginTracker min_re;
  for (const cplx z : grid.points()) min_re.update(g.herglotz().jet(z).value.real(), z);
  rep.worst_margin = min_re.worst();
  rep.witness = min_re.witness();
  rep.pass = rep.worst_margin >= -tolerance;
  rep.params["min_re_p"] = min_re.worst();
  rep.params["tolerance"] = tolerance;
  if (std::abs(g.tau()) < 1.0) {
    const double at_tau = std::abs(g.eval(g.tau()).value);
    rep.params["abs_f_at_tau"] = at_tau;
    rep.pass = rep.pass && at_tau <= tolerance;
  }
  return rep;
}

/// Minimum of Re p over n equispaced points on |z| = radius; the default is
/// a boundary-adjacent circle, which by the minimum principle for the
/// harmonic Re p approximates inf_D Re p.
inline double boundary_kappa(const HerglotzData& h, int n = 2048, double radius = 1.0 - 1e-6) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const cplx z = std::polar(radius, 2.0 * std::numbers::pi * k / n);
    best = std::min(best, h.jet(z).value.real());
  }
  return best;
}

}  // namespace rlab
