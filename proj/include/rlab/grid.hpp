#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rlab/errors.hpp"

namespace rlab {

using cplx = std::complex<double>;

/// Deterministic radial x angular point set on the closed disk of radius
/// `outer_radius`. Points are ordered radius-major; the grid index is the
/// position in `points()`.
struct SamplingGrid {
  enum class Spacing { chebyshev, uniform };

  int radii = 64;
  int angles = 256;
  double outer_radius = 1.0 - 1e-3;
  Spacing spacing = Spacing::chebyshev;

  void validate() const {
    if (radii < 1 || angles < 1) throw OutOfRange("grid counts must be >= 1");
    if (!(outer_radius > 0.0) || !std::isfinite(outer_radius))
      throw OutOfRange("grid outer radius must be positive");
  }

  // Chebyshev spacing clusters radii toward the outer circle; the last
  // radius is exactly outer_radius.
  double radius(int i) const {
    if (spacing == Spacing::uniform) return outer_radius * (i + 1) / radii;
    if (i == radii - 1) return outer_radius;
    return outer_radius * std::sin(std::numbers::pi * (i + 1) / (2.0 * radii));
  }

  double angle(int j) const { return 2.0 * std::numbers::pi * j / angles; }

  std::size_t size() const { return static_cast<std::size_t>(radii) * angles; }

  std::vector<cplx> points() const {
    validate();
    std::vector<cplx> out;
    out.reserve(size());
    for (int i = 0; i < radii; ++i) {
      const double rho = radius(i);
      for (int j = 0; j < angles; ++j) out.push_back(std::polar(rho, angle(j)));
    }
    return out;
  }

  SamplingGrid with_outer(double r) const {
    SamplingGrid g = *this;
    g.outer_radius = r;
    return g;
  }
};

}  // namespace rlab
