// Resolvent of the Koebe-flow generator f(z) = z(1+z)/(1-z) for a few r,
// with its radii and orders.

#include <cstdio>

#include "rlab/rlab.hpp"

int main() {
  using rlab::cplx;
  const auto g = rlab::GeneratorSpec::koebe();
  const cplx w(0.6, 0.3);
  std::printf("%8s %24s %12s %10s %10s %10s\n", "r", "G_r(w)", "|G_r|max", "rho", "rho1", "gamma_r");
  for (double r : {6.0, 10.0, 100.0, 1000.0}) {
    const auto e = rlab::resolve(g, r, w);
    const auto radii = rlab::radii_resolvent(g.q(), r);
    const auto o = rlab::orders(g.q(), r);
    double sup = 0.0;
    for (const auto& v : rlab::resolve_grid(g, r, rlab::SamplingGrid{16, 64, 0.999}.points()))
      sup = std::max(sup, std::abs(v.value));
    std::printf("%8g %11.8f%+11.8fi %12.6f %10.6f %10.6f %10.6f\n", r, e.value.real(), e.value.imag(), sup, radii.rho,
                radii.rho1, o.gamma_r);
  }
  const auto rep = rlab::check_starlike_disk(g, 10.0, {32, 128, 0.999});
  std::printf("starlike_disk at r = 10: %s, worst margin %.3e\n", rep.pass ? "pass" : "fail", rep.worst_margin);
  return 0;
}
