#include <gtest/gtest.h>

#include <cstdlib>

#include "oracles.hpp"
#include "rlab/rlab.hpp"

using rlab::cplx;

namespace {

std::vector<cplx> disk_points(double outer) {
  return rlab::SamplingGrid{12, 48, outer}.points();
}

}  // namespace

TEST(Resolve, LinearClosedForm) {
  const cplx q(2.0, -1.0);
  const auto g = rlab::GeneratorSpec::linear(q);
  for (double r : {0.1, 1.0, 10.0, 1000.0})
    for (const cplx w : disk_points(0.999)) {
      const auto e = rlab::resolve(g, r, w);
      EXPECT_NEAR(std::abs(e.value - oracle::linear_resolvent(q, r, w)), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(e.d1 - 1.0 / (1.0 + r * q)), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(e.d2), 0.0, 1e-15);
    }
}

TEST(Resolve, KoebeMatchesQuadraticOracle) {
  for (const cplx q : {cplx(1.0), cplx(1.0, 1.0)}) {
    const auto g = rlab::GeneratorSpec::koebe(q);
    for (double r : {0.05, 1.0, 10.0, 100.0})
      for (const cplx w : disk_points(0.999))
        EXPECT_NEAR(std::abs(rlab::resolve(g, r, w).value - oracle::koebe_resolvent(q, r, w)), 0.0, 1e-12)
            << "q=" << q << " r=" << r << " w=" << w;
  }
}

TEST(Resolve, DerivativesMatchFiniteDifferences) {
  const auto g = rlab::generator_from_json(rlab::read_json_file(RLAB_DATA_DIR "/generators/atomic_b.json"));
  const double r = 3.0;
  for (const cplx w : {cplx(0.2, 0.1), cplx(-0.6, 0.3), cplx(0.1, -0.9)}) {
    const auto e = rlab::resolve(g, r, w);
    const auto G = [&](cplx u) { return rlab::resolve(g, r, u).value; };
    const auto dG = [&](cplx u) { return rlab::resolve(g, r, u).d1; };
    EXPECT_NEAR(std::abs(e.d1 - oracle::derivative(G, w)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(e.d2 - oracle::derivative(dG, w)), 0.0, 1e-7);
  }
}

TEST(Resolve, RoundTrip) {
  const auto g = rlab::generator_from_json(rlab::read_json_file(RLAB_DATA_DIR "/generators/atomic_c.json"));
  for (double r : {0.5, 5.0, 50.0})
    for (const cplx z : disk_points(0.95)) {
      const cplx w = z + r * g.eval(z).value;
      if (std::abs(w) >= 1.0) continue;
      EXPECT_NEAR(std::abs(rlab::resolve(g, r, w).value - z), 0.0, 1e-10);
    }
}

TEST(Resolve, ContinuationBeyondUnitDisk) {
  const auto g = rlab::GeneratorSpec::koebe();
  const double r = 10.0;
  const double rho = rlab::continuation_radius(1.0, r);
  for (int k = 0; k < 32; ++k) {
    const cplx w = std::polar(0.99 * rho, 2.0 * std::numbers::pi * k / 32);
    const auto e = rlab::resolve_continued(g, r, w);
    EXPECT_NEAR(std::abs(e.value + r * g.eval(e.value).value - w), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(e.value - oracle::koebe_resolvent(1.0, r, w, 256)), 0.0, 1e-10);
  }
  EXPECT_THROW(rlab::resolve_continued(g, r, rho), rlab::RadiusExceeded);
  EXPECT_THROW(rlab::resolve_continued(g, 1.0, 0.5), rlab::OutOfRange);
}

TEST(Resolve, Preconditions) {
  const auto g = rlab::GeneratorSpec::koebe();
  EXPECT_THROW(rlab::resolve(g, 0.0, 0.1), rlab::OutOfRange);
  EXPECT_THROW(rlab::resolve(g, 1.0, 1.0), rlab::DomainError);
  rlab::SolverConfig bad;
  bad.max_iter = 0;
  EXPECT_THROW(rlab::resolve(g, 1.0, 0.1, bad), rlab::PreconditionError);
}

TEST(Resolve, NonCentredGenerator) {
  const cplx tau(0.2, -0.3);
  const auto g = rlab::GeneratorSpec(tau, rlab::HerglotzData::schwarz(1.0, rlab::SchwarzFunction::identity()));
  for (double r : {0.5, 5.0}) {
    EXPECT_NEAR(std::abs(rlab::resolve(g, r, tau).value - tau), 0.0, 1e-14);
    for (const cplx w : {cplx(0.3, 0.3), cplx(-0.5, 0.1)}) {
      const auto e = rlab::resolve(g, r, w);
      EXPECT_NEAR(std::abs(e.value + r * g.eval(e.value).value - w), 0.0, 1e-12);
    }
  }
}

TEST(Resolve, GridIsThreadCountIndependent) {
  const auto g = rlab::GeneratorSpec::koebe({1.0, 1.0});
  const auto pts = disk_points(0.999);
  setenv("RESOLVENT_LAB_THREADS", "1", 1);
  const auto one = rlab::resolve_grid(g, 7.0, pts);
  setenv("RESOLVENT_LAB_THREADS", "4", 1);
  const auto four = rlab::resolve_grid(g, 7.0, pts);
  unsetenv("RESOLVENT_LAB_THREADS");
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(one[i].value, four[i].value);
}

TEST(Univalence, ProbePasses) {
  const auto rep = rlab::univalence_probe(rlab::GeneratorSpec::koebe(), 1.0, 1.0, 12);
  EXPECT_TRUE(rep.pass);
  EXPECT_GT(rep.worst_margin, 0.0);
  EXPECT_TRUE(rlab::univalence_probe(rlab::GeneratorSpec::koebe(), 1.0, 1.0, 1).pass);
}
