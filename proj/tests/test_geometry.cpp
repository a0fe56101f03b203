#include <gtest/gtest.h>

#include "rlab/rlab.hpp"

using rlab::cplx;

namespace {

rlab::GeneratorSpec load(const char* name) {
  return rlab::generator_from_json(rlab::read_json_file(std::string(RLAB_DATA_DIR "/generators/") + name + ".json"));
}

const rlab::SamplingGrid kGrid{16, 64, 0.999};

}  // namespace

TEST(Starlike, FunctionalFormsAgree) {
  const auto g = load("atomic_a");
  for (const cplx w : rlab::SamplingGrid{6, 24, 0.99}.points())
    EXPECT_NEAR(std::abs(rlab::starlike_functional(g, 8.0, w) - rlab::starlike_functional_direct(g, 8.0, w)), 0.0,
                1e-10);
  EXPECT_EQ(rlab::starlike_functional(g, 8.0, 0.0), cplx(1.0));
}

TEST(Starlike, LinearGeneratorMarginIsExplicit) {
  const double r = 10.0;
  const auto rep = rlab::check_starlike_disk(rlab::GeneratorSpec::linear(1.0), r, kGrid);
  const double A = rlab::A_of_r(r);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.worst_margin, A / (1.0 + A), 1e-12);
}

TEST(Starlike, PassesAboveR0) {
  for (const char* name : {"koebe", "atomic_a", "atomic_b", "atomic_c", "blaschke"}) {
    const auto g = load(name);
    for (double s : {6.0, 50.0}) {
      const auto rep = rlab::check_starlike_disk(g, s / g.q().real(), kGrid);
      EXPECT_TRUE(rep.pass) << name << " s=" << s << " margin=" << rep.worst_margin;
    }
  }
}

TEST(Starlike, RejectsSmallR) {
  EXPECT_THROW(rlab::check_starlike_disk(rlab::GeneratorSpec::koebe(), 5.0, kGrid), rlab::OutOfRange);
  EXPECT_THROW(rlab::check_starlike_disk(rlab::GeneratorSpec({0.1, 0.0}, rlab::HerglotzData::constant(1.0)), 10.0,
                                         kGrid),
               rlab::PreconditionError);
}

TEST(HyperbolicConvexity, PassesForTestGenerators) {
  for (const char* name : {"linear", "koebe", "atomic_c"})
    for (double r : {1.0, 10.0, 100.0}) {
      const auto rep = rlab::check_hyperbolic_convexity(load(name), r, {16, 64, 0.99});
      EXPECT_TRUE(rep.pass) << name << " r=" << r << " margin=" << rep.worst_margin;
    }
}

TEST(LemmaBounds, ExtremalSingleAtomIsSharp) {
  const auto g = rlab::GeneratorSpec(0.0, rlab::HerglotzData::atomic({{0.0, 1.0}}, 0.0));
  for (double s : {6.0, 10.0, 100.0}) {
    const auto rep = rlab::check_lemma_bounds(g, s, kGrid);
    EXPECT_TRUE(rep.pass);
    EXPECT_NEAR(rep.params["A_r_margin"].get<double>(), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(rep.witness - cplx(3.0 / (1.0 + s), 0.0)), 0.0, 1e-15);
  }
}

TEST(LemmaBounds, AtomicGeneratorsPassAndSchwarzIsUnsupported) {
  for (const char* name : {"atomic_a", "atomic_b", "atomic_c"}) {
    const auto g = load(name);
    EXPECT_TRUE(rlab::check_lemma_bounds(g, 20.0 / g.q().real(), kGrid).pass) << name;
  }
  EXPECT_THROW(rlab::check_lemma_bounds(rlab::GeneratorSpec::koebe(), 20.0, kGrid), rlab::VariantUnsupported);
}

TEST(Subordination, MembershipAndViolation) {
  const auto g = rlab::GeneratorSpec::koebe();
  const double r = 10.0;
  const auto rep = rlab::check_subordination(g, r, kGrid);
  EXPECT_TRUE(rep.pass);
  EXPECT_GE(rep.worst_margin, 0.0);
  const auto F = [&](cplx z) { return z + r * g.eval(z).value; };
  const auto bad = rlab::subordination_membership(F, rlab::ClassParams(r, 1.0 + r), kGrid);
  EXPECT_FALSE(bad.pass);
}

TEST(Subordination, RadiiOfTheClassMatchResolventRadii) {
  const cplx q(2.0, -1.0);
  const double r = 4.0;
  const auto general = rlab::radii_general(rlab::ClassParams(2.0 * r * q.real(), 1.0 + r * q));
  const auto radii = rlab::radii_resolvent(q, r);
  EXPECT_NEAR(general.R, radii.rho, 1e-12);
  EXPECT_NEAR(general.R1, radii.rho1, 1e-12);
}
