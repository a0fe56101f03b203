#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rlab/rlab.hpp"

using rlab::cplx;

namespace {

const cplx kSamples[] = {{0.0, 0.0}, {0.3, 0.1}, {-0.5, 0.4}, {0.1, -0.8}, {0.9, 0.0}};

}  // namespace

TEST(SchwarzFunction, FixesOriginAndMapsDiskIntoDisk) {
  const rlab::SchwarzFunction w(0.4, 2, {{0.5, 0.2}, {-0.3, 0.0}});
  EXPECT_EQ(w.eval(0.0).value, cplx(0.0));
  for (int k = 0; k < 64; ++k) {
    const cplx z = std::polar(0.99, 0.1 * k);
    EXPECT_LT(std::abs(w.eval(z).value), 1.0);
  }
}

TEST(SchwarzFunction, DerivativesMatchFiniteDifferences) {
  const rlab::SchwarzFunction w(-1.1, 3, {{0.2, -0.6}});
  for (const cplx z : kSamples) {
    const auto jet = w.eval(z);
    EXPECT_NEAR(std::abs(jet.d1 - oracle::derivative([&](cplx u) { return w.eval(u).value; }, z)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(jet.d2 - oracle::derivative([&](cplx u) { return w.eval(u).d1; }, z)), 0.0, 1e-8);
  }
}

TEST(SchwarzFunction, RejectsInvalidParameters) {
  EXPECT_THROW(rlab::SchwarzFunction(0.0, 0, {}), rlab::OutOfRange);
  EXPECT_THROW(rlab::SchwarzFunction(0.0, 1, {{1.0, 0.0}}), rlab::OutOfRange);
}

TEST(Herglotz, SingleAtomIsKoebe) {
  const auto atom = rlab::HerglotzData::atomic({{0.0, 1.0}}, 0.0);
  const auto koebe = rlab::GeneratorSpec::koebe().herglotz();
  for (const cplx z : kSamples) {
    EXPECT_NEAR(std::abs(atom.jet(z).value - koebe.jet(z).value), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(atom.jet(z).value - (1.0 + z) / (1.0 - z)), 0.0, 1e-14);
  }
}

TEST(Herglotz, AtomicDerivativesAndValueAtOrigin) {
  const auto h = rlab::HerglotzData::atomic({{0.3, 0.5}, {2.0, 0.25}, {-1.0, 0.7}}, 0.4);
  EXPECT_NEAR(std::abs(h.at_origin() - cplx(1.45, 0.4)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h.jet(0.0).value - h.at_origin()), 0.0, 1e-15);
  for (const cplx z : kSamples) {
    const auto jet = h.jet(z);
    EXPECT_GE(jet.value.real(), 0.0);
    EXPECT_NEAR(std::abs(jet.d1 - oracle::derivative([&](cplx u) { return h.jet(u).value; }, z)), 0.0,
                1e-6 * (1.0 + std::abs(jet.d1)));
  }
}

TEST(Herglotz, AnglesAreNormalised) {
  const auto h = rlab::HerglotzData::atomic({{-0.5, 1.0}, {7.0, 1.0}}, 0.0);
  for (const auto& a : h.atomic_data().atoms) {
    EXPECT_GE(a.angle, 0.0);
    EXPECT_LT(a.angle, 2.0 * std::numbers::pi);
  }
}

TEST(Herglotz, RejectsBadData) {
  EXPECT_THROW(rlab::HerglotzData::atomic({{0.0, -1.0}}, 0.0), rlab::OutOfRange);
  EXPECT_THROW(rlab::HerglotzData::atomic({{0.0, 0.0}}, 0.0), rlab::OutOfRange);
  EXPECT_THROW(rlab::HerglotzData::schwarz({0.0, 1.0}, rlab::SchwarzFunction::zero()), rlab::OutOfRange);
  EXPECT_THROW(rlab::HerglotzData::constant(1.0).jet(1.0), rlab::DomainError);
}

TEST(Generator, LinearAndKoebeClosedForms) {
  const auto lin = rlab::GeneratorSpec::linear({2.0, -1.0});
  const auto koebe = rlab::GeneratorSpec::koebe();
  for (const cplx z : kSamples) {
    EXPECT_NEAR(std::abs(lin.eval(z).value - cplx(2.0, -1.0) * z), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(koebe.eval(z).value - z * (1.0 + z) / (1.0 - z)), 0.0, 1e-14);
  }
  EXPECT_EQ(koebe.q(), cplx(1.0));
}

TEST(Generator, SecondDerivativeIsAnalytic) {
  const auto g = rlab::GeneratorSpec(0.0, rlab::HerglotzData::schwarz({1.0, 0.5}, rlab::SchwarzFunction(0.7, 2, {{0.3, -0.2}})));
  for (const cplx z : kSamples) {
    const auto jet = g.eval(z);
    EXPECT_NEAR(std::abs(jet.d1 - oracle::derivative([&](cplx u) { return g.eval(u).value; }, z)), 0.0,
                1e-6 * (1.0 + std::abs(jet.d1)));
    EXPECT_NEAR(std::abs(jet.d2 - oracle::derivative([&](cplx u) { return g.eval(u).d1; }, z)), 0.0,
                1e-5 * (1.0 + std::abs(jet.d2)));
  }
}

TEST(Generator, NonCentredDenjoyWolffPoint) {
  const cplx tau(0.3, 0.2);
  const auto g = rlab::GeneratorSpec(tau, rlab::HerglotzData::constant(1.0));
  EXPECT_NEAR(std::abs(g.eval(tau).value), 0.0, 1e-15);
  EXPECT_FALSE(g.centered());
  for (const cplx z : kSamples)
    EXPECT_NEAR(std::abs(g.eval(z).d1 - oracle::derivative([&](cplx u) { return g.eval(u).value; }, z)), 0.0, 1e-8);
  EXPECT_THROW(rlab::GeneratorSpec({1.0, 1.0}, rlab::HerglotzData::constant(1.0)), rlab::OutOfRange);
}

TEST(Generator, ValidateReportsMinimumRealPart) {
  const rlab::SamplingGrid grid{16, 64, 0.99};
  const auto rep = rlab::validate_generator(rlab::GeneratorSpec::linear({1.5, 3.0}), grid);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.worst_margin, 1.5, 1e-12);
}

TEST(Generator, BoundaryKappa) {
  EXPECT_NEAR(rlab::boundary_kappa(rlab::HerglotzData::constant({0.7, 2.0})), 0.7, 1e-14);
  // Koebe: Re p vanishes on the circle
  EXPECT_LT(rlab::boundary_kappa(rlab::GeneratorSpec::koebe().herglotz()), 1e-3);
}

TEST(Grid, ChebyshevRadiiEndAtOuterRadius) {
  const rlab::SamplingGrid grid{8, 4, 0.9};
  const auto pts = grid.points();
  ASSERT_EQ(pts.size(), 32u);
  EXPECT_DOUBLE_EQ(std::abs(pts.back()), 0.9);
  EXPECT_LT(std::abs(pts.front()), 0.9 * 0.2);
}

TEST(Io, ComplexParsing) {
  EXPECT_EQ(rlab::parse_complex("0.3+0.1i"), cplx(0.3, 0.1));
  EXPECT_EQ(rlab::parse_complex("-2.5i"), cplx(0.0, -2.5));
  EXPECT_EQ(rlab::parse_complex("1-i"), cplx(1.0, -1.0));
  EXPECT_EQ(rlab::parse_complex("1e-3+2e+1i"), cplx(1e-3, 20.0));
  EXPECT_EQ(rlab::parse_complex("(0.5,-0.25)"), cplx(0.5, -0.25));
  EXPECT_EQ(rlab::parse_complex("4"), cplx(4.0, 0.0));
  EXPECT_THROW(rlab::parse_complex("abc"), rlab::ConfigError);
}

TEST(Io, GeneratorRoundTripAndErrorPaths) {
  const auto g = rlab::generator_from_json(rlab::read_json_file(RLAB_DATA_DIR "/generators/blaschke.json"));
  const auto again = rlab::generator_from_json(nlohmann::json::parse(rlab::generator_to_json(g).dump()));
  EXPECT_EQ(rlab::generator_to_json(g), rlab::generator_to_json(again));
  try {
    rlab::generator_from_json(nlohmann::json::parse(R"({"herglotz": {"atoms": [{"angle": 0, "mass": -1}]}})"), "gen");
    FAIL() << "expected ConfigError";
  } catch (const rlab::ConfigError& e) {
    EXPECT_EQ(e.path(), "gen.herglotz.atoms[0].mass");
  }
  const auto linear = rlab::generator_from_json(nlohmann::json::parse(R"({"q": [2, 0]})"));
  EXPECT_TRUE(linear.herglotz().schwarz_data().omega.is_zero());
}
