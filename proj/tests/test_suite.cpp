#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rlab/rlab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json minimal(const std::string& check) {
  return json::parse(R"({"generators": [{"name": "lin", "q": [1, 0]}], "r_values": [10],
                         "grid": {"radii": 4, "angles": 16}, "checks": [")" + check + R"("]})");
}

std::string config_error_path(const json& j) {
  try {
    rlab::suite_config_from_json(j);
  } catch (const rlab::ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST(Suite, RegistryNamesAreUnique) {
  std::set<std::string> names;
  for (const auto& c : rlab::check_registry()) EXPECT_TRUE(names.insert(c.name).second) << c.name;
  EXPECT_EQ(names.size(), 12u);
}

TEST(Suite, LinearStarlikeTrivialCase) {
  auto j = minimal("starlike_disk");
  j["output_dir"] = (fs::temp_directory_path() / "rlab_suite_trivial").string();
  const auto res = rlab::run_suite(rlab::suite_config_from_json(j));
  EXPECT_EQ(res.exit_status, 0);
  EXPECT_EQ(res.total, 1);
  const auto summary = json::parse(slurp(fs::path(j["output_dir"].get<std::string>()) / "summary.json"));
  EXPECT_EQ(summary["passed"], 1);
  EXPECT_EQ(summary["worst"]["check"], "starlike_disk");
}

TEST(Suite, ConfigErrorsCarryPaths) {
  auto j = minimal("starlike_disk");
  j["grid"]["outer_radius"] = 1.0;
  EXPECT_EQ(config_error_path(j), "grid.outer_radius");
  j = minimal("no_such_check");
  EXPECT_EQ(config_error_path(j), "checks[0]");
  j = minimal("starlike_disk");
  j["r_values"] = {10, -1};
  EXPECT_EQ(config_error_path(j), "r_values[1]");
  j = minimal("starlike_disk");
  j["generators"][0]["q"] = {-1, 0};
  EXPECT_EQ(config_error_path(j), "generators[0].q");
  j = minimal("starlike_disk");
  j["r_values"] = {1};
  EXPECT_NE(config_error_path(j).find("starlike_disk"), std::string::npos);
  j = minimal("lemma_bounds");
  EXPECT_NE(config_error_path(j).find("lemma_bounds"), std::string::npos);
}

TEST(Suite, FailuresStillWriteReports) {
  // A check that raises at run time is recorded as a failed report.
  auto j = minimal("normalized_convergence");
  j["generators"] = json::parse(R"([{"name": "koebe", "q": [1, 0], "omega": {"power": 1}}])");
  j["r_values"] = {10, 20};
  j["output_dir"] = (fs::temp_directory_path() / "rlab_suite_fail").string();
  auto cfg = rlab::suite_config_from_json(j);
  cfg.r_values = {20, 10};
  const auto res = rlab::run_suite(cfg);
  EXPECT_EQ(res.exit_status, 3);
  ASSERT_EQ(res.files.size(), 1u);
  const auto rep = json::parse(slurp(fs::path(cfg.output_dir) / res.files[0]));
  EXPECT_FALSE(rep["pass"].get<bool>());
  EXPECT_TRUE(rep["params"].contains("error"));
  EXPECT_TRUE(fs::exists(fs::path(cfg.output_dir) / "summary.json"));
}

TEST(Suite, ByteIdenticalRuns) {
  auto cfg = rlab::load_suite_config(RLAB_DATA_DIR "/suites/default.json");
  const fs::path a = fs::temp_directory_path() / "rlab_det_a";
  const fs::path b = fs::temp_directory_path() / "rlab_det_b";
  cfg.output_dir = a.string();
  const auto ra = rlab::run_suite(cfg);
  cfg.output_dir = b.string();
  const auto rb = rlab::run_suite(cfg);
  ASSERT_EQ(ra.files, rb.files);
  for (const auto& f : ra.files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Render, CurvesCloseAndReferenceCirclesPresent) {
  const auto curves = rlab::render_image_curves(rlab::GeneratorSpec::koebe(), 10.0, {0.5, 0.9, 1.5}, 65);
  ASSERT_EQ(curves.size(), 7u);
  for (const auto& c : curves) {
    ASSERT_EQ(c.points.size(), 65u);
    EXPECT_NEAR(std::abs(c.points.front() - c.points.back()), 0.0, 1e-12) << c.label;
  }
  EXPECT_EQ(curves[3].label, "ref:rho1");
  for (const auto& p : curves[2].points) EXPECT_LE(std::abs(p), rlab::image_radius(1.0, 10.0) + 1e-9);
  const std::string svg = rlab::curves_svg(curves);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(rlab::curves_csv(curves).find("image:0.5,0,"), std::string::npos);
}

TEST(Render, RejectsRadiiOutsideDomain) {
  EXPECT_THROW(rlab::render_image_curves(rlab::GeneratorSpec::koebe(), 10.0, {2.5}, 16), rlab::RadiusExceeded);
  EXPECT_THROW(rlab::render_image_curves(rlab::GeneratorSpec::koebe(), 1.0, {1.0}, 16), rlab::RadiusExceeded);
}
