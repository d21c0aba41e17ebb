#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vortex/scenario.hpp"
#include "vortex/verify.hpp"

using namespace vortex;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "name": "mini",
  "surface": {"kind": "sphere"},
  "vortices": [
    {"chart": 0, "coord": [0.5, 0.0], "strength": 1.0},
    {"chart": 0, "coord": [-0.5, 0.0], "strength": -1.0}
  ],
  "integrator": {"dt": 0.01, "steps": 20, "record_every": 5}
})";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("vortex_test_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(p);
  return p;
}

std::string config_error_field(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Config, MinimalDefaults) {
  const ScenarioConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.name, "mini");
  EXPECT_TRUE(c.surface.is_sphere());
  EXPECT_EQ(c.state.size(), 2u);
  EXPECT_EQ(c.integrator.method, Method::RK4);
  EXPECT_EQ(c.integrator.steps, 20);
  EXPECT_DOUBLE_EQ(c.collision_threshold, 1e-3);
  EXPECT_EQ(c.trajectory_file(), "mini.csv");
  EXPECT_EQ(c.diagnostics_file(), "mini.diagnostics.jsonl");
}

TEST(Config, SyntaxErrorReportsLine) {
  const std::string bad = replace(kMinimal, "\"strength\": -1.0}", "\"strength\": -1.0,,}");
  try {
    parse_config(bad);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 6);
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos);
  }
}

TEST(Config, SemanticErrorsReportField) {
  EXPECT_EQ(config_error_field(replace(kMinimal, "\"strength\": -1.0", "\"strength\": \"x\"")), "vortices[1].strength");
  EXPECT_EQ(config_error_field(replace(kMinimal, "\"sphere\"", "\"klein\"")), "surface.kind");
  EXPECT_EQ(config_error_field(replace(kMinimal, "\"dt\"", "\"dtt\"")), "integrator.dtt");
  EXPECT_EQ(config_error_field(replace(kMinimal, "\"chart\": 0, \"coord\": [0.5, 0.0]", "\"chart\": 3, \"coord\": [0.5, 0.0]")), "vortices[0]");
  EXPECT_EQ(config_error_field(replace(kMinimal, "\"name\": \"mini\",", "")), "<none>");
  EXPECT_EQ(config_error_field(replace(kMinimal, "\"surface\": {\"kind\": \"sphere\"},", "")), "surface");
  const std::string torus = replace(kMinimal, "{\"kind\": \"sphere\"}", "{\"kind\": \"torus\", \"tau\": [0.0, 1.0]}");
  EXPECT_EQ(config_error_field(replace(torus, "\"integrator\"", "\"base_circulations\": {\"a\": [1, 2]}, \"integrator\"")),
            "base_circulations.a");
  EXPECT_EQ(config_error_field(replace(kMinimal, "{\"kind\": \"sphere\"}", "{\"kind\": \"torus\", \"tau\": [0.0, -1.0]}")),
            "surface.tau");
}

TEST(Config, StrengthSumMessage) {
  try {
    parse_config(replace(kMinimal, "\"strength\": -1.0", "\"strength\": -0.9"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sum to zero"), std::string::npos) << e.what();
  }
}

TEST(Config, CoincidentVorticesRejected) {
  EXPECT_EQ(config_error_field(replace(kMinimal, "[-0.5, 0.0]", "[0.5, 0.0]")), "vortices");
}

TEST(Config, DumpParseRoundTrip) {
  for (const auto& entry : fs::directory_iterator(VORTEX_SCENARIO_DIR)) {
    const ScenarioConfig c = load_config(entry.path());
    const std::string dumped = dump_config(c);
    const ScenarioConfig back = parse_config(dumped);
    EXPECT_TRUE(back == c) << entry.path();
    EXPECT_EQ(dump_config(back), dumped);
  }
}

TEST(Config, BundledScenariosPresent) {
  for (const char* name : {"sphere_antipodal_pair", "sphere_pair_rotation", "torus_pair_translate", "torus_four_vortex",
                           "sphere_four_vortex_adaptive"}) {
    const ScenarioConfig c = load_config(fs::path(VORTEX_SCENARIO_DIR) / (std::string(name) + ".json"));
    EXPECT_EQ(c.name, name);
  }
  EXPECT_THROW(load_config("/nonexistent/scenario.json"), ConfigError);
}

TEST(Output, HeaderAndRows) {
  ScenarioConfig c = parse_config(kMinimal);
  EXPECT_EQ(csv_header(c), "t,z1_re,z1_im,chart1,z2_re,z2_im,chart2,H,min_sep");
  const ScenarioConfig t = load_config(fs::path(VORTEX_SCENARIO_DIR) / "torus_pair_translate.json");
  EXPECT_EQ(csv_header(t), "t,z1_re,z1_im,chart1,z2_re,z2_im,chart2,H,a_1,b_1,min_sep");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-2.5), "-2.5");
}

TEST(Run, WritesFilesDeterministically) {
  const ScenarioConfig c = load_config(fs::path(VORTEX_SCENARIO_DIR) / "torus_pair_translate.json");
  const fs::path d1 = scratch("run1"), d2 = scratch("run2");
  const RunSummary s1 = run_scenario(c, d1), s2 = run_scenario(c, d2);
  EXPECT_EQ(s1.exit_code, 0);
  EXPECT_EQ(s1.records, 101);
  EXPECT_DOUBLE_EQ(s1.final_time, 1.0);
  EXPECT_LT(s1.energy_drift, c.tolerances.energy_drift);
  EXPECT_LT(s1.kelvin_drift, c.tolerances.kelvin_drift);
  EXPECT_EQ(read_file(s1.trajectory), read_file(s2.trajectory));
  EXPECT_EQ(read_file(s1.diagnostics), read_file(s2.diagnostics));
  std::istringstream lines(read_file(s1.trajectory));
  std::string line;
  long n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 102);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Run, CollisionExitCode) {
  ScenarioConfig c = load_config(fs::path(VORTEX_SCENARIO_DIR) / "torus_four_vortex.json");
  c.collision_threshold = 0.4;
  c.integrator.steps = 4000;
  const fs::path d = scratch("collide");
  const RunSummary s = run_scenario(c, d);
  EXPECT_EQ(s.exit_code, 2);
  EXPECT_GT(s.records, 0);
  const std::string diag = read_file(s.diagnostics);
  EXPECT_NE(diag.find("\"event\":\"collision\""), std::string::npos);
  EXPECT_NE(diag.find("\"event\":\"summary\""), std::string::npos);
  fs::remove_all(d);
}

TEST(Verify, QuickSuitePasses) {
  const VerifyReport r = verify_suite({});
  EXPECT_GE(r.checks.size(), 20u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << " residual " << c.residual << " tol " << c.tolerance;
  EXPECT_TRUE(r.all_pass());
}

TEST(Verify, CorruptedToleranceFails) {
  VerifyOptions o;
  o.tolerance = 1e-15;
  EXPECT_FALSE(verify_suite(o).all_pass());
}

TEST(Verify, ScenarioChecks) {
  for (const auto& entry : fs::directory_iterator(VORTEX_SCENARIO_DIR)) {
    const ScenarioConfig c = load_config(entry.path());
    const VerifyReport r = verify_scenario(c, {});
    EXPECT_TRUE(r.all_pass()) << entry.path();
  }
}
