// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermient/scenarios.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fermient {
namespace {

TEST(Grid, EndpointsInclusive) {
  const auto g = parse_p_grid("0:1:11");
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[3], 0.3, 1e-15);
  EXPECT_EQ(parse_p_grid("0.25:0.75:1"), std::vector<double>{0.25});
  for (const char* bad : {"0:1", "a:1:3", "0:1:0", "0:1:2.5", "0:1:3x"}) EXPECT_THROW(parse_p_grid(bad), ConfigError) << bad;
}

TEST(JsonRoundTrip, RandomFockVectors) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const OrbitalBasis b = OrbitalBasis::two_mode(1 + trial % 4);
    const int n = trial % (b.size() + 1);
    const FockVector v = testing::random_state(b, n, rng);
    const FockVector back = fock_from_json(Json::parse(to_json(v).dump()));
    ASSERT_EQ(back.basis(), v.basis());
    ASSERT_EQ(back.n_particles(), v.n_particles());
    ASSERT_EQ(max_abs_difference(back, v), 0.0);
    ASSERT_EQ(to_json(back).dump(), to_json(v).dump());
  }
}

TEST(JsonRoundTrip, RejectsOrbitalOutsideBasis) {
  Json j = to_json(slater_state(OrbitalBasis::two_mode(1), {0, 1}));
  j["amplitudes"][0]["occupied"] = {0, 5};
  EXPECT_THROW(fock_from_json(j), DomainError);
}

TEST(Scenarios, TwoElectronGridPasses) {
  ScenarioConfig c;
  c.scenario = "two-electron";
  c.p_grid = parse_p_grid("0:1:11");
  const RunRecord r = run_scenario(c);
  EXPECT_TRUE(r.passed());
  ASSERT_EQ(r.points.size(), 11u);
  // Endpoints never reach the one-per-well branch.
  EXPECT_EQ(r.points.front().scalars.front().second, 1.0);
  EXPECT_EQ(r.points[5].scalars.front().second, 0.0);
}

TEST(Scenarios, CertificationAndDetectorPass) {
  ScenarioConfig c;
  c.p_grid = parse_p_grid("0.1:0.9:9");
  c.tolerance = 1e-12;
  c.scenario = "certify";
  EXPECT_TRUE(run_scenario(c).passed());
  c.scenario = "detector";
  c.tolerance = 1e-10;
  c.detector_levels = 5;
  EXPECT_TRUE(run_scenario(c).passed());
}

TEST(Scenarios, DetectorEndpoint) {
  const GridPoint g = scenario_detector(1.0, 3, 1e-10);
  const auto it = std::find_if(g.checks.begin(), g.checks.end(), [](const Check& c) { return c.name == "readout_probability_0"; });
  ASSERT_NE(it, g.checks.end());
  EXPECT_DOUBLE_EQ(it->value, 1.0);
  EXPECT_TRUE(g.passed());
}

TEST(Scenarios, NFermionReportsClosedFormResiduals) {
  const GridPoint ok = scenario_n_fermion(3, 1, 3, 0.5, 1e-10);
  EXPECT_TRUE(ok.passed());
  const GridPoint two = scenario_n_fermion(4, 2, 4, 0.5, 1e-10);
  const auto rank = std::find_if(two.checks.begin(), two.checks.end(), [](const Check& c) { return c.name == "schmidt_rank"; });
  ASSERT_NE(rank, two.checks.end());
  EXPECT_EQ(rank->value, 18.0);
  EXPECT_EQ(rank->expected, 24.0);
  EXPECT_FALSE(two.passed());
}

TEST(Scenarios, ConfigErrors) {
  EXPECT_THROW(scenario_certification(0.0, 1e-10), ConfigError);
  EXPECT_THROW(scenario_n_fermion(4, 3, 4, 0.5, 1e-10), ConfigError);
  EXPECT_THROW(scenario_n_fermion(4, 2, 3, 0.5, 1e-10), ConfigError);
  EXPECT_THROW(scenario_detector(0.5, 2, 1e-10), ConfigError);
  EXPECT_THROW(scenario_two_electron(-0.1, 1e-10), ConfigError);
  ScenarioConfig c;
  c.scenario = "teleport";
  EXPECT_THROW(run_scenario(c), ConfigError);
}

TEST(RunRecord, DeterministicOutput) {
  ScenarioConfig c;
  c.scenario = "detector";
  c.p_grid = parse_p_grid("0.2:0.8:4");
  EXPECT_EQ(to_json(run_scenario(c), false).dump(), to_json(run_scenario(c), false).dump());
  c.format = "csv";
  EXPECT_EQ(render(run_scenario(c)), render(run_scenario(c)));
}

TEST(RunRecord, CsvHasOneRowPerPoint) {
  ScenarioConfig c;
  c.scenario = "two-electron";
  c.p_grid = parse_p_grid("0:1:5");
  c.format = "csv";
  std::istringstream in(render(run_scenario(c)));
  std::string header, line;
  std::getline(in, header);
  const auto columns = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns);
  }
  EXPECT_EQ(rows, 5);
}

#ifdef FERMIENT_CLI_PATH
int run_cli(const std::string& args) {
  const int status = std::system((std::string(FERMIENT_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_cli_env(const std::string& dir) {
  const int status = std::system(("FERMIENT_OUTPUT_DIR=" + dir + " " + FERMIENT_CLI_PATH + " certify --p 0.3 2> /dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("two-electron --p-grid 0:1:5"), 0);
  EXPECT_EQ(run_cli("certify --p 0.1 --tol 1e-12 --format csv"), 0);
  EXPECT_EQ(run_cli("detector --p 0.2 --detector-levels 4"), 0);
  EXPECT_EQ(run_cli("n-fermion --n 3 --m 1"), 0);
  EXPECT_EQ(run_cli("n-fermion --n 4 --m 2"), 1);
  EXPECT_EQ(run_cli("certify --p 1"), 2);
  EXPECT_EQ(run_cli("detector --format xml"), 105);  // CLI11 validation failure
}

TEST(Cli, EnvironmentSetsOutputDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "fermient_cli_test";
  std::filesystem::remove_all(dir);
  ASSERT_EQ(run_cli_env(dir.string()), 0);
  std::ifstream file(dir / "certify.json");
  ASSERT_TRUE(file.good());
  const Json j = Json::parse(file);
  EXPECT_EQ(j.at("config").at("scenario"), "certify");
  EXPECT_TRUE(j.at("passed").get<bool>());
  std::filesystem::remove_all(dir);
}
#endif

}  // namespace
}  // namespace fermient
