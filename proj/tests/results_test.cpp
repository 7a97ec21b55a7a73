// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "rydarray/results.hpp"
#include "rydarray/scenario.hpp"

namespace rydarray
{
namespace
{

namespace fs = std::filesystem;

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string &name)
{
  const fs::path p = fs::temp_directory_path() / ("rydarray_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Csv, HeaderOnlyForEmptyTable)
{
  Table t{{"a", "b,c"}, {}};
  EXPECT_EQ(to_csv(t), "a,\"b,c\"\n");
}

TEST(Csv, RowsRoundTripExactly)
{
  Table t{{"x", "y"}, {}};
  t.add_row({0.1, 1.0 / 3.0});
  const std::string text = to_csv(t);
  EXPECT_EQ(text, "x,y\n0.1,0.3333333333333333\n");
  EXPECT_THROW(t.add_row({1.0}), DomainError);
}

TEST(Results, RejectsNonFiniteValuesBeforeWriting)
{
  const fs::path dir = scratch("nan");
  Table t{{"x"}, {}};
  t.add_row({std::numeric_limits<Real>::quiet_NaN()});
  EXPECT_THROW(write_results(dir.string(), "bad", t, nlohmann::json::object()), NumericError);
  EXPECT_FALSE(fs::exists(dir / "bad.csv"));
}

TEST(Results, SidecarRecordsHashAndRows)
{
  const fs::path dir = scratch("sidecar");
  Table t{{"x"}, {}};
  t.add_row({1.5});
  const auto files = write_results(dir.string(), "run", t, {{"note", "n"}});
  ASSERT_EQ(files.size(), 2u);
  const auto side = nlohmann::json::parse(slurp(dir / "run.json"));
  EXPECT_EQ(side["rows"], 1);
  EXPECT_EQ(side["note"], "n");
  EXPECT_EQ(side["csv_hash"], content_hash(slurp(dir / "run.csv")));
}

TEST(Scenarios, RerunsAreByteIdentical)
{
  ScenarioConfig c;
  c.lattice.diameter_sites = 4;
  c.drive.omega_over_gamma = 1.0;
  c.scan.variable = "delta";
  c.scan.grid = {-0.2, 0.0, 0.2};
  RunOptions one;
  one.output_dir = scratch("rerun_a").string();
  RunOptions two;
  two.output_dir = scratch("rerun_b").string();
  two.workers = 3;
  run_scenario("fig1e", c, one);
  run_scenario("fig1e", c, two);
  EXPECT_EQ(slurp(fs::path(*one.output_dir) / "fig1e.csv"),
            slurp(fs::path(*two.output_dir) / "fig1e.csv"));
  auto a = nlohmann::json::parse(slurp(fs::path(*one.output_dir) / "fig1e.json"));
  auto b = nlohmann::json::parse(slurp(fs::path(*two.output_dir) / "fig1e.json"));
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  EXPECT_EQ(a, b);
}

TEST(Scenarios, CorrelationScenarioNeedsControlField)
{
  ScenarioConfig c;
  c.lattice.diameter_sites = 4;
  RunOptions o;
  o.output_dir = scratch("needs_control").string();
  try
  {
    run_scenario("fig3a", c, o);
    FAIL();
  }
  catch (const ConfigError &e)
  {
    EXPECT_EQ(e.key(), "drive.omega_over_gamma");
  }
  EXPECT_THROW(run_scenario("fig9", c, o), ConfigError);
}

TEST(Scenarios, McwfWritesTrajectoryLog)
{
  ScenarioConfig c;
  c.lattice.diameter_sites = 2;
  c.beam.power_scale = 0.05;
  c.run.trajectories = 8;
  c.run.t_end = 10.0;
  c.run.burn_in = 1.0;
  RunOptions o;
  o.output_dir = scratch("mcwf").string();
  const ScenarioOutput out = run_scenario("mcwf", c, o);
  EXPECT_EQ(out.files.size(), 3u);
  std::ifstream log(fs::path(*o.output_dir) / "mcwf_trajectories.jsonl");
  int lines = 0;
  for (std::string line; std::getline(log, line);)
  {
    EXPECT_NO_THROW(nlohmann::json::parse(line));
    ++lines;
  }
  EXPECT_EQ(lines, 8);
}

}  // namespace
}  // namespace rydarray
