// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "aspsim/cli.hpp"
#include "aspsim/errors.hpp"

namespace aspsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json hubbard2() {
  return {{"system", {{"hubbard", {{"rows", 1}, {"cols", 2}, {"U", 1.0}, {"n_alpha", 1}, {"n_beta", 1}}}}}};
}

json chain6() {
  return {{"system", {{"hubbard", {{"rows", 1}, {"cols", 6}, {"U", 2.0}, {"n_alpha", 3}, {"n_beta", 3}}}}}};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("aspsim_cli_" + name);
  fs::remove_all(p);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

int run_quiet(const RunConfig& c, std::string* log = nullptr) {
  std::ostringstream out;
  const int code = run(c, out);
  if (log) *log = out.str();
  return code;
}

TEST(RunConfig, StrictParsing) {
  auto j = hubbard2();
  j["propagation"] = {{"dt", 0.05}, {"stepsize", 1}};
  try {
    (void)RunConfig::from_json(j);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("propagation.stepsize"), std::string::npos);
  }
  j = hubbard2();
  j["total_time"] = "long";
  EXPECT_THROW((void)RunConfig::from_json(j), ConfigError);
  j = hubbard2();
  j["fci_cap"] = -3;
  EXPECT_THROW((void)RunConfig::from_json(j), ConfigError);
  j = hubbard2();
  j["experiment"] = "anneal";
  EXPECT_THROW((void)RunConfig::from_json(j), ConfigError);
}

TEST(RunConfig, JsonRoundTrip) {
  auto j = chain6();
  j["experiment"] = "study";
  j["study"] = {{"kind", "gap_error"}, {"dt_values", {0.5, 0.1}}};
  j["initial"] = {{"kind", "casci_block"}, {"active_orbitals", {0, 1, 2, 3}}};
  j["schedule"] = {{"kind", "polynomial"}, {"c", 0.9}};
  const auto a = RunConfig::from_json(j);
  EXPECT_EQ(a.experiment, Experiment::study);
  EXPECT_EQ(a.study, StudyKind::gap_error);
  EXPECT_EQ(a.schedule.c, 0.9);
  const auto b = RunConfig::from_json(a.to_json());
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Validate, Examples) {
  auto j = chain6();
  EXPECT_TRUE(validate(RunConfig::from_json(j)).empty());

  j["experiment"] = "asci-select";
  j["asci"] = {{"ground", {{"target_size", 10}, {"core_size", 20}}}};
  const auto d = validate(RunConfig::from_json(j));
  ASSERT_EQ(d.size(), 1U);
  EXPECT_NE(d[0].find("core_size"), std::string::npos);
  EXPECT_NE(d[0].find("target_size"), std::string::npos);

  const auto missing = validate(RunConfig::from_json({{"system", {{"fcidump", "/no/such/file"}}}}));
  ASSERT_EQ(missing.size(), 1U);
  EXPECT_NE(missing[0].find("fcidump"), std::string::npos);

  EXPECT_EQ(validate(RunConfig::from_json(json::object())).size(), 1U);
}

TEST(Run, EvolveWritesTraceAndManifest) {
  auto j = hubbard2();
  j["total_time"] = 1.0;
  j["output_dir"] = scratch("evolve").string();
  const auto c = RunConfig::from_json(j);
  ASSERT_EQ(run_quiet(c), kExitOk);

  std::ifstream csv(c.output_dir / "trace.csv");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  EXPECT_EQ(lines, 11);  // header + ceil(1 / 0.1) steps

  const auto manifest = read_json(c.output_dir / "manifest.json");
  EXPECT_EQ(manifest["exit_code"], 0);
  EXPECT_EQ(manifest["config"], c.to_json());
  std::set<std::string> listed;
  for (const auto& f : manifest["files"]) listed.insert(f.get<std::string>());
  for (const auto& e : fs::directory_iterator(c.output_dir)) {
    EXPECT_TRUE(listed.contains(e.path().filename().string())) << e.path();
  }
  for (const auto& name : listed) EXPECT_TRUE(fs::exists(c.output_dir / name)) << name;
}

TEST(Run, IdenticalResultsOnRerun) {
  auto j = chain6();
  j["experiment"] = "critical-time";
  j["space"] = "asci";
  j["asci"] = {{"ground", {{"target_size", 100}, {"core_size", 100}}},
               {"excited", {{"target_size", 100}, {"core_size", 100}}}};
  j["output_dir"] = scratch("rerun_a").string();
  ASSERT_EQ(run_quiet(RunConfig::from_json(j)), kExitOk);
  const auto a = read_json(fs::path(j["output_dir"].get<std::string>()) / "result.json");
  j["output_dir"] = scratch("rerun_b").string();
  ASSERT_EQ(run_quiet(RunConfig::from_json(j)), kExitOk);
  const auto b = read_json(fs::path(j["output_dir"].get<std::string>()) / "result.json");
  EXPECT_EQ(a, b);
  EXPECT_GT(a["t_critical"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(fs::path(j["output_dir"].get<std::string>()) / "bracket_passing.csv"));
}

TEST(Run, StudyDtConvergenceFiles) {
  auto j = hubbard2();
  j["experiment"] = "study";
  j["study"] = {{"kind", "dt_convergence"}};
  j["total_time"] = 2.0;
  j["output_dir"] = scratch("study").string();
  const auto c = RunConfig::from_json(j);
  ASSERT_EQ(run_quiet(c), kExitOk);
  int traces = 0, summaries = 0;
  for (const auto& e : fs::directory_iterator(c.output_dir)) {
    const auto name = e.path().filename().string();
    traces += name.ends_with("_trace.csv");
    summaries += name.ends_with("_summary.json");
  }
  EXPECT_EQ(traces, 3);
  EXPECT_EQ(summaries, 1);
}

TEST(Run, ExitCodes) {
  std::string log;
  auto j = chain6();
  j["output_dir"] = scratch("codes").string();

  auto bad = j;
  bad["propagation"] = {{"dt", -1.0}};
  EXPECT_EQ(run_quiet(RunConfig::from_json(bad), &log), kExitConfig);

  auto unreachable = j;
  unreachable["experiment"] = "critical-time";
  unreachable["critical_time"] = {{"overlap_threshold", 0.9999999}, {"t_cap", 0.4}};
  EXPECT_EQ(run_quiet(RunConfig::from_json(unreachable), &log), kExitUnreachable);
  EXPECT_NE(log.find("critical-time search"), std::string::npos) << log;
  EXPECT_EQ(read_json(fs::path(j["output_dir"].get<std::string>()) / "result.json")["status"], "unreachable");

  auto stuck = j;
  stuck["experiment"] = "asci-select";
  stuck["asci"] = {{"ground", {{"target_size", 100}, {"core_size", 100}, {"max_iterations", 1}}},
                   {"excited", {{"target_size", 0}}}};
  EXPECT_EQ(run_quiet(RunConfig::from_json(stuck), &log), kExitConvergence);
  EXPECT_NE(log.find("asci selection"), std::string::npos) << log;
}

TEST(Run, AsciSelectSavesSpaces) {
  auto j = chain6();
  j["experiment"] = "asci-select";
  j["asci"] = {{"ground", {{"target_size", 50}, {"core_size", 50}}},
               {"excited", {{"target_size", 50}, {"core_size", 50}}}};
  j["output_dir"] = scratch("select").string();
  const auto c = RunConfig::from_json(j);
  ASSERT_EQ(run_quiet(c), kExitOk);
  const auto g = SelectedSpace::load(c.output_dir / "asci_ground.txt");
  const auto r = read_json(c.output_dir / "result.json");
  EXPECT_EQ(r["ground"]["dimension"], g.dets.size());
  EXPECT_EQ(r["ground"]["energy"], g.energy);
  EXPECT_TRUE(fs::exists(c.output_dir / "asci_excited.txt"));
}

TEST(Run, ThreadCountFromEnvironment) {
  ::setenv("ASPSIM_NUM_THREADS", "1", 1);
  auto j = hubbard2();
  j["output_dir"] = scratch("threads").string();
  const auto c = RunConfig::from_json(j);
  ASSERT_EQ(run_quiet(c), kExitOk);
  EXPECT_EQ(read_json(c.output_dir / "manifest.json")["threads"], 1);
  ::unsetenv("ASPSIM_NUM_THREADS");
}

int shell(const std::string& args) {
  const int raw = std::system((std::string(ASPSIM_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

TEST(Executable, ExitStatuses) {
  const auto out = scratch("exe");
  EXPECT_EQ(shell("evolve --rows 1 --cols 2 --U 1 --n-alpha 1 --n-beta 1 -T 0.5 -o " + out.string()), kExitOk);
  EXPECT_TRUE(fs::exists(out / "trace.csv"));
  EXPECT_EQ(shell("validate --fcidump /no/such/file"), kExitConfig);
  EXPECT_EQ(shell("validate --rows 1 --cols 4 --n-alpha 2 --n-beta 2"), kExitOk);
  EXPECT_EQ(shell("critical-time --rows 1 --cols 6 --n-alpha 3 --n-beta 3 --U 2 --overlap-threshold 0.9999999 "
                  "--t-cap 0.4 -o " + out.string()),
            kExitUnreachable);
  EXPECT_EQ(shell("evolve --rows 1 --cols 2 --n-alpha 1 --n-beta 1 --dt -1 -o " + out.string()), kExitConfig);
  EXPECT_EQ(shell("--version"), kExitOk);
}

}  // namespace
}  // namespace aspsim
