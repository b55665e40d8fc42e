#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "inertia/errors.hpp"
#include "inertia/harness/oracles.hpp"
#include "inertia/harness/suite.hpp"
#include "oracles.hpp"

using namespace inertia;
using namespace inertia::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("inertia_harness_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ScenarioConfig builtin(const std::string& suite, const std::string& name) {
  for (auto& cfg : builtin_scenarios(suite)) {
    if (cfg.name == name) return cfg;
  }
  throw std::runtime_error("no builtin " + name);
}

}  // namespace

TEST(Builtins, TheoremsAreFourValidConfigs) {
  const auto cfgs = builtin_scenarios("theorems");
  ASSERT_EQ(cfgs.size(), 4u);
  std::vector<std::string> labels;
  for (const auto& c : cfgs) {
    EXPECT_FALSE(c.exploratory);
    EXPECT_TRUE(c.hypothesis_notes.empty());
    EXPECT_EQ(c.dynamics.damping.alpha(), 0.5);
    EXPECT_EQ(c.dynamics.damping.c(), 2.0);
    EXPECT_EQ(c.t_end, 1e4);
    ASSERT_EQ(c.tags.size(), 1u);
    labels.push_back(c.tags[0].label());
  }
  EXPECT_EQ(labels, (std::vector<std::string>{"T1", "T2(0.75)", "T3", "T4"}));
  EXPECT_EQ(cfgs[0].dynamics.potential.kind(), PotentialKind::LeastSquares);
  EXPECT_EQ(cfgs[0].dynamics.potential.argmin_directions().cols(), 2);
  EXPECT_EQ(cfgs[0].dynamics.source.beta(), 1.6);
  EXPECT_EQ(cfgs[1].dynamics.source.beta(), 1.85);
  EXPECT_EQ(cfgs[2].dynamics.potential.kind(), PotentialKind::DistBallSq);
  EXPECT_EQ(cfgs[3].dynamics.potential.kind(), PotentialKind::EvenPower);
  EXPECT_EQ(cfgs[3].dynamics.source.beta(), 1.85);
}

TEST(Builtins, OraclesIncludeLinearClosedForm) {
  const auto cfg = builtin("oracles", "oracle_linear_c3");
  EXPECT_EQ(cfg.dynamics.damping.alpha(), 0.0);
  EXPECT_EQ(cfg.dynamics.damping.c(), 3.0);
  EXPECT_EQ(cfg.dynamics.potential.kind(), PotentialKind::Quadratic);
  EXPECT_EQ(cfg.x0(0), 1.0);
  EXPECT_EQ(cfg.v0(0), 0.0);
}

TEST(Builtins, BoundaryIsExploratoryAtTheEdge) {
  const auto cfgs = builtin_scenarios("boundary");
  ASSERT_FALSE(cfgs.empty());
  for (const auto& c : cfgs) {
    EXPECT_TRUE(c.exploratory);
    EXPECT_FALSE(c.hypothesis_notes.empty());
  }
  const auto t1 = builtin("boundary", "boundary_t1_edge");
  EXPECT_DOUBLE_EQ(t1.dynamics.source.beta(), t1.dynamics.damping.alpha() + 1.0);
}

TEST(Builtins, UnknownNameRejected) { EXPECT_THROW(builtin_scenarios("nope"), ConfigError); }

TEST(RunScenario, PureFrictionFlagsNonPowerLaw) {
  const auto run = run_scenario(builtin("oracles", "oracle_pure_friction"));
  EXPECT_EQ(run.report.status, "completed");
  ASSERT_FALSE(run.report.exponent_fits.empty());
  EXPECT_EQ(run.report.exponent_fits[0].field, "W");
  EXPECT_TRUE(run.report.exponent_fits[0].fit.applicable);
  EXPECT_FALSE(run.report.exponent_fits[0].fit.power_law);
  const auto& last = run.trajectory.samples.back();
  EXPECT_NEAR(last.x(0), oracle::friction_x(10.0), 1e-10);
}

TEST(RunScenario, TheoremOneBuiltinPasses) {
  const auto run = run_scenario(builtin_scenarios("theorems")[0]);
  ASSERT_EQ(run.report.verdicts.size(), 1u);
  const auto& v = run.report.verdicts[0];
  EXPECT_EQ(v.tag, "T1");
  for (const auto& c : v.checks) EXPECT_TRUE(c.passed()) << c.name << " " << c.statistic;
  EXPECT_EQ(v.verdict, Verdict::Pass);
  EXPECT_EQ(run.report.oscillations.size(), 3u);
  EXPECT_FALSE(run.report.failed());
}

TEST(RunScenario, ShortHorizonEnvelopeNotApplicable) {
  auto doc = builtin_documents("theorems")[0];
  doc["t_end"] = 10.0;
  const auto run = run_scenario(config_from_json(doc));
  const auto* v = run.report.verdict_for("T1");
  ASSERT_NE(v, nullptr);
  bool seen = false;
  for (const auto& c : v->checks) {
    if (c.name == "envelope_bound") {
      seen = true;
      EXPECT_EQ(c.verdict, Verdict::NotApplicable);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(RunScenario, EveryTagGetsOneVerdict) {
  const auto cfg = builtin("oracles", "oracle_vanishing_quadratic");
  const auto run = run_scenario(cfg);
  ASSERT_EQ(run.report.verdicts.size(), cfg.tags.size());
  for (std::size_t i = 0; i < cfg.tags.size(); ++i) {
    EXPECT_EQ(run.report.verdicts[i].tag, cfg.tags[i].label());
  }
}

TEST(RunScenario, AbortedRunReportsLastGoodTime) {
  auto doc = builtin_documents("oracles")[0];
  doc["name"] = "blowup";
  doc["potential"] = {{"kind", "EvenPower"}, {"dim", 1}, {"p", 4}, {"scale", 1.0}};
  doc["x0"] = {1e30};
  doc["tags"] = {"T4"};
  const auto dir = scratch_dir("aborted");
  const auto run = run_scenario(config_from_json(doc), RunOptions{dir});
  EXPECT_EQ(run.report.status, "aborted");
  EXPECT_LT(run.report.last_t, 10.0);
  EXPECT_TRUE(run.report.failed());
  ASSERT_EQ(run.report.verdicts.size(), 1u);
  EXPECT_EQ(run.report.verdicts[0].verdict, Verdict::Fail);
  const auto json = nlohmann::json::parse(slurp(dir / "blowup.report.json"));
  EXPECT_EQ(json["status"], "aborted");
  EXPECT_TRUE(json.contains("last_t"));
}

TEST(RunScenario, WritesTraceAndReport) {
  const auto dir = scratch_dir("outputs");
  const auto cfg = builtin("oracles", "oracle_linear_c3");
  run_scenario(cfg, RunOptions{dir});
  const std::string csv = slurp(dir / "oracle_linear_c3.trace.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t,W,t2a_W,E,M1_anchor,I_alphaW,I_vel2,I_gradgamma,I_vL1,dist_xstar");
  const auto json = nlohmann::json::parse(slurp(dir / "oracle_linear_c3.report.json"));
  for (const char* key : {"scenario", "verdicts", "exponent_fits", "accumulators", "oscillations",
                          "cauchy_tail", "invariants", "config"}) {
    EXPECT_TRUE(json.contains(key)) << key;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    EXPECT_EQ(entry.path().string().find(".tmp-"), std::string::npos) << entry.path();
  }
}

TEST(RunScenario, TracesAreBitIdentical) {
  const auto cfg = builtin_scenarios("theorems")[1];
  const auto a = scratch_dir("repro_a");
  const auto b = scratch_dir("repro_b");
  run_scenario(cfg, RunOptions{a});
  run_scenario(cfg, RunOptions{b});
  const std::string ta = slurp(a / (cfg.name + ".trace.csv"));
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b / (cfg.name + ".trace.csv")));
}

TEST(Suite, MalformedConfigErrorsOthersComplete) {
  const auto dir = scratch_dir("suite_bad");
  std::ofstream(dir / "bad.toml") << "name = \"bad\"\n[damping]\nc = 1\nalpha = 1.0\n";
  std::ofstream(dir / "good.json") << builtin_documents("oracles")[1].dump();
  const auto result =
      run_suite(suite_inputs({(dir / "bad.toml").string(), (dir / "good.json").string()}),
                SuiteOptions{2, dir / "out"});
  ASSERT_EQ(result.entries.size(), 2u);
  EXPECT_EQ(result.errored, 1u);
  EXPECT_EQ(result.passed, 1u);
  EXPECT_NE(result.exit_code(), 0);
  EXPECT_EQ(result.entries[0].name, "bad");
  EXPECT_NE(result.entries[0].error.find("[0, 1)"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "suite.summary.json"));
}

TEST(Suite, EmptySuiteWarnsAndSucceeds) {
  const auto result = run_suite({});
  EXPECT_EQ(result.exit_code(), 0);
  EXPECT_FALSE(result.warnings.empty());
}

TEST(Suite, SortedAndDeterministicAcrossWorkerCounts) {
  const auto one = run_suite(suite_inputs({"oracles"}), SuiteOptions{1, std::nullopt});
  const auto many = run_suite(suite_inputs({"oracles"}), SuiteOptions{4, std::nullopt});
  ASSERT_EQ(one.entries.size(), many.entries.size());
  for (std::size_t i = 0; i < one.entries.size(); ++i) {
    EXPECT_EQ(one.entries[i].name, many.entries[i].name);
    if (i) EXPECT_LT(one.entries[i - 1].name, one.entries[i].name);
  }
  EXPECT_EQ(one.exit_code(), 0);
}

TEST(Suite, BoundaryNeverGatesExitCode) {
  const auto result = run_suite(suite_inputs({"boundary"}));
  EXPECT_EQ(result.exploratory, result.entries.size());
  EXPECT_EQ(result.exit_code(), 0);
}

TEST(Suite, TheoremsPass) {
  const auto result = run_suite(suite_inputs({"theorems"}));
  EXPECT_EQ(result.passed, 4u);
  EXPECT_EQ(result.exit_code(), 0);
}

TEST(Oracles, AllPass) {
  for (const auto& c : run_oracles()) EXPECT_TRUE(c.passed()) << c.name << " " << c.statistic;
}

TEST(WriteAtomic, ReplacesExistingFile) {
  const auto dir = scratch_dir("atomic");
  write_atomic(dir / "f.txt", "first");
  write_atomic(dir / "f.txt", "second");
  EXPECT_EQ(slurp(dir / "f.txt"), "second");
  EXPECT_THROW(write_atomic(dir / "missing" / "f.txt", "x"), std::runtime_error);
}
