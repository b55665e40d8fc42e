#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "inertia/errors.hpp"
#include "inertia/harness/oracles.hpp"
#include "inertia/harness/suite.hpp"

namespace fs = std::filesystem;
using namespace inertia;
using namespace inertia::harness;

namespace {

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("INERTIA_LAB_OUT"); env && *env) return env;
  return fs::current_path();
}

void print_report(const DiagnosticsReport& r) {
  std::cout << r.scenario << ": " << r.status;
  if (r.exploratory) std::cout << " (exploratory)";
  std::cout << ", t = " << r.last_t << ", " << r.wall_seconds << " s\n";
  if (!r.error.empty()) std::cout << "  error: " << r.error << "\n";
  for (const auto& note : r.hypothesis_notes) std::cout << "  note: " << note << "\n";
  for (const auto& v : r.verdicts) {
    std::cout << "  " << v.tag << ": " << to_string(v.verdict) << "\n";
    for (const auto& c : v.checks) {
      std::cout << "    " << to_string(c.verdict) << "  " << c.name << "  " << c.statistic
                << " (threshold " << c.threshold << ")\n";
    }
  }
  for (const auto& c : r.invariants) {
    std::cout << "  invariant " << c.name << ": " << to_string(c.verdict) << "  " << c.statistic
              << " (threshold " << c.threshold << ")\n";
  }
}

int cmd_run(const std::string& path, const std::string& out, std::optional<double> t_end,
            std::optional<double> tol) {
  ScenarioConfig cfg = load_config_file(path);
  if (t_end) {
    if (!(*t_end >= 10.0)) throw ConfigError("--t-end: must be >= 10");
    cfg.t_end = *t_end;
    cfg.document["t_end"] = *t_end;
  }
  if (tol) {
    cfg.solver.rel_tol = *tol;
    cfg.document["solver"]["rel_tol"] = *tol;
    cfg.solver_settings().validate();
  }
  const fs::path dir = output_dir(out);
  const auto run = run_scenario(cfg, RunOptions{dir});
  print_report(run.report);
  std::cout << "wrote " << (dir / (cfg.name + ".report.json")).string() << "\n";
  return run.report.failed() ? 1 : 0;
}

int cmd_suite(const std::vector<std::string>& items, const std::string& out, std::size_t workers) {
  const fs::path dir = output_dir(out);
  const SuiteResult result = run_suite(suite_inputs(items), SuiteOptions{workers, dir});
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : result.entries) {
    if (e.report) {
      print_report(*e.report);
    } else {
      std::cout << e.name << ": errored: " << e.error << "\n";
    }
  }
  std::cout << "passed " << result.passed << ", failed " << result.failed << ", aborted "
            << result.aborted << ", errored " << result.errored << ", exploratory "
            << result.exploratory << "\n";
  std::cout << "wrote " << (dir / "suite.summary.json").string() << "\n";
  return result.exit_code();
}

int cmd_oracle() {
  bool ok = true;
  for (const auto& c : run_oracles()) {
    std::cout << to_string(c.verdict) << "  " << c.name << "  " << c.statistic << " (threshold "
              << c.threshold << ")\n";
    ok = ok && c.passed();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for inertial dynamics with vanishing damping"};
  app.require_subcommand(1);

  std::string run_path, run_out;
  std::optional<double> run_t_end, run_tol;
  auto* run = app.add_subcommand("run", "Run one scenario config (TOML or JSON)");
  run->add_option("config", run_path, "Scenario config file")->required();
  run->add_option("--out", run_out, "Output directory (default: $INERTIA_LAB_OUT or cwd)");
  run->add_option("--t-end", run_t_end, "Override the horizon");
  run->add_option("--tol", run_tol, "Override the relative tolerance");

  std::vector<std::string> suite_items;
  std::string suite_out;
  std::size_t workers = 0;
  auto* suite = app.add_subcommand("suite", "Run a builtin suite (theorems, oracles, boundary) or config files");
  suite->add_option("items", suite_items, "Builtin suite names or config paths");
  suite->add_option("--workers", workers, "Parallel workers (default: hardware concurrency)");
  suite->add_option("--out", suite_out, "Output directory (default: $INERTIA_LAB_OUT or cwd)");

  app.add_subcommand("oracle", "Run the closed-form cross-checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_path, run_out, run_t_end, run_tol);
    if (*suite) return cmd_suite(suite_items, suite_out, workers);
    return cmd_oracle();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
