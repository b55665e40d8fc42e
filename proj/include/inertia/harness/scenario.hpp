#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "inertia/diagnostics.hpp"
#include "inertia/harness/config.hpp"

namespace inertia::harness {

struct TagVerdict {
  std::string tag;
  /// Fail if any component fails, NotApplicable if none fails but one is
  /// not applicable, Pass otherwise.
  Verdict verdict = Verdict::NotApplicable;
  std::vector<CheckResult> checks;
};

Verdict combine(const std::vector<CheckResult>& checks);

struct ExponentFit {
  std::string field;
  PowerLawFit fit;
};

struct AccumulatorSummary {
  std::string name;
  double final_value = 0.0;
  Flatness flatness;
};

struct OscillationEntry {
  Vector z;
  double oscillation = 0.0;
  double threshold = 0.0;
};

struct DiagnosticsReport {
  std::string scenario;
  /// "completed" or "aborted".
  std::string status = "completed";
  std::string error;
  double last_t = 0.0;
  bool exploratory = false;
  std::vector<std::string> hypothesis_notes;
  std::vector<TagVerdict> verdicts;
  std::vector<CheckResult> invariants;
  std::vector<ExponentFit> exponent_fits;
  std::vector<AccumulatorSummary> accumulators;
  std::vector<OscillationEntry> oscillations;
  std::optional<double> cauchy_tail;
  SolverStats stats;
  double wall_seconds = 0.0;

  bool aborted() const { return status != "completed"; }
  /// Aborted, or a declared verdict failed in a non-exploratory scenario.
  bool failed() const;
  const TagVerdict* verdict_for(const std::string& tag) const;
  const CheckResult* invariant(const std::string& name) const;

  nlohmann::json to_json() const;
};

struct RunOptions {
  /// Trace and report are written here when set.
  std::optional<std::filesystem::path> out_dir;
};

struct ScenarioRun {
  DiagnosticsReport report;
  Trajectory trajectory;
};

/// Builds the h-table, integrates with the standard accumulators and
/// evaluates the verdict of every declared tag plus the invariants. Solver
/// failures give an "aborted" report over the partial trajectory.
ScenarioRun run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// One row per checkpoint: t, W, t2a_W, E, M1_anchor, I_alphaW, I_vel2,
/// I_gradgamma, I_vL1, dist_xstar.
std::string trace_csv(const Trajectory& traj, double alpha);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace inertia::harness
