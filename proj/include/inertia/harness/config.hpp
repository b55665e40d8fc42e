#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inertia/integrate.hpp"

namespace inertia::harness {

enum class TheoremId { T1, T2, T3, T4 };

/// A declared theorem tag; `nu` is only meaningful for T2.
struct TheoremTag {
  TheoremId id = TheoremId::T1;
  double nu = 0.0;

  /// "T1", "T2(0.75)", "T3", "T4".
  std::string label() const;
};

/// Parses "T1", "T2(0.75)", "T3" or "T4"; ConfigError otherwise.
TheoremTag parse_tag(std::string_view text);

/// Fields left empty fall back to SolverSettings defaults.
struct SolverOverrides {
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<double> max_step;
  std::optional<double> t0;
  std::optional<double> points_per_decade;
};

struct ScenarioConfig {
  std::string name;
  Dynamics dynamics;
  Vector x0;
  Vector v0;
  double t_end = 1e4;
  SolverOverrides solver;
  std::vector<TheoremTag> tags;
  /// Outcomes are not predicted; hypothesis violations become notes.
  bool exploratory = false;
  std::vector<std::string> hypothesis_notes;
  /// The validated document, echoed into reports.
  nlohmann::json document;

  SolverSettings solver_settings() const;
  /// The nu of a T2 tag if declared, (1 + alpha) / 2 otherwise.
  double velocity_weight_nu() const;
  bool has_tag(TheoremId id) const;
};

/// TOML or JSON (a leading '{' selects JSON). Throws ConfigError naming the
/// offending field, or HypothesisError when a declared tag's hypotheses fail.
ScenarioConfig parse_config(std::string_view text);

ScenarioConfig config_from_json(const nlohmann::json& doc);

/// Reads and parses a file; ConfigError if it cannot be read.
ScenarioConfig load_config_file(const std::string& path);

}  // namespace inertia::harness
