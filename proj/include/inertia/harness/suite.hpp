#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inertia/harness/scenario.hpp"

namespace inertia::harness {

/// "theorems", "oracles" or "boundary"; ConfigError for anything else.
std::vector<ScenarioConfig> builtin_scenarios(std::string_view name);

bool is_builtin_suite(std::string_view name);

/// The builtin suites as raw documents, before validation.
std::vector<nlohmann::json> builtin_documents(std::string_view name);

/// One unit of suite work. `load` may throw; the scenario then counts as
/// errored under `label`.
struct SuiteInput {
  std::string label;
  std::function<ScenarioConfig()> load;
};

/// Builtin suite names expand to their scenarios; anything else is read as a
/// config file path.
std::vector<SuiteInput> suite_inputs(const std::vector<std::string>& names_or_paths);

struct SuiteEntry {
  std::string name;
  std::optional<DiagnosticsReport> report;
  /// Set when the config could not be loaded or the run threw.
  std::string error;
  double wall_seconds = 0.0;

  bool failed() const { return !report || report->failed(); }
};

struct SuiteResult {
  /// Sorted by name.
  std::vector<SuiteEntry> entries;
  std::vector<std::string> warnings;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t aborted = 0;
  std::size_t errored = 0;
  std::size_t exploratory = 0;

  /// 0 iff no declared verdict failed and nothing aborted or errored.
  int exit_code() const;
  nlohmann::json summary() const;
};

struct SuiteOptions {
  /// 0 selects the hardware concurrency.
  std::size_t workers = 0;
  std::optional<std::filesystem::path> out_dir;
};

/// Runs every input on a bounded worker pool; writes per-scenario outputs and
/// suite.summary.json when an output directory is set.
SuiteResult run_suite(const std::vector<SuiteInput>& inputs, const SuiteOptions& options = {});

}  // namespace inertia::harness
