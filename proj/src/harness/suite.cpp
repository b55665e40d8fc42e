#include "inertia/harness/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "inertia/errors.hpp"

namespace inertia::harness {

namespace {

using nlohmann::json;

// Rank-deficient 4x5 least squares; arg min is a 2-dimensional affine set.
json least_squares_potential() {
  return {{"kind", "LeastSquares"},
          {"M", {{1.0, 0.5, 0.0, 0.2, 0.0},
                 {0.0, 1.0, 0.3, 0.0, 0.1},
                 {0.4, 0.0, 1.0, 0.0, 0.0},
                 {0.0, 0.0, 0.0, 0.0, 0.0}}},
          {"y", {0.5, -0.85, 0.9, 0.0}}};
}

json theorem_t1() {
  return {{"name", "theorem1_least_squares"},
          {"damping", {{"c", 2.0}, {"alpha", 0.5}}},
          {"potential", least_squares_potential()},
          {"source", {{"kind", "PowerDecay"},
                      {"direction", {1.0, 1.0, 1.0, 1.0, 1.0}},
                      {"amplitude", 0.01},
                      {"beta", 1.6}}},
          {"x0", {3.0, -2.0, 1.0, 2.0, -1.0}},
          {"v0", {0.0, 0.0, 0.0, 0.0, 0.0}},
          {"t_end", 1e4},
          {"tags", {"T1"}}};
}

json theorem_t2() {
  return {{"name", "theorem2_even_power"},
          {"damping", {{"c", 2.0}, {"alpha", 0.5}}},
          {"potential", {{"kind", "EvenPower"}, {"dim", 2}, {"p", 4}, {"scale", 1.0}}},
          {"source", {{"kind", "PowerDecay"},
                      {"direction", {1.0, 0.0}},
                      {"amplitude", 1.0},
                      {"beta", 1.85}}},
          {"x0", {1.0, -0.5}},
          {"v0", {0.0, 0.0}},
          {"t_end", 1e4},
          {"tags", {"T2(0.75)"}}};
}

json theorem_t3() {
  return {{"name", "theorem3_ball"},
          {"damping", {{"c", 2.0}, {"alpha", 0.5}}},
          {"potential", {{"kind", "DistBallSq"}, {"center", {0.0, 0.0, 0.0}}, {"radius", 1.0}}},
          {"source", {{"kind", "PowerDecay"},
                      {"direction", {1.0, -1.0, 2.0}},
                      {"amplitude", 0.001},
                      {"beta", 1.6}}},
          {"x0", {4.0, 3.0, -2.0}},
          {"v0", {0.0, 0.0, 0.0}},
          {"t_end", 1e4},
          {"solver", {{"rel_tol", 1e-11}}},
          {"tags", {"T3"}}};
}

json theorem_t4() {
  return {{"name", "theorem4_even_power"},
          {"damping", {{"c", 2.0}, {"alpha", 0.5}}},
          {"potential", {{"kind", "EvenPower"}, {"dim", 2}, {"p", 4}, {"scale", 100.0}}},
          {"source", {{"kind", "PowerDecay"},
                      {"direction", {1.0, 2.0}},
                      {"amplitude", 0.01},
                      {"beta", 1.85}}},
          {"x0", {0.1, -0.05}},
          {"v0", {0.0, 0.0}},
          {"t_end", 1e4},
          {"tags", {"T4"}}};
}

json oracle_linear() {
  return {{"name", "oracle_linear_c3"},
          {"damping", {{"c", 3.0}, {"alpha", 0.0}}},
          {"potential", {{"kind", "Quadratic"}, {"A", {{1.0}}}, {"b", {0.0}}}},
          {"source", {{"kind", "Zero"}}},
          {"x0", {1.0}},
          {"v0", {0.0}},
          {"t_end", 10.0},
          {"solver", {{"rel_tol", 1e-12}, {"abs_tol", 1e-14}}},
          {"tags", json::array()}};
}

json oracle_friction() {
  return {{"name", "oracle_pure_friction"},
          {"damping", {{"c", 1.0}, {"alpha", 0.0}}},
          {"potential", {{"kind", "Zero"}, {"dim", 1}}},
          {"source", {{"kind", "Zero"}}},
          {"x0", {0.0}},
          {"v0", {1.0}},
          {"t_end", 10.0},
          {"solver", {{"rel_tol", 1e-12}, {"abs_tol", 1e-14}}},
          {"tags", json::array()}};
}

json oracle_vanishing_quadratic() {
  return {{"name", "oracle_vanishing_quadratic"},
          {"damping", {{"c", 2.0}, {"alpha", 0.5}}},
          {"potential", {{"kind", "Quadratic"},
                         {"A", {{1.0, 0.0}, {0.0, 4.0}}},
                         {"b", {0.0, 0.0}}}},
          {"source", {{"kind", "Zero"}}},
          {"x0", {1.0, -1.0}},
          {"v0", {0.0, 0.5}},
          {"t_end", 1e3},
          {"tags", {"T1", "T4"}}};
}

json exploratory(json doc, const std::string& name, double beta) {
  doc["name"] = name;
  doc["source"]["beta"] = beta;
  doc["exploratory"] = true;
  return doc;
}

}  // namespace

bool is_builtin_suite(std::string_view name) {
  return name == "theorems" || name == "oracles" || name == "boundary";
}

std::vector<json> builtin_documents(std::string_view name) {
  if (name == "theorems") return {theorem_t1(), theorem_t2(), theorem_t3(), theorem_t4()};
  if (name == "oracles") return {oracle_linear(), oracle_friction(), oracle_vanishing_quadratic()};
  if (name == "boundary") {
    // beta = nu + 1 puts the weighted integral exactly at divergence.
    return {exploratory(theorem_t1(), "boundary_t1_edge", 1.5),
            exploratory(theorem_t2(), "boundary_t2_edge", 1.75),
            exploratory(theorem_t3(), "boundary_t3_edge", 1.5),
            exploratory(theorem_t4(), "boundary_t4_edge", 1.75)};
  }
  throw ConfigError("suite: unknown builtin suite '" + std::string(name) +
                    "' (expected theorems, oracles or boundary)");
}

std::vector<ScenarioConfig> builtin_scenarios(std::string_view name) {
  std::vector<ScenarioConfig> out;
  for (const auto& doc : builtin_documents(name)) out.push_back(config_from_json(doc));
  return out;
}

std::vector<SuiteInput> suite_inputs(const std::vector<std::string>& names_or_paths) {
  std::vector<SuiteInput> out;
  for (const auto& item : names_or_paths) {
    if (is_builtin_suite(item)) {
      for (auto& doc : builtin_documents(item)) {
        const std::string label = doc.at("name").get<std::string>();
        out.push_back({label, [doc] { return config_from_json(doc); }});
      }
    } else {
      const std::string label = std::filesystem::path(item).stem().string();
      out.push_back({label, [item] { return load_config_file(item); }});
    }
  }
  return out;
}

int SuiteResult::exit_code() const {
  return std::any_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.failed(); })
             ? 1
             : 0;
}

json SuiteResult::summary() const {
  json scenarios = json::array();
  for (const auto& e : entries) {
    json item{{"scenario", e.name}, {"wall_seconds", e.wall_seconds}};
    if (e.report) {
      item["status"] = e.report->status;
      item["exploratory"] = e.report->exploratory;
      json verdicts = json::object();
      for (const auto& v : e.report->verdicts) verdicts[v.tag] = to_string(v.verdict);
      item["verdicts"] = verdicts;
      item["failed"] = e.report->failed();
    } else {
      item["status"] = "errored";
      item["error"] = e.error;
      item["failed"] = true;
    }
    scenarios.push_back(item);
  }
  return {{"scenarios", scenarios},
          {"counts",
           {{"total", entries.size()},
            {"passed", passed},
            {"failed", failed},
            {"aborted", aborted},
            {"errored", errored},
            {"exploratory", exploratory}}},
          {"warnings", warnings},
          {"exit_code", exit_code()}};
}

SuiteResult run_suite(const std::vector<SuiteInput>& inputs, const SuiteOptions& options) {
  SuiteResult result;
  if (inputs.empty()) {
    result.warnings.push_back("suite is empty; nothing to run");
  }

  std::vector<SuiteEntry> entries(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      SuiteEntry& entry = entries[i];
      entry.name = inputs[i].label;
      const auto start = std::chrono::steady_clock::now();
      try {
        const ScenarioConfig cfg = inputs[i].load();
        entry.name = cfg.name;
        entry.report = run_scenario(cfg, RunOptions{options.out_dir}).report;
      } catch (const std::exception& e) {
        entry.error = e.what();
      }
      entry.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  std::size_t workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(inputs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const SuiteEntry& a, const SuiteEntry& b) { return a.name < b.name; });
  for (const auto& e : entries) {
    if (!e.report) {
      ++result.errored;
    } else if (e.report->aborted()) {
      ++result.aborted;
    } else if (e.report->exploratory) {
      ++result.exploratory;
    } else if (e.report->failed()) {
      ++result.failed;
    } else {
      ++result.passed;
    }
  }
  result.entries = std::move(entries);

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    write_atomic(*options.out_dir / "suite.summary.json", result.summary().dump(2) + "\n");
  }
  return result;
}

}  // namespace inertia::harness
