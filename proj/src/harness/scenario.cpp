#include "inertia/harness/scenario.hpp"

#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include "inertia/errors.hpp"

namespace inertia::harness {

namespace {

using nlohmann::json;
namespace names = accumulator_names;

constexpr double kCauchyThreshold = 1e-3;
constexpr double kNormOscillationThreshold = 1e-3;
constexpr const char* kProxyNote = "desk-scale threshold standing in for an asymptotic statement";

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

json check_json(const CheckResult& c) {
  json out{{"name", c.name},
           {"verdict", to_string(c.verdict)},
           {"statistic", number(c.statistic)},
           {"threshold", number(c.threshold)}};
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

CheckResult with_note(CheckResult c, const std::string& note) {
  if (c.note.empty()) {
    c.note = note;
  } else {
    c.note += "; " + note;
  }
  return c;
}

CheckResult flatness_check(const Trajectory& traj, const char* name) {
  const Flatness f = accumulator_flatness(traj, name);
  return CheckResult{std::string("flatness ") + name, f.finite ? Verdict::Pass : Verdict::Fail,
                     f.ratio, kFlatnessThreshold, kProxyNote};
}

CheckResult cauchy_check(const Trajectory& traj, double T) {
  CheckResult c{"cauchy_tail", Verdict::NotApplicable, 0.0, kCauchyThreshold, {}};
  try {
    c.statistic = cauchy_tail(traj, T);
    c.verdict = c.statistic < kCauchyThreshold ? Verdict::Pass : Verdict::Fail;
    c.note = "sup |x(s) - x(t)| over checkpoints s, t >= " + std::to_string(T);
  } catch (const DomainError& e) {
    c.note = e.what();
  }
  return c;
}

std::vector<double> sample_field(const Trajectory& traj,
                                 const std::function<double(const TrajectorySample&)>& f) {
  std::vector<double> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back(f(s));
  return out;
}

std::vector<CheckResult> t1_checks(const ScenarioConfig& cfg, const Trajectory& traj,
                                   const HTable& h_table) {
  const double alpha = cfg.dynamics.damping.alpha();
  const auto t = traj.times();
  std::vector<CheckResult> out;
  out.push_back(with_note(envelope_bound_check(traj, 2.0 * alpha), kProxyNote));
  out.push_back(flatness_check(traj, names::kAlphaW));
  out.push_back(running_sup_stable("M1 running sup", t,
                                   sample_field(traj, [](const auto& s) { return s.m1_anchor; })));
  out.push_back(running_sup_stable(
      "h^2 W running sup", t, sample_field(traj, [](const auto& s) { return s.h * s.h * s.w; })));

  const MinimizerSamples mins = minimizer_samples(cfg.dynamics.potential, 3);
  const OpialResult opial = opial_distance_check(traj, mins.points);
  double worst = 0.0;
  for (std::size_t i = 0; i < opial.oscillation.size(); ++i) {
    worst = std::max(worst, opial.oscillation[i] / opial.threshold[i]);
  }
  out.push_back(CheckResult{"opial oscillation", opial.verdict, worst, 1.0,
                            "max over 3 minimizers of oscillation / (1e-2 (1 + |x0 - z|))" +
                                std::string(mins.singleton ? "; arg min is a singleton" : "")});
  out.push_back(lyapunov_descent_check(traj, h_table));
  return out;
}

std::vector<CheckResult> t2_checks(const TheoremTag& tag, const Trajectory& traj) {
  return {with_note(decay_to_zero_check(traj, 2.0 * tag.nu), kProxyNote),
          flatness_check(traj, names::kVel2)};
}

std::vector<CheckResult> t3_checks(const ScenarioConfig& cfg, const Trajectory& traj) {
  return {cauchy_check(traj, cfg.t_end / 10.0), flatness_check(traj, names::kGradGamma),
          flatness_check(traj, names::kVelL1)};
}

std::vector<CheckResult> t4_checks(const ScenarioConfig& cfg, const Trajectory& traj) {
  const double osc = final_decade_oscillation(traj, Vector::Zero(cfg.dynamics.dim()));
  return {cauchy_check(traj, cfg.t_end / 10.0),
          CheckResult{"norm oscillation", osc < kNormOscillationThreshold ? Verdict::Pass : Verdict::Fail,
                      osc, kNormOscillationThreshold, "max - min of |x(t)| over the final decade"}};
}

void evaluate(const ScenarioConfig& cfg, const Trajectory& traj, const HTable& h_table,
              DiagnosticsReport& report) {
  for (const auto& tag : cfg.tags) {
    TagVerdict v{tag.label(), Verdict::NotApplicable, {}};
    if (report.aborted()) {
      v.checks.push_back(CheckResult{"run", Verdict::Fail, report.last_t, cfg.t_end,
                                     "integration aborted before t_end"});
    } else {
      switch (tag.id) {
        case TheoremId::T1: v.checks = t1_checks(cfg, traj, h_table); break;
        case TheoremId::T2: v.checks = t2_checks(tag, traj); break;
        case TheoremId::T3: v.checks = t3_checks(cfg, traj); break;
        case TheoremId::T4: v.checks = t4_checks(cfg, traj); break;
      }
    }
    v.verdict = combine(v.checks);
    report.verdicts.push_back(std::move(v));
  }

  if (traj.samples.size() < 2) return;

  if (cfg.dynamics.source.is_zero()) report.invariants.push_back(energy_monotone_check(traj));
  report.invariants.push_back(energy_balance_check(traj));
  report.invariants.push_back(forcing_bound_check(traj));
  report.invariants.push_back(accumulator_monotone_check(traj));

  const auto t = traj.times();
  report.exponent_fits.push_back({"W", fit_power_law(t, traj.energies())});
  report.exponent_fits.push_back(
      {"dist_xstar", fit_power_law(t, sample_field(traj, [&](const auto& s) {
                                     return (s.x - traj.x_star).norm();
                                   }))});

  for (const auto& spec : traj.accumulators) {
    const auto history = traj.accumulator_history(spec.name);
    AccumulatorSummary summary{spec.name, history.back(), {}};
    if (is_nonnegative(spec.integrand)) summary.flatness = accumulator_flatness(t, history);
    else summary.flatness.ratio = std::numeric_limits<double>::quiet_NaN();
    report.accumulators.push_back(std::move(summary));
  }

  const MinimizerSamples mins = minimizer_samples(cfg.dynamics.potential, 3);
  const Vector& x0 = traj.samples.front().x;
  const std::size_t distinct = mins.singleton ? 1 : mins.points.size();
  for (std::size_t i = 0; i < distinct; ++i) {
    const Vector& z = mins.points[i];
    report.oscillations.push_back(
        {z, final_decade_oscillation(traj, z), 1e-2 * (1.0 + (x0 - z).norm())});
  }

  try {
    report.cauchy_tail = cauchy_tail(traj, cfg.t_end / 10.0);
  } catch (const DomainError&) {
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Verdict combine(const std::vector<CheckResult>& checks) {
  bool na = checks.empty();
  for (const auto& c : checks) {
    if (c.verdict == Verdict::Fail) return Verdict::Fail;
    if (c.verdict == Verdict::NotApplicable) na = true;
  }
  return na ? Verdict::NotApplicable : Verdict::Pass;
}

bool DiagnosticsReport::failed() const {
  if (aborted()) return true;
  if (exploratory) return false;
  for (const auto& v : verdicts) {
    if (v.verdict == Verdict::Fail) return true;
  }
  return false;
}

const TagVerdict* DiagnosticsReport::verdict_for(const std::string& tag) const {
  for (const auto& v : verdicts) {
    if (v.tag == tag) return &v;
  }
  return nullptr;
}

const CheckResult* DiagnosticsReport::invariant(const std::string& name) const {
  for (const auto& c : invariants) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

json DiagnosticsReport::to_json() const {
  json out;
  out["scenario"] = scenario;
  out["status"] = status;
  if (!error.empty()) out["error"] = error;
  out["last_t"] = number(last_t);
  out["exploratory"] = exploratory;
  if (!hypothesis_notes.empty()) out["hypothesis_notes"] = hypothesis_notes;

  json verdict_list = json::array();
  for (const auto& v : verdicts) {
    json checks = json::array();
    for (const auto& c : v.checks) checks.push_back(check_json(c));
    verdict_list.push_back({{"tag", v.tag}, {"verdict", to_string(v.verdict)}, {"checks", checks}});
  }
  out["verdicts"] = verdict_list;

  json inv = json::array();
  for (const auto& c : invariants) inv.push_back(check_json(c));
  out["invariants"] = inv;

  json fits = json::array();
  for (const auto& f : exponent_fits) {
    fits.push_back({{"field", f.field},
                    {"applicable", f.fit.applicable},
                    {"exponent", number(f.fit.exponent)},
                    {"residual", number(f.fit.residual)},
                    {"power_law", f.fit.power_law},
                    {"points", f.fit.points}});
  }
  out["exponent_fits"] = fits;

  json acc = json::array();
  for (const auto& a : accumulators) {
    acc.push_back({{"name", a.name},
                   {"final", number(a.final_value)},
                   {"flatness_ratio", number(a.flatness.ratio)},
                   {"flat", a.flatness.finite}});
  }
  out["accumulators"] = acc;

  json osc = json::array();
  for (const auto& o : oscillations) {
    osc.push_back({{"z", vector_json(o.z)},
                   {"oscillation", number(o.oscillation)},
                   {"threshold", number(o.threshold)}});
  }
  out["oscillations"] = osc;
  out["cauchy_tail"] = cauchy_tail ? number(*cauchy_tail) : json(nullptr);
  out["solver"] = {{"accepted", stats.accepted},
                   {"rejected", stats.rejected},
                   {"rhs_evaluations", stats.rhs_evaluations}};
  out["wall_seconds"] = wall_seconds;
  return out;
}

std::string trace_csv(const Trajectory& traj, double alpha) {
  const auto col = [&](const char* name) { return traj.accumulator_index(name); };
  const auto i_alpha = col(names::kAlphaW);
  const auto i_vel2 = col(names::kVel2);
  const auto i_grad = col(names::kGradGamma);
  const auto i_vl1 = col(names::kVelL1);
  const auto acc = [](const TrajectorySample& s, const std::optional<std::size_t>& i) {
    return i ? s.accumulators[*i] : std::numeric_limits<double>::quiet_NaN();
  };

  std::string out = "t,W,t2a_W,E,M1_anchor,I_alphaW,I_vel2,I_gradgamma,I_vL1,dist_xstar\n";
  for (const auto& s : traj.samples) {
    const double row[] = {s.t,
                          s.w,
                          std::pow(s.t, 2.0 * alpha) * s.w,
                          s.e_lyap,
                          s.m1_anchor,
                          acc(s, i_alpha),
                          acc(s, i_vel2),
                          acc(s, i_grad),
                          acc(s, i_vl1),
                          (s.x - traj.x_star).norm()};
    for (std::size_t k = 0; k < std::size(row); ++k) {
      if (k) out += ',';
      out += format_double(row[k]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<unsigned long> counter{0};
  const auto tag = std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "-" +
                   std::to_string(counter++);
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + tag;
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

ScenarioRun run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const double alpha = cfg.dynamics.damping.alpha();

  auto h_table = std::make_shared<const HTable>(
      build_h_table(cfg.dynamics.damping, cfg.t_end, default_h_nodes(cfg.t_end)));
  Observers observers{h_table, cfg.dynamics.potential.canonical_minimizer(),
                      standard_accumulators(alpha, cfg.velocity_weight_nu())};

  DiagnosticsReport report;
  report.scenario = cfg.name;
  report.exploratory = cfg.exploratory;
  report.hypothesis_notes = cfg.hypothesis_notes;

  Trajectory traj;
  try {
    traj = integrate(cfg.dynamics, cfg.x0, cfg.v0, cfg.solver_settings(), observers);
    report.last_t = traj.samples.empty() ? 0.0 : traj.samples.back().t;
  } catch (const IntegrationFailure& e) {
    traj = e.partial();
    report.status = "aborted";
    report.error = e.what();
    report.last_t = e.last_good().t;
  }
  report.stats = traj.stats;

  evaluate(cfg, traj, *h_table, report);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    write_atomic(*options.out_dir / (cfg.name + ".trace.csv"), trace_csv(traj, alpha));
    json doc = report.to_json();
    doc["config"] = cfg.document;
    write_atomic(*options.out_dir / (cfg.name + ".report.json"), doc.dump(2) + "\n");
  }
  return ScenarioRun{std::move(report), std::move(traj)};
}

}  // namespace inertia::harness
