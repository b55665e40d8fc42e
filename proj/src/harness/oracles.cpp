#include "inertia/harness/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "inertia/harness/suite.hpp"

namespace inertia::harness {

namespace {

constexpr double kRelTolerance = 1e-8;

double rel_error(const State& got, const State& want) {
  const double scale = std::max(want.x.norm() + want.v.norm(), 1e-300);
  return ((got.x - want.x).norm() + (got.v - want.v).norm()) / scale;
}

CheckResult adaptive_match(const ScenarioConfig& cfg, State (*exact)(double)) {
  SolverSettings settings = cfg.solver_settings();
  settings.extra_checkpoints = {1.0, 5.0, 10.0};
  const Trajectory traj = integrate(cfg.dynamics, cfg.x0, cfg.v0, settings);
  double worst = 0.0;
  for (double target : settings.extra_checkpoints) {
    const auto it = std::min_element(traj.samples.begin(), traj.samples.end(),
                                     [&](const TrajectorySample& a, const TrajectorySample& b) {
                                       return std::abs(a.t - target) < std::abs(b.t - target);
                                     });
    worst = std::max(worst, rel_error(it->state(), exact(it->t)));
  }
  return CheckResult{cfg.name + " adaptive vs closed form",
                     worst < kRelTolerance ? Verdict::Pass : Verdict::Fail, worst, kRelTolerance,
                     "max relative error at t = 1, 5, 10"};
}

}  // namespace

State linear_c3_exact(double t) {
  const double s5 = std::sqrt(5.0);
  const double rp = (-3.0 + s5) / 2.0;
  const double rm = (-3.0 - s5) / 2.0;
  const double a = -rm / (rp - rm);
  const double b = rp / (rp - rm);
  State st;
  st.t = t;
  st.x = Vector::Constant(1, a * std::exp(rp * t) + b * std::exp(rm * t));
  st.v = Vector::Constant(1, a * rp * std::exp(rp * t) + b * rm * std::exp(rm * t));
  return st;
}

State pure_friction_exact(double t) {
  State st;
  st.t = t;
  st.x = Vector::Constant(1, -std::expm1(-t));
  st.v = Vector::Constant(1, std::exp(-t));
  return st;
}

std::vector<CheckResult> run_oracles() {
  std::vector<CheckResult> out;
  const auto configs = builtin_scenarios("oracles");
  const ScenarioConfig& linear = configs.at(0);
  const ScenarioConfig& friction = configs.at(1);

  out.push_back(adaptive_match(linear, linear_c3_exact));
  out.push_back(adaptive_match(friction, pure_friction_exact));

  const ReferenceSolution ref = integrate_reference(linear.dynamics, linear.x0, linear.v0, 10.0, 20000);
  const double ref_err = rel_error(ref.state, linear_c3_exact(10.0));
  out.push_back(CheckResult{"reference RK4 vs closed form", ref_err < 1e-10 ? Verdict::Pass : Verdict::Fail,
                            ref_err, 1e-10, "relative error at t = 10"});

  // Constant damping c gives h = 1/c exactly.
  double h_err = 0.0;
  for (double c : {1.0, 3.0}) {
    const HTable table = build_h_table(DampingSchedule(c, 0.0), 100.0, default_h_nodes(100.0));
    for (double v : table.values()) h_err = std::max(h_err, std::abs(v - 1.0 / c));
  }
  out.push_back(CheckResult{"h table for constant damping", h_err < 1e-12 ? Verdict::Pass : Verdict::Fail,
                            h_err, 1e-12, "max |h - 1/c| over all nodes"});
  return out;
}

}  // namespace inertia::harness
