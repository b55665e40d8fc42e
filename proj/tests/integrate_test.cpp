#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "inertia/diagnostics.hpp"
#include "inertia/integrate.hpp"
#include "oracles.hpp"

using namespace inertia;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

Dynamics linear_c3() {
  return Dynamics{DampingSchedule(3.0, 0.0),
                  Potential::quadratic(Matrix::Identity(1, 1), Vector::Zero(1)),
                  SourceTerm::zero(1)};
}

Dynamics friction() {
  return Dynamics{DampingSchedule(1.0, 0.0), Potential::zero(1), SourceTerm::zero(1)};
}

const TrajectorySample& nearest(const Trajectory& traj, double t) {
  const TrajectorySample* best = &traj.samples.front();
  for (const auto& s : traj.samples) {
    if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
  }
  return *best;
}

}  // namespace

TEST(Rhs, Examples) {
  Dynamics d{DampingSchedule(1.0, 0.0), Potential::quadratic(Matrix::Identity(1, 1), Vector::Zero(1)),
             SourceTerm::zero(1)};
  auto r = rhs(d, State{0.0, v1(1.0), v1(0.0)});
  EXPECT_EQ(r.dx(0), 0.0);
  EXPECT_EQ(r.dv(0), -1.0);

  r = rhs(friction(), State{0.0, v1(42.0), v1(2.5)});
  EXPECT_EQ(r.dv(0), -2.5);

  Dynamics d2{DampingSchedule(2.0, 0.5), Potential::zero(2), SourceTerm::zero(2)};
  Vector v(2);
  v << 1.0, 0.0;
  r = rhs(d2, State{3.0, Vector::Zero(2), v});
  EXPECT_DOUBLE_EQ(r.dv(0), -1.0);
  EXPECT_EQ(r.dv(1), 0.0);
}

TEST(Rhs, Errors) {
  EXPECT_THROW(rhs(friction(), State{0.0, v1(std::nan("")), v1(0.0)}), NumericFailure);
  EXPECT_THROW(rhs(friction(), State{0.0, Vector::Zero(2), Vector::Zero(2)}), ShapeError);
}

TEST(Integrate, PureFrictionClosedForm) {
  SolverSettings s;
  s.t_end = 10.0;
  const Trajectory traj = integrate(friction(), v1(0.0), v1(1.0), s);
  const auto& last = traj.samples.back();
  EXPECT_EQ(last.t, 10.0);
  EXPECT_LT(std::abs(last.x(0) - oracle::friction_x(10.0)) / oracle::friction_x(10.0), 1e-8);
  EXPECT_LT(std::abs(last.v(0) - oracle::friction_v(10.0)) / oracle::friction_v(10.0), 1e-8);
}

TEST(Integrate, LinearClosedForm) {
  const oracle::LinearC3 exact;
  SolverSettings s;
  s.t_end = 10.0;
  s.extra_checkpoints = {1.0, 5.0};
  const Trajectory traj = integrate(linear_c3(), v1(1.0), v1(0.0), s);
  for (double t : {1.0, 5.0, 10.0}) {
    const auto& smp = nearest(traj, t);
    ASSERT_NEAR(smp.t, t, 1e-12);
    EXPECT_LT(std::abs(smp.x(0) - exact.x(t)) / std::abs(exact.x(t)), 1e-8) << "t=" << t;
    EXPECT_LT(std::abs(smp.v(0) - exact.v(t)) / std::abs(exact.v(t)), 1e-8) << "t=" << t;
  }
}

TEST(Integrate, EnergyNonincreasingWithoutForcing) {
  Dynamics d{DampingSchedule(2.0, 0.5), Potential::even_power(2, 4, 1.0), SourceTerm::zero(2)};
  SolverSettings s;
  s.t_end = 1e3;
  Vector x0(2);
  x0 << 1.0, -0.5;
  const Trajectory traj = integrate(d, x0, Vector::Zero(2), s,
                                    Observers{nullptr, {}, standard_accumulators(0.5, 0.75, false)});
  EXPECT_TRUE(energy_monotone_check(traj).passed());
  EXPECT_TRUE(energy_balance_check(traj).passed());
  for (const auto& smp : traj.samples) EXPECT_GE(smp.w, 0.0);
}

TEST(Integrate, CheckpointGrid) {
  SolverSettings s;
  s.t_end = 100.0;
  s.extra_checkpoints = {0.55, 100.0, 200.0};
  const auto grid = s.checkpoint_grid();
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 100.0);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
  EXPECT_NE(std::find(grid.begin(), grid.end(), 0.55), grid.end());
  // 0, 60 points per decade from 0.1 to 100 (exclusive), one extra, t_end.
  EXPECT_EQ(grid.size(), 1u + 180u + 1u + 1u);
}

TEST(Integrate, SettingsValidation) {
  SolverSettings s;
  s.rel_tol = 1e-14;
  EXPECT_THROW(s.validate(), ConfigError);
  s = SolverSettings{};
  s.abs_tol = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = SolverSettings{};
  s.max_step = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Integrate, ShapeMismatch) {
  SolverSettings s;
  s.t_end = 10.0;
  EXPECT_THROW(integrate(friction(), Vector::Zero(2), Vector::Zero(2), s), ShapeError);
}

TEST(Integrate, HTableMustMatchSchedule) {
  SolverSettings s;
  s.t_end = 10.0;
  auto wrong = std::make_shared<const HTable>(build_h_table(DampingSchedule(2.0, 0.0), 10.0, 100));
  EXPECT_THROW(integrate(friction(), v1(0.0), v1(1.0), s, Observers{wrong, {}, {}}), ConfigError);
}

TEST(Integrate, FailureCarriesPartialTrajectory) {
  // Phi = x^4 / 4 from a huge start blows the step size down.
  Dynamics d{DampingSchedule(1.0, 0.0), Potential::even_power(1, 4, 1.0), SourceTerm::zero(1)};
  SolverSettings s;
  s.t_end = 10.0;
  try {
    integrate(d, v1(1e30), v1(0.0), s);
    FAIL() << "expected an integration failure";
  } catch (const IntegrationFailure& e) {
    EXPECT_FALSE(e.partial().samples.empty());
    EXPECT_GE(e.last_good().t, 0.0);
    EXPECT_LT(e.last_good().t, 10.0);
  }
}

TEST(Integrate, Deterministic) {
  Dynamics d{DampingSchedule(2.0, 0.5), Potential::even_power(2, 4, 1.0),
             SourceTerm::power_decay(Vector::Ones(2), 0.3, 1.85)};
  SolverSettings s;
  s.t_end = 500.0;
  const auto a = integrate(d, Vector::Ones(2), Vector::Zero(2), s);
  const auto b = integrate(d, Vector::Ones(2), Vector::Zero(2), s);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].t, b.samples[i].t);
    EXPECT_EQ(a.samples[i].x, b.samples[i].x);
    EXPECT_EQ(a.samples[i].v, b.samples[i].v);
    EXPECT_EQ(a.samples[i].accumulators, b.samples[i].accumulators);
  }
}

TEST(Reference, LinearClosedForm) {
  const oracle::LinearC3 exact;
  const auto ref = integrate_reference(linear_c3(), v1(1.0), v1(0.0), 10.0, 10000);
  EXPECT_LT(std::abs(ref.state.x(0) - exact.x(10.0)) / std::abs(exact.x(10.0)), 1e-10);
  EXPECT_LT(ref.refinement_change, 1e-10);
  EXPECT_THROW(integrate_reference(linear_c3(), v1(1.0), v1(0.0), 10.0, 9999), ConfigError);
}

TEST(Reference, AgreesWithAdaptive) {
  Dynamics d{DampingSchedule(2.0, 0.5), Potential::even_power(2, 4, 1.0),
             SourceTerm::power_decay(Vector::Ones(2), 0.3, 1.85)};
  Vector x0(2);
  x0 << 1.0, -0.5;
  SolverSettings s;
  s.t_end = 50.0;
  const auto traj = integrate(d, x0, Vector::Zero(2), s);
  const auto ref = integrate_reference(d, x0, Vector::Zero(2), 50.0, 20000);
  const auto& last = traj.samples.back();
  const double scale = ref.state.x.norm() + ref.state.v.norm();
  const double diff = (last.x - ref.state.x).norm() + (last.v - ref.state.v).norm();
  EXPECT_LT(diff / scale, 10.0 * s.rel_tol);
}

TEST(Integrate, AccumulatorsAndLyapunovWithHTable) {
  Dynamics d{DampingSchedule(2.0, 0.5), Potential::quadratic(Matrix::Identity(1, 1), Vector::Zero(1)),
             SourceTerm::zero(1)};
  SolverSettings s;
  s.t_end = 100.0;
  auto table = std::make_shared<const HTable>(build_h_table(d.damping, 100.0, default_h_nodes(100.0)));
  const auto traj =
      integrate(d, v1(1.0), v1(0.0), s, Observers{table, {}, standard_accumulators(0.5, 0.75)});
  EXPECT_TRUE(accumulator_monotone_check(traj).passed());
  for (const auto& smp : traj.samples) {
    EXPECT_TRUE(std::isfinite(smp.e_lyap));
    EXPECT_NEAR(smp.h, table->h_at(smp.t), 1e-15);
  }
  // Without an h-table E and M1 are undefined.
  const auto plain = integrate(d, v1(1.0), v1(0.0), s);
  EXPECT_TRUE(std::isnan(plain.samples.back().e_lyap));
  EXPECT_THROW(plain.accumulator_history("nope"), RangeError);
}
