#include <gtest/gtest.h>

#include <cmath>

#include "inertia/observables.hpp"

using namespace inertia;

namespace {

State state1(double x, double v) {
  return State{0.0, Vector::Constant(1, x), Vector::Constant(1, v)};
}

}  // namespace

TEST(Observables, EnergyExamples) {
  const Potential quad = Potential::quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
  EXPECT_DOUBLE_EQ(energy_w(quad, state1(3.0, 4.0)), 12.5);
  EXPECT_EQ(energy_w(quad, state1(0.0, 0.0)), 0.0);
}

TEST(Observables, EnergyNonnegativeAtOffsetMinimum) {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, 0.0;
  Vector y(2);
  y << 1.0, 3.0;
  const Potential ls = Potential::least_squares(m, y);
  State s{0.0, ls.canonical_minimizer(), Vector::Zero(2)};
  EXPECT_EQ(energy_w(ls, s), 0.0);
  s.x(0) += 1e-3;
  EXPECT_GT(energy_w(ls, s), 0.0);
}

TEST(Observables, LyapunovAndAnchor) {
  const Potential quad = Potential::quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
  const State s = state1(1.0, -2.0);
  const Vector xs = Vector::Zero(1);
  // 2 h^2 gap + |x + h v|^2 - 2 I with h = 0.5: 2 * 0.25 * 0.5 + 0 - 2 * 0.1
  EXPECT_NEAR(lyapunov_e(0.5, quad, s, xs, 0.1), 0.25 - 0.2, 1e-15);
  EXPECT_NEAR(anchored_momentum(0.25, s, xs), 0.5, 1e-15);
}

TEST(Observables, AccumulatorWeights) {
  PointValues p;
  p.t = 3.0;
  p.gamma = 0.5;
  p.h = 1.5;
  p.w = 2.0;
  p.v_norm_sq = 4.0;
  p.grad_norm = 3.0;
  p.gap = 0.7;
  p.forcing_anchor = -1.0;
  p.forcing_power = 0.2;
  p.forcing_norm = 0.1;
  EXPECT_DOUBLE_EQ(evaluate({"a", Weight::Power, 0.5, Integrand::Energy}, p), 2.0 * 2.0);
  EXPECT_DOUBLE_EQ(evaluate({"b", Weight::InverseGamma, 0.0, Integrand::GradNorm}, p), 6.0);
  EXPECT_DOUBLE_EQ(evaluate({"c", Weight::H, 0.0, Integrand::Gap}, p), 1.5 * 0.7);
  EXPECT_DOUBLE_EQ(evaluate({"d", Weight::One, 0.0, Integrand::VelocityNorm}, p), 2.0);
  EXPECT_DOUBLE_EQ(evaluate({"e", Weight::Gamma, 0.0, Integrand::VelocitySq}, p), 2.0);
  EXPECT_DOUBLE_EQ(evaluate({"f", Weight::H, 0.0, Integrand::ForcingAnchor}, p), -1.5);
  EXPECT_DOUBLE_EQ(evaluate({"g", Weight::One, 0.0, Integrand::ForcingBound}, p), 0.1 * 2.0);
}

TEST(Observables, NonnegativeIntegrands) {
  EXPECT_TRUE(is_nonnegative(Integrand::Energy));
  EXPECT_TRUE(is_nonnegative(Integrand::Gap));
  EXPECT_TRUE(is_nonnegative(Integrand::ForcingBound));
  EXPECT_FALSE(is_nonnegative(Integrand::ForcingAnchor));
  EXPECT_FALSE(is_nonnegative(Integrand::ForcingPower));
}

TEST(Observables, StandardAccumulators) {
  const auto with_h = standard_accumulators(0.5, 0.75);
  const auto without_h = standard_accumulators(0.5, 0.75, false);
  EXPECT_GT(with_h.size(), without_h.size());
  for (const auto& a : without_h) EXPECT_FALSE(a.needs_h()) << a.name;
  bool found = false;
  for (const auto& a : with_h) {
    if (a.name == accumulator_names::kVel2) {
      found = true;
      EXPECT_EQ(a.weight, Weight::Power);
      EXPECT_DOUBLE_EQ(a.exponent, 2.0 * 0.75 - 0.5);
    }
  }
  EXPECT_TRUE(found);
}
