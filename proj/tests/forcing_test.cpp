#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "inertia/errors.hpp"
#include "inertia/forcing.hpp"

using namespace inertia;

namespace {

Vector e1(int dim) {
  Vector v = Vector::Zero(dim);
  v(0) = 1.0;
  return v;
}

}  // namespace

TEST(SourceTerm, Examples) {
  EXPECT_EQ(g_at(SourceTerm::zero(3), 5.0).norm(), 0.0);
  const Vector g = g_at(SourceTerm::power_decay(e1(2), 1.0, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(g(0), 1.0 / 16.0);
  EXPECT_EQ(g(1), 0.0);
  const Vector h = g_at(SourceTerm::oscillating_power_decay(e1(2), 1.0, 2.0, std::numbers::pi), 1.0);
  EXPECT_NEAR(h(0), -0.25, 1e-15);
}

TEST(SourceTerm, DirectionNormalized) {
  Vector d(3);
  d << 1.0, -1.0, 2.0;
  const SourceTerm s = SourceTerm::power_decay(d, 0.5, 1.6);
  EXPECT_NEAR(s.direction().norm(), 1.0, 1e-12);
  for (double t : {0.0, 0.5, 10.0, 1e4}) {
    EXPECT_LE(s.norm_at(t), 0.5 * std::pow(1.0 + t, -1.6) * (1.0 + 1e-15));
    EXPECT_NEAR(s.at(t).norm(), s.norm_at(t), 1e-15);
  }
}

TEST(SourceTerm, RejectsBadParameters) {
  EXPECT_THROW(SourceTerm::power_decay(Vector::Zero(2), 1.0, 2.0), ConfigError);
  EXPECT_THROW(SourceTerm::power_decay(e1(2), 0.0, 2.0), ConfigError);
  EXPECT_THROW(SourceTerm::power_decay(e1(2), 1.0, -1.0), ConfigError);
  EXPECT_THROW(SourceTerm::zero(0), ConfigError);
}

TEST(WeightedCondition, Examples) {
  const auto inside = satisfies_weighted_condition(SourceTerm::power_decay(e1(1), 1.0, 1.6), 0.5);
  EXPECT_TRUE(inside.holds);
  EXPECT_NEAR(inside.integral_bound, 10.0, 1e-12);
  const auto edge = satisfies_weighted_condition(SourceTerm::power_decay(e1(1), 1.0, 1.5), 0.5);
  EXPECT_FALSE(edge.holds);
  EXPECT_TRUE(std::isinf(edge.integral_bound));
  const auto zero = satisfies_weighted_condition(SourceTerm::zero(2), 0.9);
  EXPECT_TRUE(zero.holds);
  EXPECT_EQ(zero.integral_bound, 0.0);
  EXPECT_THROW(satisfies_weighted_condition(SourceTerm::zero(2), -0.1), DomainError);
}

TEST(WeightedIntegral, ClosedFormExamples) {
  const SourceTerm s = SourceTerm::power_decay(e1(1), 1.0, 2.0);
  EXPECT_NEAR(weighted_norm_partial_integral(s, 0.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(weighted_norm_partial_integral(s, 0.0, 1e12), 1.0, 1e-11);
  EXPECT_THROW(weighted_norm_partial_integral(s, 0.0, 0.0), DomainError);
  EXPECT_EQ(weighted_norm_partial_integral(SourceTerm::zero(1), 0.5, 10.0), 0.0);
}

TEST(WeightedIntegral, OscillatingBelowEnvelope) {
  const SourceTerm p = SourceTerm::power_decay(e1(1), 1.3, 1.7);
  const SourceTerm o = SourceTerm::oscillating_power_decay(e1(1), 1.3, 1.7, 2.0);
  for (double T : {0.3, 1.0, 10.0, 100.0, 1000.0}) {
    EXPECT_LE(weighted_norm_partial_integral(o, 0.5, T), weighted_norm_partial_integral(p, 0.5, T));
  }
}

TEST(WeightedIntegral, OscillatingAgainstMidpointRule) {
  const SourceTerm o = SourceTerm::oscillating_power_decay(e1(1), 1.0, 1.5, 3.0);
  const double T = 20.0;
  const int n = 2000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) * T / n;
    sum += std::pow(1.0 + t, 0.25 - 1.5) * std::abs(std::cos(3.0 * t));
  }
  sum *= T / n;
  EXPECT_NEAR(weighted_norm_partial_integral(o, 0.25, T), sum, 1e-8);
}

TEST(WeightedIntegral, NondecreasingAndTailBound) {
  const double nu = 0.5, beta = 1.6, amp = 2.0;
  const SourceTerm s = SourceTerm::power_decay(e1(1), amp, beta);
  double prev = 0.0;
  for (double T = 0.1; T < 1e6; T *= 3.0) {
    const double v = weighted_norm_partial_integral(s, nu, T);
    EXPECT_GE(v, prev);
    prev = v;
    const double diff = weighted_norm_partial_integral(s, nu, 2.0 * T) - v;
    EXPECT_LT(diff, amp * std::pow(1.0 + T, nu - beta + 1.0) / (beta - nu - 1.0));
  }
}
