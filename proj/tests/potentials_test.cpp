#include <gtest/gtest.h>

#include <random>

#include "inertia/errors.hpp"
#include "inertia/potentials.hpp"
#include "oracles.hpp"

using namespace inertia;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Matrix rank_deficient_m() {
  Matrix m(4, 5);
  m << 1.0, 0.5, 0.0, 0.2, 0.0,  //
      0.0, 1.0, 0.3, 0.0, 0.1,   //
      0.4, 0.0, 1.0, 0.0, 0.0,   //
      0.0, 0.0, 0.0, 0.0, 0.0;
  return m;
}

std::vector<Potential> catalog() {
  Matrix a(3, 3);
  a << 2.0, 0.5, 0.0, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0;
  Matrix m = rank_deficient_m();
  return {Potential::zero(3),
          Potential::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)),
          Potential::quadratic(a, vec({1.0, -1.0, 0.0})),
          Potential::least_squares(m, m * vec({1.0, -1.0, 0.5, 0.0, 0.0})),
          Potential::least_squares(m, vec({1.0, 2.0, 3.0, 4.0})),
          Potential::even_power(2, 4, 1.0),
          Potential::even_power(3, 6, 2.5),
          Potential::dist_ball_sq(Vector::Zero(3), 1.0),
          Potential::dist_ball_sq(vec({1.0, -2.0}), 0.5)};
}

Vector random_point(std::mt19937_64& rng, int dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = u(rng);
  return x;
}

}  // namespace

TEST(Potential, ValueExamples) {
  EXPECT_DOUBLE_EQ(
      phi_eval(Potential::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)), vec({3.0, 4.0})), 12.5);
  EXPECT_DOUBLE_EQ(phi_eval(Potential::even_power(2, 4, 1.0), vec({1.0, -1.0})), 0.5);
  EXPECT_EQ(phi_eval(Potential::dist_ball_sq(Vector::Zero(2), 1.0), vec({0.3, -0.2})), 0.0);
}

TEST(Potential, GradientExamples) {
  const Vector g1 =
      grad_eval(Potential::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)), vec({3.0, 4.0}));
  EXPECT_DOUBLE_EQ(g1(0), 3.0);
  EXPECT_DOUBLE_EQ(g1(1), 4.0);
  EXPECT_DOUBLE_EQ(grad_eval(Potential::even_power(1, 4, 1.0), vec({2.0}))(0), 8.0);
  const Vector g3 = grad_eval(Potential::dist_ball_sq(Vector::Zero(2), 1.0), vec({2.0, 0.0}));
  EXPECT_DOUBLE_EQ(g3(0), 1.0);
  EXPECT_DOUBLE_EQ(g3(1), 0.0);
}

TEST(Potential, ShapeErrors) {
  const Potential p = Potential::even_power(2, 4, 1.0);
  EXPECT_THROW(p.value(Vector::Zero(3)), ShapeError);
  EXPECT_THROW(p.gradient(Vector::Zero(1)), ShapeError);
  EXPECT_THROW(Potential::quadratic(Matrix::Identity(2, 2), Vector::Zero(3)), ShapeError);
  EXPECT_THROW(Potential::least_squares(Matrix::Identity(2, 2), Vector::Zero(3)), ShapeError);
}

TEST(Potential, ConstructionErrors) {
  Matrix nonsym(2, 2);
  nonsym << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(Potential::quadratic(nonsym, Vector::Zero(2)), ConfigError);
  EXPECT_THROW(Potential::quadratic(-Matrix::Identity(2, 2), Vector::Zero(2)), ConfigError);
  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  EXPECT_THROW(Potential::quadratic(singular, vec({0.0, 1.0})), ConfigError);
  EXPECT_THROW(Potential::even_power(2, 3, 1.0), ConfigError);
  EXPECT_THROW(Potential::even_power(2, 2, 1.0), ConfigError);
  EXPECT_THROW(Potential::even_power(2, 4, 0.0), ConfigError);
  EXPECT_THROW(Potential::dist_ball_sq(Vector::Zero(2), 0.0), ConfigError);
  EXPECT_THROW(Potential::zero(0), ConfigError);
}

TEST(Potential, GradientCheckExamples) {
  auto rng = oracle::rng();
  const Potential quad = Potential::quadratic(Matrix::Identity(3, 3) * 2.0, vec({1.0, 0.0, -1.0}));
  EXPECT_LT(gradient_check(quad, random_point(rng, 3, 2.0), 1e-5), 1e-8);
  EXPECT_LT(gradient_check(Potential::even_power(2, 4, 1.0), vec({1.0, 1.0}), 1e-5), 1e-7);
  EXPECT_EQ(gradient_check(Potential::zero(4), random_point(rng, 4, 1.0), 1e-5), 0.0);
  EXPECT_THROW(gradient_check(quad, Vector::Zero(3), 1e-2), DomainError);
  EXPECT_THROW(gradient_check(quad, Vector::Zero(3), 1e-9), DomainError);
}

TEST(Potential, GradientCheckRandomProbes) {
  auto rng = oracle::rng(7);
  for (const auto& pot : catalog()) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      worst = std::max(worst, gradient_check(pot, random_point(rng, pot.dim(), 3.0), 1e-5));
    }
    EXPECT_LT(worst, 1e-6) << pot.describe();
  }
}

TEST(Potential, GradientVanishesAtCanonicalMinimizer) {
  for (const auto& pot : catalog()) {
    EXPECT_LT(pot.gradient(pot.canonical_minimizer()).norm(), 1e-12) << pot.describe();
    EXPECT_NEAR(pot.value(pot.canonical_minimizer()), pot.phi_star(), 1e-12) << pot.describe();
  }
}

TEST(Potential, ConvexityInequalityAndLowerBound) {
  auto rng = oracle::rng(11);
  for (const auto& pot : catalog()) {
    const auto mins = minimizer_samples(pot, 3);
    for (int k = 0; k < 100; ++k) {
      const Vector x = random_point(rng, pot.dim(), 3.0);
      EXPECT_GE(pot.value(x), pot.phi_star() - 1e-12);
      EXPECT_GE(pot.gap(x), 0.0);
      for (const auto& z : mins.points) {
        const double lhs = pot.value(z);
        const double rhs = pot.value(x) + pot.gradient(x).dot(z - x);
        EXPECT_GE(lhs, rhs - 1e-10) << pot.describe();
      }
    }
  }
}

TEST(Potential, GradientMonotone) {
  auto rng = oracle::rng(13);
  for (const auto& pot : catalog()) {
    for (int k = 0; k < 100; ++k) {
      const Vector u = random_point(rng, pot.dim(), 3.0);
      const Vector v = random_point(rng, pot.dim(), 3.0);
      EXPECT_GE((pot.gradient(u) - pot.gradient(v)).dot(u - v), -1e-12) << pot.describe();
    }
  }
}

TEST(Potential, EvennessFlagMatchesBehavior) {
  auto rng = oracle::rng(17);
  for (const auto& pot : catalog()) {
    if (!pot.is_even()) continue;
    for (int k = 0; k < 100; ++k) {
      const Vector x = random_point(rng, pot.dim(), 3.0);
      EXPECT_NEAR(pot.value(-x), pot.value(x), 1e-12 * (1.0 + std::abs(pot.value(x))));
    }
  }
  EXPECT_TRUE(Potential::even_power(2, 4, 1.0).is_even());
  EXPECT_TRUE(Potential::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)).is_even());
  EXPECT_FALSE(Potential::quadratic(Matrix::Identity(2, 2), vec({1.0, 0.0})).is_even());
  EXPECT_TRUE(Potential::dist_ball_sq(Vector::Zero(2), 1.0).is_even());
  EXPECT_FALSE(Potential::dist_ball_sq(vec({1.0, 0.0}), 0.5).is_even());
}

TEST(Potential, InteriorArgminFlag) {
  EXPECT_TRUE(Potential::dist_ball_sq(Vector::Zero(3), 1.0).has_interior_argmin());
  EXPECT_TRUE(Potential::zero(2).has_interior_argmin());
  EXPECT_FALSE(Potential::even_power(2, 4, 1.0).has_interior_argmin());
  EXPECT_FALSE(Potential::least_squares(rank_deficient_m(), Vector::Zero(4)).has_interior_argmin());
}

TEST(MinimizerSamples, SingletonQuadratic) {
  const auto s = minimizer_samples(Potential::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)), 3);
  EXPECT_TRUE(s.singleton);
  ASSERT_EQ(s.points.size(), 3u);
  for (const auto& z : s.points) EXPECT_EQ(z.norm(), 0.0);
}

TEST(MinimizerSamples, BallInteriorPoints) {
  const Potential ball = Potential::dist_ball_sq(Vector::Zero(3), 1.0);
  const auto s = minimizer_samples(ball, 3);
  EXPECT_FALSE(s.singleton);
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_EQ(s.points[0].norm(), 0.0);
  EXPECT_DOUBLE_EQ(s.points[1](0), 0.5);
  EXPECT_DOUBLE_EQ(s.points[2](1), -0.3);
  for (const auto& z : s.points) EXPECT_EQ(ball.gradient(z).norm(), 0.0);
}

TEST(MinimizerSamples, LeastSquaresNullSpaceTranslates) {
  const Matrix m = rank_deficient_m();
  const Potential ls = Potential::least_squares(m, m * vec({1.0, -1.0, 0.5, 0.0, 0.0}));
  EXPECT_EQ(ls.argmin_directions().cols(), 2);
  const auto s = minimizer_samples(ls, 3);
  EXPECT_FALSE(s.singleton);
  ASSERT_EQ(s.points.size(), 3u);
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    EXPECT_LT(ls.gradient(s.points[i]).norm(), 1e-12);
    for (std::size_t j = 0; j < i; ++j) EXPECT_GT((s.points[i] - s.points[j]).norm(), 0.1);
  }
  EXPECT_THROW(minimizer_samples(ls, 0), DomainError);
}

TEST(Potential, LeastSquaresInconsistentHasPositiveMinimum) {
  const Potential ls = Potential::least_squares(rank_deficient_m(), vec({1.0, 2.0, 3.0, 4.0}));
  EXPECT_NEAR(ls.phi_star(), 8.0, 1e-12);
}
