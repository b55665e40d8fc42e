#include "inertia/potentials.hpp"

#include <cmath>
#include <sstream>

#include "inertia/errors.hpp"

namespace inertia {

namespace {

double int_pow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Zero: return "Zero";
    case PotentialKind::Quadratic: return "Quadratic";
    case PotentialKind::LeastSquares: return "LeastSquares";
    case PotentialKind::EvenPower: return "EvenPower";
    case PotentialKind::DistBallSq: return "DistBallSq";
  }
  return "?";
}

Potential Potential::zero(int dim) {
  if (dim <= 0) throw ConfigError("potential: dim must be positive");
  Potential pot;
  pot.kind_ = PotentialKind::Zero;
  pot.dim_ = dim;
  pot.minimizer_ = Vector::Zero(dim);
  pot.null_basis_ = Matrix::Identity(dim, dim);
  pot.even_ = true;
  pot.interior_argmin_ = true;
  return pot;
}

Potential Potential::quadratic(Matrix a, Vector b) {
  const auto n = a.rows();
  if (n == 0 || a.cols() != n) throw ShapeError("Quadratic: A must be square and nonempty");
  if (b.size() != n) throw ShapeError("Quadratic: b must have the dimension of A");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigError("Quadratic: A must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const Vector& lambda = eig.eigenvalues();
  const Matrix& q = eig.eigenvectors();
  const double cut = 1e-10 * scale;
  if (lambda.minCoeff() < -cut) throw ConfigError("Quadratic: A must be positive semidefinite");

  Vector coeffs = q.transpose() * b;
  Vector xhat = Vector::Zero(n);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda(i) > cut) {
      xhat += (coeffs(i) / lambda(i)) * q.col(i);
    } else {
      if (std::abs(coeffs(i)) > 1e-10 * std::max(1.0, b.norm())) {
        throw ConfigError("Quadratic: b must lie in the range of A (Phi unbounded below)");
      }
      null_cols.push_back(i);
    }
  }

  Potential pot;
  pot.kind_ = PotentialKind::Quadratic;
  pot.dim_ = static_cast<int>(n);
  pot.minimizer_ = xhat;
  pot.phi_star_ = -0.5 * b.dot(xhat);
  pot.null_basis_.resize(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j) {
    pot.null_basis_.col(static_cast<Eigen::Index>(j)) = q.col(null_cols[j]);
  }
  pot.even_ = b.isZero(0.0);
  pot.interior_argmin_ = null_cols.size() == static_cast<std::size_t>(n);
  pot.params_ = QuadraticParams{std::move(a), std::move(b)};
  return pot;
}

Potential Potential::least_squares(Matrix m, Vector y) {
  if (m.rows() == 0 || m.cols() == 0) throw ShapeError("LeastSquares: M must be nonempty");
  if (y.size() != m.rows()) throw ShapeError("LeastSquares: y must have one entry per row of M");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto n = m.cols();
  const auto rank = svd.rank();

  Potential pot;
  pot.kind_ = PotentialKind::LeastSquares;
  pot.dim_ = static_cast<int>(n);
  pot.minimizer_ = svd.solve(y);
  const Vector residual = m * pot.minimizer_ - y;
  pot.phi_star_ = 0.5 * residual.squaredNorm();
  pot.null_basis_ = svd.matrixV().rightCols(n - rank);
  pot.even_ = (m.transpose() * y).norm() <= 1e-14 * std::max(1.0, m.norm() * y.norm());
  pot.interior_argmin_ = rank == 0;
  pot.params_ = LeastSquaresParams{std::move(m), std::move(y)};
  return pot;
}

Potential Potential::even_power(int dim, int p, double scale) {
  if (dim <= 0) throw ConfigError("EvenPower: dim must be positive");
  if (p < 4 || p % 2 != 0) throw ConfigError("EvenPower: p must be an even integer >= 4");
  if (!(scale > 0.0)) throw ConfigError("EvenPower: scale must be positive");
  Potential pot;
  pot.kind_ = PotentialKind::EvenPower;
  pot.dim_ = dim;
  pot.minimizer_ = Vector::Zero(dim);
  pot.null_basis_.resize(dim, 0);
  pot.even_ = true;
  pot.params_ = EvenPowerParams{p, scale};
  return pot;
}

Potential Potential::dist_ball_sq(Vector center, double radius) {
  if (center.size() == 0) throw ShapeError("DistBallSq: center must be nonempty");
  if (!(radius > 0.0)) throw ConfigError("DistBallSq: radius must be positive");
  Potential pot;
  pot.kind_ = PotentialKind::DistBallSq;
  pot.dim_ = static_cast<int>(center.size());
  pot.minimizer_ = center;
  pot.null_basis_.resize(pot.dim_, 0);
  pot.even_ = center.isZero(0.0);
  pot.interior_argmin_ = true;
  pot.params_ = BallParams{std::move(center), radius};
  return pot;
}

void Potential::check_dim(const Vector& x, const char* op) const {
  if (x.size() != dim_) {
    std::ostringstream msg;
    msg << op << ": expected a vector of dimension " << dim_ << ", got " << x.size();
    throw ShapeError(msg.str());
  }
}

double Potential::value(const Vector& x) const {
  check_dim(x, "phi_eval");
  switch (kind_) {
    case PotentialKind::Zero: return 0.0;
    case PotentialKind::Quadratic: {
      const auto& q = std::get<QuadraticParams>(params_);
      return 0.5 * x.dot(q.a * x) - q.b.dot(x);
    }
    case PotentialKind::LeastSquares: {
      const auto& ls = std::get<LeastSquaresParams>(params_);
      return 0.5 * (ls.m * x - ls.y).squaredNorm();
    }
    case PotentialKind::EvenPower: {
      const auto& ep = std::get<EvenPowerParams>(params_);
      double sum = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) sum += int_pow(x(i), ep.p);
      return ep.scale * sum / ep.p;
    }
    case PotentialKind::DistBallSq: {
      const auto& ball = std::get<BallParams>(params_);
      const double excess = (x - ball.center).norm() - ball.radius;
      return excess > 0.0 ? 0.5 * excess * excess : 0.0;
    }
  }
  return 0.0;
}

Vector Potential::gradient(const Vector& x) const {
  check_dim(x, "grad_eval");
  switch (kind_) {
    case PotentialKind::Zero: return Vector::Zero(dim_);
    case PotentialKind::Quadratic: {
      const auto& q = std::get<QuadraticParams>(params_);
      return q.a * x - q.b;
    }
    case PotentialKind::LeastSquares: {
      const auto& ls = std::get<LeastSquaresParams>(params_);
      return ls.m.transpose() * (ls.m * x - ls.y);
    }
    case PotentialKind::EvenPower: {
      const auto& ep = std::get<EvenPowerParams>(params_);
      Vector g(dim_);
      for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = ep.scale * int_pow(x(i), ep.p - 1);
      return g;
    }
    case PotentialKind::DistBallSq: {
      const auto& ball = std::get<BallParams>(params_);
      const Vector offset = x - ball.center;
      const double dist = offset.norm();
      if (dist <= ball.radius) return Vector::Zero(dim_);
      // x - proj_ball(x)
      return offset * (1.0 - ball.radius / dist);
    }
  }
  return Vector::Zero(dim_);
}

double Potential::gap(const Vector& x) const {
  check_dim(x, "gap");
  switch (kind_) {
    case PotentialKind::Quadratic: {
      const auto& q = std::get<QuadraticParams>(params_);
      const Vector d = x - minimizer_;
      return std::max(0.0, 0.5 * d.dot(q.a * d));
    }
    case PotentialKind::LeastSquares: {
      // |Mx - y|^2 = |M(x - xhat)|^2 + |Mxhat - y|^2 since Mxhat - y is orthogonal to range(M).
      const auto& ls = std::get<LeastSquaresParams>(params_);
      return 0.5 * (ls.m * (x - minimizer_)).squaredNorm();
    }
    default: return value(x) - phi_star_;
  }
}

std::string Potential::describe() const {
  std::ostringstream out;
  out << to_string(kind_) << "(dim=" << dim_;
  if (const auto* ep = std::get_if<EvenPowerParams>(&params_)) {
    out << ", p=" << ep->p << ", scale=" << ep->scale;
  } else if (const auto* ball = std::get_if<BallParams>(&params_)) {
    out << ", radius=" << ball->radius;
  } else if (kind_ == PotentialKind::Quadratic || kind_ == PotentialKind::LeastSquares) {
    out << ", argmin_dim=" << null_basis_.cols();
  }
  out << ")";
  return out.str();
}

double gradient_check(const Potential& pot, const Vector& x, double step) {
  if (!(step >= 1e-8 && step <= 1e-3)) {
    throw DomainError("gradient_check: step must lie in [1e-8, 1e-3]");
  }
  const Vector grad = pot.gradient(x);
  double worst = 0.0;
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const double up = pot.value(probe);
    probe(i) = x(i) - step;
    const double down = pot.value(probe);
    probe(i) = x(i);
    worst = std::max(worst, std::abs((up - down) / (2.0 * step) - grad(i)));
  }
  return worst;
}

MinimizerSamples minimizer_samples(const Potential& pot, std::size_t k) {
  if (k == 0) throw DomainError("minimizer_samples: k must be >= 1");
  MinimizerSamples out;
  out.points.push_back(pot.canonical_minimizer());
  const int dim = pot.dim();

  if (pot.kind() == PotentialKind::DistBallSq) {
    const auto& ball = std::get<Potential::BallParams>(pot.params());
    static constexpr double kOffsets[] = {0.5, -0.3, 0.2, -0.4, 0.6, -0.7, 0.35, -0.15};
    for (std::size_t j = 1; j < k; ++j) {
      const double s = kOffsets[(j - 1) % std::size(kOffsets)] *
                       (1.0 - 0.05 * static_cast<double>((j - 1) / std::size(kOffsets)));
      Vector z = ball.center;
      z(static_cast<Eigen::Index>((j - 1) % dim)) += s * ball.radius;
      out.points.push_back(std::move(z));
    }
    return out;
  }

  const Matrix& basis = pot.argmin_directions();
  const auto nullity = static_cast<std::size_t>(basis.cols());
  if (nullity == 0) {
    out.singleton = true;
    out.points.assign(k, pot.canonical_minimizer());
    return out;
  }
  for (std::size_t j = 1; j < k; ++j) {
    const std::size_t col = (j - 1) % nullity;
    const double round = static_cast<double>((j - 1) / nullity + 1);
    const double sign = ((j - 1) / nullity) % 2 == 0 ? 1.0 : -1.0;
    out.points.push_back(pot.canonical_minimizer() +
                         sign * round * basis.col(static_cast<Eigen::Index>(col)));
  }
  return out;
}

}  // namespace inertia
