#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace inertia {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class PotentialKind { Zero, Quadratic, LeastSquares, EvenPower, DistBallSq };

const char* to_string(PotentialKind kind);

/// C^1 convex test potential on R^dim with an analytic gradient, minimum value
/// and a canonical minimizer.
///
///   Zero          Phi(x) = 0
///   Quadratic     Phi(x) = 1/2 x'Ax - b'x, A symmetric PSD, b in range(A)
///   LeastSquares  Phi(x) = 1/2 |Mx - y|^2, M possibly rank deficient
///   EvenPower     Phi(x) = scale * sum_i |x_i|^p / p, p even >= 4
///   DistBallSq    Phi(x) = 1/2 dist(x, B(center, radius))^2
class Potential {
 public:
  static Potential zero(int dim);
  static Potential quadratic(Matrix a, Vector b);
  static Potential least_squares(Matrix m, Vector y);
  static Potential even_power(int dim, int p, double scale);
  static Potential dist_ball_sq(Vector center, double radius);

  PotentialKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double phi_star() const { return phi_star_; }
  const Vector& canonical_minimizer() const { return minimizer_; }
  bool is_even() const { return even_; }
  bool has_interior_argmin() const { return interior_argmin_; }
  /// Orthonormal basis of directions along which arg min extends (Zero,
  /// Quadratic and LeastSquares only; empty otherwise).
  const Matrix& argmin_directions() const { return null_basis_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// Phi(x) - Phi*, computed without subtracting Phi* from Phi(x).
  double gap(const Vector& x) const;

  std::string describe() const;

  struct QuadraticParams {
    Matrix a;
    Vector b;
  };
  struct LeastSquaresParams {
    Matrix m;
    Vector y;
  };
  struct EvenPowerParams {
    int p;
    double scale;
  };
  struct BallParams {
    Vector center;
    double radius;
  };
  using Params = std::variant<std::monostate, QuadraticParams, LeastSquaresParams,
                              EvenPowerParams, BallParams>;
  const Params& params() const { return params_; }

 private:
  Potential() = default;
  void check_dim(const Vector& x, const char* op) const;

  PotentialKind kind_ = PotentialKind::Zero;
  int dim_ = 0;
  Params params_;
  double phi_star_ = 0.0;
  Vector minimizer_;
  Matrix null_basis_;
  bool even_ = false;
  bool interior_argmin_ = false;
};

inline double phi_eval(const Potential& pot, const Vector& x) { return pot.value(x); }
inline Vector grad_eval(const Potential& pot, const Vector& x) { return pot.gradient(x); }

/// Largest componentwise deviation between the analytic gradient and central
/// finite differences of the value with the given step.
double gradient_check(const Potential& pot, const Vector& x, double step);

struct MinimizerSamples {
  std::vector<Vector> points;
  /// arg min is a single point; `points` then repeats it.
  bool singleton = false;
};

/// k elements of arg min: the canonical minimizer first, then distinct others
/// when arg min is not a singleton.
MinimizerSamples minimizer_samples(const Potential& pot, std::size_t k);

}  // namespace inertia
