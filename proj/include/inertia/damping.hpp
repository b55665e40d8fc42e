#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace inertia {

/// Vanishing damping coefficient gamma(t) = c / (1 + t)^alpha with c > 0 and
/// 0 <= alpha < 1.
class DampingSchedule {
 public:
  DampingSchedule(double c, double alpha);

  double c() const { return c_; }
  double alpha() const { return alpha_; }

  /// gamma(t); throws DomainError for t < 0.
  double gamma_at(double t) const;
  double gamma_prime_at(double t) const;

  /// Closed-form antiderivative c ((1+t)^(1-alpha) - 1) / (1 - alpha).
  double big_gamma_at(double t) const;

  /// The t >= 0 with big_gamma_at(t) == value.
  double big_gamma_inverse(double value) const;

  /// Asymptotic expansion of h(t) for large t, summed up to its smallest
  /// term: h ~ sum_k a_k with a_0 = 1/gamma and a_{k+1} = a_k' / gamma.
  double h_asymptotic(double t) const;

 private:
  double c_;
  double alpha_;
};

/// Nodes t_i = (1 + t_end)^(i / (n - 1)) - 1: log-spaced in 1 + t, with
/// t_0 = 0 and t_{n-1} = t_end.
std::vector<double> log_spaced_nodes(double t_end, std::size_t n);

/// Local cubic (four-point Lagrange) interpolation on a strictly increasing
/// grid. Exact at nodes and reproduces polynomials up to degree three.
double cubic_interpolate(std::span<const double> grid, std::span<const double> values,
                         double t);

/// Tabulated auxiliary function h(t) = e^Gamma(t) * int_t^inf e^-Gamma(s) ds,
/// the positive solution of h' - gamma h + 1 = 0 that stays bounded by a
/// multiple of 1/gamma.
class HTable {
 public:
  const DampingSchedule& schedule() const { return schedule_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double t_end() const { return grid_.back(); }
  /// Time at which the backward integration was seeded.
  double seed_time() const { return seed_time_; }

  /// Interpolated h(t) for t in [0, t_end]; RangeError outside.
  double h_at(double t) const;
  /// h'(t) through the defining ODE: gamma(t) h(t) - 1.
  double h_prime_at(double t) const;

  /// Second-order finite-difference derivative of the tabulated values at the
  /// interior nodes (index i -> grid[i + 1]).
  std::vector<double> finite_difference_derivative() const;

 private:
  friend HTable build_h_table(const DampingSchedule&, double, std::size_t, double);
  HTable(DampingSchedule schedule, std::vector<double> grid, std::vector<double> values,
         double seed_time);

  DampingSchedule schedule_;
  std::vector<double> grid_;
  std::vector<double> values_;
  double seed_time_;
};

/// Integrates h' = gamma h - 1 backward from a seed time T* >= seed_factor *
/// t_end (pushed further out when the backward contraction between T* and
/// t_end would be weaker than e^-40) down to 0, recording h on a log-spaced
/// grid of n_nodes points over [0, t_end].
HTable build_h_table(const DampingSchedule& schedule, double t_end, std::size_t n_nodes,
                     double seed_factor = 4.0);

/// Node count giving a finite-difference residual of h' - gamma h + 1 well
/// below 1e-6 across the grid.
std::size_t default_h_nodes(double t_end);

}  // namespace inertia
