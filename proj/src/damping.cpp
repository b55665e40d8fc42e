#include "inertia/damping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inertia/errors.hpp"

namespace inertia {

namespace {

// Backward pass tolerance on the local error of one RK4 step (relative to |h|).
constexpr double kStepTolerance = 1e-14;
// Minimum contraction e^-(Gamma(T*) - Gamma(t_end)) of the seed error.
constexpr double kSeedContraction = 40.0;

void require_nonnegative(double t, const char* what) {
  if (!(t >= 0.0)) {
    throw DomainError(std::string(what) + ": t must be >= 0, got " + std::to_string(t));
  }
}

}  // namespace

DampingSchedule::DampingSchedule(double c, double alpha) : c_(c), alpha_(alpha) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ConfigError("damping: c must be a finite positive number, got " + std::to_string(c));
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw HypothesisError("damping: alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
}

double DampingSchedule::gamma_at(double t) const {
  require_nonnegative(t, "gamma_at");
  return c_ * std::pow(1.0 + t, -alpha_);
}

double DampingSchedule::gamma_prime_at(double t) const {
  require_nonnegative(t, "gamma_prime_at");
  return -alpha_ * c_ * std::pow(1.0 + t, -alpha_ - 1.0);
}

double DampingSchedule::big_gamma_at(double t) const {
  require_nonnegative(t, "big_gamma_at");
  if (alpha_ == 0.0) return c_ * t;
  const double p = 1.0 - alpha_;
  // expm1/log1p keep Gamma accurate for small t.
  return c_ * std::expm1(p * std::log1p(t)) / p;
}

double DampingSchedule::big_gamma_inverse(double value) const {
  if (!(value >= 0.0)) throw DomainError("big_gamma_inverse: value must be >= 0");
  if (alpha_ == 0.0) return value / c_;
  const double p = 1.0 - alpha_;
  return std::expm1(std::log1p(value * p / c_) / p);
}

double DampingSchedule::h_asymptotic(double t) const {
  require_nonnegative(t, "h_asymptotic");
  const double u = 1.0 + t;
  const double step = std::pow(u, alpha_ - 1.0) / c_;
  double term = std::pow(u, alpha_) / c_;
  double sum = term;
  for (int k = 0; k < 60; ++k) {
    const double next = term * ((k + 1) * alpha_ - k) * step;
    if (next == 0.0 || std::abs(next) >= std::abs(term)) break;
    sum += next;
    if (std::abs(next) < 1e-17 * std::abs(sum)) break;
    term = next;
  }
  return sum;
}

std::vector<double> log_spaced_nodes(double t_end, std::size_t n) {
  if (!(t_end > 0.0) || n < 2) throw ConfigError("log_spaced_nodes: need t_end > 0 and n >= 2");
  std::vector<double> nodes(n);
  const double span = std::log1p(t_end);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = std::expm1(span * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  nodes.front() = 0.0;
  nodes.back() = t_end;
  return nodes;
}

double cubic_interpolate(std::span<const double> grid, std::span<const double> values,
                         double t) {
  const std::size_t n = grid.size();
  if (n != values.size() || n < 2) throw ShapeError("cubic_interpolate: grid/value size mismatch");
  if (t < grid.front() || t > grid.back()) {
    throw RangeError("cubic_interpolate: t=" + std::to_string(t) + " outside [" +
                     std::to_string(grid.front()) + ", " + std::to_string(grid.back()) + "]");
  }
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  if (hi == n) return values[n - 1];
  const std::size_t lo = hi - 1;
  if (t == grid[lo]) return values[lo];

  const std::size_t points = std::min<std::size_t>(4, n);
  std::size_t first = lo > 0 ? lo - 1 : 0;
  first = std::min(first, n - points);

  double result = 0.0;
  for (std::size_t j = first; j < first + points; ++j) {
    double basis = 1.0;
    for (std::size_t m = first; m < first + points; ++m) {
      if (m != j) basis *= (t - grid[m]) / (grid[j] - grid[m]);
    }
    result += basis * values[j];
  }
  return result;
}

HTable::HTable(DampingSchedule schedule, std::vector<double> grid, std::vector<double> values,
               double seed_time)
    : schedule_(schedule),
      grid_(std::move(grid)),
      values_(std::move(values)),
      seed_time_(seed_time) {}

double HTable::h_at(double t) const {
  if (t > t_end() && t <= t_end() * (1.0 + 1e-12)) t = t_end();
  return cubic_interpolate(grid_, values_, t);
}

double HTable::h_prime_at(double t) const {
  return schedule_.gamma_at(t) * h_at(t) - 1.0;
}

std::vector<double> HTable::finite_difference_derivative() const {
  std::vector<double> out;
  if (grid_.size() < 3) return out;
  out.reserve(grid_.size() - 2);
  for (std::size_t i = 1; i + 1 < grid_.size(); ++i) {
    const double h1 = grid_[i] - grid_[i - 1];
    const double h2 = grid_[i + 1] - grid_[i];
    out.push_back(-h2 / (h1 * (h1 + h2)) * values_[i - 1] + (h2 - h1) / (h1 * h2) * values_[i] +
                  h1 / (h2 * (h1 + h2)) * values_[i + 1]);
  }
  return out;
}

namespace {

// One classical RK4 step of h' = gamma(t) h - 1 with signed step dt.
double rk4_step(const DampingSchedule& s, double t, double h, double dt) {
  auto f = [&](double tt, double hh) { return s.gamma_at(std::max(tt, 0.0)) * hh - 1.0; };
  const double k1 = f(t, h);
  const double k2 = f(t + 0.5 * dt, h + 0.5 * dt * k1);
  const double k3 = f(t + 0.5 * dt, h + 0.5 * dt * k2);
  const double k4 = f(t + dt, h + dt * k3);
  return h + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates backward from (t_from, h) to t_to < t_from with step doubling.
// `step` carries the last accepted step length between calls.
double integrate_backward(const DampingSchedule& s, double t_from, double t_to, double h,
                          double& step) {
  double t = t_from;
  while (t > t_to) {
    double dt = std::min(step, t - t_to);
    const bool last = dt >= t - t_to;
    const double full = rk4_step(s, t, h, -dt);
    const double half = rk4_step(s, t - 0.5 * dt, rk4_step(s, t, h, -0.5 * dt), -0.5 * dt);
    const double err = std::abs(half - full) / 15.0;
    const double tol = kStepTolerance * std::max(1.0, std::abs(half));
    if (!std::isfinite(half)) throw NumericFailure("build_h_table: nonfinite h during backward pass");
    if (err <= tol) {
      h = half + (half - full) / 15.0;
      t = last ? t_to : t - dt;
      const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
      if (!last) step = dt * std::clamp(grow, 0.2, 4.0);
    } else {
      step = dt * std::clamp(0.9 * std::pow(tol / err, 0.2), 0.1, 0.9);
      if (step < 1e-14 * std::max(1.0, t)) {
        throw NumericFailure("build_h_table: step size underflow at t=" + std::to_string(t));
      }
    }
  }
  return h;
}

}  // namespace

HTable build_h_table(const DampingSchedule& schedule, double t_end, std::size_t n_nodes,
                     double seed_factor) {
  if (!(t_end >= 10.0)) {
    throw ConfigError("build_h_table: t_end must be >= 10, got " + std::to_string(t_end));
  }
  if (n_nodes < 100) {
    throw ConfigError("build_h_table: n_nodes must be >= 100, got " + std::to_string(n_nodes));
  }
  if (!(seed_factor >= 1.0)) throw ConfigError("build_h_table: seed_factor must be >= 1");

  const double contraction_time =
      schedule.big_gamma_inverse(schedule.big_gamma_at(t_end) + kSeedContraction);
  const double seed_time = std::max(seed_factor * t_end, contraction_time);

  std::vector<double> grid = log_spaced_nodes(t_end, n_nodes);
  std::vector<double> values(n_nodes);

  double step = 0.1 / schedule.gamma_at(seed_time);
  double h = integrate_backward(schedule, seed_time, t_end, schedule.h_asymptotic(seed_time), step);
  values.back() = h;
  for (std::size_t i = n_nodes - 1; i-- > 0;) {
    h = integrate_backward(schedule, grid[i + 1], grid[i], h, step);
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw NumericFailure("build_h_table: nonpositive or nonfinite h at t=" +
                           std::to_string(grid[i]));
    }
    values[i] = h;
  }
  return HTable(schedule, std::move(grid), std::move(values), seed_time);
}

std::size_t default_h_nodes(double t_end) {
  const double decades = std::log10(1.0 + std::max(t_end, 10.0));
  return std::max<std::size_t>(100, static_cast<std::size_t>(std::ceil(800.0 * decades)) + 1);
}

}  // namespace inertia
