#pragma once

#include <span>
#include <string>
#include <vector>

#include "inertia/damping.hpp"
#include "inertia/integrate.hpp"

namespace inertia {

enum class Verdict { Pass, Fail, NotApplicable };

const char* to_string(Verdict v);

/// One verdict together with the raw numbers it was derived from.
struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::NotApplicable;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string note;

  bool passed() const { return verdict == Verdict::Pass; }
};

/// Rate statistics ignore samples before this time.
inline constexpr double kBurnIn = 10.0;

/// Descent of E past t1 = first checkpoint with 2 h'(t) - 1 < t1_threshold:
/// E(t_{k+1}) - E(t_k) <= -int h (Phi - Phi*) + 1e-6 (t_{k+1} - t_k).
/// The statistic is the worst excess over the right-hand side.
CheckResult lyapunov_descent_check(const Trajectory& traj, const HTable& h_table,
                                   double t1_threshold = -0.5);

/// O(t^-exponent) check on a series W(t): s = t^exponent W over t >= 10;
/// passes when max s over the final two decades < 1.2 * max s over the first
/// two post-burn-in decades.
CheckResult envelope_bound_check(std::span<const double> t, std::span<const double> w,
                                 double exponent);
CheckResult envelope_bound_check(const Trajectory& traj, double exponent);

/// o(t^-exponent) check: rho = (1+t)^exponent W; passes when the median of
/// rho over the final decade is < 1/4 of its median over [100, 1000].
CheckResult decay_to_zero_check(std::span<const double> t, std::span<const double> w,
                                double exponent);
CheckResult decay_to_zero_check(const Trajectory& traj, double exponent);

struct PowerLawFit {
  bool applicable = false;
  double exponent = 0.0;
  /// RMS deviation of log(field) from the fitted line.
  double residual = 0.0;
  /// residual below kPowerLawResidual.
  bool power_law = false;
  std::size_t points = 0;
};

inline constexpr double kPowerLawResidual = 0.05;

/// Least-squares slope of log(field) against log(t) over the final two decades.
PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> field);

struct OpialResult {
  Verdict verdict = Verdict::NotApplicable;
  std::vector<double> oscillation;
  std::vector<double> threshold;
};

/// Per minimizer z: max - min of |x(t_k) - z| over the final decade; passes
/// when every oscillation is below 1e-2 (1 + |x(0) - z|).
OpialResult opial_distance_check(const Trajectory& traj, std::span<const Vector> minimizers);

/// max - min of |x(t_k) - z| over checkpoints in the final decade.
double final_decade_oscillation(const Trajectory& traj, const Vector& z);

/// max |x(s) - x(t)| over checkpoint pairs with s, t >= T. Requires T <=
/// horizon / 2.
double cauchy_tail(const Trajectory& traj, double T);

struct Flatness {
  double ratio = 0.0;
  /// ratio < kFlatnessThreshold
  bool finite = false;
};

inline constexpr double kFlatnessThreshold = 0.05;

/// (I(T_end) - I(T_end/10)) / max(I(T_end/10), 1e-30) over a monotone
/// accumulator history; I(T_end/10) is linearly interpolated.
Flatness accumulator_flatness(std::span<const double> t, std::span<const double> values);
Flatness accumulator_flatness(const Trajectory& traj, std::string_view name);

/// The all-time supremum of a series is attained before the final decade.
CheckResult running_sup_stable(const std::string& name, std::span<const double> t,
                               std::span<const double> values);

/// W nonincreasing across checkpoints up to 1e-9 per unit time (g = 0).
CheckResult energy_monotone_check(const Trajectory& traj);

/// W(t2) - W(t1) + int gamma |v|^2 - int <g, v> = 0 within 1e-7 (t2 - t1).
CheckResult energy_balance_check(const Trajectory& traj);

/// W(t2) - W(t1) <= int |g| sqrt(2W) + 1e-7 (t2 - t1).
CheckResult forcing_bound_check(const Trajectory& traj);

/// Every accumulator with a nonnegative integrand is nondecreasing (exact).
CheckResult accumulator_monotone_check(const Trajectory& traj);

}  // namespace inertia
