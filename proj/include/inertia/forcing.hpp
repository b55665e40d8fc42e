#pragma once

#include <string>

#include "inertia/potentials.hpp"

namespace inertia {

enum class SourceKind { Zero, PowerDecay, OscillatingPowerDecay };

const char* to_string(SourceKind kind);

/// Norm-separable source term g(t) = amplitude (1+t)^-beta [cos(omega t)] d
/// with a fixed unit direction d.
class SourceTerm {
 public:
  static SourceTerm zero(int dim);
  /// `direction` is normalized; a zero direction is rejected.
  static SourceTerm power_decay(Vector direction, double amplitude, double beta);
  static SourceTerm oscillating_power_decay(Vector direction, double amplitude, double beta,
                                            double omega);

  SourceKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(direction_.size()); }
  const Vector& direction() const { return direction_; }
  double amplitude() const { return amplitude_; }
  double beta() const { return beta_; }
  double omega() const { return omega_; }
  bool is_zero() const { return kind_ == SourceKind::Zero; }

  /// Signed scalar profile s(t) with g(t) = s(t) d.
  double profile(double t) const;
  Vector at(double t) const;
  double norm_at(double t) const { return std::abs(profile(t)); }

  std::string describe() const;

 private:
  SourceTerm() = default;

  SourceKind kind_ = SourceKind::Zero;
  Vector direction_;
  double amplitude_ = 0.0;
  double beta_ = 0.0;
  double omega_ = 0.0;
};

inline Vector g_at(const SourceTerm& src, double t) { return src.at(t); }

/// Outcome of the weighted integrability test int_0^inf (1+t)^nu |g(t)| dt < inf.
struct WeightedCondition {
  bool holds = false;
  /// beta - nu - 1; the integral converges iff margin > 0.
  double margin = 0.0;
  /// amplitude / margin when the integral converges (exact for PowerDecay, an
  /// upper bound for the oscillating family), +inf otherwise.
  double integral_bound = 0.0;
};

WeightedCondition satisfies_weighted_condition(const SourceTerm& src, double nu);

/// int_0^T (1+t)^nu |g(t)| dt: closed form for PowerDecay, adaptive
/// Gauss-Kronrod between the kinks of |cos| for the oscillating family.
double weighted_norm_partial_integral(const SourceTerm& src, double nu, double T);

}  // namespace inertia
