#pragma once

#include <string>
#include <vector>

#include "inertia/potentials.hpp"

namespace inertia {

struct State {
  double t = 0.0;
  Vector x;
  Vector v;
};

/// W = 1/2 |v|^2 + Phi(x) - Phi*.
double energy_w(const Potential& pot, const State& state);

/// E = 2 h^2 (Phi(x) - Phi*) + |x - x* + h v|^2 - 2 integral_term, where
/// integral_term is the running value of int_0^t h <g, x - x* + h v> ds.
double lyapunov_e(double h, const Potential& pot, const State& state, const Vector& x_star,
                  double integral_term);

/// |x - x* + h v|.
double anchored_momentum(double h, const State& state, const Vector& x_star);

enum class Weight {
  One,
  Power,         // (1 + t)^exponent
  H,             // h(t)
  InverseGamma,  // 1 / gamma(t)
  Gamma,         // gamma(t)
};

enum class Integrand {
  Energy,          // W
  VelocitySq,      // |v|^2
  GradNorm,        // |grad Phi(x)|
  Gap,             // Phi(x) - Phi*
  VelocityNorm,    // |v|
  ForcingAnchor,   // <g, x - x* + h v>   (signed)
  ForcingPower,    // <g, v>              (signed)
  ForcingBound,    // |g| sqrt(2 W)
};

bool is_nonnegative(Integrand integrand);

struct AccumulatorSpec {
  std::string name;
  Weight weight = Weight::One;
  double exponent = 0.0;  // used by Weight::Power
  Integrand integrand = Integrand::Energy;

  bool needs_h() const;
};

/// Running integral of weight(t) * integrand(t) along a trajectory.
struct Accumulator {
  AccumulatorSpec spec;
  double value = 0.0;
};

/// Everything an accumulator integrand may depend on at one instant.
struct PointValues {
  double t = 0.0;
  double gamma = 0.0;
  double h = 0.0;  // NaN when no h-table is attached
  double w = 0.0;
  double gap = 0.0;
  double grad_norm = 0.0;
  double v_norm_sq = 0.0;
  double forcing_anchor = 0.0;
  double forcing_power = 0.0;
  double forcing_norm = 0.0;
};

double evaluate(const AccumulatorSpec& spec, const PointValues& point);

namespace accumulator_names {
inline constexpr const char* kAlphaW = "I_alphaW";          // (1+t)^alpha W
inline constexpr const char* kVel2 = "I_vel2";              // (1+t)^(2nu-alpha) |v|^2
inline constexpr const char* kGradGamma = "I_gradgamma";    // |grad Phi| / gamma
inline constexpr const char* kVelL1 = "I_vL1";              // |v|
inline constexpr const char* kHGap = "I_hgap";              // h (Phi - Phi*)
inline constexpr const char* kHVel2 = "I_hvel2";            // h |v|^2
inline constexpr const char* kLyapForcing = "I_lyap_forcing";  // h <g, x - x* + h v>
inline constexpr const char* kDissipation = "I_dissipation";   // gamma |v|^2
inline constexpr const char* kForcingPower = "I_forcing_power";  // <g, v>
inline constexpr const char* kForcingBound = "I_forcing_bound";  // |g| sqrt(2W)
}  // namespace accumulator_names

/// The accumulators every scenario run carries. `nu` selects the weight of
/// I_vel2; `with_h` adds the h-weighted ones.
std::vector<AccumulatorSpec> standard_accumulators(double alpha, double nu, bool with_h = true);

}  // namespace inertia
