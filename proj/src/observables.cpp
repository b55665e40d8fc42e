#include "inertia/observables.hpp"

#include <cmath>

namespace inertia {

double energy_w(const Potential& pot, const State& state) {
  return 0.5 * state.v.squaredNorm() + pot.gap(state.x);
}

double lyapunov_e(double h, const Potential& pot, const State& state, const Vector& x_star,
                  double integral_term) {
  return 2.0 * h * h * pot.gap(state.x) + (state.x - x_star + h * state.v).squaredNorm() -
         2.0 * integral_term;
}

double anchored_momentum(double h, const State& state, const Vector& x_star) {
  return (state.x - x_star + h * state.v).norm();
}

bool is_nonnegative(Integrand integrand) {
  return integrand != Integrand::ForcingAnchor && integrand != Integrand::ForcingPower;
}

bool AccumulatorSpec::needs_h() const {
  return weight == Weight::H || integrand == Integrand::ForcingAnchor;
}

double evaluate(const AccumulatorSpec& spec, const PointValues& p) {
  double weight = 1.0;
  switch (spec.weight) {
    case Weight::One: break;
    case Weight::Power: weight = std::pow(1.0 + p.t, spec.exponent); break;
    case Weight::H: weight = p.h; break;
    case Weight::InverseGamma: weight = 1.0 / p.gamma; break;
    case Weight::Gamma: weight = p.gamma; break;
  }
  double value = 0.0;
  switch (spec.integrand) {
    case Integrand::Energy: value = p.w; break;
    case Integrand::VelocitySq: value = p.v_norm_sq; break;
    case Integrand::GradNorm: value = p.grad_norm; break;
    case Integrand::Gap: value = p.gap; break;
    case Integrand::VelocityNorm: value = std::sqrt(p.v_norm_sq); break;
    case Integrand::ForcingAnchor: value = p.forcing_anchor; break;
    case Integrand::ForcingPower: value = p.forcing_power; break;
    case Integrand::ForcingBound: value = p.forcing_norm * std::sqrt(2.0 * p.w); break;
  }
  return weight * value;
}

std::vector<AccumulatorSpec> standard_accumulators(double alpha, double nu, bool with_h) {
  namespace n = accumulator_names;
  std::vector<AccumulatorSpec> specs = {
      {n::kAlphaW, Weight::Power, alpha, Integrand::Energy},
      {n::kVel2, Weight::Power, 2.0 * nu - alpha, Integrand::VelocitySq},
      {n::kGradGamma, Weight::InverseGamma, 0.0, Integrand::GradNorm},
      {n::kVelL1, Weight::One, 0.0, Integrand::VelocityNorm},
      {n::kDissipation, Weight::Gamma, 0.0, Integrand::VelocitySq},
      {n::kForcingPower, Weight::One, 0.0, Integrand::ForcingPower},
      {n::kForcingBound, Weight::One, 0.0, Integrand::ForcingBound},
  };
  if (with_h) {
    specs.push_back({n::kHGap, Weight::H, 0.0, Integrand::Gap});
    specs.push_back({n::kHVel2, Weight::H, 0.0, Integrand::VelocitySq});
    specs.push_back({n::kLyapForcing, Weight::H, 0.0, Integrand::ForcingAnchor});
  }
  return specs;
}

}  // namespace inertia
