#include "inertia/forcing.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "inertia/errors.hpp"

namespace inertia {

namespace {

constexpr double kQuadratureAbsTol = 1e-10;

// int_0^T (1+t)^e dt
double power_integral(double e, double T) {
  if (e == -1.0) return std::log1p(T);
  return std::expm1((e + 1.0) * std::log1p(T)) / (e + 1.0);
}

}  // namespace

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::Zero: return "Zero";
    case SourceKind::PowerDecay: return "PowerDecay";
    case SourceKind::OscillatingPowerDecay: return "OscillatingPowerDecay";
  }
  return "?";
}

SourceTerm SourceTerm::zero(int dim) {
  if (dim <= 0) throw ConfigError("source: dim must be positive");
  SourceTerm src;
  src.direction_ = Vector::Zero(dim);
  src.direction_(0) = 1.0;
  return src;
}

SourceTerm SourceTerm::power_decay(Vector direction, double amplitude, double beta) {
  const double norm = direction.norm();
  if (direction.size() == 0 || !(norm > 0.0)) {
    throw ConfigError("PowerDecay: direction must be a nonzero vector");
  }
  if (!(amplitude > 0.0)) throw ConfigError("PowerDecay: amplitude must be positive");
  if (!(beta > 0.0)) throw ConfigError("PowerDecay: beta must be positive");
  SourceTerm src;
  src.kind_ = SourceKind::PowerDecay;
  src.direction_ = direction / norm;
  src.amplitude_ = amplitude;
  src.beta_ = beta;
  return src;
}

SourceTerm SourceTerm::oscillating_power_decay(Vector direction, double amplitude, double beta,
                                               double omega) {
  if (!std::isfinite(omega)) throw ConfigError("OscillatingPowerDecay: omega must be finite");
  SourceTerm src = power_decay(std::move(direction), amplitude, beta);
  src.kind_ = SourceKind::OscillatingPowerDecay;
  src.omega_ = omega;
  return src;
}

double SourceTerm::profile(double t) const {
  switch (kind_) {
    case SourceKind::Zero: return 0.0;
    case SourceKind::PowerDecay: return amplitude_ * std::pow(1.0 + t, -beta_);
    case SourceKind::OscillatingPowerDecay:
      return amplitude_ * std::pow(1.0 + t, -beta_) * std::cos(omega_ * t);
  }
  return 0.0;
}

Vector SourceTerm::at(double t) const {
  if (kind_ == SourceKind::Zero) return Vector::Zero(direction_.size());
  return profile(t) * direction_;
}

std::string SourceTerm::describe() const {
  std::ostringstream out;
  out << to_string(kind_) << "(dim=" << dim();
  if (kind_ != SourceKind::Zero) out << ", amplitude=" << amplitude_ << ", beta=" << beta_;
  if (kind_ == SourceKind::OscillatingPowerDecay) out << ", omega=" << omega_;
  out << ")";
  return out.str();
}

WeightedCondition satisfies_weighted_condition(const SourceTerm& src, double nu) {
  if (!(nu >= 0.0)) throw DomainError("satisfies_weighted_condition: nu must be >= 0");
  WeightedCondition out;
  if (src.is_zero()) {
    out.holds = true;
    out.margin = std::numeric_limits<double>::infinity();
    out.integral_bound = 0.0;
    return out;
  }
  out.margin = src.beta() - nu - 1.0;
  out.holds = out.margin > 0.0;
  out.integral_bound =
      out.holds ? src.amplitude() / out.margin : std::numeric_limits<double>::infinity();
  return out;
}

double weighted_norm_partial_integral(const SourceTerm& src, double nu, double T) {
  if (!(T > 0.0)) throw DomainError("weighted_norm_partial_integral: T must be > 0");
  const double exponent = nu - src.beta();
  switch (src.kind()) {
    case SourceKind::Zero: return 0.0;
    case SourceKind::PowerDecay: return src.amplitude() * power_integral(exponent, T);
    case SourceKind::OscillatingPowerDecay: break;
  }

  const double omega = std::abs(src.omega());
  if (omega == 0.0) return src.amplitude() * power_integral(exponent, T);

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto integrand = [&](double t) { return std::pow(1.0 + t, nu) * src.norm_at(t); };
  const double half_period = std::numbers::pi / omega;
  double total = 0.0;
  double error_sum = 0.0;
  double a = 0.0;
  // |cos(omega t)| is smooth between its zeros at (k + 1/2) pi / omega.
  for (double k = 0.5; a < T; k += 1.0) {
    const double b = std::min(T, k * half_period);
    double err = 0.0;
    total += Quadrature::integrate(integrand, a, b, 15, 1e-13, &err);
    error_sum += err;
    a = b;
  }
  if (!std::isfinite(total) || error_sum > kQuadratureAbsTol) {
    throw NumericFailure("weighted_norm_partial_integral: quadrature did not reach 1e-10");
  }
  return total;
}

}  // namespace inertia
