#include "inertia/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace inertia {

void Dynamics::validate() const {
  if (source.dim() != potential.dim()) {
    std::ostringstream msg;
    msg << "dynamics: source dimension " << source.dim() << " differs from potential dimension "
        << potential.dim();
    throw ShapeError(msg.str());
  }
}

Derivative rhs(const Dynamics& dyn, const State& state) {
  if (state.x.size() != dyn.dim() || state.v.size() != dyn.dim()) {
    throw ShapeError("rhs: state dimension does not match the potential");
  }
  if (!std::isfinite(state.t) || !state.x.allFinite() || !state.v.allFinite()) {
    throw NumericFailure("rhs: nonfinite state");
  }
  Derivative d;
  d.dx = state.v;
  d.dv = -dyn.damping.gamma_at(state.t) * state.v - dyn.potential.gradient(state.x);
  if (!dyn.source.is_zero()) d.dv += dyn.source.at(state.t);
  return d;
}

void SolverSettings::validate() const {
  if (!(rel_tol >= 1e-13)) throw ConfigError("solver: rel_tol must be >= 1e-13");
  if (!(abs_tol > 0.0)) throw ConfigError("solver: abs_tol must be positive");
  if (!(max_step > 0.0)) throw ConfigError("solver: max_step must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("solver: t_end must be positive");
  if (!(t0 > 0.0)) throw ConfigError("solver: t0 must be positive");
  if (!(points_per_decade >= 1.0)) throw ConfigError("solver: points_per_decade must be >= 1");
}

std::vector<double> SolverSettings::checkpoint_grid() const {
  validate();
  std::vector<double> grid{0.0};
  for (int k = 0;; ++k) {
    const double t = t0 * std::pow(10.0, k / points_per_decade);
    if (t >= t_end * (1.0 - 1e-12)) break;
    grid.push_back(t);
  }
  for (double t : extra_checkpoints) {
    if (t > 0.0 && t < t_end) grid.push_back(t);
  }
  grid.push_back(t_end);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::optional<std::size_t> Trajectory::accumulator_index(std::string_view name) const {
  for (std::size_t i = 0; i < accumulators.size(); ++i) {
    if (accumulators[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.t);
  return out;
}

std::vector<double> Trajectory::energies() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.w);
  return out;
}

std::vector<double> Trajectory::accumulator_history(std::string_view name) const {
  const auto idx = accumulator_index(name);
  if (!idx) throw RangeError("trajectory: no accumulator named '" + std::string(name) + "'");
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.accumulators[*idx]);
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer & Wanner, dopri5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinShrink = 0.2;  // h_new >= 0.2 h
constexpr double kMaxGrow = 10.0;   // h_new <= 10 h

// Three-point Gauss-Legendre on [-1, 1].
constexpr double kGaussNode = 0.7745966692414834;  // sqrt(3/5)
constexpr double kGaussOuter = 5.0 / 9.0;
constexpr double kGaussInner = 8.0 / 9.0;

class FirstOrderSystem {
 public:
  explicit FirstOrderSystem(const Dynamics& dyn) : dyn_(dyn), n_(dyn.dim()) {}

  void eval(double t, const Vector& y, Vector& dy) {
    ++evaluations;
    const auto x = y.head(n_);
    const auto v = y.tail(n_);
    dy.resize(2 * n_);
    dy.head(n_) = v;
    dy.tail(n_) = -dyn_.damping.gamma_at(t) * v - dyn_.potential.gradient(x);
    if (!dyn_.source.is_zero()) dy.tail(n_) += dyn_.source.at(t);
  }

  std::size_t evaluations = 0;

 private:
  const Dynamics& dyn_;
  Eigen::Index n_;
};

struct DenseOutput {
  double t_old = 0.0;
  double dt = 0.0;
  Vector r1, r2, r3, r4, r5;

  Vector at(double t) const {
    const double s = (t - t_old) / dt;
    const double s1 = 1.0 - s;
    return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
  }
};

double error_norm(const Vector& err, const Vector& y0, const Vector& y1, double atol,
                  double rtol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = err(i) / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

class Recorder {
 public:
  Recorder(const Dynamics& dyn, const Observers& obs, Trajectory& out)
      : dyn_(dyn), obs_(obs), out_(out), n_(dyn.dim()) {
    out_.accumulators = obs.accumulators;
    out_.x_star = obs.x_star.size() ? obs.x_star : dyn.potential.canonical_minimizer();
    if (out_.x_star.size() != dyn.dim()) throw ShapeError("observers: x_star has wrong dimension");
    for (std::size_t i = 0; i < obs.accumulators.size(); ++i) {
      const auto& spec = obs.accumulators[i];
      if (spec.needs_h() && !obs.h_table) {
        throw ConfigError("observers: accumulator '" + spec.name + "' requires an h-table");
      }
      if (spec.weight == Weight::H && spec.integrand == Integrand::ForcingAnchor) {
        lyap_index_ = i;
      }
    }
    if (obs.h_table && (obs.h_table->schedule().c() != dyn.damping.c() ||
                         obs.h_table->schedule().alpha() != dyn.damping.alpha())) {
      throw ConfigError("observers: h-table built for a different damping schedule");
    }
    values_.assign(obs.accumulators.size(), 0.0);
  }

  PointValues point(double t, const Vector& y) const {
    const auto x = y.head(n_);
    const auto v = y.tail(n_);
    PointValues p;
    p.t = t;
    p.gamma = dyn_.damping.gamma_at(t);
    p.h = obs_.h_table ? obs_.h_table->h_at(t) : std::numeric_limits<double>::quiet_NaN();
    p.gap = dyn_.potential.gap(x);
    p.v_norm_sq = v.squaredNorm();
    p.w = 0.5 * p.v_norm_sq + p.gap;
    p.grad_norm = dyn_.potential.gradient(x).norm();
    if (!dyn_.source.is_zero()) {
      const Vector g = dyn_.source.at(t);
      p.forcing_power = g.dot(v);
      p.forcing_norm = g.norm();
      if (obs_.h_table) p.forcing_anchor = g.dot(x - out_.x_star + p.h * v);
    }
    return p;
  }

  // Adds the integral over [a, b] using the dense output of the current step.
  void accumulate(const DenseOutput& dense, double a, double b) {
    if (values_.empty() || b <= a) return;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double nodes[3] = {mid - kGaussNode * half, mid, mid + kGaussNode * half};
    const double weights[3] = {kGaussOuter * half, kGaussInner * half, kGaussOuter * half};
    for (int q = 0; q < 3; ++q) {
      const PointValues p = point(nodes[q], dense.at(nodes[q]));
      for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += weights[q] * evaluate(obs_.accumulators[i], p);
      }
    }
  }

  void emit(double t, const Vector& y) {
    TrajectorySample s;
    s.t = t;
    s.x = y.head(n_);
    s.v = y.tail(n_);
    s.w = energy_w(dyn_.potential, s.state());
    s.accumulators = values_;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (obs_.h_table) {
      s.h = obs_.h_table->h_at(t);
      double integral_term = 0.0;
      if (lyap_index_) {
        integral_term = values_[*lyap_index_];
      } else if (!dyn_.source.is_zero()) {
        integral_term = nan;
      }
      s.e_lyap = lyapunov_e(s.h, dyn_.potential, s.state(), out_.x_star, integral_term);
      s.m1_anchor = anchored_momentum(s.h, s.state(), out_.x_star);
    } else {
      s.h = s.e_lyap = s.m1_anchor = nan;
    }
    out_.samples.push_back(std::move(s));
  }

 private:
  const Dynamics& dyn_;
  const Observers& obs_;
  Trajectory& out_;
  Eigen::Index n_;
  std::optional<std::size_t> lyap_index_;
  std::vector<double> values_;
};

State split_state(double t, const Vector& y, Eigen::Index n) {
  return State{t, y.head(n), y.tail(n)};
}

double initial_step(FirstOrderSystem& sys, double t, const Vector& y0, const Vector& f0,
                    const SolverSettings& s) {
  auto scaled_norm = [&](const Vector& z) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double sc = s.abs_tol + s.rel_tol * std::abs(y0(i));
      sum += (z(i) / sc) * (z(i) / sc);
    }
    return std::sqrt(sum / static_cast<double>(z.size()));
  };
  const double dnf = scaled_norm(f0);
  const double dny = scaled_norm(y0);
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h = std::min(h, s.max_step);
  Vector y1 = y0 + h * f0;
  Vector f1;
  sys.eval(t + h, y1, f1);
  const double der2 = scaled_norm(f1 - f0) / h;
  const double der12 = std::max(der2, dnf);
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, s.max_step});
}

}  // namespace

Trajectory integrate(const Dynamics& dyn, const Vector& x0, const Vector& v0,
                     const SolverSettings& settings, const Observers& observers) {
  dyn.validate();
  settings.validate();
  const Eigen::Index n = dyn.dim();
  if (x0.size() != n || v0.size() != n) throw ShapeError("integrate: initial state dimension");
  if (!x0.allFinite() || !v0.allFinite()) throw NumericFailure("integrate: nonfinite initial state");
  if (observers.h_table && observers.h_table->t_end() < settings.t_end * (1.0 - 1e-12)) {
    throw ConfigError("integrate: h-table does not cover [0, t_end]");
  }

  Trajectory traj;
  Recorder rec(dyn, observers, traj);
  FirstOrderSystem sys(dyn);

  const std::vector<double> checkpoints = settings.checkpoint_grid();
  const double t_end = settings.t_end;
  std::size_t next_cp = 1;

  double t = 0.0;
  Vector y(2 * n);
  y << x0, v0;
  rec.emit(0.0, y);

  Vector k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  sys.eval(t, y, k1);
  double h = initial_step(sys, t, y, k1, settings);
  double fac_old = 1e-4;
  bool last_rejected = false;
  DenseOutput dense;

  auto partial = [&]() {
    traj.stats.rhs_evaluations = sys.evaluations;
    return traj;
  };

  while (t < t_end) {
    bool last = false;
    if (t + h >= t_end - 1e-13 * t_end) {
      h = t_end - t;
      last = true;
    }
    if (h < 1e-14 * std::max(t, 1.0)) {
      std::ostringstream msg;
      msg << "integrate: step size underflow (h=" << h << ") at t=" << t;
      throw StiffnessFailure(msg.str(), partial(), split_state(t, y, n));
    }

    ytmp = y + h * a21 * k1;
    sys.eval(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    sys.eval(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    sys.eval(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    sys.eval(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double t_new = last ? t_end : t + h;
    sys.eval(t_new, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    sys.eval(t_new, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double e = error_norm(err, y, ynew, settings.abs_tol, settings.rel_tol);
    if (!std::isfinite(e)) e = 1e10;
    const double fac11 = std::pow(e, kExpo);

    if (e <= 1.0) {
      if (!ynew.allFinite()) {
        throw IntegrationFailure("integrate: nonfinite state after t=" + std::to_string(t),
                                 partial(), split_state(t, y, n));
      }
      ++traj.stats.accepted;
      dense.t_old = t;
      dense.dt = t_new - t;
      dense.r1 = y;
      dense.r2 = ynew - y;
      dense.r3 = h * k1 - dense.r2;
      dense.r4 = dense.r2 - h * k7 - dense.r3;
      dense.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      double seg_start = t;
      while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t_new) {
        const double tc = checkpoints[next_cp];
        rec.accumulate(dense, seg_start, tc);
        rec.emit(tc, tc == t_new ? ynew : dense.at(tc));
        seg_start = tc;
        ++next_cp;
      }
      rec.accumulate(dense, seg_start, t_new);

      double fac = fac11 / std::pow(fac_old, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, 1.0 / kMinShrink);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      fac_old = std::max(e, 1e-4);
      last_rejected = false;

      t = t_new;
      y.swap(ynew);
      k1.swap(k7);
      h = std::min(h_new, settings.max_step);
    } else {
      ++traj.stats.rejected;
      last_rejected = true;
      h /= std::min(1.0 / kMinShrink, fac11 / kSafety);
    }
  }
  traj.stats.rhs_evaluations = sys.evaluations;
  return traj;
}

namespace {

Vector rk4_run(FirstOrderSystem& sys, Vector y, double t_end, std::size_t steps) {
  const double dt = t_end / static_cast<double>(steps);
  Vector k1, k2, k3, k4;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = dt * static_cast<double>(i);
    sys.eval(t, y, k1);
    sys.eval(t + 0.5 * dt, y + 0.5 * dt * k1, k2);
    sys.eval(t + 0.5 * dt, y + 0.5 * dt * k2, k3);
    sys.eval(t + dt, y + dt * k3, k4);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) throw NumericFailure("integrate_reference: nonfinite state");
  }
  return y;
}

}  // namespace

ReferenceSolution integrate_reference(const Dynamics& dyn, const Vector& x0, const Vector& v0,
                                      double t_end, std::size_t n_steps) {
  dyn.validate();
  if (n_steps < 10000) throw ConfigError("integrate_reference: n_steps must be >= 1e4");
  if (!(t_end > 0.0)) throw ConfigError("integrate_reference: t_end must be positive");
  const Eigen::Index n = dyn.dim();
  if (x0.size() != n || v0.size() != n) throw ShapeError("integrate_reference: state dimension");

  FirstOrderSystem sys(dyn);
  Vector y0(2 * n);
  y0 << x0, v0;
  const Vector coarse = rk4_run(sys, y0, t_end, n_steps);
  const Vector fine = rk4_run(sys, y0, t_end, 2 * n_steps);

  ReferenceSolution out;
  out.state = split_state(t_end, fine, n);
  out.refinement_change =
      (fine - coarse).norm() / std::max(fine.norm(), std::numeric_limits<double>::min());
  if (!(out.refinement_change < 1e-10)) {
    std::ostringstream msg;
    msg << "integrate_reference: doubling n_steps changed the final state by "
        << out.refinement_change << " (relative), above 1e-10";
    throw NumericFailure(msg.str());
  }
  return out;
}

}  // namespace inertia
