#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inertia/damping.hpp"
#include "inertia/errors.hpp"
#include "inertia/forcing.hpp"
#include "inertia/observables.hpp"
#include "inertia/potentials.hpp"

namespace inertia {

/// x'' + gamma(t) x' + grad Phi(x) = g(t).
struct Dynamics {
  DampingSchedule damping;
  Potential potential;
  SourceTerm source;

  int dim() const { return potential.dim(); }
  /// ShapeError when the potential and the source live in different spaces.
  void validate() const;
};

struct Derivative {
  Vector dx;
  Vector dv;
};

/// dx = v, dv = -gamma(t) v - grad Phi(x) + g(t).
Derivative rhs(const Dynamics& dyn, const State& state);

struct SolverSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 10.0;
  double t_end = 1e4;
  /// First log-spaced checkpoint; checkpoints are t0 * 10^(k / points_per_decade).
  double t0 = 0.1;
  double points_per_decade = 60.0;
  /// Additional checkpoint times merged into the log-spaced grid.
  std::vector<double> extra_checkpoints;

  void validate() const;
  /// 0, the log-spaced times below t_end, the extra times, and t_end; sorted
  /// and strictly increasing.
  std::vector<double> checkpoint_grid() const;
};

/// What the solver evaluates along the way besides the state itself.
struct Observers {
  /// Needed for E, M1 and h-weighted accumulators; may be null.
  std::shared_ptr<const HTable> h_table;
  /// Anchor for E and M1; the canonical minimizer when left empty.
  Vector x_star;
  std::vector<AccumulatorSpec> accumulators;
};

struct TrajectorySample {
  double t = 0.0;
  Vector x;
  Vector v;
  double w = 0.0;
  /// Lyapunov E(t); NaN without an h-table.
  double e_lyap = 0.0;
  /// |x - x* + h v|; NaN without an h-table.
  double m1_anchor = 0.0;
  double h = 0.0;
  std::vector<double> accumulators;

  State state() const { return State{t, x, v}; }
};

struct SolverStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

struct Trajectory {
  std::vector<AccumulatorSpec> accumulators;
  std::vector<TrajectorySample> samples;
  Vector x_star;
  SolverStats stats;

  std::optional<std::size_t> accumulator_index(std::string_view name) const;
  std::vector<double> times() const;
  std::vector<double> energies() const;
  /// Values of the named accumulator at every sample; RangeError if unknown.
  std::vector<double> accumulator_history(std::string_view name) const;
};

/// Integration stopped early; carries everything computed up to the last
/// accepted step.
class IntegrationFailure : public NumericFailure {
 public:
  IntegrationFailure(const std::string& what, Trajectory partial, State last_good)
      : NumericFailure(what), partial_(std::move(partial)), last_good_(std::move(last_good)) {}

  const Trajectory& partial() const { return partial_; }
  const State& last_good() const { return last_good_; }

 private:
  Trajectory partial_;
  State last_good_;
};

/// Step size fell below 1e-14 * max(t, 1).
class StiffnessFailure : public IntegrationFailure {
 public:
  using IntegrationFailure::IntegrationFailure;
};

/// Adaptive Dormand-Prince 5(4) integration with PI step control and dense
/// output. Emits one sample per checkpoint; accumulators are integrated with
/// three-point Gauss-Legendre on the dense output of every accepted step,
/// split at checkpoints.
Trajectory integrate(const Dynamics& dyn, const Vector& x0, const Vector& v0,
                     const SolverSettings& settings, const Observers& observers = {});

struct ReferenceSolution {
  State state;
  /// |y_(2n) - y_n| / |y_(2n)| between n and 2n steps.
  double refinement_change = 0.0;
};

/// Fixed-step classical RK4 with n_steps and 2 n_steps; returns the finer
/// result. NumericFailure if the two differ by 1e-10 (relative) or more.
ReferenceSolution integrate_reference(const Dynamics& dyn, const Vector& x0, const Vector& v0,
                                      double t_end, std::size_t n_steps);

}  // namespace inertia
