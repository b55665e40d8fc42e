#pragma once

#include <vector>

#include "inertia/diagnostics.hpp"

namespace inertia::harness {

/// x'' + 3x' + x = 0, x(0) = 1, v(0) = 0.
State linear_c3_exact(double t);

/// x'' + x' = 0, x(0) = 0, v(0) = 1: x = 1 - e^-t, v = e^-t.
State pure_friction_exact(double t);

/// Closed-form cross-checks of the adaptive solver, the fixed-step reference
/// solver and the h-table on constant damping.
std::vector<CheckResult> run_oracles();

}  // namespace inertia::harness
