#include "inertia/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace inertia {

namespace {

constexpr double kEnvelopeRatio = 1.2;
constexpr double kDecayRatio = 0.25;
constexpr double kMinDecades = 4.0;
constexpr double kMinHorizon = 1e3;

double first_positive_time(std::span<const double> t) {
  for (double ti : t) {
    if (ti > 0.0) return ti;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Decades spanned by the positive sample times.
double decades_of_data(std::span<const double> t) {
  if (t.empty()) return 0.0;
  const double first = first_positive_time(t);
  if (!(first > 0.0)) return 0.0;
  return std::log10(t.back() / first);
}

std::string not_applicable_note(std::span<const double> t) {
  std::ostringstream out;
  out << "needs horizon >= " << kMinHorizon << " and >= " << kMinDecades
      << " decades of data (have horizon " << (t.empty() ? 0.0 : t.back()) << ", "
      << decades_of_data(t) << " decades)";
  return out.str();
}

bool rate_check_applicable(std::span<const double> t) {
  return !t.empty() && t.back() >= kMinHorizon * (1.0 - 1e-12) &&
         decades_of_data(t) >= kMinDecades - 1e-9;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

bool in_window(double t, double lo, double hi) {
  return t >= lo * (1.0 - 1e-12) && t <= hi * (1.0 + 1e-12);
}

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("diagnostics: time and value series differ in length");
}

double interpolate(std::span<const double> t, std::span<const double> v, double at) {
  auto it = std::lower_bound(t.begin(), t.end(), at);
  if (it == t.begin()) return v.front();
  if (it == t.end()) return v.back();
  const auto hi = static_cast<std::size_t>(it - t.begin());
  const auto lo = hi - 1;
  if (t[hi] == at) return v[hi];
  const double s = (at - t[lo]) / (t[hi] - t[lo]);
  return v[lo] + s * (v[hi] - v[lo]);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "?";
}

CheckResult lyapunov_descent_check(const Trajectory& traj, const HTable& h_table,
                                   double t1_threshold) {
  CheckResult out{"lyapunov_descent", Verdict::NotApplicable, 0.0, 1e-6, ""};
  const auto gap_idx = traj.accumulator_index(accumulator_names::kHGap);
  if (!gap_idx) {
    out.note = "trajectory lacks the h (Phi - Phi*) accumulator";
    return out;
  }
  const auto& s = traj.samples;
  std::size_t start = s.size();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].t > h_table.t_end()) break;
    if (2.0 * h_table.h_prime_at(s[k].t) - 1.0 < t1_threshold) {
      start = k;
      break;
    }
  }
  if (start + 1 >= s.size()) {
    out.note = "run ends before t1";
    return out;
  }
  double worst = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (std::size_t k = start; k + 1 < s.size(); ++k) {
    const double dt = s[k + 1].t - s[k].t;
    const double de = s[k + 1].e_lyap - s[k].e_lyap;
    const double dissipated = s[k + 1].accumulators[*gap_idx] - s[k].accumulators[*gap_idx];
    const double excess = (de + dissipated) / dt;
    if (!(excess <= worst)) {
      worst = excess;
      worst_t = s[k].t;
    }
  }
  out.statistic = worst;
  out.verdict = worst <= out.threshold ? Verdict::Pass : Verdict::Fail;
  std::ostringstream note;
  note << "t1=" << s[start].t << "; worst (dE + int h gap)/dt at t=" << worst_t;
  out.note = note.str();
  return out;
}

CheckResult envelope_bound_check(std::span<const double> t, std::span<const double> w,
                                 double exponent) {
  require_same_size(t, w);
  CheckResult out{"envelope_bound", Verdict::NotApplicable, 0.0, kEnvelopeRatio, ""};
  if (!rate_check_applicable(t)) {
    out.note = not_applicable_note(t);
    return out;
  }
  const double t_last = t.back();
  const double first_lo = kBurnIn, first_hi = kBurnIn * 100.0;
  const double final_lo = t_last / 100.0;
  double max_first = 0.0, max_final = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < kBurnIn * (1.0 - 1e-12)) continue;
    const double s = std::pow(t[k], exponent) * w[k];
    if (in_window(t[k], first_lo, first_hi)) max_first = std::max(max_first, s);
    if (in_window(t[k], final_lo, t_last)) max_final = std::max(max_final, s);
  }
  out.statistic = max_final / std::max(max_first, std::numeric_limits<double>::min());
  out.verdict = out.statistic < kEnvelopeRatio ? Verdict::Pass : Verdict::Fail;
  std::ostringstream note;
  note << "max t^" << exponent << " W: first decades " << max_first << ", final decades "
       << max_final;
  out.note = note.str();
  return out;
}

CheckResult envelope_bound_check(const Trajectory& traj, double exponent) {
  const auto t = traj.times();
  const auto w = traj.energies();
  return envelope_bound_check(t, w, exponent);
}

CheckResult decay_to_zero_check(std::span<const double> t, std::span<const double> w,
                                double exponent) {
  require_same_size(t, w);
  CheckResult out{"decay_to_zero", Verdict::NotApplicable, 0.0, kDecayRatio, ""};
  if (!rate_check_applicable(t)) {
    out.note = not_applicable_note(t);
    return out;
  }
  const double t_last = t.back();
  std::vector<double> early, late;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double rho = std::pow(1.0 + t[k], exponent) * w[k];
    if (in_window(t[k], 100.0, 1000.0)) early.push_back(rho);
    if (in_window(t[k], t_last / 10.0, t_last)) late.push_back(rho);
  }
  const double m_early = median(early);
  const double m_late = median(late);
  out.statistic = m_late / std::max(m_early, std::numeric_limits<double>::min());
  out.verdict = out.statistic < kDecayRatio ? Verdict::Pass : Verdict::Fail;
  std::ostringstream note;
  note << "median (1+t)^" << exponent << " W: [100,1000] " << m_early << ", final decade "
       << m_late;
  out.note = note.str();
  return out;
}

CheckResult decay_to_zero_check(const Trajectory& traj, double exponent) {
  const auto t = traj.times();
  const auto w = traj.energies();
  return decay_to_zero_check(t, w, exponent);
}

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> field) {
  require_same_size(t, field);
  PowerLawFit fit;
  if (t.empty() || !(t.back() > 0.0)) return fit;
  const double lo = t.back() / 100.0;
  std::vector<double> lx, ly;
  std::size_t in_range = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!in_window(t[k], lo, t.back()) || !(t[k] > 0.0)) continue;
    ++in_range;
    if (field[k] > 0.0 && std::isfinite(field[k])) {
      lx.push_back(std::log(t[k]));
      ly.push_back(std::log(field[k]));
    }
  }
  fit.points = lx.size();
  if (lx.size() < 3 || 2 * lx.size() < in_range) return fit;
  if (lx.back() - lx.front() < std::log(100.0) * (1.0 - 1e-9)) return fit;

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.exponent = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (my + fit.exponent * (lx[i] - mx));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.applicable = true;
  fit.power_law = fit.residual < kPowerLawResidual;
  return fit;
}

double final_decade_oscillation(const Trajectory& traj, const Vector& z) {
  if (traj.samples.empty()) return 0.0;
  const double lo = traj.samples.back().t / 10.0;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  for (const auto& s : traj.samples) {
    if (!in_window(s.t, lo, traj.samples.back().t)) continue;
    const double d = (s.x - z).norm();
    mn = std::min(mn, d);
    mx = std::max(mx, d);
  }
  return mx >= mn ? mx - mn : 0.0;
}

OpialResult opial_distance_check(const Trajectory& traj, std::span<const Vector> minimizers) {
  OpialResult out;
  if (traj.samples.empty() || minimizers.empty()) return out;
  const Vector& x0 = traj.samples.front().x;
  bool all = true;
  for (const auto& z : minimizers) {
    const double osc = final_decade_oscillation(traj, z);
    const double thr = 1e-2 * (1.0 + (x0 - z).norm());
    out.oscillation.push_back(osc);
    out.threshold.push_back(thr);
    all = all && osc < thr;
  }
  out.verdict = all ? Verdict::Pass : Verdict::Fail;
  return out;
}

double cauchy_tail(const Trajectory& traj, double T) {
  if (traj.samples.empty()) return 0.0;
  const double horizon = traj.samples.back().t;
  if (T > horizon / 2.0 * (1.0 + 1e-12)) {
    throw DomainError("cauchy_tail: T must not exceed half the run horizon");
  }
  std::vector<const Vector*> tail;
  for (const auto& s : traj.samples) {
    if (s.t >= T) tail.push_back(&s.x);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    for (std::size_t j = i + 1; j < tail.size(); ++j) {
      worst = std::max(worst, (*tail[i] - *tail[j]).norm());
    }
  }
  return worst;
}

Flatness accumulator_flatness(std::span<const double> t, std::span<const double> values) {
  require_same_size(t, values);
  Flatness out;
  if (t.empty()) return out;
  const double end = values.back();
  const double tenth = interpolate(t, values, t.back() / 10.0);
  out.ratio = (end - tenth) / std::max(tenth, 1e-30);
  out.finite = out.ratio < kFlatnessThreshold;
  return out;
}

Flatness accumulator_flatness(const Trajectory& traj, std::string_view name) {
  const auto t = traj.times();
  const auto v = traj.accumulator_history(name);
  return accumulator_flatness(t, v);
}

CheckResult running_sup_stable(const std::string& name, std::span<const double> t,
                               std::span<const double> values) {
  require_same_size(t, values);
  CheckResult out{name, Verdict::NotApplicable, 0.0, 1.0, ""};
  if (t.empty()) return out;
  const double cut = t.back() / 10.0;
  double before = -std::numeric_limits<double>::infinity();
  double after = before;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(values[k])) continue;
    double& sup = t[k] < cut ? before : after;
    sup = std::max(sup, values[k]);
  }
  if (!std::isfinite(before) || !std::isfinite(after)) return out;
  out.statistic = after / std::max(before, std::numeric_limits<double>::min());
  out.verdict = after <= before ? Verdict::Pass : Verdict::Fail;
  std::ostringstream note;
  note << "sup before final decade " << before << ", sup over final decade " << after;
  out.note = note.str();
  return out;
}

namespace {

template <class PerInterval>
CheckResult per_interval_check(const Trajectory& traj, std::string name, double threshold,
                               PerInterval per_unit_time) {
  CheckResult out{std::move(name), Verdict::NotApplicable, 0.0, threshold, ""};
  const auto& s = traj.samples;
  if (s.size() < 2) return out;
  double worst = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double value = per_unit_time(s[k], s[k + 1]) / (s[k + 1].t - s[k].t);
    if (!(value <= worst)) {
      worst = value;
      worst_t = s[k].t;
    }
  }
  out.statistic = worst;
  out.verdict = worst <= threshold ? Verdict::Pass : Verdict::Fail;
  out.note = "worst interval starts at t=" + std::to_string(worst_t);
  return out;
}

std::size_t require_accumulator(const Trajectory& traj, const char* name) {
  const auto idx = traj.accumulator_index(name);
  if (!idx) throw RangeError(std::string("trajectory lacks accumulator ") + name);
  return *idx;
}

}  // namespace

CheckResult energy_monotone_check(const Trajectory& traj) {
  return per_interval_check(traj, "energy_nonincreasing", 1e-9,
                            [](const TrajectorySample& a, const TrajectorySample& b) {
                              return b.w - a.w;
                            });
}

CheckResult energy_balance_check(const Trajectory& traj) {
  const auto diss = require_accumulator(traj, accumulator_names::kDissipation);
  const auto power = require_accumulator(traj, accumulator_names::kForcingPower);
  return per_interval_check(
      traj, "energy_balance", 1e-7, [&](const TrajectorySample& a, const TrajectorySample& b) {
        return std::abs(b.w - a.w + (b.accumulators[diss] - a.accumulators[diss]) -
                        (b.accumulators[power] - a.accumulators[power]));
      });
}

CheckResult forcing_bound_check(const Trajectory& traj) {
  const auto bound = require_accumulator(traj, accumulator_names::kForcingBound);
  return per_interval_check(traj, "energy_forcing_bound", 1e-7,
                            [&](const TrajectorySample& a, const TrajectorySample& b) {
                              return (b.w - a.w) -
                                     (b.accumulators[bound] - a.accumulators[bound]);
                            });
}

CheckResult accumulator_monotone_check(const Trajectory& traj) {
  CheckResult out{"accumulators_monotone", Verdict::Pass, 0.0, 0.0, ""};
  std::size_t decreases = 0;
  for (std::size_t i = 0; i < traj.accumulators.size(); ++i) {
    if (!is_nonnegative(traj.accumulators[i].integrand)) continue;
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
      if (traj.samples[k + 1].accumulators[i] < traj.samples[k].accumulators[i]) {
        ++decreases;
        out.note = "first decrease in " + traj.accumulators[i].name;
      }
    }
  }
  out.statistic = static_cast<double>(decreases);
  out.verdict = decreases == 0 ? Verdict::Pass : Verdict::Fail;
  return out;
}

}  // namespace inertia
