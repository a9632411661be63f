#include "muskat/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "muskat/error.hpp"

namespace muskat {
namespace {

// Dormand-Prince 5(4) tableau. The embedded 4th-order solution is the one
// propagated (no local extrapolation), so fixed-step runs converge at 4th
// order globally; the 5th-order solution only serves the error estimate.
constexpr std::array<std::array<double, 6>, 7> kA = {{
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
constexpr std::array<double, 7> kB5 = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                                       -2187.0 / 6784, 11.0 / 84, 0};
constexpr std::array<double, 7> kB4 = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct DpStep {
  SampledCurve curve;
  double error;
};

// One step given f(y0). Throws NumericalFailure on non-finite stage states.
DpStep dp_step(const SampledCurve& y0, const VelocityField& k0, const PhysicalParams& params,
               double dt, const RhsOptions& rhs) {
  const std::size_t n = y0.size();
  const auto p1 = y0.p1();
  const auto z2 = y0.z2();
  std::array<VelocityField, 7> k;
  k[0] = k0;

  // y0 + dt * sum_m w[m] k[m] over the first s stages.
  auto combine = [&](std::size_t s, const double* w) {
    std::vector<double> q1(p1.begin(), p1.end()), q2(z2.begin(), z2.end());
    for (std::size_t m = 0; m < s; ++m) {
      const double c = dt * w[m];
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        q1[i] += c * k[m].v1[i];
        q2[i] += c * k[m].v2[i];
      }
    }
    if (!all_finite(q1) || !all_finite(q2)) {
      throw NumericalFailure("non-finite state inside Runge-Kutta stage");
    }
    return SampledCurve(y0.grid(), std::move(q1), std::move(q2));
  };

  for (std::size_t s = 1; s < 7; ++s) k[s] = periodic_rhs(combine(s, kA[s].data()), params, rhs);
  SampledCurve y4 = combine(7, kB4.data());

  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t m = 0; m < 7; ++m) {
      const double w = kB5[m] - kB4[m];
      e1 += w * k[m].v1[i];
      e2 += w * k[m].v2[i];
    }
    err = std::max({err, std::abs(dt * e1), std::abs(dt * e2)});
  }
  return {std::move(y4), err};
}

// Mixed absolute/relative error norm for the adaptive controller.
double scaled_error(const SampledCurve& y0, const SampledCurve& y1, double raw_error,
                    const StepControl& c) {
  double scale = 0.0;
  for (std::size_t i = 0; i < y0.size(); ++i) {
    scale = std::max({scale, std::abs(y0.p1()[i]), std::abs(y1.p1()[i]),
                      std::abs(y0.z2()[i]), std::abs(y1.z2()[i])});
  }
  return raw_error / (c.abs_tol + c.rel_tol * scale);
}

SampledCurve smooth(const SampledCurve& curve, double eps) {
  return SampledCurve(curve.grid(), threshold_smooth(curve.p1(), eps),
                      threshold_smooth(curve.z2(), eps));
}

// Number of fixed steps of magnitude at most dt covering |span|, tolerant to
// round-off when span/dt is an integer.
std::size_t step_count(double span, double dt) {
  const double ratio = std::abs(span) / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, ratio)) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(nearest));
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

void record_failure(Trajectory& tr, double t, EventKind kind, const std::string& what) {
  tr.events.push_back({t, kind, what});
}

}  // namespace

void StepControl::validate() const {
  if (mode == Mode::Fixed) {
    if (!(dt > 0.0)) throw InvalidArgument("fixed step size must be positive");
  } else {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
      throw InvalidArgument("adaptive tolerances must be positive");
    }
    if (!(dt > 0.0) || !(max_dt > 0.0) || !(min_dt > 0.0)) {
      throw InvalidArgument("adaptive step bounds must be positive");
    }
  }
}

StepResult rk45_step(const SampledCurve& curve, const PhysicalParams& params, double dt,
                     const RhsOptions& rhs) {
  if (dt == 0.0) return {curve, 0.0};
  auto r = dp_step(curve, periodic_rhs(curve, params, rhs), params, dt, rhs);
  return {std::move(r.curve), r.error};
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::EnterUnstable:
      return "ENTER_UNSTABLE";
    case EventKind::EnterStable:
      return "ENTER_STABLE";
    case EventKind::ArcChordFailure:
      return "ARC_CHORD_FAILURE";
    case EventKind::NumericalFailure:
      return "NUMERICAL_FAILURE";
    case EventKind::StepUnderflow:
      return "STEP_UNDERFLOW";
  }
  return "UNKNOWN";
}

bool Trajectory::failed() const {
  return std::any_of(events.begin(), events.end(), [](const Event& e) {
    return e.kind == EventKind::ArcChordFailure || e.kind == EventKind::NumericalFailure ||
           e.kind == EventKind::StepUnderflow;
  });
}

int Trajectory::direction() const {
  if (times.size() >= 2 && times.back() < times.front()) return -1;
  return 1;
}

Trajectory evolve_forward(const SampledCurve& curve0, const PhysicalParams& params,
                          double t_end, const StepControl& control, double snapshot_every,
                          const ForwardOptions& options) {
  control.validate();
  const double t0 = options.t_start;
  if (!(t_end > t0)) throw InvalidArgument("forward evolution needs t_end > t_start");
  if (!(snapshot_every > 0.0)) throw InvalidArgument("snapshot cadence must be positive");

  Trajectory tr{SteppingRecipe{params, options.rhs, control.dt, std::nullopt, 1}, {}, {}, {}};
  tr.times.push_back(t0);
  tr.snapshots.push_back(curve0);

  SampledCurve y = curve0;
  double t = t0;
  auto unstable = [&](const SampledCurve& c) {
    return options.stop_on_unstable && !(min_dz1(c, options.rhs.filter).value > 0.0);
  };

  try {
    VelocityField k0 = periodic_rhs(y, params, options.rhs);

    if (control.mode == StepControl::Mode::Fixed) {
      const std::size_t steps = step_count(t_end - t0, control.dt);
      const double h = (t_end - t0) / static_cast<double>(steps);
      const std::size_t every = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(snapshot_every / h)));
      for (std::size_t s = 1; s <= steps; ++s) {
        auto r = dp_step(y, k0, params, h, options.rhs);
        y = std::move(r.curve);
        k0 = periodic_rhs(y, params, options.rhs);
        t = (s == steps) ? t_end : t0 + static_cast<double>(s) * h;
        const bool stop = unstable(y);
        if (s % every == 0 || s == steps || stop) {
          tr.times.push_back(t);
          tr.snapshots.push_back(y);
        }
        if (stop) break;
      }
    } else {
      double h = std::min(control.dt, control.max_dt);
      std::size_t next_snap = 1;
      auto snap_time = [&](std::size_t k) {
        return std::min(t_end, t0 + static_cast<double>(k) * snapshot_every);
      };
      while (t < t_end) {
        const double target = snap_time(next_snap);
        double step = std::min({h, control.max_dt, target - t});
        bool lands = step >= target - t;
        auto r = dp_step(y, k0, params, step, options.rhs);
        const double err = scaled_error(y, r.curve, r.error, control);
        if (err > 1.0) {
          h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
          if (h < control.min_dt) {
            record_failure(tr, t, EventKind::StepUnderflow, "adaptive step below min_dt");
            break;
          }
          continue;
        }
        y = std::move(r.curve);
        k0 = periodic_rhs(y, params, options.rhs);
        t = lands ? target : t + step;
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        // Keep the unclamped proposal so landing on a snapshot does not
        // shrink the following step.
        h = std::max(h, step) * std::clamp(grow, 0.2, 5.0);
        const bool stop = unstable(y);
        if (lands || stop) {
          tr.times.push_back(t);
          tr.snapshots.push_back(y);
          if (lands) ++next_snap;
        }
        if (stop) break;
      }
    }
  } catch (const ArcChordFailure& e) {
    record_failure(tr, t, EventKind::ArcChordFailure, e.what());
  } catch (const NumericalFailure& e) {
    record_failure(tr, t, EventKind::NumericalFailure, e.what());
  }
  if (tr.times.back() != t) {
    // Last valid state, e.g. after a failure between snapshots.
    tr.times.push_back(t);
    tr.snapshots.push_back(y);
  }
  return tr;
}

Trajectory evolve_backward_regularized(const SampledCurve& curve0,
                                       const PhysicalParams& params, double t_final,
                                       double dt, double eps,
                                       const BackwardOptions& options) {
  const double t0 = options.t_start;
  if (!(t_final < t0)) throw InvalidArgument("backward evolution needs t_final < t_start");
  if (!(dt > 0.0)) throw InvalidArgument("backward step size must be positive");
  if (!(eps >= 0.0)) throw InvalidArgument("smoothing threshold must be >= 0");
  if (!(options.snapshot_every > 0.0)) {
    throw InvalidArgument("snapshot cadence must be positive");
  }
  if (options.smooth_every == 0) throw InvalidArgument("smoothing cadence must be >= 1");

  Trajectory tr{SteppingRecipe{params, options.rhs, dt, eps, options.smooth_every},
                {},
                {},
                {}};
  tr.times.push_back(t0);
  tr.snapshots.push_back(curve0);

  const std::size_t steps = step_count(t_final - t0, dt);
  const double h = (t_final - t0) / static_cast<double>(steps);  // negative
  const std::size_t every = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(options.snapshot_every / std::abs(h))));

  SampledCurve y = curve0;
  double t = t0;
  try {
    for (std::size_t s = 1; s <= steps; ++s) {
      auto r = dp_step(y, periodic_rhs(y, params, options.rhs), params, h, options.rhs);
      SampledCurve next = std::move(r.curve);
      if (s % options.smooth_every == 0) next = smooth(next, eps);
      y = std::move(next);
      t = (s == steps) ? t_final : t0 + static_cast<double>(s) * h;
      if (s % every == 0 || s == steps) {
        tr.times.push_back(t);
        tr.snapshots.push_back(y);
      }
    }
  } catch (const ArcChordFailure& e) {
    record_failure(tr, t, EventKind::ArcChordFailure, e.what());
  } catch (const NumericalFailure& e) {
    record_failure(tr, t, EventKind::NumericalFailure, e.what());
  } catch (const InvalidArgument& e) {
    // Non-finite values after smoothing.
    record_failure(tr, t, EventKind::NumericalFailure, e.what());
  }
  if (tr.failed() && tr.times.back() != t) {
    tr.times.push_back(t);
    tr.snapshots.push_back(y);
  }
  return tr;
}

SampledCurve advance(const SampledCurve& curve, double t_from, double t_to,
                     const SteppingRecipe& recipe) {
  if (t_to == t_from) return curve;
  const std::size_t steps = step_count(t_to - t_from, recipe.dt);
  const double h = (t_to - t_from) / static_cast<double>(steps);
  SampledCurve y = curve;
  for (std::size_t s = 1; s <= steps; ++s) {
    auto r = dp_step(y, periodic_rhs(y, recipe.params, recipe.rhs), recipe.params, h,
                     recipe.rhs);
    y = std::move(r.curve);
    if (recipe.smoothing_eps && s % recipe.smooth_every == 0) {
      y = smooth(y, *recipe.smoothing_eps);
    }
  }
  return y;
}

std::vector<Event> detect_event_times(const Trajectory& trajectory, double time_tol) {
  std::vector<Event> events;
  const auto& snaps = trajectory.snapshots;
  if (snaps.size() < 2) return events;
  const FilterSpec& filter = trajectory.recipe.rhs.filter;

  auto stable = [&](const SampledCurve& c) { return min_dz1(c, filter).value > 0.0; };
  std::vector<bool> side(snaps.size());
  for (std::size_t k = 0; k < snaps.size(); ++k) side[k] = stable(snaps[k]);

  for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
    if (side[k] == side[k + 1]) continue;
    double lo = trajectory.times[k];
    double hi = trajectory.times[k + 1];
    SampledCurve state = snaps[k];
    try {
      while (std::abs(hi - lo) > time_tol) {
        const double mid = 0.5 * (lo + hi);
        SampledCurve probe = advance(state, lo, mid, trajectory.recipe);
        if (stable(probe) == side[k]) {
          lo = mid;
          state = std::move(probe);
        } else {
          hi = mid;
        }
      }
    } catch (const Error&) {
      // Keep the bracket reached so far.
    }
    events.push_back({0.5 * (lo + hi),
                      side[k + 1] ? EventKind::EnterStable : EventKind::EnterUnstable,
                      {}});
  }
  return events;
}

}  // namespace muskat
