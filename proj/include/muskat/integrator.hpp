#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "muskat/core.hpp"
#include "muskat/velocity.hpp"

namespace muskat {

struct StepControl {
  enum class Mode { Fixed, Adaptive };
  Mode mode = Mode::Fixed;
  double dt = 4e-5;  // fixed step, or initial step in adaptive mode
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_dt = 1e-3;
  double min_dt = 1e-12;

  /// Throws InvalidArgument on non-positive step sizes or tolerances.
  void validate() const;
};

struct StepResult {
  SampledCurve curve;
  /// max over nodes and components of |y5 - y4|.
  double error_estimate;
};

/// One Dormand-Prince 5(4) step of size dt (negative dt steps backward).
/// Propagates ArcChordFailure from any stage.
StepResult rk45_step(const SampledCurve& curve, const PhysicalParams& params, double dt,
                     const RhsOptions& rhs = {});

enum class EventKind { EnterUnstable, EnterStable, ArcChordFailure, NumericalFailure, StepUnderflow };

std::string to_string(EventKind kind);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::EnterUnstable;
  std::string detail;
};

/// How a trajectory was produced; replayed by detect_event_times.
struct SteppingRecipe {
  PhysicalParams params;
  RhsOptions rhs{};
  /// Magnitude of the fixed re-integration step.
  double dt = 4e-5;
  /// Threshold-smoothing after every `smooth_every` steps; disabled if empty.
  std::optional<double> smoothing_eps{};
  std::size_t smooth_every = 1;
};

/// Time-stamped snapshots on one grid. Times are strictly monotone in the
/// integration direction. A run that stopped on a failure has a terminal
/// failure event and keeps every state reached before it.
struct Trajectory {
  SteppingRecipe recipe;
  std::vector<double> times;
  std::vector<SampledCurve> snapshots;
  std::vector<Event> events;

  bool failed() const;
  /// +1 forward, -1 backward.
  int direction() const;
};

struct ForwardOptions {
  double t_start = 0.0;
  /// Stop after the first step whose state has min dz1 <= 0.
  bool stop_on_unstable = false;
  RhsOptions rhs{};
};

/// Integrate from t_start to t_end > t_start with no smoothing. Snapshots are
/// taken at t_start, every snapshot_every, and at the final time. Arc-chord
/// failures, NaNs and step-size underflow end the run with a terminal event.
Trajectory evolve_forward(const SampledCurve& curve0, const PhysicalParams& params,
                          double t_end, const StepControl& control, double snapshot_every,
                          const ForwardOptions& options = {});

struct BackwardOptions {
  double t_start = 0.0;
  double snapshot_every = 1.2e-2;
  std::size_t smooth_every = 1;
  RhsOptions rhs{};
};

/// Fixed backward steps of size dt, threshold-smoothing p1 and z2 with eps
/// after every smooth_every steps, until t_final < t_start.
Trajectory evolve_backward_regularized(const SampledCurve& curve0,
                                       const PhysicalParams& params, double t_final,
                                       double dt, double eps,
                                       const BackwardOptions& options = {});

/// Replays the recipe from `curve` at t_from to t_to with fixed steps no
/// larger than recipe.dt, landing exactly on t_to.
SampledCurve advance(const SampledCurve& curve, double t_from, double t_to,
                     const SteppingRecipe& recipe);

/// Sign changes of min_alpha dz1 between consecutive snapshots, each located
/// by bisection (re-integrating from the earlier snapshot) to 1e-8 in time.
std::vector<Event> detect_event_times(const Trajectory& trajectory,
                                      double time_tol = 1e-8);

}  // namespace muskat
