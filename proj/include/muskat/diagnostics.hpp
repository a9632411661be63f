#pragma once

#include <optional>
#include <string>
#include <vector>

#include "muskat/core.hpp"
#include "muskat/integrator.hpp"

namespace muskat {

enum class Regime { Stable, Critical, Unstable };

std::string to_string(Regime regime);

/// CRITICAL when |min_slope| <= slope_tol, otherwise by the sign.
Regime classify(double min_slope, double slope_tol);

/// A point of the curve with its dz1/dalpha there.
struct CurveSample {
  double alpha = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double slope = 0.0;
};

struct TurningReport {
  double min_slope = 0.0;
  double argmin = 0.0;
  Regime regime = Regime::Stable;
  /// Zeros of dz1/dalpha (vertical tangents). Sign changes are located on a
  /// cubic through the neighbouring nodes and polished on the spectral
  /// interpolant; a zero that the slope only touches is reported once, at
  /// its minimum.
  std::vector<CurveSample> tangent_points;
  /// Local minima of dz1/dalpha whose value is at most near_critical_tol,
  /// in increasing alpha.
  std::vector<CurveSample> slope_minima;
};

struct TurningOptions {
  double slope_tol = 1e-10;
  double near_critical_tol = 1e-2;
  FilterSpec filter{};
};

TurningReport turning_report(const SampledCurve& curve, const TurningOptions& options = {});

/// Sup norms per snapshot. sup_slope is empty on snapshots that are not
/// graphs.
struct NormSeries {
  std::vector<double> times;
  std::vector<double> sup_f;
  std::vector<std::optional<double>> sup_slope;
};

/// max |z2| and max |dz2/dz1|, refined between nodes on the interpolant.
NormSeries norm_series(const Trajectory& trajectory, const FilterSpec& filter = {});

struct RegimeInterval {
  double t_begin = 0.0;
  double t_end = 0.0;
  Regime regime = Regime::Stable;
};

/// Maximal constant-regime intervals in increasing time, covering the span of
/// the trajectory exactly. Snapshot classifications are joined at the event
/// times found by detect_event_times; transitions without an event switch at
/// the snapshot where they are first seen.
std::vector<RegimeInterval> regime_timeline(const Trajectory& trajectory,
                                            double slope_tol = 1e-10);
std::vector<RegimeInterval> regime_timeline(const Trajectory& trajectory,
                                            const std::vector<Event>& events,
                                            double slope_tol = 1e-10);

/// "STABLE->UNSTABLE" style summary.
std::string pattern(const std::vector<RegimeInterval>& timeline);

}  // namespace muskat
