#pragma once

#include <utility>
#include <vector>

#include "muskat/core.hpp"
#include "muskat/error.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

/// dz/dt at the grid nodes.
struct VelocityField {
  std::vector<double> v1;
  std::vector<double> v2;
};

struct RhsOptions {
  /// Pairs with cosh(dz2) - cos(dz1) at or below this value abort the
  /// evaluation with ArcChordFailure.
  double denominator_floor = 1e-12;
  FilterSpec filter{};
};

/// Velocity of the horizontally periodic interface by the alternating
/// (odd-offset) trapezoid rule:
///
///   v(a_i) = 2h (drho / 4pi) sum_{j-i odd} (dz(a_i) - dz(a_j))
///            * sin(z1_i - z1_j) / (cosh(z2_i - z2_j) - cos(z1_i - z1_j))
///
/// with dz the filtered spectral derivative. The kernel is evaluated through
/// half-angle products, so nearby pairs keep full relative accuracy.
VelocityField periodic_rhs(const SampledCurve& curve, const PhysicalParams& params,
                           const RhsOptions& options = {});

/// Smallest kernel denominator over the odd-offset pairs.
ArcChordReport arc_chord_report(const SampledCurve& curve);

/// g (rho^- - rho^+) dz1/dalpha at the nodes. Stable iff every entry is > 0.
std::vector<double> rt_profile(const SampledCurve& curve, const PhysicalParams& params,
                               const FilterSpec& filter = {});

struct CurvePoint {
  double z1 = 0.0;
  double z2 = 0.0;
  double dz1 = 0.0;
  double dz2 = 0.0;
  double ddz1 = 0.0;
};

/// A curve that can be evaluated between nodes.
class ParametricCurve {
 public:
  virtual ~ParametricCurve() = default;
  virtual CurvePoint at(double alpha) const = 0;
  /// Integration window used for a target point alpha0; z2 vanishes outside it
  /// (or the window is one full period).
  virtual std::pair<double, double> window(double alpha0) const = 0;
  /// Parameters where the curve is only piecewise smooth.
  virtual std::vector<double> breakpoints() const { return {}; }
};

/// Trigonometric interpolant of a SampledCurve, z1 = alpha + p1(alpha). The
/// window is the period centred at the target point.
class SpectralCurve final : public ParametricCurve {
 public:
  explicit SpectralCurve(const SampledCurve& curve);
  CurvePoint at(double alpha) const override;
  std::pair<double, double> window(double alpha0) const override;

 private:
  TrigInterpolant p1_;
  TrigInterpolant z2_;
};

/// Tangential-velocity derivative at a vertical tangent alpha0 where
/// z1' = z1'' = z2 = 0:
///
///   z2'(a0) * int (z1(b) - z1(a0)) z1'(b) z2(b) / [(z1(a0)-z1(b))^2 + z2(b)^2]^2 db
///
/// Negative means the curve turns over at alpha0 going forward; positive means
/// it moves into the stable regime there. Panels are split at the curve's
/// breakpoints and at alpha0.
///
/// Throws PreconditionViolated if the vanishing conditions fail by more than
/// 1e-10, QuadratureNotConverged if quad_tol is not reached.
double turnover_predictor(const ParametricCurve& curve, double alpha0, double quad_tol);

/// The bare integral (without the z2'(a0) factor) restricted to [a, b].
double turnover_integral(const ParametricCurve& curve, double alpha0, double a, double b,
                         double quad_tol);

}  // namespace muskat
