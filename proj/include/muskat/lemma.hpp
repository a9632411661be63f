#pragma once

#include <string>
#include <vector>

#include "muskat/velocity.hpp"

namespace muskat::lemma {

/// Polynomial sum_m coeffs[m] * (alpha - origin)^m on [a, b].
struct PolyPiece {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> coeffs;
  double origin = 0.0;

  double operator()(double alpha, int order = 0) const;
};

/// Contiguous piecewise polynomial. Construction checks ordering, contiguity
/// and value continuity at interior breakpoints.
class PiecewisePoly {
 public:
  explicit PiecewisePoly(std::vector<PolyPiece> pieces);

  const std::vector<PolyPiece>& pieces() const noexcept { return pieces_; }
  double lower() const { return pieces_.front().a; }
  double upper() const { return pieces_.back().b; }
  bool contains(double alpha) const { return alpha >= lower() && alpha <= upper(); }

  /// order-th derivative at alpha, inside [lower, upper]. At a breakpoint the
  /// piece to the right is used (the last piece owns the upper end).
  double operator()(double alpha, int order = 0) const;

  /// p(alpha - shift) + offset.
  PiecewisePoly shifted(double shift, double offset) const;

 private:
  std::vector<PolyPiece> pieces_;
};

/// Curve with components c1, c2 on a common parameter interval, and
/// z = (alpha, 0) outside it.
class PiecewiseCurve final : public ParametricCurve {
 public:
  PiecewiseCurve(PiecewisePoly c1, PiecewisePoly c2);

  const PiecewisePoly& c1() const noexcept { return c1_; }
  const PiecewisePoly& c2() const noexcept { return c2_; }

  double z1(double alpha, int order = 0) const;
  double z2(double alpha, int order = 0) const;

  CurvePoint at(double alpha) const override;
  std::pair<double, double> window(double alpha0) const override;
  std::vector<double> breakpoints() const override;

 private:
  PiecewisePoly c1_;
  PiecewisePoly c2_;
};

struct Blocks {
  PiecewiseCurve tail;    // on [-2, 2]
  PiecewiseCurve center;  // on [-7, 7]
  PiecewiseCurve zR;      // tails spliced at +-R, center on [-7, 7]
};

/// Throws InvalidArgument unless R > 9.
Blocks build_blocks(double R);

/// Center-center contribution to the predictor integral at alpha0 = 0.
struct CcIntegrals {
  double i1;  // numeric, no closed form used
  double i2;  // 1/65
  double i3;  // -63/442
  double i4;  // -3/119
  double sum;
};
CcIntegrals cc_integrals();

/// Tail-tail contribution at alpha0 = R.
struct TtIntegrals {
  double i1;           // 1/8
  double i2;           // > 0, numeric
  double i3;           // 1/8
  double lower_bound;  // i1 + i3 = 1/4
};
TtIntegrals tt_integrals();

/// Closed-form bounds on the cross terms.
struct TailBounds {
  double tc;   // 24 (R+2) / (R-2)^4
  double ct1;  // 126 (R+7) / (R-7)^4
  double ct2;  // 12 (2R+2) / (2R-2)^4
};
TailBounds tail_bounds(double R);

struct ConditionReport {
  double R;
  double I_cc;
  double I_tt_lower;
  double bound_tc;
  double bound_ct1;
  double bound_ct2;
  bool center_ok;  // I_cc + bound_tc < 0
  bool tail_ok;    // I_tt_lower - (bound_ct1 + bound_ct2) > 0
};
ConditionReport verify_conditions(double R);

/// Smallest integer R > 9 for which both conditions hold.
int min_admissible_R();

/// Direct quadratures of the predictor at alpha0 = 0 and alpha0 = R,
/// alongside the part-by-part reconstruction.
struct PredictorCrosscheck {
  double at_center;         // turnover_predictor(zR, 0)
  double at_tail;           // turnover_predictor(zR, R)
  double center_partwise;   // z2'(0) (I_cc + I_tc)
  double tail_partwise;     // z2'(R) (I_tt + I_ct1 + I_ct2)
  double I_tc;
  double I_tt;
  double I_ct1;
  double I_ct2;
};
PredictorCrosscheck predictor_crosscheck(double R, double quad_tol);

/// Pretty-printed JSON listing every value, bound and flag for R.
std::string verification_report(double R, double quad_tol = 1e-10);

}  // namespace muskat::lemma
