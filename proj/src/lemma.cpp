#include "muskat/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "muskat/error.hpp"
#include "muskat/quadrature.hpp"

namespace muskat::lemma {

namespace {

constexpr double kCcQuadTol = 1e-13;

double falling(int m, int order) {
  double f = 1.0;
  for (int r = 0; r < order; ++r) f *= static_cast<double>(m - r);
  return f;
}

PolyPiece piece(double a, double b, std::vector<double> c) { return {a, b, std::move(c), 0.0}; }

void require_R(double R) {
  if (!(R > 9.0) || !std::isfinite(R)) {
    throw InvalidArgument("R must be finite and > 9 (got " + std::to_string(R) + ")");
  }
}

}  // namespace

double PolyPiece::operator()(double alpha, int order) const {
  const double x = alpha - origin;
  double acc = 0.0;
  for (int m = static_cast<int>(coeffs.size()) - 1; m >= order; --m) {
    acc = acc * x + coeffs[m] * falling(m, order);
  }
  return acc;
}

PiecewisePoly::PiecewisePoly(std::vector<PolyPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InvalidArgument("piecewise polynomial needs at least one piece");
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const auto& p = pieces_[k];
    if (!(p.a < p.b)) throw InvalidArgument("piece interval must have a < b");
    if (k == 0) continue;
    const auto& q = pieces_[k - 1];
    if (q.b != p.a) throw InvalidArgument("pieces must be contiguous");
    const double left = q(p.a);
    const double right = p(p.a);
    if (std::abs(left - right) > 1e-14 * std::max(1.0, std::abs(left))) {
      throw InvalidArgument("piecewise polynomial is discontinuous at " + std::to_string(p.a));
    }
  }
}

double PiecewisePoly::operator()(double alpha, int order) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), alpha,
                             [](double x, const PolyPiece& p) { return x < p.b; });
  if (it == pieces_.end()) --it;
  return (*it)(alpha, order);
}

PiecewisePoly PiecewisePoly::shifted(double shift, double offset) const {
  std::vector<PolyPiece> out = pieces_;
  for (auto& p : out) {
    p.a += shift;
    p.b += shift;
    p.origin += shift;
    if (p.coeffs.empty()) p.coeffs.push_back(0.0);
    p.coeffs[0] += offset;
  }
  return PiecewisePoly(std::move(out));
}

PiecewiseCurve::PiecewiseCurve(PiecewisePoly c1, PiecewisePoly c2)
    : c1_(std::move(c1)), c2_(std::move(c2)) {
  if (c1_.lower() != c2_.lower() || c1_.upper() != c2_.upper()) {
    throw InvalidArgument("curve components must share one parameter interval");
  }
}

double PiecewiseCurve::z1(double alpha, int order) const {
  if (c1_.contains(alpha)) return c1_(alpha, order);
  return order == 0 ? alpha : (order == 1 ? 1.0 : 0.0);
}

double PiecewiseCurve::z2(double alpha, int order) const {
  return c2_.contains(alpha) ? c2_(alpha, order) : 0.0;
}

CurvePoint PiecewiseCurve::at(double alpha) const {
  return {z1(alpha), z2(alpha), z1(alpha, 1), z2(alpha, 1), z1(alpha, 2)};
}

std::pair<double, double> PiecewiseCurve::window(double) const {
  return {c2_.lower(), c2_.upper()};
}

std::vector<double> PiecewiseCurve::breakpoints() const {
  std::vector<double> out;
  for (const auto* poly : {&c1_, &c2_}) {
    for (const auto& p : poly->pieces()) {
      out.push_back(p.a);
      out.push_back(p.b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Blocks build_blocks(double R) {
  require_R(R);
  const PiecewisePoly t1({piece(-2, -1, {0, 1}), piece(-1, 1, {0, 0, 0, 1}),
                          piece(1, 2, {0, 1})});
  const PiecewisePoly t2({piece(-2, -1, {-2, -1}), piece(-1, 1, {0, 1}),
                          piece(1, 2, {2, -1})});
  const PiecewisePoly c1({piece(-7, -1, {0, 1}), piece(-1, 1, {0, 0, 0, 1}),
                          piece(1, 7, {0, 1})});
  const PiecewisePoly c2({piece(-7, -5, {10.5, 1.5}), piece(-5, -2, {3}),
                          piece(-2, -1, {-7, -5}), piece(-1, 1, {0, 3, 0, -1}),
                          piece(1, 2, {7, -5}), piece(2, 5, {-3}),
                          piece(5, 7, {-10.5, 1.5})});

  auto splice = [&](const PiecewisePoly& centre, const PiecewisePoly& tail, bool first) {
    const auto left = tail.shifted(-R, first ? -R : 0.0);
    const auto right = tail.shifted(R, first ? R : 0.0);
    std::vector<PolyPiece> all = left.pieces();
    all.push_back(piece(-R + 2, -7, first ? std::vector<double>{0, 1} : std::vector<double>{0}));
    all.insert(all.end(), centre.pieces().begin(), centre.pieces().end());
    all.push_back(piece(7, R - 2, first ? std::vector<double>{0, 1} : std::vector<double>{0}));
    all.insert(all.end(), right.pieces().begin(), right.pieces().end());
    return PiecewisePoly(std::move(all));
  };

  return {PiecewiseCurve(t1, t2), PiecewiseCurve(c1, c2),
          PiecewiseCurve(splice(c1, t1, true), splice(c2, t2, false))};
}

CcIntegrals cc_integrals() {
  CcIntegrals r{};
  r.i1 = -2.0 * integrate_adaptive(
                    [](double x) {
                      const double d = 2 * x * x * x * x - 6 * x * x + 9;
                      return 3 * x * x * (x * x - 3) / (d * d);
                    },
                    0.0, 1.0, kCcQuadTol);
  auto f2 = [](double x) { return (-7 + 10 * x) / (26 * (26 * x * x - 70 * x + 49)); };
  auto f3 = [](double x) { return 3.0 / (9 + x * x); };
  auto f4 = [](double x) { return 48 * (7 - 2 * x) / (338 * x * x - 3276 * x + 11466); };
  r.i2 = f2(2.0) - f2(1.0);
  r.i3 = f3(5.0) - f3(2.0);
  r.i4 = f4(7.0) - f4(5.0);
  r.sum = r.i1 + r.i2 + r.i3 + r.i4;
  return r;
}

TtIntegrals tt_integrals() {
  TtIntegrals r{};
  auto F1 = [](double x) { return (1 + x) / (4 * (2 + 2 * x + x * x)); };
  auto F3 = [](double x) { return (x - 1) / (4 * (2 - 2 * x + x * x)); };
  r.i1 = F1(-1.0) - F1(-2.0);
  r.i3 = F3(2.0) - F3(1.0);
  r.i2 = integrate_adaptive(
      [](double x) {
        const double d = 1 + x * x * x * x;
        return 3 * x * x / (d * d);
      },
      -1.0, 1.0, kCcQuadTol);
  r.lower_bound = r.i1 + r.i3;
  return r;
}

TailBounds tail_bounds(double R) {
  require_R(R);
  return {24 * (R + 2) / std::pow(R - 2, 4), 126 * (R + 7) / std::pow(R - 7, 4),
          12 * (2 * R + 2) / std::pow(2 * R - 2, 4)};
}

ConditionReport verify_conditions(double R) {
  static const double I_cc = cc_integrals().sum;
  static const double I_tt_lower = tt_integrals().lower_bound;
  const auto b = tail_bounds(R);
  ConditionReport r{R, I_cc, I_tt_lower, b.tc, b.ct1, b.ct2, false, false};
  r.center_ok = I_cc + b.tc < 0.0;
  r.tail_ok = I_tt_lower - (b.ct1 + b.ct2) > 0.0;
  return r;
}

int min_admissible_R() {
  for (int R = 10; R < 100000; ++R) {
    const auto r = verify_conditions(R);
    if (r.center_ok && r.tail_ok) return R;
  }
  throw NumericalFailure("no admissible R found");
}

PredictorCrosscheck predictor_crosscheck(double R, double quad_tol) {
  const Blocks blocks = build_blocks(R);
  const auto& t = blocks.tail;
  const auto& c = blocks.center;
  const auto& zR = blocks.zR;

  PredictorCrosscheck r{};
  r.at_center = turnover_predictor(zR, 0.0, quad_tol);
  r.at_tail = turnover_predictor(zR, R, quad_tol);

  auto panels = [](const PiecewiseCurve& curve, double a, double b) {
    std::vector<double> cuts{a};
    for (double x : curve.breakpoints()) {
      if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    return cuts;
  };

  const auto tc_cuts = panels(t, -2, 2);
  r.I_tc = 2.0 * integrate_panels(
                     [&](double b) {
                       const double x = R + t.z1(b);
                       const double y = t.z2(b);
                       const double d = x * x + y * y;
                       return x * t.z1(b, 1) * y / (d * d);
                     },
                     tc_cuts, quad_tol);

  const auto ct1_cuts = panels(c, -7, 7);
  r.I_ct1 = integrate_panels(
      [&](double b) {
        const double x = c.z1(b) - R;
        const double y = c.z2(b);
        const double d = x * x + y * y;
        return x * c.z1(b, 1) * y / (d * d);
      },
      ct1_cuts, quad_tol);

  const auto ct2_cuts = panels(zR, -R - 2, -R + 2);
  r.I_ct2 = integrate_panels(
      [&](double b) {
        const double x = zR.z1(b) - R;
        const double y = zR.z2(b);
        const double d = x * x + y * y;
        return x * zR.z1(b, 1) * y / (d * d);
      },
      ct2_cuts, quad_tol);

  const auto tt = tt_integrals();
  r.I_tt = tt.i1 + tt.i2 + tt.i3;
  r.center_partwise = zR.z2(0.0, 1) * (cc_integrals().sum + r.I_tc);
  r.tail_partwise = zR.z2(R, 1) * (r.I_tt + r.I_ct1 + r.I_ct2);
  return r;
}

std::string verification_report(double R, double quad_tol) {
  using nlohmann::json;
  const auto cc = cc_integrals();
  const auto tt = tt_integrals();
  const auto cond = verify_conditions(R);
  const auto xc = predictor_crosscheck(R, quad_tol);
  const int rmin = min_admissible_R();

  json j;
  j["R"] = R;
  j["quad_tol"] = quad_tol;
  j["cc"] = {{"I1", cc.i1}, {"I2", cc.i2}, {"I3", cc.i3}, {"I4", cc.i4}, {"sum", cc.sum}};
  j["tt"] = {{"I1", tt.i1}, {"I2", tt.i2}, {"I3", tt.i3}, {"lower_bound", tt.lower_bound}};
  j["bounds"] = {{"tc", cond.bound_tc}, {"ct1", cond.bound_ct1}, {"ct2", cond.bound_ct2}};
  j["conditions"] = {{"center_ok", cond.center_ok}, {"tail_ok", cond.tail_ok}};
  j["min_admissible_R"] = rmin;
  j["predictor"] = {{"at_center", xc.at_center},
                    {"at_tail", xc.at_tail},
                    {"center_partwise", xc.center_partwise},
                    {"tail_partwise", xc.tail_partwise},
                    {"I_tc", xc.I_tc},
                    {"I_tt", xc.I_tt},
                    {"I_ct1", xc.I_ct1},
                    {"I_ct2", xc.I_ct2}};
  j["checks"] = {
      {"at_center_negative", xc.at_center < 0.0},
      {"at_tail_positive", xc.at_tail > 0.0},
      {"I_tc_within_bound", std::abs(xc.I_tc) <= cond.bound_tc},
      {"I_ct1_within_bound", std::abs(xc.I_ct1) <= cond.bound_ct1},
      {"I_ct2_within_bound", std::abs(xc.I_ct2) <= cond.bound_ct2},
  };
  return j.dump(2);
}

}  // namespace muskat::lemma
