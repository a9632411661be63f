#include "muskat/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "muskat/quadrature.hpp"

namespace muskat {
namespace {

// Per-node half-angle tables. For a pair (i, j):
//   S  = sin((z1_i - z1_j)/2),  C = cos((z1_i - z1_j)/2),
//   Sh = sinh((z2_i - z2_j)/2),
//   cosh(dz2) - cos(dz1) = 2 (Sh^2 + S^2),  sin(dz1) = 2 S C.
struct HalfAngles {
  std::vector<double> sa, ca, sh, ch;

  explicit HalfAngles(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    sa.resize(n);
    ca.resize(n);
    sh.resize(n);
    ch.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = 0.5 * curve.z1(i);
      const double b = 0.5 * curve.z2()[i];
      sa[i] = std::sin(a);
      ca[i] = std::cos(a);
      sh[i] = std::sinh(b);
      ch[i] = std::cosh(b);
    }
  }
};

}  // namespace

VelocityField periodic_rhs(const SampledCurve& curve, const PhysicalParams& params,
                           const RhsOptions& options) {
  const std::size_t n = curve.size();
  const auto d1 = curve.dz1(options.filter);
  const auto d2 = curve.dz2(options.filter);
  const HalfAngles t(curve);

  VelocityField v{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  // Half the floor, since the loop tracks Sh^2 + S^2.
  const double floor = 0.5 * options.denominator_floor;
  ArcChordReport worst{std::numeric_limits<double>::infinity(), 0, 0};

  for (std::size_t i = 0; i < n; ++i) {
    const double sai = t.sa[i], cai = t.ca[i], shi = t.sh[i], chi = t.ch[i];
    const double d1i = d1[i], d2i = d2[i];
    double acc1 = 0.0, acc2 = 0.0;
    double local_min = std::numeric_limits<double>::infinity();
    std::size_t local_j = 0;
    for (std::size_t j = (i + 1) % 2; j < n; j += 2) {
      const double s = sai * t.ca[j] - cai * t.sa[j];
      const double c = cai * t.ca[j] + sai * t.sa[j];
      const double sh = shi * t.ch[j] - chi * t.sh[j];
      const double den = sh * sh + s * s;
      if (den < local_min) {
        local_min = den;
        local_j = j;
      }
      const double kernel = s * c / den;
      acc1 += (d1i - d1[j]) * kernel;
      acc2 += (d2i - d2[j]) * kernel;
    }
    if (local_min < worst.min_denominator) worst = {local_min, i, local_j};
    v.v1[i] = acc1;
    v.v2[i] = acc2;
  }
  if (!(worst.min_denominator > floor)) {
    worst.min_denominator *= 2.0;
    throw ArcChordFailure(worst);
  }

  const double scale = 2.0 * curve.grid().spacing() * params.prefactor();
  for (std::size_t i = 0; i < n; ++i) {
    v.v1[i] *= scale;
    v.v2[i] *= scale;
  }
  return v;
}

ArcChordReport arc_chord_report(const SampledCurve& curve) {
  const std::size_t n = curve.size();
  const HalfAngles t(curve);
  ArcChordReport worst{std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = (i + 1) % 2; j < n; j += 2) {
      const double s = t.sa[i] * t.ca[j] - t.ca[i] * t.sa[j];
      const double sh = t.sh[i] * t.ch[j] - t.ch[i] * t.sh[j];
      const double den = 2.0 * (sh * sh + s * s);
      if (den < worst.min_denominator) worst = {den, i, j};
    }
  }
  return worst;
}

std::vector<double> rt_profile(const SampledCurve& curve, const PhysicalParams& params,
                               const FilterSpec& filter) {
  auto rt = curve.dz1(filter);
  const double scale = params.gravity() * params.density_jump();
  for (auto& v : rt) v *= scale;
  return rt;
}

SpectralCurve::SpectralCurve(const SampledCurve& curve)
    : p1_(curve.p1()), z2_(curve.z2()) {}

CurvePoint SpectralCurve::at(double alpha) const {
  return {alpha + p1_(alpha), z2_(alpha), 1.0 + p1_.derivative(alpha, 1),
          z2_.derivative(alpha, 1), p1_.derivative(alpha, 2)};
}

std::pair<double, double> SpectralCurve::window(double alpha0) const {
  return {alpha0 - std::numbers::pi, alpha0 + std::numbers::pi};
}

double turnover_integral(const ParametricCurve& curve, double alpha0, double a, double b,
                         double quad_tol) {
  const CurvePoint p0 = curve.at(alpha0);
  auto integrand = [&](double beta) {
    const CurvePoint p = curve.at(beta);
    const double dx = p.z1 - p0.z1;
    const double den = dx * dx + p.z2 * p.z2;
    if (den == 0.0) return 0.0;
    return dx * p.dz1 * p.z2 / (den * den);
  };
  std::vector<double> cuts{a, b};
  for (double x : curve.breakpoints()) {
    if (x > a && x < b) cuts.push_back(x);
  }
  if (alpha0 > a && alpha0 < b) cuts.push_back(alpha0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return integrate_panels(integrand, cuts, quad_tol);
}

double turnover_predictor(const ParametricCurve& curve, double alpha0, double quad_tol) {
  constexpr double tol = 1e-10;
  const CurvePoint p0 = curve.at(alpha0);
  if (std::abs(p0.dz1) > tol || std::abs(p0.ddz1) > tol || std::abs(p0.z2) > tol) {
    throw PreconditionViolated(
        "turnover predictor needs z1' = z1'' = z2 = 0 at the target point");
  }
  if (p0.dz2 == 0.0) return 0.0;
  const auto [a, b] = curve.window(alpha0);
  return p0.dz2 * turnover_integral(curve, alpha0, a, b, quad_tol);
}

}  // namespace muskat
