#include <doctest.h>

#include <cmath>
#include <numbers>

#include "muskat/core.hpp"
#include "muskat/error.hpp"
#include "muskat/quadrature.hpp"
#include "muskat/velocity.hpp"

using namespace muskat;
using std::numbers::pi;

namespace {

// z1 = a - 0.5 sin a, z2 = 0.3 sin 2a + 0.1 cos 3a: a mild band-limited
// graph, far from self-intersection.
struct Mild {
  static double p1(double a) { return -0.5 * std::sin(a); }
  static double z2(double a) { return 0.3 * std::sin(2 * a) + 0.1 * std::cos(3 * a); }
  static double d1(double a) { return 1 - 0.5 * std::cos(a); }
  static double d2(double a) { return 0.6 * std::cos(2 * a) - 0.3 * std::sin(3 * a); }
  static double dd1(double a) { return 0.5 * std::sin(a); }
  static double dd2(double a) { return -1.2 * std::sin(2 * a) - 0.9 * std::cos(3 * a); }
};

SampledCurve sample_mild(const Grid& g) {
  std::vector<double> p1(g.size()), z2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    p1[i] = Mild::p1(g.node(i));
    z2[i] = Mild::z2(g.node(i));
  }
  return SampledCurve(g, p1, z2);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// SEED_T0 in closed form, for the predictor.
class AnalyticSeed final : public ParametricCurve {
 public:
  CurvePoint at(double a) const override {
    return {a - std::sin(a),
            (3 * std::sin(a) + 8 * std::sin(2 * a) + 3 * std::sin(3 * a)) / 4,
            1 - std::cos(a),
            (3 * std::cos(a) + 16 * std::cos(2 * a) + 9 * std::cos(3 * a)) / 4,
            std::sin(a)};
  }
  std::pair<double, double> window(double a0) const override { return {a0 - pi, a0 + pi}; }
};

}  // namespace

TEST_CASE("flat interface does not move") {
  const Grid g(64);
  const SampledCurve flat(g, std::vector<double>(64, 0.0), std::vector<double>(64, 0.0));
  const auto v = periodic_rhs(flat, PhysicalParams(1.0));
  CHECK(max_abs(v.v1) == 0.0);
  CHECK(max_abs(v.v2) == 0.0);
}

TEST_CASE("odd curves have odd velocity") {
  const Grid g(256);
  const auto v = periodic_rhs(sample_preset("CONJ_T0", g), PhysicalParams(1.0));
  const double scale = std::max(max_abs(v.v1), max_abs(v.v2));
  CHECK(scale > 0.1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(v.v1[i] + v.v1[g.mirror(i)]) < 1e-12 * scale);
    CHECK(std::abs(v.v2[i] + v.v2[g.mirror(i)]) < 1e-12 * scale);
  }
}

TEST_CASE("velocity is invariant under translations") {
  const Grid g(128);
  const auto c = sample_mild(g);
  const PhysicalParams prm(1.0);
  const auto v = periodic_rhs(c, prm);

  std::vector<double> p1(c.p1().begin(), c.p1().end());
  std::vector<double> z2(c.z2().begin(), c.z2().end());
  for (auto& x : p1) x += 0.37;
  for (auto& x : z2) x -= 1.25;
  const auto w = periodic_rhs(SampledCurve(g, p1, z2), prm);
  const double scale = max_abs(v.v2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(v.v1[i] - w.v1[i]) < 1e-13 * scale);
    CHECK(std::abs(v.v2[i] - w.v2[i]) < 1e-13 * scale);
  }
}

TEST_CASE("velocity is linear in the density jump") {
  const Grid g(128);
  const auto c = sample_mild(g);
  const auto v1 = periodic_rhs(c, PhysicalParams(1.0));
  const auto v3 = periodic_rhs(c, PhysicalParams(-3.0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(v3.v1[i] == doctest::Approx(-3 * v1.v1[i]).epsilon(1e-14).scale(1e-300));
    CHECK(v3.v2[i] == doctest::Approx(-3 * v1.v2[i]).epsilon(1e-14).scale(1e-300));
  }
}

TEST_CASE("small sine graph decays at rate |k| drho / 2") {
  // Linearization around the flat state: df/dt = -(drho/2) Lambda f.
  const Grid g(256);
  const double amp = 1e-7;
  for (int k = 1; k <= 6; ++k) {
    std::vector<double> z2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) z2[i] = amp * std::sin(k * g.node(i));
    const SampledCurve c(g, std::vector<double>(g.size(), 0.0), z2);
    const double drho = 2.0;
    const auto v = periodic_rhs(c, PhysicalParams(drho));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(v.v2[i] + 0.5 * drho * k * z2[i]) < 1e-6 * amp * k);
      CHECK(std::abs(v.v1[i]) < 1e-6 * amp);
    }
  }
}

TEST_CASE("alternating rule agrees with a fine full trapezoid") {
  // Oracle: trapezoid over all points of a 4x finer grid with exact
  // derivatives; the diagonal term is the limit 2 z'' z1' / |z'|^2.
  const std::size_t n = 512, m = 4;
  const Grid g(n);
  const auto v = periodic_rhs(sample_mild(g), PhysicalParams(1.0));
  const std::size_t nf = n * m;
  const double hf = 2 * pi / nf;
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = g.node(i);
    const double z1a = a + Mild::p1(a), z2a = Mild::z2(a);
    const double d1a = Mild::d1(a), d2a = Mild::d2(a);
    const double q = d1a * d1a + d2a * d2a;
    double s1 = 2 * Mild::dd1(a) * d1a / q, s2 = 2 * Mild::dd2(a) * d1a / q;
    for (std::size_t j = 1; j < nf; ++j) {
      const double b = a + j * hf;
      const double x = z1a - (b + Mild::p1(b)), y = z2a - Mild::z2(b);
      const double ker = std::sin(x) / (std::cosh(y) - std::cos(x));
      s1 += (d1a - Mild::d1(b)) * ker;
      s2 += (d2a - Mild::d2(b)) * ker;
    }
    const double w1 = hf / (4 * pi) * s1, w2 = hf / (4 * pi) * s2;
    err = std::max({err, std::abs(v.v1[i] - w1), std::abs(v.v2[i] - w2)});
    scale = std::max({scale, std::abs(w1), std::abs(w2)});
  }
  CHECK(scale > 1e-2);
  CHECK(err < 1e-8 * scale);
}

TEST_CASE("arc-chord floor") {
  const Grid g(64);
  const auto c = sample_mild(g);
  const auto rep = arc_chord_report(c);
  CHECK(rep.min_denominator > 0.0);
  CHECK((rep.i + rep.j) % 2 == 1);

  RhsOptions opts;
  opts.denominator_floor = 2 * rep.min_denominator;
  try {
    periodic_rhs(c, PhysicalParams(1.0), opts);
    FAIL("expected ArcChordFailure");
  } catch (const ArcChordFailure& e) {
    CHECK(e.report().min_denominator <= opts.denominator_floor);
  }
  opts.denominator_floor = 0.5 * rep.min_denominator;
  CHECK_NOTHROW(periodic_rhs(c, PhysicalParams(1.0), opts));
}

TEST_CASE("Rayleigh-Taylor profile") {
  const Grid g(64);
  const auto c = sample_mild(g);
  const auto rt = rt_profile(c, PhysicalParams(2.0));
  const auto d = c.dz1();
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(rt[i] == doctest::Approx(2.0 * d[i]));
  const auto neg = rt_profile(c, PhysicalParams(-1.0));
  for (double x : neg) CHECK(x < 0.0);
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13) ==
        doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
  const std::vector<double> bp{-1.0, 0.0, 0.0, 2.0};
  CHECK(integrate_panels([](double x) { return std::abs(x); }, bp, 1e-13) ==
        doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("spectral curve interpolates the samples") {
  const Grid g(128);
  const SpectralCurve sc(sample_mild(g));
  for (double a : {-2.5, -0.3, 0.0, 1.1, 3.0}) {
    const auto p = sc.at(a);
    CHECK(p.z1 == doctest::Approx(a + Mild::p1(a)).scale(1).epsilon(1e-13));
    CHECK(p.z2 == doctest::Approx(Mild::z2(a)).scale(1).epsilon(1e-13));
    CHECK(p.dz1 == doctest::Approx(Mild::d1(a)).scale(1).epsilon(1e-13));
    CHECK(p.dz2 == doctest::Approx(Mild::d2(a)).scale(1).epsilon(1e-13));
    CHECK(p.ddz1 == doctest::Approx(Mild::dd1(a)).scale(1).epsilon(1e-12));
  }
  const auto w = sc.window(0.4);
  CHECK(w.second - w.first == doctest::Approx(2 * pi));
}

TEST_CASE("turnover predictor preconditions") {
  const Grid g(128);
  const SpectralCurve conj(sample_preset("CONJ_T0", g));
  CHECK_THROWS_AS(turnover_predictor(conj, 0.0, 1e-10), PreconditionViolated);
  const AnalyticSeed seed;
  CHECK_THROWS_AS(turnover_predictor(seed, 0.5, 1e-10), PreconditionViolated);
}

TEST_CASE("turnover predictor against brute-force Simpson") {
  const AnalyticSeed seed;
  const double got = turnover_predictor(seed, 0.0, 1e-12);

  const int m = 200000;
  const double h = 2 * pi / m;
  double s = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double b = -pi + k * h;
    const auto p = seed.at(b);
    const double r2 = p.z1 * p.z1 + p.z2 * p.z2;
    const double f = r2 == 0.0 ? 0.0 : p.z1 * p.dz1 * p.z2 / (r2 * r2);
    s += f * (k == 0 || k == m ? 1 : (k % 2 ? 4 : 2));
  }
  const double want = seed.at(0.0).dz2 * s * h / 3;
  CHECK(got == doctest::Approx(want).epsilon(1e-9));

  // The sampled seed gives the same value through the spectral interpolant.
  const SpectralCurve sampled(sample_preset("SEED_T0", Grid(256)));
  CHECK(turnover_predictor(sampled, 0.0, 1e-12) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("turnover integral is additive over subintervals") {
  const AnalyticSeed seed;
  const double whole = turnover_integral(seed, 0.0, -pi, pi, 1e-12);
  const double parts = turnover_integral(seed, 0.0, -pi, -1.0, 1e-12) +
                       turnover_integral(seed, 0.0, -1.0, 0.5, 1e-12) +
                       turnover_integral(seed, 0.0, 0.5, pi, 1e-12);
  CHECK(parts == doctest::Approx(whole).epsilon(1e-11));
  CHECK(whole * seed.at(0.0).dz2 == doctest::Approx(turnover_predictor(seed, 0.0, 1e-12)));
}
