#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "muskat/error.hpp"
#include "muskat/lemma.hpp"

using namespace muskat;
using namespace muskat::lemma;

namespace {

double block_integral(const ParametricCurve& c, double a0, double a, double b) {
  return turnover_integral(c, a0, a, b, 1e-13);
}

}  // namespace

TEST_CASE("center-center integrals") {
  const auto cc = cc_integrals();
  CHECK(std::abs(cc.i2 - 1.0 / 65) < 1e-12);
  CHECK(std::abs(cc.i3 + 63.0 / 442) < 1e-12);
  CHECK(std::abs(cc.i4 + 3.0 / 119) < 1e-12);
  CHECK(std::abs(cc.i1 - 0.127271158) < 1e-8);
  CHECK(std::abs(cc.sum + 0.0250882) < 1e-6);
  CHECK(cc.sum == cc.i1 + cc.i2 + cc.i3 + cc.i4);
}

TEST_CASE("tail-tail integrals") {
  const auto tt = tt_integrals();
  CHECK(std::abs(tt.i1 - 0.125) < 1e-12);
  CHECK(std::abs(tt.i3 - 0.125) < 1e-12);
  CHECK(tt.i2 > 0.0);
  CHECK(tt.lower_bound == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("closed forms agree with quadrature over the blocks") {
  // The center integrand is even, so each term is twice its half-line part.
  const auto b = build_blocks(18);
  const auto cc = cc_integrals();
  CHECK(cc.i1 == doctest::Approx(2 * block_integral(b.center, 0, 0, 1)).epsilon(1e-9));
  CHECK(cc.i2 == doctest::Approx(2 * block_integral(b.center, 0, 1, 2)).epsilon(1e-9));
  CHECK(cc.i3 == doctest::Approx(2 * block_integral(b.center, 0, 2, 5)).epsilon(1e-9));
  CHECK(cc.i4 == doctest::Approx(2 * block_integral(b.center, 0, 5, 7)).epsilon(1e-9));
  CHECK(cc.sum == doctest::Approx(block_integral(b.center, 0, -7, 7)).epsilon(1e-9));

  const auto tt = tt_integrals();
  CHECK(tt.i1 == doctest::Approx(block_integral(b.tail, 0, -2, -1)).epsilon(1e-9));
  CHECK(tt.i2 == doctest::Approx(block_integral(b.tail, 0, -1, 1)).epsilon(1e-9));
  CHECK(tt.i3 == doctest::Approx(block_integral(b.tail, 0, 1, 2)).epsilon(1e-9));
}

TEST_CASE("blocks: values at the tangent points") {
  for (double R : {18.0, 25.0, 100.0}) {
    const auto zR = build_blocks(R).zR;
    CHECK(zR.z1(0.0) == 0.0);
    CHECK(zR.z1(0.0, 1) == 0.0);
    CHECK(zR.z1(0.0, 2) == 0.0);
    CHECK(zR.z2(0.0) == 0.0);
    CHECK(zR.z2(0.0, 1) == 3.0);
    for (double s : {-1.0, 1.0}) {
      CHECK(zR.z1(s * R) == s * R);
      CHECK(zR.z1(s * R, 1) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
      CHECK(zR.z1(s * R, 2) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
      CHECK(zR.z2(s * R) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
      CHECK(zR.z2(s * R, 1) == 1.0);
    }
    // identity outside the blocks and in the gaps between them
    for (double a : {R + 2.5, -R - 3.0, 8.0, (7 + R - 2) / 2, -(7 + R - 2) / 2}) {
      CHECK(zR.z1(a) == doctest::Approx(a).epsilon(1e-14));
      CHECK(zR.z1(a, 1) == 1.0);
      CHECK(zR.z2(a) == 0.0);
    }
    const auto w = zR.window(0.0);
    CHECK(w.first == -R - 2);
    CHECK(w.second == R + 2);
  }
}

TEST_CASE("blocks: the spliced curve is odd") {
  const double R = 18.0;
  const auto zR = build_blocks(R).zR;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, R + 2);
  for (int k = 0; k < 10000; ++k) {
    const double a = U(rng);
    CHECK(zR.z1(-a) == doctest::Approx(-zR.z1(a)).scale(1).epsilon(1e-12));
    CHECK(zR.z2(-a) == doctest::Approx(-zR.z2(a)).scale(1).epsilon(1e-12));
  }
}

TEST_CASE("blocks: continuity at every breakpoint") {
  const auto zR = build_blocks(21.5).zR;
  const double h = 1e-9;
  for (double x : zR.breakpoints()) {
    // both components are continuous; z2 has kinks
    CHECK(std::abs(zR.z1(x - h) - zR.z1(x + h)) < 1e-8);
    CHECK(std::abs(zR.z2(x - h) - zR.z2(x + h)) < 1e-8);
  }
}

TEST_CASE("R must exceed 9") {
  CHECK_THROWS_AS(build_blocks(9.0), InvalidArgument);
  CHECK_THROWS_AS(build_blocks(5.0), InvalidArgument);
  CHECK_THROWS_AS(tail_bounds(9.0), InvalidArgument);
  CHECK_THROWS_AS(build_blocks(NAN), InvalidArgument);
  CHECK_NOTHROW(build_blocks(9.5));
}

TEST_CASE("piecewise polynomials") {
  const PiecewisePoly p({{0, 1, {1, 2}, 0.0}, {1, 3, {3, 0, -1}, 1.0}});
  CHECK(p(0.5) == 2.0);
  CHECK(p(1.0) == 3.0);
  CHECK(p(2.0) == 2.0);
  CHECK(p(2.0, 1) == -2.0);
  CHECK(p(2.0, 2) == -2.0);
  CHECK(p(2.0, 3) == 0.0);
  const auto q = p.shifted(10.0, 1.0);
  CHECK(q.lower() == 10.0);
  CHECK(q(12.0) == 3.0);
  CHECK(q(12.0, 1) == -2.0);
  CHECK_THROWS_AS(PiecewisePoly({{0, 1, {1}, 0.0}, {1, 2, {2}, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(PiecewisePoly({{0, 1, {1}, 0.0}, {1.5, 2, {1}, 1.5}}), InvalidArgument);
  CHECK_THROWS_AS(PiecewisePoly({{1, 1, {1}, 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(PiecewisePoly({}), InvalidArgument);
}

TEST_CASE("tail bounds decrease in R") {
  double prev_tc = INFINITY, prev_ct1 = INFINITY, prev_ct2 = INFINITY;
  for (double R = 9.5; R < 200; R += 0.5) {
    const auto b = tail_bounds(R);
    CHECK(b.tc < prev_tc);
    CHECK(b.ct1 < prev_ct1);
    CHECK(b.ct2 < prev_ct2);
    prev_tc = b.tc;
    prev_ct1 = b.ct1;
    prev_ct2 = b.ct2;
  }
  const auto b18 = tail_bounds(18);
  CHECK(b18.tc == doctest::Approx(24.0 * 20 / std::pow(16.0, 4)));
  CHECK(b18.ct1 == doctest::Approx(126.0 * 25 / std::pow(11.0, 4)));
  CHECK(b18.ct2 == doctest::Approx(12.0 * 38 / std::pow(34.0, 4)));
}

TEST_CASE("admissible splice distance") {
  CHECK(min_admissible_R() == 18);
  CHECK_FALSE(verify_conditions(12).center_ok);
  CHECK_FALSE(verify_conditions(17).tail_ok);
  const auto r18 = verify_conditions(18);
  CHECK(r18.center_ok);
  CHECK(r18.tail_ok);
  for (int R = 10; R < 18; ++R) {
    const auto r = verify_conditions(R);
    CHECK_FALSE((r.center_ok && r.tail_ok));
  }
}

TEST_CASE("predictor signs and cross-term bounds") {
  for (double R : {18.0, 25.0, 40.0, 100.0}) {
    CAPTURE(R);
    const auto x = predictor_crosscheck(R, 1e-10);
    const auto b = tail_bounds(R);
    CHECK(x.at_center < 0.0);
    CHECK(x.at_tail > 0.0);
    CHECK(std::abs(x.I_tc) <= b.tc);
    CHECK(std::abs(x.I_ct1) <= b.ct1);
    CHECK(std::abs(x.I_ct2) <= b.ct2);
    CHECK(x.at_center == doctest::Approx(x.center_partwise).epsilon(1e-8));
    CHECK(x.at_tail == doctest::Approx(x.tail_partwise).epsilon(1e-8));
  }
}

TEST_CASE("cross-term bounds hold for every R above 9") {
  for (double R : {9.5, 10.0, 12.0, 15.0, 17.0}) {
    CAPTURE(R);
    const auto x = predictor_crosscheck(R, 1e-10);
    const auto b = tail_bounds(R);
    CHECK(std::abs(x.I_tc) <= b.tc);
    CHECK(std::abs(x.I_ct1) <= b.ct1);
    CHECK(std::abs(x.I_ct2) <= b.ct2);
  }
}

TEST_CASE("verification report") {
  const auto j = nlohmann::json::parse(verification_report(18));
  CHECK(j["min_admissible_R"] == 18);
  CHECK(j["conditions"]["center_ok"] == true);
  CHECK(j["conditions"]["tail_ok"] == true);
  for (const auto& [k, v] : j["checks"].items()) {
    CAPTURE(k);
    CHECK(v == true);
  }
  CHECK(j["cc"]["I2"].get<double>() == doctest::Approx(1.0 / 65));
}
