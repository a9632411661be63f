#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "muskat/core.hpp"
#include "muskat/error.hpp"

using namespace muskat;
using std::numbers::pi;

TEST_CASE("grid nodes and spacing") {
  const Grid g = make_grid(16);
  CHECK(g.size() == 16);
  CHECK(g.node(0) == -pi);
  CHECK(g.node(8) == 0.0);
  CHECK(g.node(4) == doctest::Approx(-pi / 2).epsilon(1e-15));
  CHECK(g.node(12) == doctest::Approx(pi / 2).epsilon(1e-15));
  for (std::size_t i = 1; i < 16; ++i) {
    CHECK(g.node(i) - g.node(i - 1) == doctest::Approx(2 * pi / 16).epsilon(1e-14));
  }
  CHECK(make_grid(2048).spacing() == 2 * pi / 2048);
  for (std::size_t i = 0; i < 16; ++i) {
    const double a = g.node(i) + g.node(g.mirror(i));
    // alpha_i + alpha_mirror(i) is 0 or -2 pi (the node -pi is its own mirror)
    CHECK((std::abs(a) < 1e-15 || std::abs(a + 2 * pi) < 1e-15));
  }
}

TEST_CASE("grid rejects odd or small sizes") {
  CHECK_THROWS_AS(make_grid(5), InvalidArgument);
  CHECK_THROWS_AS(make_grid(4), InvalidArgument);
  CHECK_THROWS_AS(make_grid(14), InvalidArgument);
  CHECK_NOTHROW(make_grid(18));
}

TEST_CASE("sampled curve validates its input") {
  const Grid g(16);
  CHECK_THROWS_AS(SampledCurve(g, std::vector<double>(15), std::vector<double>(16)),
                  InvalidArgument);
  std::vector<double> bad(16, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(SampledCurve(g, bad, std::vector<double>(16)), InvalidArgument);
  bad[3] = INFINITY;
  CHECK_THROWS_AS(SampledCurve(g, std::vector<double>(16), bad), InvalidArgument);
}

TEST_CASE("preset samples match their formulas") {
  const Grid g(64);
  const auto seed = sample_preset("SEED_T0", g);
  const auto conj = sample_preset("CONJ_T0", g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = g.node(i);
    CHECK(seed.z1(i) == doctest::Approx(a - std::sin(a)).epsilon(1e-14));
    CHECK(seed.z2()[i] ==
          doctest::Approx((3 * std::sin(a) + 8 * std::sin(2 * a) + 3 * std::sin(3 * a)) / 4)
              .epsilon(1e-14)
              .scale(1.0));
    CHECK(conj.z1(i) == doctest::Approx(a - 0.96 * std::sin(a)).epsilon(1e-14));
    CHECK(conj.z2()[i] == doctest::Approx(2.0 / 3.0 * std::sin(3 * a)).scale(1.0).epsilon(1e-14));
  }
  // alpha = 0 is node n/2
  CHECK(seed.z1(32) == 0.0);
  CHECK(seed.z2()[32] == 0.0);
}

TEST_CASE("preset slopes at the origin") {
  const Grid g(128);
  const auto seed = sample_preset("SEED_T0", g);
  CHECK(std::abs(seed.dz1()[64]) < 1e-12);

  const auto conj = to_graph(sample_preset("CONJ_T0", g));
  const auto it = std::max_element(conj.slope.begin(), conj.slope.end(),
                                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  CHECK(*it == doctest::Approx(50.0).epsilon(1e-11));
  CHECK(it - conj.slope.begin() == 64);
  CHECK(conj.x[64] == 0.0);

  for (double d : {0.1, 0.01, -0.05}) {
    const auto tilt = sample_preset(PresetId{PresetKind::DeltaTilt, d}, g);
    CHECK(tilt.dz1()[64] == doctest::Approx(d).epsilon(1e-10));
  }
}

TEST_CASE("preset ids parse and print") {
  CHECK(PresetId::parse("SEED_T0").kind == PresetKind::SeedT0);
  CHECK(PresetId::parse("CONJ_T0").kind == PresetKind::ConjT0);
  const auto t = PresetId::parse("DELTA_TILT(0.25)");
  CHECK(t.kind == PresetKind::DeltaTilt);
  CHECK(t.delta == 0.25);
  CHECK(PresetId::parse(t.name()).delta == 0.25);
  CHECK_THROWS_AS(PresetId::parse("SEED"), InvalidArgument);
  CHECK_THROWS_AS(PresetId::parse("DELTA_TILT(x)"), InvalidArgument);
  CHECK_THROWS_AS(sample_preset("CIRCLE", Grid(16)), InvalidArgument);
}

TEST_CASE("presets are odd at mirrored nodes") {
  for (const char* name : {"SEED_T0", "CONJ_T0", "DELTA_TILT(0.3)"}) {
    const Grid g(256);
    const auto c = sample_preset(name, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t m = g.mirror(i);
      CHECK(c.p1()[m] == -c.p1()[i]);
      CHECK(c.z2()[m] == -c.z2()[i]);
    }
  }
}

TEST_CASE("flat curve is the identity graph") {
  const Grid g(32);
  const SampledCurve flat(g, std::vector<double>(32, 0.0), std::vector<double>(32, 0.0));
  const auto gv = to_graph(flat);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(gv.x[i] == g.node(i));
    CHECK(gv.f[i] == 0.0);
    CHECK(gv.slope[i] == 0.0);
  }
  CHECK(min_dz1(flat).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("seed curve is not a graph at the origin") {
  const Grid g(64);
  const auto seed = sample_preset("SEED_T0", g);
  try {
    to_graph(seed);
    FAIL("expected NotAGraph");
  } catch (const NotAGraph& e) {
    const auto& nodes = e.nodes();
    CHECK(std::find(nodes.begin(), nodes.end(), 32u) != nodes.end());
    for (auto i : nodes) CHECK(std::abs(g.node(i)) < 0.2);
  }
}

TEST_CASE("graph round trip reproduces f at matching abscissae") {
  // Oracle: solve a - 0.96 sin a = x by Newton on the exact formula.
  const Grid g(256);
  const auto conj = sample_preset("CONJ_T0", g);
  const auto back = graph_to_curve(to_graph(conj), g);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.node(k);
    double a = x;
    for (int it = 0; it < 100; ++it) a -= (a - 0.96 * std::sin(a) - x) / (1 - 0.96 * std::cos(a));
    err = std::max(err, std::abs(back.z2()[k] - 2.0 / 3.0 * std::sin(3 * a)));
    CHECK(back.p1()[k] == 0.0);
  }
  CHECK(err < 1e-9);
}

TEST_CASE("physical parameters") {
  const PhysicalParams p(4 * pi);
  CHECK(p.gravity() == 1.0);
  CHECK(p.prefactor() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(PhysicalParams(-2.0).prefactor() < 0.0);
  CHECK_THROWS_AS(PhysicalParams(0.0), InvalidArgument);
  CHECK_THROWS_AS(PhysicalParams(NAN), InvalidArgument);
}
