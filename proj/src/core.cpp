#include "muskat/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "muskat/error.hpp"

namespace muskat {

using std::numbers::pi;

NotAGraph::NotAGraph(std::vector<std::size_t> nodes)
    : Error("curve is not a graph: dz1/dalpha <= 0 at " + std::to_string(nodes.size()) +
            " node(s)"),
      nodes_(std::move(nodes)) {}

ArcChordFailure::ArcChordFailure(const ArcChordReport& report)
    : Error([&] {
        std::ostringstream os;
        os << "arc-chord failure: kernel denominator " << report.min_denominator
           << " at nodes (" << report.i << ", " << report.j << ")";
        return os.str();
      }()),
      report_(report) {}

QuadratureNotConverged::QuadratureNotConverged(double estimate, double error_estimate)
    : Error("adaptive quadrature did not reach tolerance (estimate " +
            std::to_string(estimate) + ", error " + std::to_string(error_estimate) + ")"),
      estimate_(estimate),
      error_(error_estimate) {}

ConfigError::ConfigError(const std::string& what, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Grid::Grid(std::size_t n) : n_(n), h_(2.0 * pi / static_cast<double>(n)) {
  if (n < 16 || n % 2 != 0) {
    throw InvalidArgument("grid size must be even and >= 16 (got " + std::to_string(n) +
                          ")");
  }
}

double Grid::node(std::size_t i) const noexcept {
  return -pi + static_cast<double>(i) * h_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

Grid make_grid(std::size_t n) { return Grid(n); }

SampledCurve::SampledCurve(Grid grid, std::vector<double> p1, std::vector<double> z2)
    : grid_(grid), p1_(std::move(p1)), z2_(std::move(z2)) {
  if (p1_.size() != grid_.size() || z2_.size() != grid_.size()) {
    throw InvalidArgument("curve samples must have one entry per grid node");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(p1_.begin(), p1_.end(), finite) ||
      !std::all_of(z2_.begin(), z2_.end(), finite)) {
    throw InvalidArgument("curve samples must be finite");
  }
}

std::vector<double> SampledCurve::z1() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = z1(i);
  return out;
}

std::vector<double> SampledCurve::dz1(const FilterSpec& filter) const {
  auto d = filtered_derivative(p1_, 1, filter);
  for (auto& v : d) v += 1.0;
  return d;
}

std::vector<double> SampledCurve::dz2(const FilterSpec& filter) const {
  return filtered_derivative(z2_, 1, filter);
}

SlopeMin min_dz1(const SampledCurve& curve, const FilterSpec& filter) {
  const auto d = curve.dz1(filter);
  const auto it = std::min_element(d.begin(), d.end());
  return {*it, static_cast<std::size_t>(it - d.begin())};
}

PhysicalParams::PhysicalParams(double density_jump) : density_jump_(density_jump) {
  if (density_jump == 0.0 || !std::isfinite(density_jump)) {
    throw InvalidArgument("density jump must be finite and nonzero");
  }
}

double PhysicalParams::prefactor() const noexcept { return density_jump_ / (4.0 * pi); }

PresetId PresetId::parse(std::string_view text) {
  if (text == "SEED_T0") return {PresetKind::SeedT0, 0.0};
  if (text == "CONJ_T0") return {PresetKind::ConjT0, 0.0};
  constexpr std::string_view tilt = "DELTA_TILT(";
  if (text.starts_with(tilt) && text.ends_with(")")) {
    const auto body = text.substr(tilt.size(), text.size() - tilt.size() - 1);
    double delta = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), delta);
    if (ec == std::errc() && ptr == body.data() + body.size() && std::isfinite(delta)) {
      return {PresetKind::DeltaTilt, delta};
    }
  }
  throw InvalidArgument("unknown preset id '" + std::string(text) + "'");
}

std::string PresetId::name() const {
  switch (kind) {
    case PresetKind::SeedT0:
      return "SEED_T0";
    case PresetKind::ConjT0:
      return "CONJ_T0";
    case PresetKind::DeltaTilt: {
      std::ostringstream os;
      os.precision(17);
      os << "DELTA_TILT(" << delta << ")";
      return os.str();
    }
  }
  return {};
}

SampledCurve sample_preset(const PresetId& preset, const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> p1(n), z2(n);
  double amp1 = 1.0;
  if (preset.kind == PresetKind::ConjT0) amp1 = 0.96;
  if (preset.kind == PresetKind::DeltaTilt) amp1 = 1.0 - preset.delta;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = grid.node(i);
    p1[i] = -amp1 * std::sin(a);
    if (preset.kind == PresetKind::ConjT0) {
      z2[i] = (2.0 / 3.0) * std::sin(3.0 * a);
    } else {
      z2[i] = (3.0 * std::sin(a) + 8.0 * std::sin(2.0 * a) + 3.0 * std::sin(3.0 * a)) / 4.0;
    }
  }
  // sin(-pi) is not exactly zero in floating point; pin the odd samples at
  // the symmetric node so mirrored values agree exactly.
  p1[0] = 0.0;
  z2[0] = 0.0;
  for (std::size_t i = 1; i < n / 2; ++i) {
    const std::size_t m = grid.mirror(i);
    p1[m] = -p1[i];
    z2[m] = -z2[i];
  }
  p1[n / 2] = 0.0;
  z2[n / 2] = 0.0;
  return SampledCurve(grid, std::move(p1), std::move(z2));
}

SampledCurve sample_preset(std::string_view name, const Grid& grid) {
  return sample_preset(PresetId::parse(name), grid);
}

GraphView to_graph(const SampledCurve& curve, const FilterSpec& filter) {
  const auto d1 = curve.dz1(filter);
  const auto d2 = curve.dz2(filter);
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    if (!(d1[i] > 0.0)) bad.push_back(i);
  }
  if (!bad.empty()) throw NotAGraph(std::move(bad));

  GraphView g;
  g.x = curve.z1();
  g.f.assign(curve.z2().begin(), curve.z2().end());
  g.slope.resize(d1.size());
  for (std::size_t i = 0; i < d1.size(); ++i) g.slope[i] = d2[i] / d1[i];
  return g;
}

SampledCurve graph_to_curve(const GraphView& graph, const Grid& grid) {
  const std::size_t n = grid.size();
  if (graph.x.size() != n || graph.f.size() != n) {
    throw InvalidArgument("graph and grid sizes differ");
  }
  std::vector<double> shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = graph.x[i] - grid.node(i);
  const TrigInterpolant p1(shift);
  const TrigInterpolant f(graph.f);

  std::vector<double> z2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double target = grid.node(k);
    // Solve a + p1(a) = target; the map is increasing because x is.
    double a = target - p1(target);
    for (int it = 0; it < 50; ++it) {
      const double r = a + p1(a) - target;
      const double dr = 1.0 + p1.derivative(a, 1);
      const double next = a - r / dr;
      if (std::abs(next - a) < 1e-15) {
        a = next;
        break;
      }
      a = next;
    }
    z2[k] = f(a);
  }
  return SampledCurve(grid, std::vector<double>(n, 0.0), std::move(z2));
}

}  // namespace muskat
