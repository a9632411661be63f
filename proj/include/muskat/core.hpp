#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "muskat/spectral.hpp"

namespace muskat {

/// Uniform periodic grid alpha_i = -pi + i*h, h = 2*pi/n, on [-pi, pi).
///
/// alpha = 0 is always a node (index n/2), so odd data stays node-aligned.
class Grid {
 public:
  /// Throws InvalidArgument unless n is even and n >= 16.
  explicit Grid(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double node(std::size_t i) const noexcept;
  std::vector<double> nodes() const;

  /// Index of the node mirrored through alpha = 0: alpha_{mirror(i)} = -alpha_i
  /// (mod 2*pi).
  std::size_t mirror(std::size_t i) const noexcept { return (n_ - i) % n_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
  double h_;
};

Grid make_grid(std::size_t n);

/// Interface samples z(alpha_i) = (alpha_i + p1_i, z2_i) with p1, z2 periodic.
class SampledCurve {
 public:
  /// Throws InvalidArgument on a length mismatch or a non-finite entry.
  SampledCurve(Grid grid, std::vector<double> p1, std::vector<double> z2);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::span<const double> p1() const noexcept { return p1_; }
  std::span<const double> z2() const noexcept { return z2_; }
  double z1(std::size_t i) const noexcept { return grid_.node(i) + p1_[i]; }
  std::vector<double> z1() const;

  /// Filtered spectral derivatives: dz1 = 1 + D p1, dz2 = D z2.
  std::vector<double> dz1(const FilterSpec& filter = {}) const;
  std::vector<double> dz2(const FilterSpec& filter = {}) const;

 private:
  Grid grid_;
  std::vector<double> p1_;
  std::vector<double> z2_;
};

struct SlopeMin {
  double value = 0.0;
  std::size_t index = 0;
};

/// Minimum of the filtered dz1/dalpha over the nodes.
SlopeMin min_dz1(const SampledCurve& curve, const FilterSpec& filter = {});

/// Density jump rho^- - rho^+ with mu = g = 1.
class PhysicalParams {
 public:
  /// Throws InvalidArgument if density_jump is zero or not finite.
  explicit PhysicalParams(double density_jump);

  double density_jump() const noexcept { return density_jump_; }
  double gravity() const noexcept { return 1.0; }
  /// (rho^- - rho^+) / (4 pi), the periodic-equation prefactor.
  double prefactor() const noexcept;

 private:
  double density_jump_;
};

enum class PresetKind { SeedT0, ConjT0, DeltaTilt };

struct PresetId {
  PresetKind kind = PresetKind::SeedT0;
  double delta = 0.0;  // DeltaTilt only

  /// Accepts "SEED_T0", "CONJ_T0", "DELTA_TILT(<delta>)".
  static PresetId parse(std::string_view text);
  std::string name() const;
};

/// SEED_T0: z1 = a - sin a, z2 = (3 sin a + 8 sin 2a + 3 sin 3a)/4.
/// CONJ_T0: z1 = a - 0.96 sin a, z2 = (2/3) sin 3a.
/// DELTA_TILT(d): SEED_T0 with z1 = a - (1 - d) sin a.
SampledCurve sample_preset(const PresetId& preset, const Grid& grid);
SampledCurve sample_preset(std::string_view name, const Grid& grid);

/// Graph reading (x, f(x), f'(x)) of a curve at its nodes.
struct GraphView {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> slope;
};

/// Throws NotAGraph listing every node where dz1 <= 0.
GraphView to_graph(const SampledCurve& curve, const FilterSpec& filter = {});

/// Re-sample a graph onto the identity parametrization z1 = alpha, i.e.
/// f evaluated at x = alpha_k, by inverting the trigonometric interpolant of
/// x(alpha) with Newton steps.
SampledCurve graph_to_curve(const GraphView& graph, const Grid& grid);

}  // namespace muskat
