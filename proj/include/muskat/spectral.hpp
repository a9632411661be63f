#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace muskat {

/// Exponential cutoff rho(k) = exp(-strength * (2|k|/n)^exponent).
struct FilterSpec {
  double strength = 10.0;
  int exponent = 25;

  double operator()(long k, std::size_t n) const;

  /// No attenuation at all (rho == 1).
  static FilterSpec none() { return {0.0, 1}; }
};

/// Fourier coefficients c_k, k = -n/2+1 .. n/2, of samples on the grid
/// alpha_j = -pi + 2*pi*j/n, with c_k = (1/n) sum_j v_j exp(-i k alpha_j).
class Spectrum {
 public:
  explicit Spectrum(std::size_t n);

  std::size_t size() const noexcept { return coeffs_.size(); }
  long min_k() const noexcept { return -static_cast<long>(size()) / 2 + 1; }
  long max_k() const noexcept { return static_cast<long>(size()) / 2; }

  std::complex<double>& operator[](long k) { return coeffs_[index(k)]; }
  const std::complex<double>& operator[](long k) const { return coeffs_[index(k)]; }

  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }

 private:
  std::size_t index(long k) const;
  std::vector<std::complex<double>> coeffs_;
};

/// Throws InvalidArgument for odd or empty input.
Spectrum analyze(std::span<const double> values);

/// Real part of sum_k c_k exp(i k alpha_j). Exact inverse of analyze for real
/// data (the Nyquist coefficient is taken as a cosine mode).
std::vector<double> synthesize(const Spectrum& spectrum);

/// Inverse transform of (ik)^order rho(k) c_k, order in 1..4. The Nyquist
/// mode is dropped for odd orders.
std::vector<double> filtered_derivative(std::span<const double> values, int order,
                                        const FilterSpec& filter = {});

/// Zero every coefficient with |c_k| < eps and synthesize. When every such
/// coefficient is at transform round-off level the input is returned
/// unchanged, so eps = 0 is the identity and the map is exactly idempotent.
std::vector<double> threshold_smooth(std::span<const double> values, double eps);

/// Trigonometric interpolant of grid samples, evaluable off-grid.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(std::span<const double> values);
  explicit TrigInterpolant(Spectrum spectrum);

  double operator()(double alpha) const { return derivative(alpha, 0); }
  /// d^order/dalpha^order of the interpolant at alpha (order >= 0).
  double derivative(double alpha, int order) const;

  const Spectrum& spectrum() const noexcept { return spectrum_; }

 private:
  Spectrum spectrum_;
};

}  // namespace muskat
