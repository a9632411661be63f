#include "muskat/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "muskat/error.hpp"

namespace muskat {
namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays
// is. Plans are created once per size under a lock and then shared.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* real = fftw_alloc_real(n);
    auto* cplx = fftw_alloc_complex(n / 2 + 1);
    const int size = static_cast<int>(n);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(size, real, cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_c2r_1d(size, cplx, real, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(real);
    fftw_free(cplx);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void check_length(std::size_t n) {
  if (n == 0 || n % 2 != 0) {
    throw InvalidArgument("spectral transforms need an even, nonzero length (got " +
                          std::to_string(n) + ")");
  }
}

// Unnormalized DFT X_k = sum_j v_j exp(-2 pi i j k / n), k = 0..n/2.
std::vector<std::complex<double>> forward_dft(std::span<const double> values) {
  const std::size_t n = values.size();
  check_length(n);
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(plan_cache().get(n).forward, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

// Inverse of forward_dft without the 1/n factor. Destroys `half`.
std::vector<double> backward_dft(std::vector<std::complex<double>>& half, std::size_t n) {
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plan_cache().get(n).backward,
                       reinterpret_cast<fftw_complex*>(half.data()), out.data());
  return out;
}

// (-1)^k: shifts the DFT phase origin from alpha = 0 to alpha = -pi.
double phase(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double FilterSpec::operator()(long k, std::size_t n) const {
  const double r = 2.0 * static_cast<double>(std::labs(k)) / static_cast<double>(n);
  return std::exp(-strength * std::pow(r, exponent));
}

Spectrum::Spectrum(std::size_t n) : coeffs_(n) { check_length(n); }

std::size_t Spectrum::index(long k) const {
  if (k < min_k() || k > max_k()) {
    throw InvalidArgument("wavenumber " + std::to_string(k) + " outside spectrum");
  }
  return static_cast<std::size_t>(k - min_k());
}

Spectrum analyze(std::span<const double> values) {
  const std::size_t n = values.size();
  const auto half = forward_dft(values);
  Spectrum s(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (long k = 0; k <= s.max_k(); ++k) {
    const auto c = half[static_cast<std::size_t>(k)] * (phase(k) * inv_n);
    s[k] = c;
    if (k > 0 && k < s.max_k()) s[-k] = std::conj(c);
  }
  return s;
}

std::vector<double> synthesize(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  std::vector<std::complex<double>> half(n / 2 + 1);
  for (long k = 0; k <= spectrum.max_k(); ++k) {
    half[static_cast<std::size_t>(k)] = spectrum[k] * phase(k);
  }
  // c2r treats coefficient k>0 as standing for the pair (k, -k); use the
  // average so a non-Hermitian spectrum still yields the real part.
  for (long k = 1; k < spectrum.max_k(); ++k) {
    half[static_cast<std::size_t>(k)] =
        0.5 * (spectrum[k] + std::conj(spectrum[-k])) * phase(k);
  }
  return backward_dft(half, n);
}

std::vector<double> filtered_derivative(std::span<const double> values, int order,
                                        const FilterSpec& filter) {
  if (order < 1 || order > 4) {
    throw InvalidArgument("derivative order must be in 1..4");
  }
  const std::size_t n = values.size();
  auto half = forward_dft(values);
  const double inv_n = 1.0 / static_cast<double>(n);
  const long nyquist = static_cast<long>(n / 2);
  for (long k = 0; k <= nyquist; ++k) {
    auto& c = half[static_cast<std::size_t>(k)];
    if (k == nyquist && order % 2 == 1) {
      c = 0.0;
      continue;
    }
    const std::complex<double> ik(0.0, static_cast<double>(k));
    std::complex<double> m = 1.0;
    for (int p = 0; p < order; ++p) m *= ik;
    c *= m * (filter(k, n) * inv_n);
  }
  return backward_dft(half, n);
}

std::vector<double> threshold_smooth(std::span<const double> values, double eps) {
  if (!(eps >= 0.0)) throw InvalidArgument("smoothing threshold must be >= 0");
  const std::size_t n = values.size();
  auto half = forward_dft(values);
  const double inv_n = 1.0 / static_cast<double>(n);
  double cmax = 0.0;
  for (auto& c : half) {
    c *= inv_n;
    cmax = std::max(cmax, std::abs(c));
  }
  // Coefficients at transform round-off level are zero for this purpose; if
  // nothing above that level falls under eps the input is returned as is.
  // This makes the map exactly idempotent.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * cmax;
  bool removes = false;
  for (auto& c : half) {
    const double a = std::abs(c);
    if (a < eps) {
      removes = removes || a > noise;
      c = 0.0;
    }
  }
  if (!removes) return {values.begin(), values.end()};
  return backward_dft(half, n);
}

TrigInterpolant::TrigInterpolant(std::span<const double> values)
    : spectrum_(analyze(values)) {}

TrigInterpolant::TrigInterpolant(Spectrum spectrum) : spectrum_(std::move(spectrum)) {}

double TrigInterpolant::derivative(double alpha, int order) const {
  if (order < 0) throw InvalidArgument("derivative order must be >= 0");
  const long kmax = spectrum_.max_k();
  // (i)^order as a complex unit.
  static constexpr std::complex<double> units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto unit = units[order % 4];

  double sum = (order == 0) ? spectrum_[0].real() : 0.0;
  const std::complex<double> step = std::polar(1.0, alpha);
  std::complex<double> e = step;
  for (long k = 1; k < kmax; ++k) {
    if (k % 32 == 0) e = std::polar(1.0, static_cast<double>(k) * alpha);
    const double kp = std::pow(static_cast<double>(k), order);
    sum += 2.0 * (spectrum_[k] * unit * e).real() * kp;
    e *= step;
  }
  const double kn = static_cast<double>(kmax);
  sum += spectrum_[kmax].real() * std::pow(kn, order) *
         std::cos(kn * alpha + order * std::numbers::pi / 2.0);
  return sum;
}

}  // namespace muskat
