#include "muskat/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "muskat/error.hpp"

namespace muskat {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
  if (!(rel_tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  constexpr unsigned max_depth = 20;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > rel_tol * l1 + 1e-300) {
    throw QuadratureNotConverged(value, error);
  }
  return value;
}

double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> breakpoints, double rel_tol) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (breakpoints[k + 1] > breakpoints[k]) {
      total += integrate_adaptive(f, breakpoints[k], breakpoints[k + 1], rel_tol);
    }
  }
  return total;
}

}  // namespace muskat
