#pragma once

#include <functional>
#include <span>

namespace muskat {

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Converged when the error estimate
/// is at most rel_tol times the integral of |f|; otherwise throws
/// QuadratureNotConverged.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol);

/// Sum of integrate_adaptive over consecutive panels [p_k, p_{k+1}]. The
/// breakpoints must be sorted; zero-width panels are skipped.
double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> breakpoints, double rel_tol);

}  // namespace muskat
