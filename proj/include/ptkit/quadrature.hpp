#pragma once

#include <complex>
#include <functional>

namespace ptkit {

/// Adaptive Gauss-Kronrod (7/15) integral of a complex integrand over
/// [a, b]. Throws NumericError when the error estimate stays above
/// `abs_tol` after subdivision or the integrand is not finite.
std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double a, double b,
                               double abs_tol = 1e-12);

}  // namespace ptkit
