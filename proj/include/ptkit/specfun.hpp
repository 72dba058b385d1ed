#pragma once

// Complex special functions: log-gamma, Pochhammer symbol, Kummer M (1F1),
// Tricomi U and generalized Laguerre functions with complex degree/order.

#include <complex>

namespace ptkit::specfun {

using cplx = std::complex<double>;

/// Principal branch of ln Gamma (continuous off the negative real axis,
/// satisfies lgamma(z+1) = lgamma(z) + ln z). Lanczos g=7, n=9 with the
/// reflection formula for Re z < 1/2. Throws PoleError at 0, -1, -2, ...
cplx log_gamma(cplx z);

/// Gamma(z); throws PoleError at non-positive integers.
cplx gamma(cplx z);

/// 1/Gamma(z); exactly 0 at non-positive integers.
cplx rgamma(cplx z);

/// (x)_n = Gamma(x+n)/Gamma(x). Throws PoleError when either Gamma is
/// undefined, except that (x)_0 = 1 always.
cplx pochhammer(cplx x, cplx n);

/// Largest |z| accepted by the power series.
inline constexpr double kKummerMaxAbsZ = 50.0;

/// M(a, b, z) = sum (a)_k/(b)_k z^k/k!. Uses Kummer's transformation for
/// Re z < 0. Throws RangeError for |z| > 50 and PoleError when b is a
/// non-positive integer.
cplx kummer_m(cplx a, cplx b, cplx z);

/// U(a, b, z), principal branch of z^(1-b).
cplx tricomi_u(cplx a, cplx b, cplx z);

/// U(a, b, z) with z^(1-b) evaluated as exp((1-b) log_z). `log_z` must be a
/// logarithm of z; use this overload to continue U across the negative
/// real axis.
cplx tricomi_u(cplx a, cplx b, cplx z, cplx log_z);

/// dU/dz = -a U(a+1, b+1, z).
cplx tricomi_u_prime(cplx a, cplx b, cplx z, cplx log_z);

/// L_n^(alpha)(z) = Gamma(n+alpha+1) / (Gamma(alpha+1) Gamma(n+1)) M(-n, alpha+1, z).
cplx laguerre_l(cplx n, cplx alpha, cplx z);

/// dL_n^(alpha)/dz = -L_(n-1)^(alpha+1)(z).
cplx laguerre_l_prime(cplx n, cplx alpha, cplx z);

}  // namespace ptkit::specfun
