#include "ptkit/specfun.hpp"

#include "ptkit/error.hpp"
#include "ptkit/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>

namespace ptkit::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

bool is_nonpositive_integer(cplx z) {
    if (z.imag() != 0.0) return false;
    return z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx lanczos_log_gamma(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) x += kLanczos[k] / (z + static_cast<double>(k));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z), continued analytically inside each half plane. Written in
// terms of exp(+-2 pi i z) so it stays accurate for large |Im z|.
cplx log_sin_pi(cplx z) {
    if (z.imag() >= 0.0) {
        return -std::log(2.0) + I * (kPi / 2) - I * kPi * z + std::log(1.0 - std::exp(2.0 * kPi * I * z));
    }
    return -std::log(2.0) - I * (kPi / 2) + I * kPi * z + std::log(1.0 - std::exp(-2.0 * kPi * I * z));
}

}  // namespace

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    return std::log(kPi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

cplx pochhammer(cplx x, cplx n) {
    if (n == 0.0) return 1.0;
    if (is_nonpositive_integer(x) || is_nonpositive_integer(x + n)) {
        throw PoleError("pochhammer: Gamma undefined at x or x+n");
    }
    return std::exp(log_gamma(x + n) - log_gamma(x));
}

// ---- Kummer M -----------------------------------------------------------------

namespace {

struct Summed {
    cplx value;
    double magnitude;  // largest partial term, for cancellation estimates
};

Summed kummer_series(cplx a, cplx b, cplx z) {
    cplx term = 1.0, sum = 1.0;
    double big = 1.0;
    int quiet = 0;
    for (int k = 1; k < 20000; ++k) {
        term *= (a + static_cast<double>(k - 1)) / (b + static_cast<double>(k - 1)) * z / static_cast<double>(k);
        sum += term;
        big = std::max(big, std::abs(term));
        if (std::abs(term) <= 1e-16 * std::abs(sum)) {
            if (++quiet >= 10) return {sum, big};
        } else {
            quiet = 0;
        }
    }
    throw RangeError("kummer_m: series did not converge");
}

Summed kummer_m_summed(cplx a, cplx b, cplx z) {
    if (is_nonpositive_integer(b)) throw PoleError("kummer_m: b is a non-positive integer");
    if (std::abs(z) > kKummerMaxAbsZ) {
        throw RangeError("kummer_m: |z| = " + std::to_string(std::abs(z)) + " exceeds the series range");
    }
    if (z.real() < 0.0) {
        const Summed s = kummer_series(b - a, b, -z);
        const cplx e = std::exp(z);
        return {e * s.value, std::abs(e) * s.magnitude};
    }
    return kummer_series(a, b, z);
}

}  // namespace

cplx kummer_m(cplx a, cplx b, cplx z) { return kummer_m_summed(a, b, z).value; }

// ---- Tricomi U ----------------------------------------------------------------

namespace {

struct Connection {
    cplx value;
    double magnitude;  // largest of the two terms
};

Connection connection_formula(cplx a, cplx b, cplx z, cplx log_z) {
    const cplx c1 = gamma(1.0 - b) * rgamma(a - b + 1.0);
    const cplx c2 = gamma(b - 1.0) * rgamma(a) * std::exp((1.0 - b) * log_z);
    const Summed m1 = kummer_m_summed(a, b, z), m2 = kummer_m_summed(a - b + 1.0, 2.0 - b, z);
    return {c1 * m1.value + c2 * m2.value, std::max(std::abs(c1) * m1.magnitude, std::abs(c2) * m2.magnitude)};
}

Connection connection_limit(cplx a, cplx b, cplx z, cplx log_z) {
    const double n = std::round(b.real());
    if (std::abs(b - cplx(n, 0.0)) < 1e-8) {
        // Integer b: both Gamma factors have poles. Symmetric averages across
        // the pole at offsets eps, 2 eps, 4 eps, Richardson-extrapolated in eps^2.
        constexpr double eps = 5e-3;
        double mag = 0.0;
        auto side_avg = [&](double e) {
            const Connection lo = connection_formula(a, b - e, z, log_z);
            const Connection hi = connection_formula(a, b + e, z, log_z);
            mag = std::max({mag, lo.magnitude, hi.magnitude});
            return (lo.value + hi.value) / 2.0;
        };
        const cplx h1 = side_avg(eps), h2 = side_avg(2.0 * eps), h4 = side_avg(4.0 * eps);
        const cplx r1 = (4.0 * h1 - h2) / 3.0, r2 = (4.0 * h2 - h4) / 3.0;
        return {(16.0 * r1 - r2) / 15.0, mag};
    }
    return connection_formula(a, b, z, log_z);
}

// z^-a sum_k (a)_k (a-b+1)_k / k! (-z)^-k, summed until the terms stop shrinking.
cplx u_asymptotic(cplx a, cplx b, cplx z) {
    cplx term = 1.0, sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 400; ++k) {
        term *= (a + static_cast<double>(k - 1)) * (a - b + static_cast<double>(k)) / (-z * static_cast<double>(k));
        const double m = std::abs(term);
        if (m > last) break;
        sum += term;
        last = m;
        if (m < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(-a * std::log(z)) * sum;
}

ode::Options path_options(cplx w0) {
    ode::Options o;
    o.rtol = 1e-13;
    o.atol = 1e-18 * std::max(std::abs(w0), 1e-280);
    o.h_min = 1e-14;
    return o;
}

// Kummer equation for (w, w') along z(s); dz is dz/ds.
template <class Path>
ode::State<2> kummer_along(cplx a, cplx b, Path path, ode::State<2> y, double s1) {
    auto rhs = [&](double s, const ode::State<2>& w, ode::State<2>& dw) {
        const auto [zz, dz] = path(s);
        dw[0] = dz * w[1];
        dw[1] = dz * (a * w[0] - (b - zz) * w[1]) / zz;
    };
    auto none = [](double, const ode::State<2>&) {};
    return ode::dopri5<2>(rhs, 0.0, y, s1, path_options(y[0]), std::span<const double>(), none).y;
}

// Starts from the asymptotic expansion at a large positive real R, runs
// inward along the real axis to |z| and then along the circle |z| = r to
// arg z. U dominates the other solution on both legs.
cplx u_by_ode(cplx a, cplx b, cplx z) {
    const double r = std::abs(z), theta = std::arg(z);
    const double R = std::max(100.0, 2.0 * r);
    ode::State<2> y{u_asymptotic(a, b, R), -a * u_asymptotic(a + 1.0, b + 1.0, R)};
    y = kummer_along(a, b, [&](double s) { return std::pair<cplx, cplx>(R - s, -1.0); }, y, R - r);
    if (theta == 0.0) return y[0];
    const double sign = theta > 0.0 ? 1.0 : -1.0;
    y = kummer_along(
        a, b,
        [&](double s) {
            const cplx zz = std::polar(r, sign * s);
            return std::pair<cplx, cplx>(zz, sign * I * zz);
        },
        y, std::abs(theta));
    return y[0];
}

bool principal_log(cplx z, cplx log_z) {
    return std::abs(log_z.imag() - std::arg(z)) < 1e-12 && std::abs(log_z.real() - std::log(std::abs(z))) < 1e-12;
}

}  // namespace

cplx tricomi_u(cplx a, cplx b, cplx z) { return tricomi_u(a, b, z, std::log(z)); }

cplx tricomi_u(cplx a, cplx b, cplx z, cplx log_z) {
    if (z == 0.0) throw PoleError("tricomi_u: z = 0");
    const bool principal = principal_log(z, log_z);
    if (std::abs(z) > kKummerMaxAbsZ) {
        if (principal) return u_by_ode(a, b, z);
        throw RangeError("tricomi_u: |z| too large for the series route");
    }
    const bool integer_b = std::abs(b - std::round(b.real())) < 1e-8;
    if (integer_b && principal) return u_by_ode(a, b, z);
    const Connection c = connection_limit(a, b, z, log_z);
    if (c.magnitude <= 1e5 * std::abs(c.value) || !principal) return c.value;
    return u_by_ode(a, b, z);
}

cplx tricomi_u_prime(cplx a, cplx b, cplx z, cplx log_z) { return -a * tricomi_u(a + 1.0, b + 1.0, z, log_z); }

// ---- Laguerre -----------------------------------------------------------------

cplx laguerre_l(cplx n, cplx alpha, cplx z) {
    if (is_nonpositive_integer(alpha + 1.0)) throw PoleError("laguerre_l: alpha + 1 is a non-positive integer");
    if (is_nonpositive_integer(n + alpha + 1.0)) throw PoleError("laguerre_l: Gamma(n + alpha + 1) has a pole");
    const cplx pre = std::exp(log_gamma(n + alpha + 1.0) - log_gamma(alpha + 1.0)) * rgamma(n + 1.0);
    return pre * kummer_m(-n, alpha + 1.0, z);
}

cplx laguerre_l_prime(cplx n, cplx alpha, cplx z) { return -laguerre_l(n - 1.0, alpha + 1.0, z); }

}  // namespace ptkit::specfun
