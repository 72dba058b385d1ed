#pragma once

// Dormand-Prince 5(4) integrator for small complex systems, with PI step
// control and the method's 4th-order continuous extension for dense output.
// Used by the propagators and by the Tricomi-U continuation in specfun.

#include "ptkit/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace ptkit::ode {

template <std::size_t N>
using State = std::array<std::complex<double>, N>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  ///< 0 selects an initial step automatically
    double h_min = 1e-14;
    double h_max = 0.0;  ///< 0 means |t1 - t0|
    long max_steps = 5'000'000;
    double overflow = 1e150;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

enum class Status { ok, overflow };

template <std::size_t N>
struct Result {
    State<N> y{};
    double t = 0.0;
    Status status = Status::ok;
    Stats stats;
};

namespace detail {

template <std::size_t N>
double state_norm(const State<N>& y) {
    double s = 0.0;
    for (const auto& v : y) s += std::norm(v);
    return std::sqrt(s);
}

// Dormand-Prince coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace detail

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0). `f(t, y, dy)` writes the
/// derivative into dy. For every point of `grid` (ascending, inside
/// [t0, t1]) `emit(t, y)` is called with the interpolated state. Stops early
/// with Status::overflow when |y| exceeds opt.overflow; throws NumericError
/// on step-size underflow or an exhausted step budget.
template <std::size_t N, class Rhs, class Emit>
Result<N> dopri5(Rhs&& f, double t0, const State<N>& y0, double t1, const Options& opt,
                 std::span<const double> grid, Emit&& emit) {
    using namespace detail;
    using S = State<N>;
    Result<N> res;
    res.y = y0;
    res.t = t0;

    std::size_t g = 0;
    while (g < grid.size() && grid[g] <= t0) {
        emit(grid[g], y0);
        ++g;
    }
    if (!(t1 > t0)) return res;

    const double span_len = t1 - t0;
    const double h_max = opt.h_max > 0.0 ? opt.h_max : span_len;

    auto scaled_norm = [&](const S& e, const S& ya, const S& yb) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            s += std::norm(e[i]) / (sk * sk);
        }
        return std::sqrt(s / static_cast<double>(N));
    };
    auto axpy = [](S& out, const S& y, double h, std::initializer_list<std::pair<double, const S*>> terms) {
        for (std::size_t i = 0; i < N; ++i) {
            std::complex<double> acc{};
            for (const auto& [c, k] : terms) acc += c * (*k)[i];
            out[i] = y[i] + h * acc;
        }
    };

    S y = y0;
    double t = t0;
    S k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
    f(t, y, k1);
    ++res.stats.rhs_evals;

    double h = opt.h_init;
    if (h <= 0.0) {
        // Hairer's starting-step heuristic.
        const S zero{};
        const double d0 = scaled_norm(y, y, zero);
        const double d1n = scaled_norm(k1, y, zero);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, h_max);
        axpy(ytmp, y, h0, {{1.0, &k1}});
        f(t + h0, ytmp, k2);
        ++res.stats.rhs_evals;
        S diff;
        for (std::size_t i = 0; i < N; ++i) diff[i] = k2[i] - k1[i];
        const double d2 = scaled_norm(diff, y, zero) / h0;
        const double dm = std::max(d1n, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, h_max});
    }

    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double safe = 0.9;
    constexpr double facc1 = 1.0 / 0.2;
    constexpr double facc2 = 1.0 / 10.0;
    double facold = 1e-4;
    bool last_rejected = false;
    long steps = 0;

    for (;;) {
        if (++steps > opt.max_steps) throw NumericError("integrator exceeded the step budget");
        if (h < opt.h_min) throw NumericError("step size underflow at t = " + std::to_string(t));
        bool last = false;
        if (t + h >= t1 || t + 1.01 * h >= t1) {
            h = t1 - t;
            last = true;
        }

        axpy(ytmp, y, h, {{a21, &k1}});
        f(t + c2 * h, ytmp, k2);
        axpy(ytmp, y, h, {{a31, &k1}, {a32, &k2}});
        f(t + c3 * h, ytmp, k3);
        axpy(ytmp, y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        f(t + c4 * h, ytmp, k4);
        axpy(ytmp, y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        f(t + c5 * h, ytmp, k5);
        axpy(ytmp, y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        f(t + h, ytmp, k6);
        axpy(ynew, y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const double tnew = last ? t1 : t + h;
        f(tnew, ynew, k7);
        res.stats.rhs_evals += 6;

        for (std::size_t i = 0; i < N; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        double enorm = scaled_norm(err, y, ynew);
        if (!std::isfinite(enorm)) enorm = 1e10;

        const double fac11 = std::pow(std::max(enorm, 1e-300), expo1);
        if (enorm <= 1.0) {
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            double hnew = h / fac;
            facold = std::max(enorm, 1e-4);
            ++res.stats.accepted;

            if (g < grid.size() && grid[g] <= tnew) {
                S r1 = y, r2, r3, r4, r5;
                for (std::size_t i = 0; i < N; ++i) {
                    r2[i] = ynew[i] - y[i];
                    r3[i] = h * k1[i] - r2[i];
                    r4[i] = r2[i] - h * k7[i] - r3[i];
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                while (g < grid.size() && grid[g] <= tnew) {
                    const double th = (grid[g] - t) / h;
                    const double th1 = 1.0 - th;
                    S yi;
                    for (std::size_t i = 0; i < N; ++i) {
                        yi[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
                    }
                    emit(grid[g], grid[g] == tnew ? ynew : yi);
                    ++g;
                }
            }

            y = ynew;
            k1 = k7;
            t = tnew;
            res.y = y;
            res.t = t;
            if (state_norm(y) > opt.overflow) {
                res.status = Status::overflow;
                return res;
            }
            if (last) return res;
            if (last_rejected) hnew = std::min(hnew, h);
            last_rejected = false;
            h = std::min(hnew, h_max);
        } else {
            h = h / std::min(facc1, fac11 / safe);
            last_rejected = true;
            ++res.stats.rejected;
        }
    }
}

}  // namespace ptkit::ode
