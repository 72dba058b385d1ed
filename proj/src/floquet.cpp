#include "ptkit/floquet.hpp"

#include "ptkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptkit::floquet {

namespace {

constexpr double kPi = std::numbers::pi;

PhasePoint evaluate(const Family& family, double value, const IntegratorConfig& cfg, double tol_phase) {
    PhasePoint p;
    p.value = value;
    try {
        const PeriodicGenerator g = family(value);
        const FloquetResult r = monodromy(g.H, g.T, cfg, tol_phase);
        p.lambda = r.lambda;
        p.eps = r.eps;
        p.abs_lambda = {std::abs(r.lambda[0]), std::abs(r.lambda[1])};
        p.phase = r.phase;
    } catch (const std::exception& e) {
        p.ok = false;
        p.error = e.what();
        p.abs_lambda = {std::nan(""), std::nan("")};
        p.phase = Phase::broken;
    }
    return p;
}

std::vector<double> find_boundaries(const std::vector<PhasePoint>& pts, double tol_phase) {
    std::vector<double> out;
    auto indicator = [&](const PhasePoint& p) {
        return std::max(p.abs_lambda[0], p.abs_lambda[1]) - 1.0 - tol_phase;
    };
    for (std::size_t k = 1; k < pts.size(); ++k) {
        if (!pts[k - 1].ok || !pts[k].ok) continue;
        const double a = indicator(pts[k - 1]), b = indicator(pts[k]);
        if ((a > 0.0) != (b > 0.0)) out.push_back(0.5 * (pts[k - 1].value + pts[k].value));
    }
    return out;
}

}  // namespace

const char* phase_name(Phase p) noexcept {
    switch (p) {
        case Phase::unbroken: return "unbroken";
        case Phase::broken: return "broken";
        case Phase::boundary: return "boundary";
    }
    return "?";
}

double FloquetResult::max_abs_lambda() const { return std::max(std::abs(lambda[0]), std::abs(lambda[1])); }

double FloquetResult::max_unit_deviation() const {
    return std::max(std::abs(std::abs(lambda[0]) - 1.0), std::abs(std::abs(lambda[1]) - 1.0));
}

cplx quasienergy(cplx lambda, double T) {
    if (lambda == 0.0) throw DomainError("quasienergy: zero Floquet multiplier");
    if (!(T > 0.0)) throw ConfigError("quasienergy: period must be positive");
    // lambda = exp(-i T eps)
    double re = -std::arg(lambda) / T;
    const double im = std::log(std::abs(lambda)) / T;
    if (re <= -kPi / T) re += 2.0 * kPi / T;
    return {re, im};
}

Phase classify(const std::array<cplx, 2>& lambda, double coalescence, double tol_phase) {
    const double dev = std::max(std::abs(std::abs(lambda[0]) - 1.0), std::abs(std::abs(lambda[1]) - 1.0));
    if (dev < 10.0 * tol_phase && coalescence >= 1.0 - 1e-4) return Phase::boundary;
    if (dev < tol_phase) return Phase::unbroken;
    return Phase::broken;
}

void check_periodic(const HamiltonianFn& H, double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("period must be positive and finite");
    for (int k = 0; k < kPeriodicitySamples; ++k) {
        const double t = T * k / kPeriodicitySamples;
        const Mat2 h0 = H(t);
        const Mat2 h1 = H(t + T);
        const double d = max_abs(h1 - h0);
        if (!(d <= kPeriodicityTol * std::max(1.0, max_abs(h0)))) {
            throw ConfigError("generator is not periodic with T = " + std::to_string(T) + " (|H(t+T)-H(t)| = " +
                              std::to_string(d) + " at t = " + std::to_string(t) + ")");
        }
    }
}

FloquetResult monodromy(const HamiltonianFn& H, double T, const IntegratorConfig& cfg, double tol_phase) {
    check_periodic(H, T);
    FloquetResult r;
    r.T = T;
    r.U = propagate_matrix(H, 0.0, T, cfg);
    const Eig2 e = eig(r.U);
    r.lambda = e.values;
    r.coalescence = e.coalescence;
    r.eps = {quasienergy(r.lambda[0], T), quasienergy(r.lambda[1], T)};
    r.phase = classify(r.lambda, r.coalescence, tol_phase);
    return r;
}

int sweep_threads() {
#ifdef _OPENMP
    if (const char* s = std::getenv("PTKIT_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && n > 0) return static_cast<int>(std::min<long>(n, 1024));
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

SweepResult phase_sweep(const Family& family, const std::vector<double>& values, const IntegratorConfig& cfg,
                        double tol_phase) {
    cfg.check();
    SweepResult out;
    out.points.resize(values.size());
    const long n = static_cast<long>(values.size());
#ifdef _OPENMP
    const int threads = sweep_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (long k = 0; k < n; ++k) {
        out.points[k] = evaluate(family, values[k], cfg, tol_phase);
    }
    out.boundaries = find_boundaries(out.points, tol_phase);
    return out;
}

SweepResult phase_sweep_serial(const Family& family, const std::vector<double>& values,
                               const IntegratorConfig& cfg, double tol_phase) {
    cfg.check();
    SweepResult out;
    out.points.reserve(values.size());
    for (double v : values) out.points.push_back(evaluate(family, v, cfg, tol_phase));
    out.boundaries = find_boundaries(out.points, tol_phase);
    return out;
}

QuasienergyTrace quasienergy_trace(const ModelSpec& spec, double T, int n_periods, const Vec2& psi0,
                                   const IntegratorConfig& cfg, int samples_per_period) {
    if (n_periods < 1 || samples_per_period < 1) throw ConfigError("quasienergy_trace: need >= 1 period and sample");
    const HamiltonianFn H = [&spec](double t) { return hamiltonian(spec, t); };
    QuasienergyTrace out;
    out.floquet = monodromy(H, T, cfg);
    const double t1 = n_periods * T;
    std::vector<double> grid;
    const int n = n_periods * samples_per_period;
    grid.reserve(n + 1);
    for (int k = 0; k <= n; ++k) grid.push_back(k == n ? t1 : t1 * k / n);
    out.trajectory = propagate_state(H, psi0, 0.0, t1, cfg, grid, Frame::original);
    return out;
}

}  // namespace ptkit::floquet
