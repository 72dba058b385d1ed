#include "ptkit/propagate.hpp"

#include "ptkit/error.hpp"
#include "ptkit/ode.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace ptkit {

namespace {

const cplx I(0.0, 1.0);

ode::Options to_options(const IntegratorConfig& cfg) {
    cfg.check();
    ode::Options o;
    o.rtol = cfg.rtol;
    o.atol = cfg.atol;
    o.h_init = cfg.h_init;
    o.h_min = cfg.h_min;
    o.max_steps = cfg.max_steps;
    return o;
}

}  // namespace

void IntegratorConfig::check() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("integrator tolerances must be positive");
    if (!(h_min > 0.0)) throw ConfigError("h_min must be positive");
    if (h_init < 0.0) throw ConfigError("h_init must be >= 0");
    if (max_steps <= 0) throw ConfigError("max_steps must be positive");
}

const char* frame_name(Frame f) noexcept { return f == Frame::original ? "original" : "effective"; }

std::vector<double> uniform_grid(double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw ConfigError("output step must be positive");
    if (!(t1 >= t0)) throw ConfigError("time window must satisfy t1 >= t0");
    std::vector<double> g;
    const auto n = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
    g.reserve(static_cast<std::size_t>(n) + 2);
    for (long k = 0; k <= n; ++k) g.push_back(t0 + static_cast<double>(k) * dt);
    if (t1 - g.back() > 1e-9 * dt) g.push_back(t1);
    else g.back() = t1;
    return g;
}

Trajectory propagate_state(const HamiltonianFn& H, const Vec2& psi0, double t0, double t1,
                           const IntegratorConfig& cfg, const std::vector<double>& out_grid, Frame frame) {
    for (std::size_t k = 0; k < out_grid.size(); ++k) {
        if (out_grid[k] < t0 || out_grid[k] > t1 || (k > 0 && !(out_grid[k] > out_grid[k - 1]))) {
            throw ConfigError("output grid must be strictly increasing inside [t0, t1]");
        }
    }
    Trajectory tr;
    tr.frame = frame;
    tr.t.reserve(out_grid.size());
    tr.states.reserve(out_grid.size());

    auto rhs = [&H](double t, const ode::State<2>& y, ode::State<2>& dy) {
        const Mat2 h = H(t);
        dy[0] = -I * (h.m11 * y[0] + h.m12 * y[1]);
        dy[1] = -I * (h.m21 * y[0] + h.m22 * y[1]);
    };
    auto emit = [&tr](double t, const ode::State<2>& y) {
        tr.t.push_back(t);
        tr.states.push_back({y[0], y[1]});
    };
    const auto res = ode::dopri5<2>(rhs, t0, ode::State<2>{psi0[0], psi0[1]}, t1, to_options(cfg),
                                    std::span<const double>(out_grid), emit);
    tr.truncated = res.status == ode::Status::overflow;
    tr.steps = res.stats.accepted + res.stats.rejected;
    return tr;
}

Mat2 propagate_matrix(const HamiltonianFn& H, double t0, double t1, const IntegratorConfig& cfg) {
    // Columns of U stacked as (u11, u21, u12, u22).
    auto rhs = [&H](double t, const ode::State<4>& y, ode::State<4>& dy) {
        const Mat2 h = H(t);
        for (int c = 0; c < 2; ++c) {
            const cplx a = y[2 * c], b = y[2 * c + 1];
            dy[2 * c] = -I * (h.m11 * a + h.m12 * b);
            dy[2 * c + 1] = -I * (h.m21 * a + h.m22 * b);
        }
    };
    auto ignore = [](double, const ode::State<4>&) {};
    const auto res = ode::dopri5<4>(rhs, t0, ode::State<4>{1.0, 0.0, 0.0, 1.0}, t1, to_options(cfg),
                                    std::span<const double>(), ignore);
    if (res.status == ode::Status::overflow) throw NumericError("propagator overflowed before t1");
    return {res.y[0], res.y[2], res.y[1], res.y[3]};
}

RoundTrip gauge_roundtrip(const ModelSpec& spec, const Vec2& psi0, double t0, double t1,
                          const IntegratorConfig& cfg, const std::vector<double>& out_grid) {
    RoundTrip rt;
    GaugeTracker gt(spec);
    gt.advance(t0);
    const Vec2 chi0 = gt.A_inv() * psi0;

    rt.orig = propagate_state([&spec](double t) { return hamiltonian(spec, t); }, psi0, t0, t1, cfg, out_grid,
                              Frame::original);
    rt.eff = propagate_state([&spec](double t) { return effective_closed(spec, t); }, chi0, t0, t1, cfg, out_grid,
                             Frame::effective);

    const std::size_t n = std::min(rt.orig.size(), rt.eff.size());
    for (std::size_t k = 0; k < n; ++k) {
        gt.advance(rt.orig.t[k]);
        const Vec2 mapped = gt.A() * rt.eff.states[k];
        const Vec2& psi = rt.orig.states[k];
        const double d = std::sqrt(std::norm(psi[0] - mapped[0]) + std::norm(psi[1] - mapped[1]));
        rt.max_deviation = std::max(rt.max_deviation, d / (1.0 + norm(psi)));
    }
    return rt;
}

}  // namespace ptkit
