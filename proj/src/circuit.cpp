#include "ptkit/circuit.hpp"

#include "ptkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptkit::circuit {

using modfn::Expr;

const char* mode_name(Mode m) noexcept { return m == Mode::LC ? "LC" : "RLC"; }

double CircuitSpec::omega0() const { return 1.0 / std::sqrt(L0 * C0); }

void CircuitSpec::check() const {
    if (!(L0 > 0.0) || !std::isfinite(L0)) throw ConfigError("circuit: L0 must be positive");
    if (!(C0 > 0.0) || !std::isfinite(C0)) throw ConfigError("circuit: C0 must be positive");
    if (mode == Mode::LC && resistance) throw ConfigError("circuit: LC mode takes no resistance");
}

Expr CircuitSpec::resistance_expr() const {
    if (mode == Mode::LC) return Expr::number(0.0);
    if (resistance) return *resistance;
    return Expr::number(L0) * f.derivative();
}

CircuitSpec exponential(double L0, double C0, double gamma, Mode mode) {
    CircuitSpec c;
    c.L0 = L0;
    c.C0 = C0;
    c.f = Expr::parse("exp(-g*t)");
    c.params.set("g", gamma);
    c.mode = mode;
    return c;
}

CircuitSpec periodic_drive(double L0, double C0, double eps1, double eps2, double Omega0, Mode mode) {
    CircuitSpec c;
    c.L0 = L0;
    c.C0 = C0;
    c.f = Expr::parse("e1*cos(W*t)+e2");
    c.params.set("e1", eps1);
    c.params.set("e2", eps2);
    c.params.set("W", Omega0);
    c.mode = mode;
    return c;
}

ModelSpec to_model(const CircuitSpec& c) {
    c.check();
    ModelSpec m;
    m.params = c.params;
    m.nu = cplx(0.0, -1.0 / c.C0);
    m.nu_prime = cplx(0.0, 1.0 / c.L0);
    m.f1 = modfn::TimeFunction(c.f, c.params);
    m.f2 = modfn::TimeFunction::constant(1.0);
    m.omega1 = modfn::TimeFunction::constant(0.0);
    if (c.mode == Mode::LC) {
        m.omega2 = modfn::TimeFunction::constant(0.0);
    } else {
        const Expr w2 = Expr::imag_unit() * c.resistance_expr() / (Expr::number(c.L0) * c.f);
        m.omega2 = modfn::TimeFunction(w2, c.params);
    }
    m.gauge_prefactor = {1.0 / std::sqrt(c.C0), 1.0 / std::sqrt(c.L0)};
    return m;
}

Mat2 kirchhoff_matrix(const CircuitSpec& c, double t) {
    const cplx f = c.f.eval(t, c.params);
    const cplx L = c.L0 * f;
    const cplx C = c.C0 / f;
    const cplx R = c.resistance_expr().eval(t, c.params);
    const cplx i(0.0, 1.0);
    return {0.0, -i / C, i / L, i * R / L};
}

EnergyTrace simulate_energy(const CircuitSpec& c, double V0, double I0, double t1, const IntegratorConfig& cfg,
                            double dt_out) {
    const ModelSpec m = to_model(c);
    const std::vector<double> grid = uniform_grid(0.0, t1, dt_out);
    for (double t : grid) {
        const cplx f = m.f1(t);
        if (!(f.real() > 0.0) || std::abs(f.imag()) > 1e-12 * std::abs(f.real())) {
            throw ConfigError("circuit: f must be real and positive (f(" + std::to_string(t) + ") not)");
        }
    }
    EnergyTrace out;
    out.trajectory = propagate_state([&m](double t) { return hamiltonian(m, t); }, Vec2{V0, I0}, 0.0, t1, cfg,
                                          grid, Frame::original);
    const Trajectory& tr = out.trajectory;
    out.truncated = tr.truncated;
    out.samples.reserve(tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const double t = tr.t[k];
        const Vec2& s = tr.states[k];
        const double f = m.f1(t).real();
        const double L = c.L0 * f, C = c.C0 / f;
        EnergySample e{t, s[0].real(), s[1].real(), 0, 0, 0};
        e.U_L = 0.5 * L * e.I * e.I;
        e.U_C = 0.5 * C * e.V * e.V;
        e.total = e.U_L + e.U_C;
        out.samples.push_back(e);
        const double im = std::max(std::abs(s[0].imag()), std::abs(s[1].imag()));
        out.max_imag_residual = std::max(out.max_imag_residual, im / (1.0 + norm(s)));
    }
    return out;
}

double tail_log_slope(const EnergyTrace& tr, double t_from) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& e : tr.samples) {
        if (e.t < t_from || !(e.total > 0.0)) continue;
        const double y = std::log(e.total);
        n += 1;
        sx += e.t;
        sy += y;
        sxx += e.t * e.t;
        sxy += e.t * y;
    }
    if (n < 2) throw NumericError("tail_log_slope: fewer than two samples in the tail");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Threshold static_threshold(double L0, double C0, double gamma, Mode mode) {
    const CircuitSpec c = exponential(L0, C0, gamma, mode);
    const double w0 = c.omega0();
    const double G = mode == Mode::RLC ? gamma : gamma / 2.0;
    Threshold th;
    th.gamma_c = mode == Mode::RLC ? w0 : 2.0 * w0;
    const cplx root = std::sqrt(cplx(w0 * w0 - G * G, 0.0));
    th.eigs_closed = {-root, root};
    const Eig2 e = eig(effective_numeric(to_model(c), 0.0));
    th.eigs_numeric = e.values;
    th.broken = gamma > th.gamma_c;
    return th;
}

floquet::Family drive_family(double L0, double C0, double eps1, double eps2, Mode mode) {
    return [=](double W) {
        if (!(W > 0.0)) throw ConfigError("drive frequency must be positive");
        auto spec = std::make_shared<const ModelSpec>(to_model(periodic_drive(L0, C0, eps1, eps2, W, mode)));
        floquet::PeriodicGenerator g;
        g.T = 2.0 * std::numbers::pi / W;
        g.H = [spec](double t) { return effective_closed(*spec, t); };
        return g;
    };
}

}  // namespace ptkit::circuit
