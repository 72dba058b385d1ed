#include "ptkit/model.hpp"

#include "ptkit/error.hpp"
#include "ptkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptkit {

namespace {

const cplx I(0.0, 1.0);

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// A modulation counts as vanishing when it is below 1e-12 of its local
// scale |f| + |f'|, i.e. within ~1e-12 time units of a simple zero. Pure
// exponential decay never trips this.
void check_modulations(const ModelSpec& s, cplx f1, cplx f2, double t) {
    auto tiny = [](cplx f, cplx df) { return std::abs(f) == 0.0 || std::abs(f) < 1e-12 * (std::abs(f) + std::abs(df)); };
    if (tiny(f1, s.f1.derivative(t)) || tiny(f2, s.f2.derivative(t)) || !finite(f1 / f2) || !finite(f2 / f1)) {
        throw ModulationZero("modulation vanishes at t = " + std::to_string(t) + " (|f1| = " +
                             std::to_string(std::abs(f1)) + ", |f2| = " + std::to_string(std::abs(f2)) + ")");
    }
}

// f1/f2 and its derivative.
struct Ratio {
    cplx r, dr;
};

Ratio ratio(const ModelSpec& s, double t) {
    const cplx f1 = s.f1(t), f2 = s.f2(t);
    check_modulations(s, f1, f2, t);
    return {f1 / f2, (s.f1.derivative(t) * f2 - f1 * s.f2.derivative(t)) / (f2 * f2)};
}

// d/dt ln(f1/f2)
cplx log_ratio_rate(const ModelSpec& s, double t) {
    const cplx f1 = s.f1(t), f2 = s.f2(t);
    check_modulations(s, f1, f2, t);
    return s.f1.derivative(t) / f1 - s.f2.derivative(t) / f2;
}

}  // namespace

cplx arccot(cplx z) { return std::numbers::pi / 2 - std::atan(z); }

void validate(const ModelSpec& spec, double t0, double t1, int samples) {
    if (!finite(spec.nu) || !finite(spec.nu_prime)) throw ConfigError("couplings must be finite");
    if (std::abs(spec.nu) + std::abs(spec.nu_prime) == 0.0) throw ConfigError("couplings are both zero");
    if (!finite(spec.gauge_prefactor[0]) || !finite(spec.gauge_prefactor[1]) ||
        spec.gauge_prefactor[0] == 0.0 || spec.gauge_prefactor[1] == 0.0) {
        throw ConfigError("gauge prefactor must be finite and nonzero");
    }
    if (!(t1 >= t0)) throw ConfigError("time window must satisfy t1 >= t0");
    const int n = std::max(samples, 2);
    for (int k = 0; k < n; ++k) {
        const double t = t0 + (t1 - t0) * k / (n - 1);
        cplx vals[8];
        try {
            vals[0] = spec.f1(t);
            vals[1] = spec.f2(t);
            vals[2] = spec.omega1(t);
            vals[3] = spec.omega2(t);
            vals[4] = spec.f1.derivative(t);
            vals[5] = spec.f2.derivative(t);
            vals[6] = spec.omega1.derivative(t);
            vals[7] = spec.omega2.derivative(t);
            check_modulations(spec, vals[0], vals[1], t);
        } catch (const ModulationZero& e) {
            throw ConfigError(e.what());
        } catch (const DomainError& e) {
            throw ConfigError(std::string("model input undefined: ") + e.what());
        }
        for (const cplx& v : vals) {
            if (!finite(v)) throw ConfigError("model input is not finite at t = " + std::to_string(t));
        }
    }
}

cplx omega_plus(const ModelSpec& spec, double t) { return (spec.omega1(t) + spec.omega2(t)) / 2.0; }
cplx omega_minus(const ModelSpec& spec, double t) { return (spec.omega1(t) - spec.omega2(t)) / 2.0; }

Mat2 hamiltonian(const ModelSpec& spec, double t) {
    const cplx f1 = spec.f1(t), f2 = spec.f2(t);
    check_modulations(spec, f1, f2, t);
    return {spec.omega1(t), spec.nu * f1 / f2, spec.nu_prime * f2 / f1, spec.omega2(t)};
}

cplx gamma_eff(const ModelSpec& spec, double t) { return I * omega_minus(spec, t) + 0.5 * log_ratio_rate(spec, t); }

cplx nu_eff(const ModelSpec& spec) { return spec.nu * spec.gauge_prefactor[1] / spec.gauge_prefactor[0]; }
cplx nu_prime_eff(const ModelSpec& spec) { return spec.nu_prime * spec.gauge_prefactor[0] / spec.gauge_prefactor[1]; }

// ---- gauge ------------------------------------------------------------------

GaugeTracker::GaugeTracker(const ModelSpec& spec) : spec_(&spec), t_(spec.t_ref), phase_(0.0) {
    const Ratio r = ratio(spec, spec.t_ref);
    sqrt_r_ = std::sqrt(r.r);
}

void GaugeTracker::advance(double t) {
    if (t == t_) return;
    const ModelSpec& s = *spec_;
    phase_ += integrate([&s](double x) { return omega_plus(s, x); }, t_, t);

    // Continue sqrt(f1/f2): take the root nearest the previous one, with steps
    // small enough that the choice is unambiguous.
    const double span = t - t_;
    double h = span / 8.0;
    double cur = t_;
    cplx sq = sqrt_r_;
    const double h_floor = 1e-12 * (1.0 + std::abs(t));
    while (cur != t) {
        if (std::abs(h) > std::abs(t - cur)) h = t - cur;
        const double next = (std::abs(t - (cur + h)) < h_floor) ? t : cur + h;
        cplx r;
        try {
            r = ratio(s, next).r;
        } catch (const ModulationZero& e) {
            throw BranchTrackingError(std::string("sqrt(f1/f2) cannot be continued: ") + e.what());
        }
        cplx c = std::sqrt(r);
        if (std::abs(c + sq) < std::abs(c - sq)) c = -c;
        if (std::abs(c - sq) > 0.25 * std::abs(sq)) {
            h /= 2.0;
            if (std::abs(h) < h_floor) {
                throw BranchTrackingError("f1/f2 passes through zero near t = " + std::to_string(cur));
            }
            continue;
        }
        sq = c;
        cur = next;
        h *= 1.5;
    }
    sqrt_r_ = sq;
    t_ = t;
}

Mat2 GaugeTracker::A() const {
    const cplx e = std::exp(-I * phase_);
    const auto& d = spec_->gauge_prefactor;
    return Mat2::diag(d[0] * e * sqrt_r_, d[1] * e / sqrt_r_);
}

Mat2 GaugeTracker::A_inv() const {
    const cplx e = std::exp(I * phase_);
    const auto& d = spec_->gauge_prefactor;
    return Mat2::diag(e / (d[0] * sqrt_r_), e * sqrt_r_ / d[1]);
}

Mat2 GaugeTracker::A_dot() const {
    const Ratio r = ratio(*spec_, t_);
    const cplx dphi = -I * omega_plus(*spec_, t_);
    const cplx e = std::exp(-I * phase_);
    const auto& d = spec_->gauge_prefactor;
    const cplx s = sqrt_r_;
    return Mat2::diag(d[0] * e * (dphi * s + r.dr / (2.0 * s)), d[1] * e * (dphi / s - r.dr / (2.0 * s * r.r)));
}

Mat2 gauge(const ModelSpec& spec, double t) {
    GaugeTracker g(spec);
    g.advance(t);
    return g.A();
}

Mat2 effective_closed(const ModelSpec& spec, double t) {
    const cplx G = gamma_eff(spec, t);
    return {-I * G, nu_eff(spec), nu_prime_eff(spec), I * G};
}

Mat2 effective_numeric(const ModelSpec& spec, double t) {
    GaugeTracker g(spec);
    g.advance(t);
    const Mat2 A = g.A();
    const Mat2 Ainv = inv(A);
    return Ainv * hamiltonian(spec, t) * A - I * (Ainv * g.A_dot());
}

// ---- spectra ------------------------------------------------------------------

Spectra spectra(const ModelSpec& spec, double t) {
    const cplx op = omega_plus(spec, t), om = omega_minus(spec, t);
    const cplx G = gamma_eff(spec, t);
    const cplx ro = std::sqrt(om * om + spec.nu * spec.nu_prime);
    const cplx re = std::sqrt(nu_eff(spec) * nu_prime_eff(spec) - G * G);
    return {{op - ro, op + ro}, {-re, re}};
}

namespace {

Vec2 normalized(Vec2 v) {
    const double n = norm(v);
    if (n == 0.0) return v;
    return {v[0] / n, v[1] / n};
}

double eigen_residual(const Mat2& m, const Vec2& v, cplx lambda) {
    const Vec2 mv = m * v;
    const double scale = std::max(norm(m), 1e-300);
    return std::sqrt(std::norm(mv[0] - lambda * v[0]) + std::norm(mv[1] - lambda * v[1])) / scale;
}

// cot(z) = +-i is where arccot blows up: the two eigenvectors merge there.
bool at_cot_singularity(cplx c) { return !finite(c) || std::abs(c * c + 1.0) < 1e-8; }

}  // namespace

Eigenbasis eigenbasis(const ModelSpec& spec, double t) {
    Eigenbasis out;
    const cplx G = gamma_eff(spec, t);
    const cplx om = omega_minus(spec, t);
    const cplx f1 = spec.f1(t), f2 = spec.f2(t);
    const cplx w1 = spec.omega1(t);

    const cplx ne = nu_eff(spec), npe = nu_prime_eff(spec);
    const cplx sne = std::sqrt(ne), snpe = std::sqrt(npe);
    const cplx rho_eff = sne * snpe;
    const cplx sn = std::sqrt(spec.nu), snp = std::sqrt(spec.nu_prime);
    const cplx rho = sn * snp;

    if (rho_eff == 0.0 || rho == 0.0) {
        out.ep = true;
        return out;
    }

    const cplx cot_gb = -I * G / rho_eff;
    const cplx cot_g = om / rho;
    out.ep = at_cot_singularity(cot_gb) || at_cot_singularity(cot_g);

    out.g_bar = arccot(cot_gb);
    out.g = arccot(cot_g);

    {
        const cplx s = std::sin(out.g_bar / 2.0), c = std::cos(out.g_bar / 2.0);
        out.chi_minus = normalized({-sne * s, snpe * c});
        out.chi_plus = normalized({sne * c, snpe * s});
        out.lambda_chi_minus = I * G - rho_eff * (s / c);
        out.lambda_chi_plus = -I * G + rho_eff * (s / c);
    }
    {
        const cplx s = std::sin(out.g / 2.0), c = std::cos(out.g / 2.0);
        out.psi_minus = normalized({-sn * f1 * s, snp * f2 * c});
        out.psi_plus = normalized({sn * f1 * c, snp * f2 * s});
        out.lambda_psi_minus = w1 - rho * (c / s);
        out.lambda_psi_plus = w1 + rho * (s / c);
    }

    const cplx W = spec.f1.derivative(t) * f2 - f1 * spec.f2.derivative(t);
    out.wronskian_identity_residual = cot_gb - (cot_g * rho / rho_eff - I * W / (2.0 * rho_eff * f1 * f2));

    const cplx b = log_ratio_rate(spec, t) / (2.0 * spec.nu);
    const cplx g18 = arccot((rho_eff * cot_gb + I * spec.nu * b) / rho);
    out.branch_k = static_cast<int>(std::lround((out.g - g18).real() / std::numbers::pi));
    out.g_from_g_bar = g18 + static_cast<double>(out.branch_k) * std::numbers::pi;

    if (!out.ep) {
        const Mat2 He = effective_closed(spec, t);
        const Mat2 H = hamiltonian(spec, t);
        out.residual_eff = std::max(eigen_residual(He, out.chi_minus, out.lambda_chi_minus),
                                    eigen_residual(He, out.chi_plus, out.lambda_chi_plus));
        out.residual_orig = std::max(eigen_residual(H, out.psi_minus, out.lambda_psi_minus),
                                     eigen_residual(H, out.psi_plus, out.lambda_psi_plus));
    }
    return out;
}

EPReport ep_report(const ModelSpec& spec, const std::vector<double>& t_grid, double tol_ep) {
    if (spec.nu == 0.0) throw ConfigError("EP coordinates need nu != 0");
    EPReport rep;
    rep.tol_ep = tol_ep;
    rep.samples.reserve(t_grid.size());
    auto dist = [](cplx z) { return std::min(std::abs(z - I), std::abs(z + I)); };
    for (double t : t_grid) {
        EPSample s;
        s.t = t;
        s.B = omega_minus(spec, t) / spec.nu;
        s.B_bar = I * gamma_eff(spec, t) / spec.nu;
        s.b = log_ratio_rate(spec, t) / (2.0 * spec.nu);
        s.dist_orig = dist(s.B);
        s.dist_eff = dist(s.B_bar);
        if (s.dist_orig < tol_ep) rep.orig_crossings.push_back(t);
        if (s.dist_eff < tol_ep) rep.eff_crossings.push_back(t);
        rep.samples.push_back(s);
    }
    return rep;
}

}  // namespace ptkit
