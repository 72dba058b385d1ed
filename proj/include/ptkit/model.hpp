#pragma once

// Two-level Hamiltonian family H(t) = [[w1, nu f1/f2], [nu' f2/f1, w2]] and
// the non-unitary gauge A(t) that maps it onto a traceless generator with
// balanced gain/loss -i Gamma(t) sz and constant couplings.

#include "ptkit/linalg2.hpp"
#include "ptkit/modfn.hpp"

#include <array>
#include <string>
#include <vector>

namespace ptkit {

using modfn::TimeFunction;

struct ModelSpec {
    cplx nu{1.0};
    cplx nu_prime{1.0};
    TimeFunction f1 = TimeFunction::constant(1.0);
    TimeFunction f2 = TimeFunction::constant(1.0);
    TimeFunction omega1 = TimeFunction::constant(0.0);
    TimeFunction omega2 = TimeFunction::constant(0.0);
    modfn::ParamMap params;
    /// Lower limit of the phase integral in A(t).
    double t_ref = 0.0;
    /// Constant diagonal D applied on the left of A(t). Rescales the effective
    /// couplings to nu d2/d1 and nu' d1/d2.
    std::array<cplx, 2> gauge_prefactor{1.0, 1.0};
};

/// Throws ConfigError when couplings are not finite / both zero, or when f1, f2
/// vanish or any input is non-finite at one of `samples` points of [t0, t1].
void validate(const ModelSpec& spec, double t0, double t1, int samples = 257);

cplx omega_plus(const ModelSpec& spec, double t);
cplx omega_minus(const ModelSpec& spec, double t);

/// Throws ModulationZero if |f1| or |f2| is below 1e-12 of the local scale.
Mat2 hamiltonian(const ModelSpec& spec, double t);

/// Gamma = i Omega_- + (1/2) d/dt ln(f1/f2).
cplx gamma_eff(const ModelSpec& spec, double t);

/// Couplings of the effective frame, including the gauge prefactor.
cplx nu_eff(const ModelSpec& spec);
cplx nu_prime_eff(const ModelSpec& spec);

/// A(t) = D exp(-i int_{t_ref}^t Omega_+) diag(sqrt(f1/f2), sqrt(f2/f1)),
/// square root continued from the principal value at t_ref.
Mat2 gauge(const ModelSpec& spec, double t);

/// Incremental evaluation of A(t) and dA/dt along a monotone time grid.
/// Cheaper than repeated gauge() calls when the grid is long.
class GaugeTracker {
public:
    explicit GaugeTracker(const ModelSpec& spec);
    /// Moves the tracker to t (either direction).
    void advance(double t);
    double time() const noexcept { return t_; }
    Mat2 A() const;
    Mat2 A_inv() const;
    Mat2 A_dot() const;
    /// int_{t_ref}^t Omega_+ dt'
    cplx phase_integral() const noexcept { return phase_; }
    cplx sqrt_ratio() const noexcept { return sqrt_r_; }

private:
    const ModelSpec* spec_;
    double t_;
    cplx phase_;
    cplx sqrt_r_;
};

Mat2 effective_closed(const ModelSpec& spec, double t);
/// A^-1 H A - i A^-1 dA/dt evaluated directly.
Mat2 effective_numeric(const ModelSpec& spec, double t);

/// Callable view of the gauge quantities.
class EffectiveFrame {
public:
    explicit EffectiveFrame(ModelSpec spec) : spec_(std::move(spec)) {}
    cplx Gamma(double t) const { return gamma_eff(spec_, t); }
    cplx Omega_plus(double t) const { return omega_plus(spec_, t); }
    cplx Omega_minus(double t) const { return omega_minus(spec_, t); }
    Mat2 A(double t) const { return gauge(spec_, t); }
    Mat2 A_inv(double t) const { return inv(gauge(spec_, t)); }
    Mat2 H_eff(double t) const { return effective_closed(spec_, t); }
    const ModelSpec& spec() const noexcept { return spec_; }

private:
    ModelSpec spec_;
};

struct Spectra {
    /// Omega_+ -/+ sqrt(Omega_-^2 + nu nu')
    std::array<cplx, 2> lambda_orig;
    /// -/+ sqrt(nu nu' - Gamma^2)
    std::array<cplx, 2> lambda_eff;
};

Spectra spectra(const ModelSpec& spec, double t);

struct Eigenbasis {
    Vec2 chi_minus, chi_plus;
    Vec2 psi_minus, psi_plus;
    /// Eigenvalues that belong to the vectors above.
    cplx lambda_chi_minus, lambda_chi_plus;
    cplx lambda_psi_minus, lambda_psi_plus;
    cplx g, g_bar;
    /// cot g_bar - (cot g - i W / (2 rho f1 f2)), W = f1' f2 - f1 f2'.
    cplx wronskian_identity_residual;
    /// g recovered from g_bar through i cot g = i cot g_bar - b, plus k pi.
    cplx g_from_g_bar;
    int branch_k = 0;
    double residual_eff = 0.0;
    double residual_orig = 0.0;
    bool ep = false;
};

/// Mixing angles from cot g_bar = -i Gamma / rho and cot g = Omega_- / rho,
/// rho = sqrt(nu) sqrt(nu'). Sets `ep` when either frame sits at a
/// coalescence point; vectors are then the degenerate limit.
Eigenbasis eigenbasis(const ModelSpec& spec, double t);

struct EPSample {
    double t;
    cplx B, B_bar, b;
    double dist_orig, dist_eff;
};

struct EPReport {
    std::vector<EPSample> samples;
    std::vector<double> orig_crossings;
    std::vector<double> eff_crossings;
    double tol_ep = 1e-6;
};

/// B = Omega_-/nu, B_bar = i Gamma/nu, b = d/dt ln(f1/f2) / (2 nu), with
/// B_bar = -B + i b. Distances are to the nearer of +i and -i.
EPReport ep_report(const ModelSpec& spec, const std::vector<double>& t_grid, double tol_ep = 1e-6);

/// pi/2 - atan(z).
cplx arccot(cplx z);

}  // namespace ptkit
