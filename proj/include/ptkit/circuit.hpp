#pragma once

// Series circuit with modulated elements L(t) = L0 f(t), C(t) = C0 / f(t)
// and resistance R(t). State Psi = (V, I) with
//   dV/dt = -I/C,   dI/dt = V/L + (R/L) I,
// i.e. i dPsi/dt = H Psi, H = i [[0, -1/C], [1/L, R/L]].

#include "ptkit/floquet.hpp"
#include "ptkit/model.hpp"
#include "ptkit/modfn.hpp"
#include "ptkit/propagate.hpp"

#include <array>
#include <optional>
#include <vector>

namespace ptkit::circuit {

enum class Mode { LC, RLC };

const char* mode_name(Mode m) noexcept;

struct CircuitSpec {
    double L0 = 1.0;
    double C0 = 1.0;
    modfn::Expr f = modfn::Expr::number(1.0);
    modfn::ParamMap params;
    /// RLC: R = L0 f' unless `resistance` is given. LC: R = 0.
    Mode mode = Mode::RLC;
    std::optional<modfn::Expr> resistance;

    /// 1/sqrt(L0 C0)
    double omega0() const;
    /// Throws ConfigError for non-positive L0, C0, or in LC mode with a
    /// resistance override.
    void check() const;
    /// Expression for R(t) (0 in LC mode).
    modfn::Expr resistance_expr() const;
};

/// f = exp(-g t) with g bound to gamma.
CircuitSpec exponential(double L0, double C0, double gamma, Mode mode);
/// f = e1 cos(W t) + e2.
CircuitSpec periodic_drive(double L0, double C0, double eps1, double eps2, double Omega0, Mode mode);

/// f1 = f, f2 = 1, w1 = 0, w2 = i R/(L0 f), nu = -i/C0, nu' = i/L0 and gauge
/// prefactor diag(C0^-1/2, L0^-1/2), which makes the effective couplings
/// -i w0 and i w0.
ModelSpec to_model(const CircuitSpec& c);

/// i [[0, -1/C(t)], [1/L(t), R(t)/L(t)]]
Mat2 kirchhoff_matrix(const CircuitSpec& c, double t);

struct EnergySample {
    double t;
    double V, I;
    double U_L, U_C, total;
};

struct EnergyTrace {
    std::vector<EnergySample> samples;
    /// Complex (V, I) states behind the samples.
    Trajectory trajectory;
    bool truncated = false;
    /// Largest |Im V|, |Im I| relative to 1 + |Psi| over the run.
    double max_imag_residual = 0.0;
};

/// Propagates (V0, I0) under the original-frame H(t) on [0, t1] and
/// evaluates U_L = L I^2/2, U_C = C V^2/2 with the modulated L(t), C(t).
/// Throws ConfigError if f <= 0 somewhere on the output grid.
EnergyTrace simulate_energy(const CircuitSpec& c, double V0, double I0, double t1, const IntegratorConfig& cfg,
                            double dt_out = 0.05);

/// Least-squares slope of ln(total energy) over samples with t >= t_from.
double tail_log_slope(const EnergyTrace& tr, double t_from);

struct Threshold {
    /// Decay rate at which the effective spectrum becomes complex: w0 in RLC
    /// mode, 2 w0 in LC mode (Gamma = -gamma there, -gamma/2 here).
    double gamma_c = 0.0;
    /// +-sqrt(w0^2 - Gamma^2) from the closed form.
    std::array<cplx, 2> eigs_closed{};
    /// Eigenvalues of the effective generator built by the gauge, at t = 0.
    std::array<cplx, 2> eigs_numeric{};
    bool broken = false;
};

/// Threshold and eigenvalues for f = exp(-gamma t).
Threshold static_threshold(double L0, double C0, double gamma, Mode mode);

/// Monodromy family for the periodic drive, swept over W. The generator is
/// the effective (traceless) H_eff of the circuit.
floquet::Family drive_family(double L0, double C0, double eps1, double eps2, Mode mode);

}  // namespace ptkit::circuit
