#pragma once

// One-period propagators of periodic generators, quasienergies and PT phase
// labels, plus parameter sweeps over families of periodic generators.

#include "ptkit/linalg2.hpp"
#include "ptkit/model.hpp"
#include "ptkit/propagate.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ptkit::floquet {

enum class Phase { unbroken, broken, boundary };

const char* phase_name(Phase p) noexcept;

inline constexpr double kTolPhase = 1e-6;
/// Points sampled by the periodicity check and its tolerance (relative to
/// max(1, |H|)).
inline constexpr int kPeriodicitySamples = 16;
inline constexpr double kPeriodicityTol = 1e-9;

struct FloquetResult {
    double T = 0.0;
    Mat2 U;
    std::array<cplx, 2> lambda{};
    /// i ln(lambda)/T with Re folded into (-pi/T, pi/T].
    std::array<cplx, 2> eps{};
    /// Eigenvector overlap of U(T), see linalg2 eig.
    double coalescence = 0.0;
    Phase phase = Phase::unbroken;

    double max_abs_lambda() const;
    /// max_k | |lambda_k| - 1 |
    double max_unit_deviation() const;
};

/// i ln(lambda)/T on the principal branch, folded into the first zone.
cplx quasienergy(cplx lambda, double T);

/// Label from eigenvalue moduli and eigenvector overlap: boundary when
/// max||lambda|-1| < 10 tol and coalescence >= 1 - 1e-4, otherwise unbroken
/// when max||lambda|-1| < tol, otherwise broken.
Phase classify(const std::array<cplx, 2>& lambda, double coalescence, double tol_phase = kTolPhase);

/// Throws ConfigError unless |H(t+T) - H(t)| <= 1e-9 max(1, |H(t)|) at 16
/// points of [0, T).
void check_periodic(const HamiltonianFn& H, double T);

/// U(T) for a T-periodic generator, its eigenvalues and quasienergies.
FloquetResult monodromy(const HamiltonianFn& H, double T, const IntegratorConfig& cfg,
                        double tol_phase = kTolPhase);

/// A periodic generator and its period.
struct PeriodicGenerator {
    HamiltonianFn H;
    double T = 0.0;
};

using Family = std::function<PeriodicGenerator(double)>;

struct PhasePoint {
    double value = 0.0;
    std::array<double, 2> abs_lambda{};
    std::array<cplx, 2> eps{};
    std::array<cplx, 2> lambda{};
    Phase phase = Phase::unbroken;
    /// False when the point failed; `error` holds the message.
    bool ok = true;
    std::string error;
};

struct SweepResult {
    std::vector<PhasePoint> points;
    /// Midpoints between neighbours where max|lambda| - 1 - tol changes sign.
    std::vector<double> boundaries;
};

/// Evaluates the family at every value. Points run concurrently with OpenMP,
/// capped by PTKIT_THREADS when set; results keep the order of `values`.
/// Failing points are recorded and the sweep continues.
SweepResult phase_sweep(const Family& family, const std::vector<double>& values, const IntegratorConfig& cfg,
                        double tol_phase = kTolPhase);

/// Single-threaded reference of phase_sweep.
SweepResult phase_sweep_serial(const Family& family, const std::vector<double>& values,
                               const IntegratorConfig& cfg, double tol_phase = kTolPhase);

/// Thread count used by phase_sweep: PTKIT_THREADS if it is a positive
/// integer, otherwise the OpenMP default. 1 without OpenMP.
int sweep_threads();

struct QuasienergyTrace {
    Trajectory trajectory;
    FloquetResult floquet;
};

/// Propagates psi0 under the original-frame H(t) of `spec` over n_periods
/// periods, sampled `samples_per_period` times per period, together with the
/// monodromy of the same H(t).
QuasienergyTrace quasienergy_trace(const ModelSpec& spec, double T, int n_periods, const Vec2& psi0,
                                   const IntegratorConfig& cfg, int samples_per_period = 64);

}  // namespace ptkit::floquet
