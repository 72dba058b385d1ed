#pragma once

// Adaptive integration of i dpsi/dt = H(t) psi for states and 2x2 propagators.

#include "ptkit/linalg2.hpp"
#include "ptkit/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ptkit {

using HamiltonianFn = std::function<Mat2(double)>;

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  ///< 0 picks a starting step automatically
    double h_min = 1e-14;
    long max_steps = 5'000'000;

    /// Throws ConfigError on non-positive tolerances or h_min.
    void check() const;
};

enum class Frame { original, effective };

const char* frame_name(Frame f) noexcept;

struct Trajectory {
    Frame frame = Frame::original;
    std::vector<double> t;
    std::vector<Vec2> states;
    /// Set when |psi| passed 1e150; samples stop at the last finite state.
    bool truncated = false;
    long steps = 0;

    std::size_t size() const noexcept { return t.size(); }
    double norm(std::size_t k) const { return ptkit::norm(states[k]); }
    double density1(std::size_t k) const { return std::norm(states[k][0]); }
    double density2(std::size_t k) const { return std::norm(states[k][1]); }
};

/// Uniform grid t0, t0+dt, ... ending exactly at t1.
std::vector<double> uniform_grid(double t0, double t1, double dt);

/// Solves dpsi/dt = -i H(t) psi from t0 to t1 and samples it on `out_grid`
/// (ascending, within [t0, t1]).
Trajectory propagate_state(const HamiltonianFn& H, const Vec2& psi0, double t0, double t1,
                           const IntegratorConfig& cfg, const std::vector<double>& out_grid,
                           Frame frame = Frame::original);

/// U(t1, t0) with dU/dt = -i H U, U(t0) = I. Throws NumericError on overflow.
Mat2 propagate_matrix(const HamiltonianFn& H, double t0, double t1, const IntegratorConfig& cfg);

struct RoundTrip {
    Trajectory orig;
    Trajectory eff;
    /// max_t |Psi(t) - A(t) chi(t)| / (1 + |Psi(t)|)
    double max_deviation = 0.0;
};

/// Propagates Psi under H(t) and chi under H_eff(t) from chi(t0) = A(t0)^-1 psi0
/// and compares Psi with A chi on the grid.
RoundTrip gauge_roundtrip(const ModelSpec& spec, const Vec2& psi0, double t0, double t1,
                          const IntegratorConfig& cfg, const std::vector<double>& out_grid);

}  // namespace ptkit
