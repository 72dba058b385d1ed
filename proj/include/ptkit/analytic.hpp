#pragma once

// Closed-form solutions of the effective system in scaled time
// tau = sqrt(nu nu') t for three families of Gamma(tau):
//   (a) Gamma = gamma (constant)
//   (b) Gamma = -/+ tanh(tau)
//   (c) Gamma = alpha exp(i gamma tau) - beta
// The scaled system is
//   zeta_-' = -Gamma zeta_- - i nu~ zeta_+,   zeta_+' = -i nu~' zeta_- + Gamma zeta_+
// with nu~ = nu/s, nu~' = nu'/s, s = sqrt(nu nu').

#include "ptkit/linalg2.hpp"
#include "ptkit/model.hpp"
#include "ptkit/propagate.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace ptkit::analytic {

enum class Case { a, b_minus, b_plus, c };

const char* case_name(Case c) noexcept;

/// s = sqrt(nu nu'), principal root. Throws ConfigError when it vanishes.
cplx time_scale(cplx nu, cplx nu_prime);

/// Coefficients of the closed form next to the same quantities evaluated
/// from the tabulated coefficient formulas. Entries are ordered
/// (c1-, c2-, c1+, c2+); NaN marks a formula that is not available.
struct ConstantDiagnostics {
    std::array<cplx, 4> derived{};
    std::array<cplx, 4> tabulated{};
    /// max |derived - tabulated| over finite tabulated entries, NaN if none.
    double max_abs_diff = 0.0;
    bool tabulated_finite = true;
    std::string note;
};

class AnalyticSolution {
public:
    struct Impl {
        virtual ~Impl() = default;
        virtual Vec2 zeta(double tau) const = 0;
        virtual Vec2 dzeta(double tau) const = 0;
        virtual cplx gamma(double tau) const = 0;
    };

    AnalyticSolution(Case id, cplx nu, cplx nu_prime, Vec2 initial, std::shared_ptr<const Impl> impl,
                     ConstantDiagnostics diag);

    Case case_id() const noexcept { return id_; }
    Vec2 zeta(double tau) const { return impl_->zeta(tau); }
    /// Exact tau-derivative of zeta.
    Vec2 dzeta(double tau) const { return impl_->dzeta(tau); }
    /// Gamma in scaled units.
    cplx Gamma(double tau) const { return impl_->gamma(tau); }
    /// Scaled effective generator [[-i Gamma, nu~], [nu~', i Gamma]].
    Mat2 H_scaled(double tau) const;

    cplx scale() const noexcept { return scale_; }
    cplx nu() const noexcept { return nu_; }
    cplx nu_prime() const noexcept { return nu_prime_; }
    const Vec2& initial() const noexcept { return initial_; }
    const std::array<cplx, 4>& constants() const noexcept { return diag_.derived; }
    const ConstantDiagnostics& diagnostics() const noexcept { return diag_; }

private:
    Case id_;
    cplx nu_, nu_prime_, scale_;
    Vec2 initial_;
    std::shared_ptr<const Impl> impl_;
    ConstantDiagnostics diag_;
};

/// |zeta' + i H zeta| / (1 + |zeta|) with the exact derivative.
double first_order_residual(const AnalyticSolution& sol, double tau);
/// Same residual with zeta' from a 5-point central difference of zeta.
double first_order_residual_fd(const AnalyticSolution& sol, double tau, double h = 1e-3);

/// Case (a). At gamma_bar = sqrt(1 - gamma^2) = 0 the basis {1, tau} is used.
AnalyticSolution solve_case_a(cplx gamma, cplx a, cplx b, cplx nu, cplx nu_prime);

enum class Sign { minus, plus };

/// Case (b): Gamma = -tanh (minus) or +tanh (plus). The component that
/// is affine in tau is zeta_- for minus and zeta_+ for plus.
AnalyticSolution solve_case_b(Sign sign, cplx a, cplx b, cplx nu, cplx nu_prime);

struct CaseCParams {
    cplx alpha{0.5};
    cplx beta{0.3};
    cplx gamma_drive{1.0};

    cplx alpha2() const;  ///< sqrt(1 - beta^2)
    cplx alpha1() const;  ///< 1 / (-i beta + alpha2)
    cplx m() const;       ///< alpha2 / gamma
    cplx z0() const;      ///< -2 i alpha / gamma
    cplx z1() const;      ///< 2 alpha
    cplx z3() const;      ///< (z1 m - z1 z0) / (2 z0) - i beta
    /// -/+ (2 i alpha / gamma) exp(i gamma tau)
    cplx eta(Sign s, double tau) const;
    /// Kummer parameter a of the U/L basis for zeta_-/+.
    cplx kummer_a(Sign s) const;
    /// 1 + 2 alpha2 / gamma
    cplx kummer_b() const;
};

/// Case (c). Basis exp(-eta/2) eta^m {U(a, b, eta), L(-a, b - 1, eta)} for
/// each component, constants from the initial value problem. Throws
/// NumericError when the two basis functions are linearly dependent at 0.
AnalyticSolution solve_case_c(const CaseCParams& p, cplx a, cplx b, cplx nu, cplx nu_prime);

/// Basis functions of case (c) and their tau-derivatives, for checks.
struct CaseCBasis {
    cplx u, l, du, dl;
};
CaseCBasis case_c_basis(const CaseCParams& p, Sign s, double tau);

/// Psi(t) = exp(-int_{t_ref}^t (Gamma + i w2) dt') / sqrt(r(t_ref)) D (r zeta_-, zeta_+),
/// r = f1/f2, zeta evaluated at tau = s t. Requires a real positive scale
/// and Gamma_spec(t)/s matching the solution's Gamma (checked on the grid).
Trajectory reconstruct_original(const AnalyticSolution& sol, const ModelSpec& spec, const std::vector<double>& t_grid);

/// Completes a model whose effective Gamma is the constant (gamma1 - gamma2)/2
/// from given couplings: w_j = i f_j'/f_j - i gamma_j.
ModelSpec design_from_couplings(const modfn::Expr& f1, const modfn::Expr& f2, const modfn::ParamMap& params,
                                cplx gamma1, cplx gamma2, cplx nu, cplx nu_prime);

/// Same, from given potentials: f_j(t) = f_j(0) exp(int_0^t (gamma_j - i w_j)).
/// The integral is tabulated on [t_min, t_max] and refined by quadrature
/// on demand.
ModelSpec design_from_potentials(const modfn::TimeFunction& omega1, const modfn::TimeFunction& omega2,
                                 cplx gamma1, cplx gamma2, cplx nu, cplx nu_prime, double t_min, double t_max,
                                 cplx f1_0 = 1.0, cplx f2_0 = 1.0);

/// Toy waveguide model: f1 = sin(w t) + e1, f2 = cos(w t) + e2 with
/// w1 = i f1'/f1 + i g and w2 = i f2'/f2 - i g; Gamma = -g.
ModelSpec toy_model(double omega, double eps1, double eps2, double gamma, cplx nu, cplx nu_prime);

}  // namespace ptkit::analytic
