#include "ptkit/analytic.hpp"

#include "ptkit/error.hpp"
#include "ptkit/quadrature.hpp"
#include "ptkit/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptkit::analytic {

namespace {

const cplx I(0.0, 1.0);
const double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kNaNc(kNaN, kNaN);

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// sin(x)/x, smooth through x = 0.
cplx sinc(cplx x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

void fill_diff(ConstantDiagnostics& d) {
    double mx = -1.0;
    d.tabulated_finite = true;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!finite(d.tabulated[k])) {
            d.tabulated_finite = false;
            continue;
        }
        mx = std::max(mx, std::abs(d.derived[k] - d.tabulated[k]));
    }
    d.max_abs_diff = mx < 0.0 ? kNaN : mx;
}

}  // namespace

const char* case_name(Case c) noexcept {
    switch (c) {
        case Case::a: return "a";
        case Case::b_minus: return "b_minus";
        case Case::b_plus: return "b_plus";
        case Case::c: return "c";
    }
    return "?";
}

cplx time_scale(cplx nu, cplx nu_prime) {
    const cplx s = std::sqrt(nu * nu_prime);
    if (s == 0.0 || !finite(s)) throw ConfigError("time scale sqrt(nu nu') must be finite and nonzero");
    return s;
}

AnalyticSolution::AnalyticSolution(Case id, cplx nu, cplx nu_prime, Vec2 initial, std::shared_ptr<const Impl> impl,
                                   ConstantDiagnostics diag)
    : id_(id),
      nu_(nu),
      nu_prime_(nu_prime),
      scale_(time_scale(nu, nu_prime)),
      initial_(initial),
      impl_(std::move(impl)),
      diag_(std::move(diag)) {}

Mat2 AnalyticSolution::H_scaled(double tau) const {
    const cplx G = Gamma(tau);
    return {-I * G, nu_ / scale_, nu_prime_ / scale_, I * G};
}

double first_order_residual(const AnalyticSolution& sol, double tau) {
    const Vec2 z = sol.zeta(tau);
    const Vec2 dz = sol.dzeta(tau);
    const Vec2 hz = sol.H_scaled(tau) * z;
    const double r = std::sqrt(std::norm(dz[0] + I * hz[0]) + std::norm(dz[1] + I * hz[1]));
    return r / (1.0 + norm(z));
}

double first_order_residual_fd(const AnalyticSolution& sol, double tau, double h) {
    const Vec2 zm2 = sol.zeta(tau - 2 * h), zm1 = sol.zeta(tau - h);
    const Vec2 zp1 = sol.zeta(tau + h), zp2 = sol.zeta(tau + 2 * h);
    Vec2 dz;
    for (int k = 0; k < 2; ++k) dz[k] = (zm2[k] - 8.0 * zm1[k] + 8.0 * zp1[k] - zp2[k]) / (12.0 * h);
    const Vec2 z = sol.zeta(tau);
    const Vec2 hz = sol.H_scaled(tau) * z;
    const double r = std::sqrt(std::norm(dz[0] + I * hz[0]) + std::norm(dz[1] + I * hz[1]));
    return r / (1.0 + norm(z));
}

// ---- case (a) ------------------------------------------------------------------

namespace {

struct CaseA final : AnalyticSolution::Impl {
    cplx g, gb;
    Vec2 z0, d0;

    Vec2 zeta(double tau) const override {
        const cplx c = std::cos(gb * tau);
        const cplx s = tau * sinc(gb * tau);
        return {z0[0] * c + d0[0] * s, z0[1] * c + d0[1] * s};
    }
    Vec2 dzeta(double tau) const override {
        // d/dtau sin(gb tau)/gb = cos(gb tau); d/dtau cos(gb tau) = -gb^2 tau sinc
        const cplx c = std::cos(gb * tau);
        const cplx ms = -gb * gb * tau * sinc(gb * tau);
        return {z0[0] * ms + d0[0] * c, z0[1] * ms + d0[1] * c};
    }
    cplx gamma(double) const override { return g; }
};

}  // namespace

AnalyticSolution solve_case_a(cplx gamma, cplx a, cplx b, cplx nu, cplx nu_prime) {
    const cplx s = time_scale(nu, nu_prime);
    const cplx nt = nu / s, ntp = nu_prime / s;
    auto impl = std::make_shared<CaseA>();
    impl->g = gamma;
    impl->gb = std::sqrt(1.0 - gamma * gamma);
    impl->z0 = {a, b};
    impl->d0 = {-gamma * a - I * nt * b, -I * ntp * a + gamma * b};

    ConstantDiagnostics d;
    const cplx gb = impl->gb;
    if (std::abs(gb) < 1e-12) {
        // zeta = c1 tau + c2
        d.derived = {impl->d0[0], a, impl->d0[1], b};
        d.tabulated = {kNaNc, kNaNc, kNaNc, kNaNc};
        d.note = "gamma_bar = 0: basis {tau, 1}; tabulated formulas divide by gamma_bar";
    } else {
        // zeta = c1 exp(i gb tau) + c2 exp(-i gb tau)
        const cplx k = 1.0 / (I * gb);
        d.derived = {(a + impl->d0[0] * k) / 2.0, (a - impl->d0[0] * k) / 2.0, (b + impl->d0[1] * k) / 2.0,
                     (b - impl->d0[1] * k) / 2.0};
        d.tabulated = {(gb * (1.0 + I) * a + I * nt * b) / (2.0 * gb), (gb * (1.0 - I) * a - I * nt * b) / (2.0 * gb),
                     (I * ntp * a + gb * (1.0 - I) * b) / (2.0 * gb), (-I * ntp * a + gb * (1.0 + I) * b) / (2.0 * gb)};
        d.note = "basis exp(+i gamma_bar tau), exp(-i gamma_bar tau)";
    }
    fill_diff(d);
    return AnalyticSolution(Case::a, nu, nu_prime, {a, b}, std::move(impl), std::move(d));
}

// ---- case (b) ------------------------------------------------------------------

namespace {

// Affine component p = c1 tau + c2; partner q = k1 tanh + k2 (tau tanh - 1).
struct CaseB final : AnalyticSolution::Impl {
    bool minus;
    cplx c1, c2, k1, k2;

    Vec2 zeta(double tau) const override {
        const double th = std::tanh(tau);
        const cplx p = c1 * tau + c2;
        const cplx q = k1 * th + k2 * (tau * th - 1.0);
        return minus ? Vec2{p, q} : Vec2{q, p};
    }
    Vec2 dzeta(double tau) const override {
        const double th = std::tanh(tau);
        const double sech2 = 1.0 - th * th;
        const cplx dp = c1;
        const cplx dq = k1 * sech2 + k2 * (th + tau * sech2);
        return minus ? Vec2{dp, dq} : Vec2{dq, dp};
    }
    cplx gamma(double tau) const override { return minus ? -std::tanh(tau) : std::tanh(tau); }
};

}  // namespace

AnalyticSolution solve_case_b(Sign sign, cplx a, cplx b, cplx nu, cplx nu_prime) {
    const cplx s = time_scale(nu, nu_prime);
    const cplx nt = nu / s, ntp = nu_prime / s;
    auto impl = std::make_shared<CaseB>();
    impl->minus = sign == Sign::minus;
    ConstantDiagnostics d;
    if (impl->minus) {
        // zeta_- = c1 tau + c2, zeta_+ = (i/nu~)(zeta_-' + Gamma zeta_-)
        impl->c2 = a;
        impl->c1 = -I * nt * b;
        impl->k1 = -I * impl->c2 / nt;
        impl->k2 = -I * impl->c1 / nt;
        d.derived = {impl->c1, impl->c2, impl->k1, impl->k2};
        d.tabulated = {-I * nu * b, -a, -I * nu_prime * a + b, -b};
        d.note = "Gamma = -tanh: zeta_- = c1- tau + c2-, zeta_+ = c1+ tanh + c2+ (tau tanh - 1)";
    } else {
        // zeta_+ = c1 tau + c2, zeta_- = (i/nu~')(zeta_+' - Gamma zeta_+)
        impl->c2 = b;
        impl->c1 = -I * ntp * a;
        impl->k1 = -I * impl->c2 / ntp;
        impl->k2 = -I * impl->c1 / ntp;
        d.derived = {impl->k1, impl->k2, impl->c1, impl->c2};
        // same table with a <-> b and nu <-> nu'
        d.tabulated = {-I * nu * b + a, -a, -I * nu_prime * a, -b};
        d.note = "Gamma = +tanh: zeta_+ = c1+ tau + c2+, zeta_- = c1- tanh + c2- (tau tanh - 1)";
    }
    fill_diff(d);
    const Case id = impl->minus ? Case::b_minus : Case::b_plus;
    return AnalyticSolution(id, nu, nu_prime, {a, b}, std::move(impl), std::move(d));
}

// ---- case (c) ------------------------------------------------------------------

cplx CaseCParams::alpha2() const { return std::sqrt(1.0 - beta * beta); }
cplx CaseCParams::alpha1() const { return 1.0 / (-I * beta + alpha2()); }
cplx CaseCParams::m() const { return alpha2() / gamma_drive; }
cplx CaseCParams::z0() const { return -2.0 * I * alpha / gamma_drive; }
cplx CaseCParams::z1() const { return 2.0 * alpha; }
cplx CaseCParams::z3() const { return (z1() * m() - z1() * z0()) / (2.0 * z0()) - I * beta; }

cplx CaseCParams::eta(Sign s, double tau) const {
    const cplx c = (s == Sign::minus ? -1.0 : 1.0) * 2.0 * I * alpha / gamma_drive;
    return c * std::exp(I * gamma_drive * tau);
}

cplx CaseCParams::kummer_a(Sign s) const {
    return (s == Sign::minus ? alpha1() : 1.0 / alpha1()) / gamma_drive;
}

cplx CaseCParams::kummer_b() const { return 1.0 + 2.0 * alpha2() / gamma_drive; }

namespace {

void check_case_c(const CaseCParams& p) {
    if (p.gamma_drive == 0.0 || !finite(p.gamma_drive)) throw ConfigError("case (c): gamma must be nonzero");
    if (p.alpha == 0.0) throw ConfigError("case (c): alpha must be nonzero (use case (a) for constant Gamma)");
}

}  // namespace

CaseCBasis case_c_basis(const CaseCParams& p, Sign s, double tau) {
    const cplx c = (s == Sign::minus ? -1.0 : 1.0) * 2.0 * I * p.alpha / p.gamma_drive;
    // Continuous logarithm of eta along real tau.
    const cplx log_eta = std::log(c) + I * p.gamma_drive * tau;
    const cplx eta = std::exp(log_eta);
    const cplx mu = p.m();
    const cplx ka = p.kummer_a(s);
    const cplx kb = p.kummer_b();

    const cplx pre = std::exp(-eta / 2.0 + mu * log_eta);
    const cplx u = specfun::tricomi_u(ka, kb, eta, log_eta);
    const cplx du = specfun::tricomi_u_prime(ka, kb, eta, log_eta);
    const cplx l = specfun::laguerre_l(-ka, kb - 1.0, eta);
    const cplx dl = specfun::laguerre_l_prime(-ka, kb - 1.0, eta);

    // d/deta [exp(-eta/2) eta^mu W] = exp(-eta/2) eta^mu ((mu/eta - 1/2) W + W')
    const cplx w = mu / eta - 0.5;
    const cplx deta = I * p.gamma_drive * eta;
    return {pre * u, pre * l, deta * pre * (w * u + du), deta * pre * (w * l + dl)};
}

namespace {

struct CaseC final : AnalyticSolution::Impl {
    CaseCParams p;
    cplx cm1, cm2, cp1, cp2;

    Vec2 zeta(double tau) const override {
        const CaseCBasis m = case_c_basis(p, Sign::minus, tau);
        const CaseCBasis q = case_c_basis(p, Sign::plus, tau);
        return {cm1 * m.u + cm2 * m.l, cp1 * q.u + cp2 * q.l};
    }
    Vec2 dzeta(double tau) const override {
        const CaseCBasis m = case_c_basis(p, Sign::minus, tau);
        const CaseCBasis q = case_c_basis(p, Sign::plus, tau);
        return {cm1 * m.du + cm2 * m.dl, cp1 * q.du + cp2 * q.dl};
    }
    cplx gamma(double tau) const override { return p.alpha * std::exp(I * p.gamma_drive * tau) - p.beta; }
};

// Solves [u l; du dl] c = (v, dv).
std::array<cplx, 2> fit(const CaseCBasis& B, cplx v, cplx dv) {
    const cplx det = B.u * B.dl - B.l * B.du;
    const double scale = std::abs(B.u * B.dl) + std::abs(B.l * B.du);
    if (!(std::abs(det) > 1e-12 * scale)) throw NumericError("case (c): basis functions are linearly dependent");
    return {(v * B.dl - B.l * dv) / det, (B.u * dv - B.du * v) / det};
}

// U(a, b, 0) and L(n, alpha, 0); non-finite where the value diverges.
cplx u_at_zero(cplx a, cplx b) {
    if (b.real() < 1.0) return specfun::gamma(1.0 - b) * specfun::rgamma(a - b + 1.0);
    return {std::numeric_limits<double>::infinity(), 0.0};
}

cplx l_at_zero(cplx n, cplx alpha) {
    try {
        return std::exp(specfun::log_gamma(n + alpha + 1.0) - specfun::log_gamma(alpha + 1.0)) *
               specfun::rgamma(n + 1.0);
    } catch (const PoleError&) {
        return kNaNc;
    }
}

// Tabulated transfer-matrix relation for (c1-, c2-), with the undefined M1
// read as the second defined matrix M2.
std::array<cplx, 2> transfer_matrix_constants(const CaseCParams& p, cplx a, cplx b) {
    const cplx m1 = p.alpha1() / p.gamma_drive;
    const cplx m2 = p.kummer_b();
    const cplx m3 = (1.0 / p.alpha1() + 2.0 * p.alpha2()) / p.gamma_drive;
    const cplx lord = 2.0 * p.alpha2() / p.gamma_drive;
    const cplx U0 = u_at_zero(m1, m2), U1 = u_at_zero(m1 + 1.0, m2 + 1.0);
    const cplx L0 = l_at_zero(m3, lord), L1 = l_at_zero(m3 - 1.0, lord + 1.0);
    const cplx z3 = p.z3(), z1 = p.z1();
    const Mat2 M0{U0, L0, z3 * U0, z3 * L0};
    const Mat2 M1{0.0, 0.0, U1, L1};
    const Mat2 K = M0 - z1 * M1;
    const cplx pre = std::exp(-p.m() * std::log(p.z0()) + p.z0());
    const cplx dt = det(K);
    if (!finite(dt) || std::abs(dt) < 1e-300) return {kNaNc, kNaNc};
    const Mat2 Ki = inv(K);
    const Vec2 c = Ki * Vec2{a, b};
    return {pre * c[0], pre * c[1]};
}

}  // namespace

AnalyticSolution solve_case_c(const CaseCParams& p, cplx a, cplx b, cplx nu, cplx nu_prime) {
    check_case_c(p);
    const cplx s = time_scale(nu, nu_prime);
    const cplx nt = nu / s, ntp = nu_prime / s;
    auto impl = std::make_shared<CaseC>();
    impl->p = p;
    const cplx G0 = p.alpha - p.beta;

    const auto cm = fit(case_c_basis(p, Sign::minus, 0.0), a, -G0 * a - I * nt * b);
    const auto cp = fit(case_c_basis(p, Sign::plus, 0.0), b, -I * ntp * a + G0 * b);
    impl->cm1 = cm[0];
    impl->cm2 = cm[1];
    impl->cp1 = cp[0];
    impl->cp2 = cp[1];

    ConstantDiagnostics d;
    d.derived = {cm[0], cm[1], cp[0], cp[1]};
    const auto tm = transfer_matrix_constants(p, a, b);
    d.tabulated = {tm[0], tm[1], kNaNc, kNaNc};
    d.note = "basis exp(-eta/2) eta^m {U(a, 1+2m, eta), L(-a, 2m, eta)}; tabulated entries from the "
             "transfer-matrix relation with M1 read as M2 (U(., ., 0) diverges for Re(1+2m) > 1)";
    fill_diff(d);
    return AnalyticSolution(Case::c, nu, nu_prime, {a, b}, std::move(impl), std::move(d));
}

// ---- reconstruction --------------------------------------------------------------

Trajectory reconstruct_original(const AnalyticSolution& sol, const ModelSpec& spec, const std::vector<double>& t_grid) {
    const cplx s = sol.scale();
    if (std::abs(s.imag()) > 1e-14 * std::abs(s) || s.real() <= 0.0) {
        throw ConfigError("reconstruction needs a real positive time scale sqrt(nu nu')");
    }
    const double sr = s.real();
    if (std::abs(spec.nu - sol.nu()) > 1e-12 * std::abs(sol.nu()) ||
        std::abs(spec.nu_prime - sol.nu_prime()) > 1e-12 * std::abs(sol.nu_prime())) {
        throw ConfigError("solution and model use different couplings");
    }
    for (double t : t_grid) {
        const cplx gs = gamma_eff(spec, t) / sr;
        const cplx ga = sol.Gamma(sr * t);
        if (std::abs(gs - ga) > 1e-8 * (1.0 + std::abs(ga))) {
            throw ConfigError("model Gamma(t) does not match the analytic family at t = " + std::to_string(t));
        }
    }

    Trajectory tr;
    tr.frame = Frame::original;
    const double t_ref = spec.t_ref;
    const cplx r0 = spec.f1(t_ref) / spec.f2(t_ref);
    const cplx sq0 = std::sqrt(r0);
    const auto& D = spec.gauge_prefactor;
    auto integrand = [&spec](double x) { return gamma_eff(spec, x) + I * spec.omega2(x); };

    cplx acc = 0.0;
    double last = t_ref;
    for (double t : t_grid) {
        acc += integrate(integrand, last, t, 1e-10);
        last = t;
        const cplx pre = std::exp(-acc) / sq0;
        const cplx r = spec.f1(t) / spec.f2(t);
        const Vec2 z = sol.zeta(sr * t);
        tr.t.push_back(t);
        tr.states.push_back({D[0] * pre * r * z[0], D[1] * pre * z[1]});
    }
    return tr;
}

// ---- design --------------------------------------------------------------------

ModelSpec design_from_couplings(const modfn::Expr& f1, const modfn::Expr& f2, const modfn::ParamMap& params,
                                cplx gamma1, cplx gamma2, cplx nu, cplx nu_prime) {
    using modfn::Expr;
    const Expr i = Expr::imag_unit();
    const Expr w1 = i * f1.derivative() / f1 - i * Expr::constant(gamma1);
    const Expr w2 = i * f2.derivative() / f2 - i * Expr::constant(gamma2);
    ModelSpec m;
    m.nu = nu;
    m.nu_prime = nu_prime;
    m.params = params;
    m.f1 = TimeFunction(f1, params);
    m.f2 = TimeFunction(f2, params);
    m.omega1 = TimeFunction(w1, params);
    m.omega2 = TimeFunction(w2, params);
    return m;
}

namespace {

// exp(int_0^t (gamma - i w)) scaled by f0, with the integral tabulated.
class DesignedCoupling {
public:
    DesignedCoupling(TimeFunction w, cplx gamma, cplx f0, double t_min, double t_max)
        : w_(std::move(w)), gamma_(gamma), f0_(f0) {
        lo_ = std::min(0.0, t_min);
        const double hi = std::max(0.0, t_max);
        const int n = std::max(1, static_cast<int>(std::ceil((hi - lo_) / kStep)));
        nodes_.resize(static_cast<std::size_t>(n) + 1);
        // Integral from 0, so accumulate outward from the node holding 0.
        values_.assign(nodes_.size(), 0.0);
        for (int k = 0; k <= n; ++k) nodes_[static_cast<std::size_t>(k)] = lo_ + k * kStep;
        const auto rate = [this](double x) { return gamma_ - I * w_(x); };
        cplx acc = integrate(rate, 0.0, nodes_[0], 1e-12);
        values_[0] = acc;
        for (std::size_t k = 1; k < nodes_.size(); ++k) {
            acc += integrate(rate, nodes_[k - 1], nodes_[k], 1e-12);
            values_[k] = acc;
        }
    }

    cplx exponent(double t) const {
        const auto rate = [this](double x) { return gamma_ - I * w_(x); };
        double pos = (t - lo_) / kStep;
        pos = std::clamp(pos, 0.0, static_cast<double>(nodes_.size() - 1));
        const auto k = static_cast<std::size_t>(std::lround(pos));
        return values_[k] + integrate(rate, nodes_[k], t, 1e-12);
    }
    cplx value(double t) const { return f0_ * std::exp(exponent(t)); }
    cplx deriv(double t) const { return value(t) * (gamma_ - I * w_(t)); }

private:
    static constexpr double kStep = 0.05;
    TimeFunction w_;
    cplx gamma_, f0_;
    double lo_ = 0.0;
    std::vector<double> nodes_;
    std::vector<cplx> values_;
};

TimeFunction designed(const TimeFunction& w, cplx gamma, cplx f0, double t_min, double t_max, const std::string& tag) {
    auto dc = std::make_shared<const DesignedCoupling>(w, gamma, f0, t_min, t_max);
    return TimeFunction::from_callables([dc](double t) { return dc->value(t); },
                                        [dc](double t) { return dc->deriv(t); }, tag);
}

}  // namespace

ModelSpec design_from_potentials(const TimeFunction& omega1, const TimeFunction& omega2, cplx gamma1, cplx gamma2,
                                 cplx nu, cplx nu_prime, double t_min, double t_max, cplx f1_0, cplx f2_0) {
    if (f1_0 == 0.0 || f2_0 == 0.0) throw ConfigError("design: f1(0) and f2(0) must be nonzero");
    if (!(t_max >= t_min)) throw ConfigError("design: t_max must be >= t_min");
    ModelSpec m;
    m.nu = nu;
    m.nu_prime = nu_prime;
    m.omega1 = omega1;
    m.omega2 = omega2;
    m.f1 = designed(omega1, gamma1, f1_0, t_min, t_max, "f1(0) exp(int (gamma1 - i w1))");
    m.f2 = designed(omega2, gamma2, f2_0, t_min, t_max, "f2(0) exp(int (gamma2 - i w2))");
    return m;
}

ModelSpec toy_model(double omega, double eps1, double eps2, double gamma, cplx nu, cplx nu_prime) {
    modfn::ParamMap p{{"w", omega}, {"e1", eps1}, {"e2", eps2}};
    return design_from_couplings(modfn::Expr::parse("sin(w*t)+e1"), modfn::Expr::parse("cos(w*t)+e2"), p, -gamma, gamma,
                                 nu, nu_prime);
}

}  // namespace ptkit::analytic
