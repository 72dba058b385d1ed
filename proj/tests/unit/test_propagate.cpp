#include "ptkit/analytic.hpp"
#include "ptkit/circuit.hpp"
#include "ptkit/error.hpp"
#include "ptkit/propagate.hpp"
#include "support/random_specs.hpp"

#include <doctest.h>

#include <cmath>

using namespace ptkit;

namespace {

const cplx I(0.0, 1.0);

double dist(const Vec2& a, const Vec2& b) { return std::hypot(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])); }

}  // namespace

TEST_CASE("zero generator keeps the state") {
    const IntegratorConfig cfg;
    const Vec2 psi0{cplx(0.3, 0.1), cplx(-0.5, 0.8)};
    const Trajectory tr = propagate_state([](double) { return Mat2{}; }, psi0, 0.0, 5.0, cfg, uniform_grid(0.0, 5.0, 0.5));
    CHECK(tr.size() == 11);
    for (std::size_t k = 0; k < tr.size(); ++k) CHECK(dist(tr.states[k], psi0) < 1e-15);
    CHECK(max_abs(propagate_matrix([](double) { return Mat2{}; }, 0.0, 3.0, cfg) - Mat2::identity()) < 1e-15);
}

TEST_CASE("Rabi rotation") {
    const IntegratorConfig cfg;
    const auto grid = uniform_grid(0.0, 10.0, 0.25);
    const Trajectory tr = propagate_state([](double) { return pauli::sx; }, {1.0, 0.0}, 0.0, 10.0, cfg, grid);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const double t = tr.t[k];
        CHECK(dist(tr.states[k], {std::cos(t), -I * std::sin(t)}) < 1e-8);
    }
    CHECK(tr.t.back() == 10.0);
}

TEST_CASE("uniform grid ends exactly at t1") {
    const auto g = uniform_grid(0.0, 1.0, 0.3);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g.size() == 5);
    CHECK(uniform_grid(2.0, 2.0, 0.1).size() == 1);
}

TEST_CASE("Hermitian generators give unitary propagators") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    for (int k = 0; k < 10; ++k) {
        const double a = n(rng), d = n(rng);
        const cplx b(n(rng), n(rng));
        const Mat2 h{a, b, std::conj(b), d};
        IntegratorConfig tight;
        tight.rtol = 1e-11;
        tight.atol = 1e-13;
        const Mat2 u = propagate_matrix([&](double) { return h; }, 0.0, 4.0, tight);
        CHECK(max_abs(mul(adjoint(u), u) - Mat2::identity()) <= 1e-10);
        const double w = n(rng);
        const HamiltonianFn H = [=](double t) { return h + std::cos(w * t) * pauli::sz; };
        const Trajectory tr = propagate_state(H, {0.6, cplx(0, 0.8)}, 0.0, 4.0, IntegratorConfig{}, uniform_grid(0, 4, 0.5));
        for (std::size_t j = 0; j < tr.size(); ++j) CHECK(std::abs(tr.norm(j) - 1.0) < 1e-9);
    }
}

TEST_CASE("Liouville: det U = exp(-i int tr H)") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ModelSpec s = testing::random_model(seed);
        const HamiltonianFn H = [&](double t) { return hamiltonian(s, t); };
        const Mat2 u = propagate_matrix(H, 0.0, 3.0, IntegratorConfig{});
        const Mat2 ue = propagate_matrix([&](double t) { return effective_closed(s, t); }, 0.0, 3.0, IntegratorConfig{});
        CHECK(std::abs(det(ue) - 1.0) < 1e-8);
        // det A carries exp(-2i int Omega_+)
        const cplx want = det(gauge(s, 3.0)) / det(gauge(s, 0.0));
        CHECK(std::abs(det(u) - want) < 1e-8 * std::abs(want));
    }
}

TEST_CASE("composition U(t2,t0) = U(t2,t1) U(t1,t0)") {
    const ModelSpec s = testing::random_model(21);
    const HamiltonianFn H = [&](double t) { return hamiltonian(s, t); };
    const IntegratorConfig cfg;
    const Mat2 a = propagate_matrix(H, 0.0, 1.5, cfg);
    const Mat2 b = propagate_matrix(H, 1.5, 4.0, cfg);
    const Mat2 c = propagate_matrix(H, 0.0, 4.0, cfg);
    CHECK(max_abs(mul(b, a) - c) < 1e-8 * norm(c));
}

TEST_CASE("gauge round trips") {
    const IntegratorConfig cfg;
    const ModelSpec plain = testing::random_model(2);
    ModelSpec flat = plain;
    flat.f2 = flat.f1;
    flat.omega1 = modfn::TimeFunction::constant(0.0);
    flat.omega2 = modfn::TimeFunction::constant(0.0);
    const RoundTrip r0 = gauge_roundtrip(flat, {1.0, 0.0}, 0.0, 10.0, cfg, uniform_grid(0.0, 10.0, 0.1));
    CHECK(r0.max_deviation <= 1e-10);

    const ModelSpec toy = analytic::toy_model(1.0, 2.0, 2.0, 0.5, 1.0, 1.0);
    const RoundTrip r1 = gauge_roundtrip(toy, {1.0, 0.0}, 0.0, 10.0, cfg, uniform_grid(0.0, 10.0, 0.1));
    CHECK(r1.max_deviation <= 1e-6);
    CHECK(r1.eff.frame == Frame::effective);

    const double W = 1.3;
    const ModelSpec circ = circuit::to_model(circuit::periodic_drive(1.0, 1.0, 0.5, 1.5, W, circuit::Mode::RLC));
    const double T = 2 * M_PI / W;
    const RoundTrip r2 = gauge_roundtrip(circ, {1.0, 0.5}, 0.0, T, cfg, uniform_grid(0.0, T, T / 50));
    CHECK(r2.max_deviation <= 1e-6);

    for (std::uint64_t seed = 30; seed < 36; ++seed) {
        const RoundTrip r = gauge_roundtrip(testing::random_model(seed), {0.6, 0.8}, 0.0, 5.0, cfg, uniform_grid(0.0, 5.0, 0.25));
        CHECK(r.max_deviation <= 1e-6);
    }
}

TEST_CASE("integrator configuration and failures") {
    IntegratorConfig bad;
    bad.rtol = 0.0;
    CHECK_THROWS_AS(bad.check(), ConfigError);
    IntegratorConfig tiny;
    tiny.max_steps = 5;
    CHECK_THROWS_AS(propagate_matrix([](double) { return pauli::sx; }, 0.0, 100.0, tiny), NumericError);
}

TEST_CASE("runaway growth truncates the trajectory") {
    const Mat2 h{cplx(0, 400.0), 0.0, 0.0, 0.0};
    const Trajectory tr = propagate_state([&](double) { return h; }, {1.0, 0.0}, 0.0, 2.0, IntegratorConfig{}, uniform_grid(0.0, 2.0, 0.1));
    CHECK(tr.truncated);
    CHECK(tr.size() < 21);
    for (std::size_t k = 0; k < tr.size(); ++k) CHECK(std::isfinite(tr.norm(k)));
}
