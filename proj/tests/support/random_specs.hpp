#pragma once

// Seeded generators of random expressions and model specs for property tests.

#include "ptkit/model.hpp"
#include "ptkit/modfn.hpp"

#include <random>
#include <string>

namespace ptkit::testing {

class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    /// Random expression over t and the parameters a, b, c. Smooth and
    /// finite for real t by construction: ln, sqrt, division and general
    /// powers only ever see arguments of the form k + x^2 with real x.
    std::string expression(int depth = 3) {
        std::string e = real_expr(depth);
        switch (pick(4)) {
            case 0: return "i*(" + e + ")";
            case 1: return e + "+i*" + real_expr(depth - 1);
            default: return e;
        }
    }

    modfn::ParamMap params() {
        std::uniform_real_distribution<double> u(0.5, 1.5);
        return modfn::ParamMap{{"a", u(rng_)}, {"b", u(rng_)}, {"c", u(rng_)}};
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    std::string number() {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", uniform(0.5, 2.0));
        return buf;
    }

    std::string leaf() {
        switch (pick(5)) {
            case 0:
            case 1: return "t";
            case 2: return std::string(1, "abc"[pick(3)]);
            case 3: return number() + "*t";
            default: return number();
        }
    }

    std::string positive(int depth) {
        const std::string x = real_expr(depth);
        return "(" + number() + "+(" + x + ")^2)";
    }

    std::string real_expr(int depth) {
        if (depth <= 0) return leaf();
        const std::string x = real_expr(depth - 1);
        switch (pick(16)) {
            case 0: return x + "+" + real_expr(depth - 1);
            case 1: return x + "-" + real_expr(depth - 1);
            case 2: return "(" + x + ")*(" + real_expr(depth - 1) + ")";
            case 3: return "(" + x + ")/" + positive(depth - 1);
            case 4: return "sin(" + x + ")";
            case 5: return "cos(" + x + ")";
            case 6: return "tan(0.4*sin(" + x + "))";
            case 7: return "sinh(sin(" + x + "))";
            case 8: return "cosh(cos(" + x + "))";
            case 9: return "tanh(" + x + ")";
            case 10: return "exp(sin(" + x + "))";
            case 11: return "ln" + positive(depth - 1);
            case 12: return "sqrt" + positive(depth - 1);
            case 13: return "(" + x + ")^" + std::to_string(2 + pick(2));
            case 14: return positive(depth - 1) + "^(0.5*cos(" + x + "))";
            default: return "-(" + x + ")";
        }
    }

    std::mt19937_64 rng_;
};

/// Random model with bounded smooth inputs: f_j = a0 + a1 cos(w t + p) with
/// a0 > 2|a1| plus a small imaginary ripple, omega_j with a bounded
/// imaginary part, couplings of modulus in [0.5, 1.5].
inline ModelSpec random_model(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto coupling = [&] { return std::polar(u(0.5, 1.5), u(-0.6, 0.6)); };
    modfn::ParamMap p;
    std::string f[2], w[2];
    for (int j = 0; j < 2; ++j) {
        const std::string s = std::to_string(j + 1);
        p.set("a0_" + s, u(1.0, 2.0));
        p.set("a1_" + s, u(-0.4, 0.4));
        p.set("a2_" + s, u(-0.2, 0.2));
        p.set("w_" + s, u(0.3, 2.0));
        p.set("p_" + s, u(0.0, 6.0));
        f[j] = "a0_" + s + "+a1_" + s + "*cos(w_" + s + "*t+p_" + s + ")+i*a2_" + s + "*sin(0.7*w_" + s + "*t)";
        p.set("b0_" + s, u(-1.0, 1.0));
        p.set("b1_" + s, u(-0.5, 0.5));
        p.set("c0_" + s, u(-0.15, 0.15));
        p.set("v_" + s, u(0.3, 2.0));
        w[j] = "b0_" + s + "+b1_" + s + "*sin(v_" + s + "*t)+i*c0_" + s + "*cos(v_" + s + "*t)";
    }
    ModelSpec m;
    m.params = p;
    m.nu = coupling();
    m.nu_prime = coupling();
    m.f1 = modfn::TimeFunction::from_text(f[0], p);
    m.f2 = modfn::TimeFunction::from_text(f[1], p);
    m.omega1 = modfn::TimeFunction::from_text(w[0], p);
    m.omega2 = modfn::TimeFunction::from_text(w[1], p);
    return m;
}

}  // namespace ptkit::testing
