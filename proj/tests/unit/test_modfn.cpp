#include "modfn/node.hpp"
#include "ptkit/error.hpp"
#include "ptkit/modfn.hpp"
#include "support/random_specs.hpp"

#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

using namespace ptkit;
using modfn::Expr;
using modfn::ParamMap;

namespace {

template <class T>
const T& as(const modfn::NodePtr& n) {
    return std::get<T>(n->v);
}

cplx fd(const Expr& e, double t, const ParamMap& p, double h = 1e-5) {
    return (e.eval(t + h, p) - e.eval(t - h, p)) / (2.0 * h);
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
    const Expr e = Expr::parse("sin(w*t)+e1");
    const auto& add = as<modfn::BinaryNode>(e.root());
    CHECK(add.op == modfn::BinOp::add);
    const auto& call = as<modfn::CallNode>(add.lhs);
    CHECK(call.fn == modfn::Func::sin);
    const auto& mul = as<modfn::BinaryNode>(call.arg);
    CHECK(mul.op == modfn::BinOp::mul);
    CHECK(as<modfn::ParamNode>(mul.lhs).name == "w");
    CHECK(std::holds_alternative<modfn::TimeNode>(mul.rhs->v));
    CHECK(as<modfn::ParamNode>(add.rhs).name == "e1");

    const Expr g = Expr::parse("exp(-g*t)");
    const auto& ex = as<modfn::CallNode>(g.root());
    CHECK(ex.fn == modfn::Func::exp);
    const auto& neg = as<modfn::NegNode>(ex.arg);
    CHECK(as<modfn::BinaryNode>(neg.arg).op == modfn::BinOp::mul);
}

TEST_CASE("precedence and associativity") {
    const ParamMap none;
    CHECK(Expr::parse("2^3^2").eval(0, none).real() == doctest::Approx(512.0));
    CHECK(Expr::parse("-2^2").eval(0, none).real() == doctest::Approx(-4.0));
    CHECK(Expr::parse("2*3+4").eval(0, none).real() == doctest::Approx(10.0));
    CHECK(Expr::parse("8/2/2").eval(0, none).real() == doctest::Approx(2.0));
    CHECK(Expr::parse("2^-1").eval(0, none).real() == doctest::Approx(0.5));
}

TEST_CASE("evaluation examples") {
    CHECK(std::abs(Expr::parse("cos(w*t)+e2").eval(0.0, ParamMap{{"w", 1.0}, {"e2", 0.5}}) - 1.5) < 1e-15);
    CHECK(std::abs(Expr::parse("i*g").eval(3.0, ParamMap{{"g", 2.0}}) - cplx(0, 2)) < 1e-15);
    // mpmath tanh(0.5)
    CHECK(std::abs(Expr::parse("tanh(t)").eval(0.5, {}) - 0.4621171572600097585) < 1e-15);
    CHECK(std::abs(Expr::parse("sqrt(-4)").eval(0, {}) - cplx(0, 2)) < 1e-15);
    CHECK(std::abs(Expr::parse("ln(-1)").eval(0, {}) - cplx(0, M_PI)) < 1e-15);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(Expr::parse("sin(t"), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(t)"), ParseError);
    CHECK_THROWS_AS(Expr::parse(""), ParseError);
    CHECK_THROWS_AS(Expr::parse("1 +* 2"), ParseError);
    try {
        Expr::parse("1 + sin(t");
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 9);
    }
    CHECK_THROWS_AS(Expr::parse("a*t").eval(0, {}), UnboundParameter);
    CHECK_THROWS_AS(Expr::parse("ln(t)").eval(0, {}), DomainError);
    CHECK_THROWS_AS(Expr::parse("1/t").eval(0, {}), DomainError);
    ParamMap p;
    p.bind("a", 1.0);
    CHECK_THROWS_AS(p.bind("a", 2.0), ConfigError);
}

TEST_CASE("symbolic derivative examples") {
    const ParamMap p{{"g", 0.7}, {"e1", 0.5}, {"e2", 1.5}, {"W", 1.3}};
    const Expr d1 = Expr::parse("exp(-g*t)").derivative();
    const Expr r1 = Expr::parse("-g*exp(-g*t)");
    const Expr d2 = Expr::parse("e1*cos(W*t)+e2").derivative();
    const Expr r2 = Expr::parse("-e1*W*sin(W*t)");
    for (double t : {-1.0, 0.0, 0.4, 2.5}) {
        CHECK(std::abs(d1.eval(t, p) - r1.eval(t, p)) < 1e-15);
        CHECK(std::abs(d2.eval(t, p) - r2.eval(t, p)) < 1e-15);
    }
    CHECK(std::abs(Expr::parse("tanh(t)").derivative().eval(0, {}) - 1.0) < 1e-15);
    CHECK_FALSE(Expr::parse("3*a").derivative().depends_on_time());
}

TEST_CASE("random expressions: derivative vs finite difference, round trip") {
    testing::ExprGen gen(20240611);
    for (int n = 0; n < 200; ++n) {
        const std::string src = gen.expression(3);
        const ParamMap p = gen.params();
        const Expr e = Expr::parse(src);
        const Expr again = Expr::parse(e.str());
        INFO(src);
        CHECK(again.structurally_equal(e));
        CHECK(Expr::parse(again.str()).str() == again.str());
        const Expr d = e.derivative();
        for (int k = 0; k < 10; ++k) {
            const double t = gen.uniform(-2.0, 2.0);
            const cplx ref = fd(e, t, p);
            CHECK(std::abs(d.eval(t, p) - ref) <= 1e-6 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("compiled form matches tree evaluation and is shareable") {
    testing::ExprGen gen(7);
    std::vector<Expr> exprs;
    std::vector<ParamMap> params;
    for (int n = 0; n < 20; ++n) {
        exprs.push_back(Expr::parse(gen.expression(3)));
        params.push_back(gen.params());
    }
    for (std::size_t n = 0; n < exprs.size(); ++n) {
        const modfn::CompiledExpr c = exprs[n].compile(params[n]);
        for (double t : {-1.3, 0.0, 0.7}) CHECK(std::abs(c(t) - exprs[n].eval(t, params[n])) < 1e-14);
    }
    const modfn::TimeFunction f = modfn::TimeFunction::from_text("sin(a*t)*exp(-t)", ParamMap{{"a", 2.0}});
    std::vector<cplx> out(4);
    std::vector<std::thread> th;
    for (int k = 0; k < 4; ++k) th.emplace_back([&, k] { out[k] = f(0.3 * k) + f.derivative(0.3 * k); });
    for (auto& x : th) x.join();
    for (int k = 0; k < 4; ++k) CHECK(out[k] == f(0.3 * k) + f.derivative(0.3 * k));
}
