#pragma once

// Expression DSL for time-dependent modulation functions.
//
// Expressions are immutable trees over the time variable `t`, named complex
// parameters, the imaginary unit `i`, real literals, + - * / ^ and a fixed
// set of elementary functions. The grammar is documented in
// docs/expression-grammar.md.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ptkit::modfn {

using cplx = std::complex<double>;

enum class Func { sin, cos, tan, sinh, cosh, tanh, exp, ln, sqrt };
enum class BinOp { add, sub, mul, div, pow };

const char* func_name(Func f) noexcept;

/// Name -> complex value bindings. Names are unique; looking up a missing
/// name throws UnboundParameter.
class ParamMap {
public:
    ParamMap() = default;
    ParamMap(std::initializer_list<std::pair<const std::string, cplx>> init);

    /// Adds a new binding; throws ConfigError if the name is already bound.
    void bind(const std::string& name, cplx value);
    /// Adds or replaces a binding.
    void set(const std::string& name, cplx value);
    cplx at(const std::string& name) const;
    bool contains(const std::string& name) const;
    const std::map<std::string, cplx>& entries() const noexcept { return values_; }

private:
    std::map<std::string, cplx> values_;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

class CompiledExpr;

class Expr {
public:
    enum class Kind { number, imag_unit, time, param, negate, binary, call };

    /// Parses `source`; throws ParseError on bad syntax or unknown function.
    static Expr parse(std::string_view source);

    static Expr number(double v);
    static Expr imag_unit();
    static Expr time();
    static Expr param(std::string name);
    static Expr constant(cplx v);

    Kind kind() const noexcept;

    /// Canonical text with minimal parentheses; parse(str()) is structurally
    /// equal to *this.
    std::string str() const;

    /// Symbolic d/dt. The result is lightly folded (0 and 1 identities) but
    /// otherwise unsimplified.
    Expr derivative() const;

    cplx eval(double t, const ParamMap& params) const;

    /// Resolves parameters once for repeated evaluation.
    CompiledExpr compile(const ParamMap& params) const;

    bool depends_on_time() const;
    std::set<std::string> parameters() const;

    bool structurally_equal(const Expr& other) const;

    const NodePtr& root() const noexcept { return root_; }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& a, const Expr& b);
    friend Expr apply(Func f, const Expr& a);

private:
    explicit Expr(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

/// Flat stack-machine form of an Expr with parameters already substituted.
/// Immutable and safe to evaluate concurrently.
class CompiledExpr {
public:
    CompiledExpr() = default;
    cplx operator()(double t) const;

    struct Instr;

private:
    friend class Expr;
    std::vector<Instr> code_;
    std::size_t max_depth_ = 0;
};

struct CompiledExpr::Instr {
    enum class Op : unsigned char { push, time, neg, add, sub, mul, div, pow, call };
    Op op;
    Func fn = Func::sin;
    cplx value{};
};

/// A time function together with its exact derivative. Built from an Expr
/// (symbolic derivative) or from a pair of callables for functions that have
/// no closed-form expression. Cheap to copy; immutable.
class TimeFunction {
public:
    TimeFunction();  // identically zero
    TimeFunction(const Expr& e, const ParamMap& params);
    static TimeFunction from_text(std::string_view source, const ParamMap& params);
    static TimeFunction constant(cplx v);
    template <class F, class D>
    static TimeFunction from_callables(F value, D deriv, std::string description);

    cplx operator()(double t) const { return impl_->value(t); }
    cplx derivative(double t) const { return impl_->deriv(t); }

    /// Expression text when built from an Expr, otherwise a description.
    const std::string& description() const noexcept { return impl_->text; }
    bool has_expression() const noexcept { return impl_->is_expr; }

    struct Impl {
        virtual ~Impl() = default;
        virtual cplx value(double t) const = 0;
        virtual cplx deriv(double t) const = 0;
        std::string text;
        bool is_expr = false;
    };

private:
    explicit TimeFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

namespace detail {
template <class F, class D>
struct CallableImpl final : TimeFunction::Impl {
    CallableImpl(F f, D d) : f_(std::move(f)), d_(std::move(d)) {}
    cplx value(double t) const override { return f_(t); }
    cplx deriv(double t) const override { return d_(t); }
    F f_;
    D d_;
};
}  // namespace detail

template <class F, class D>
TimeFunction TimeFunction::from_callables(F value, D deriv, std::string description) {
    auto impl = std::make_shared<detail::CallableImpl<F, D>>(std::move(value), std::move(deriv));
    impl->text = std::move(description);
    impl->is_expr = false;
    return TimeFunction(std::move(impl));
}

}  // namespace ptkit::modfn
