#include "node.hpp"

#include "ptkit/error.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace ptkit::modfn {

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 9> kFuncs{{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"sinh", Func::sinh},
    {"cosh", Func::cosh},
    {"tanh", Func::tanh},
    {"exp", Func::exp},
    {"ln", Func::ln},
    {"sqrt", Func::sqrt},
}};

// Signed zero in the imaginary part would select the lower side of the
// branch cut; the principal branch wants +0.
cplx principal(cplx z) { return {z.real(), z.imag() == 0.0 ? 0.0 : z.imag()}; }

bool is_number(const NodePtr& n, double v) {
    const auto* num = std::get_if<NumberNode>(&n->v);
    return num != nullptr && num->value == v;
}

// Folding constructors used by the differentiator.
NodePtr f_neg(const NodePtr& a) {
    if (is_number(a, 0.0)) return a;
    if (const auto* n = std::get_if<NegNode>(&a->v)) return n->arg;
    return make_node(NegNode{a});
}
NodePtr f_add(const NodePtr& a, const NodePtr& b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    return make_node(BinaryNode{BinOp::add, a, b});
}
NodePtr f_sub(const NodePtr& a, const NodePtr& b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return f_neg(b);
    return make_node(BinaryNode{BinOp::sub, a, b});
}
NodePtr f_mul(const NodePtr& a, const NodePtr& b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return make_node(NumberNode{0.0});
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    return make_node(BinaryNode{BinOp::mul, a, b});
}
NodePtr f_div(const NodePtr& a, const NodePtr& b) {
    if (is_number(a, 0.0)) return a;
    if (is_number(b, 1.0)) return a;
    return make_node(BinaryNode{BinOp::div, a, b});
}
NodePtr f_pow(const NodePtr& a, const NodePtr& b) {
    if (is_number(b, 1.0)) return a;
    return make_node(BinaryNode{BinOp::pow, a, b});
}
NodePtr f_call(Func f, const NodePtr& a) { return make_node(CallNode{f, a}); }
NodePtr num(double v) { return make_node(NumberNode{v}); }

bool depends_on_t(const NodePtr& n) {
    return std::visit(
        [](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TimeNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, NegNode> || std::is_same_v<T, CallNode>) {
                return depends_on_t(x.arg);
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                return depends_on_t(x.lhs) || depends_on_t(x.rhs);
            } else {
                return false;
            }
        },
        n->v);
}

NodePtr differentiate(const NodePtr& n) {
    return std::visit(
        [&](const auto& x) -> NodePtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TimeNode>) {
                return num(1.0);
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return f_neg(differentiate(x.arg));
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                const NodePtr& a = x.lhs;
                const NodePtr& b = x.rhs;
                switch (x.op) {
                    case BinOp::add: return f_add(differentiate(a), differentiate(b));
                    case BinOp::sub: return f_sub(differentiate(a), differentiate(b));
                    case BinOp::mul:
                        return f_add(f_mul(differentiate(a), b), f_mul(a, differentiate(b)));
                    case BinOp::div:
                        return f_div(f_sub(f_mul(differentiate(a), b), f_mul(a, differentiate(b))),
                                     f_mul(b, b));
                    case BinOp::pow: {
                        if (!depends_on_t(b)) {
                            NodePtr reduced;
                            if (const auto* k = std::get_if<NumberNode>(&b->v); k != nullptr && k->value >= 1.0) {
                                reduced = num(k->value - 1.0);
                            } else {
                                reduced = make_node(BinaryNode{BinOp::sub, b, num(1.0)});
                            }
                            return f_mul(f_mul(b, f_pow(a, reduced)), differentiate(a));
                        }
                        // d(a^b) = a^b * (b' ln a + b a'/a)
                        NodePtr inner = f_add(f_mul(differentiate(b), f_call(Func::ln, a)),
                                              f_div(f_mul(b, differentiate(a)), a));
                        return f_mul(n, inner);
                    }
                }
                return num(0.0);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                const NodePtr& a = x.arg;
                NodePtr da = differentiate(a);
                if (is_number(da, 0.0)) return da;
                NodePtr outer;
                switch (x.fn) {
                    case Func::sin: outer = f_call(Func::cos, a); break;
                    case Func::cos: outer = f_neg(f_call(Func::sin, a)); break;
                    case Func::tan: return f_div(da, f_pow(f_call(Func::cos, a), num(2.0)));
                    case Func::sinh: outer = f_call(Func::cosh, a); break;
                    case Func::cosh: outer = f_call(Func::sinh, a); break;
                    case Func::tanh: outer = f_sub(num(1.0), f_pow(n, num(2.0))); break;
                    case Func::exp: outer = n; break;
                    case Func::ln: return f_div(da, a);
                    case Func::sqrt: return f_div(da, f_mul(num(2.0), n));
                }
                return f_mul(da, outer);
            } else {
                return num(0.0);
            }
        },
        n->v);
}

cplx evaluate(const NodePtr& n, double t, const ParamMap& p) {
    return std::visit(
        [&](const auto& x) -> cplx {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NumberNode>) {
                return x.value;
            } else if constexpr (std::is_same_v<T, ImagNode>) {
                return {0.0, 1.0};
            } else if constexpr (std::is_same_v<T, TimeNode>) {
                return t;
            } else if constexpr (std::is_same_v<T, ParamNode>) {
                return p.at(x.name);
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return -evaluate(x.arg, t, p);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                return apply_func(x.fn, evaluate(x.arg, t, p));
            } else {
                const cplx a = evaluate(x.lhs, t, p);
                const cplx b = evaluate(x.rhs, t, p);
                switch (x.op) {
                    case BinOp::add: return a + b;
                    case BinOp::sub: return a - b;
                    case BinOp::mul: return a * b;
                    case BinOp::div:
                        if (b == 0.0) throw DomainError("division by zero");
                        return a / b;
                    case BinOp::pow: return power(a, b);
                }
                return {};
            }
        },
        n->v);
}

// Precedence levels used by the printer.
constexpr int kAdd = 1, kNeg = 2, kMul = 3, kPow = 4, kAtom = 5;

int level(const NodePtr& n) {
    if (const auto* b = std::get_if<BinaryNode>(&n->v)) {
        switch (b->op) {
            case BinOp::add:
            case BinOp::sub: return kAdd;
            case BinOp::mul:
            case BinOp::div: return kMul;
            case BinOp::pow: return kPow;
        }
    }
    if (std::holds_alternative<NegNode>(n->v)) return kNeg;
    if (const auto* k = std::get_if<NumberNode>(&n->v); k != nullptr && std::signbit(k->value)) return kNeg;
    return kAtom;
}

void print(const NodePtr& n, std::string& out);

void print_at(const NodePtr& n, int min_level, std::string& out) {
    if (level(n) < min_level) {
        out += '(';
        print(n, out);
        out += ')';
    } else {
        print(n, out);
    }
}

void print(const NodePtr& n, std::string& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NumberNode>) {
                std::array<char, 40> buf{};
                const double mag = std::fabs(x.value);
                auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), mag);
                if (std::signbit(x.value)) out += '-';
                out.append(buf.data(), end);
            } else if constexpr (std::is_same_v<T, ImagNode>) {
                out += 'i';
            } else if constexpr (std::is_same_v<T, TimeNode>) {
                out += 't';
            } else if constexpr (std::is_same_v<T, ParamNode>) {
                out += x.name;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                out += '-';
                print_at(x.arg, kMul, out);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                out += func_name(x.fn);
                out += '(';
                print(x.arg, out);
                out += ')';
            } else {
                switch (x.op) {
                    case BinOp::add:
                    case BinOp::sub:
                        print_at(x.lhs, kAdd, out);
                        out += x.op == BinOp::add ? '+' : '-';
                        print_at(x.rhs, kMul, out);
                        break;
                    case BinOp::mul:
                    case BinOp::div:
                        print_at(x.lhs, kMul, out);
                        out += x.op == BinOp::mul ? '*' : '/';
                        print_at(x.rhs, kPow, out);
                        break;
                    case BinOp::pow:
                        print_at(x.lhs, kAtom, out);
                        out += '^';
                        print_at(x.rhs, kPow, out);
                        break;
                }
            }
        },
        n->v);
}

bool equal(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (a->v.index() != b->v.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b->v);
            if constexpr (std::is_same_v<T, NumberNode>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, ParamNode>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return equal(x.arg, y.arg);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                return x.fn == y.fn && equal(x.arg, y.arg);
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
            } else {
                return true;
            }
        },
        a->v);
}

void collect_params(const NodePtr& n, std::set<std::string>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ParamNode>) {
                out.insert(x.name);
            } else if constexpr (std::is_same_v<T, NegNode> || std::is_same_v<T, CallNode>) {
                collect_params(x.arg, out);
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                collect_params(x.lhs, out);
                collect_params(x.rhs, out);
            }
        },
        n->v);
}

using Op = CompiledExpr::Instr::Op;

std::size_t emit(const NodePtr& n, const ParamMap& p, std::vector<CompiledExpr::Instr>& code) {
    return std::visit(
        [&](const auto& x) -> std::size_t {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NumberNode>) {
                code.push_back({Op::push, Func::sin, cplx(x.value)});
                return 1;
            } else if constexpr (std::is_same_v<T, ImagNode>) {
                code.push_back({Op::push, Func::sin, cplx(0.0, 1.0)});
                return 1;
            } else if constexpr (std::is_same_v<T, TimeNode>) {
                code.push_back({Op::time, Func::sin, {}});
                return 1;
            } else if constexpr (std::is_same_v<T, ParamNode>) {
                code.push_back({Op::push, Func::sin, p.at(x.name)});
                return 1;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                std::size_t d = emit(x.arg, p, code);
                code.push_back({Op::neg, Func::sin, {}});
                return d;
            } else if constexpr (std::is_same_v<T, CallNode>) {
                std::size_t d = emit(x.arg, p, code);
                code.push_back({Op::call, x.fn, {}});
                return d;
            } else {
                std::size_t dl = emit(x.lhs, p, code);
                std::size_t dr = emit(x.rhs, p, code);
                Op op = Op::add;
                switch (x.op) {
                    case BinOp::add: op = Op::add; break;
                    case BinOp::sub: op = Op::sub; break;
                    case BinOp::mul: op = Op::mul; break;
                    case BinOp::div: op = Op::div; break;
                    case BinOp::pow: op = Op::pow; break;
                }
                code.push_back({op, Func::sin, {}});
                return std::max(dl, dr + 1);
            }
        },
        n->v);
}

}  // namespace

const char* func_name(Func f) noexcept {
    for (const auto& [name, fn] : kFuncs) {
        if (fn == f) return name.data();
    }
    return "?";
}

bool lookup_func(std::string_view name, Func& out) noexcept {
    for (const auto& [n, fn] : kFuncs) {
        if (n == name) {
            out = fn;
            return true;
        }
    }
    return false;
}

cplx apply_func(Func f, cplx z) {
    switch (f) {
        case Func::sin: return std::sin(z);
        case Func::cos: return std::cos(z);
        case Func::tan: {
            const cplx c = std::cos(z);
            if (c == 0.0) throw DomainError("tan evaluated at a pole");
            return std::sin(z) / c;
        }
        case Func::sinh: return std::sinh(z);
        case Func::cosh: return std::cosh(z);
        case Func::tanh: return std::tanh(z);
        case Func::exp: return std::exp(z);
        case Func::ln:
            if (z == 0.0) throw DomainError("ln(0)");
            return std::log(principal(z));
        case Func::sqrt: return std::sqrt(principal(z));
    }
    return {};
}

cplx power(cplx a, cplx b) {
    if (b.imag() == 0.0 && std::fabs(b.real()) <= 1024.0 && std::nearbyint(b.real()) == b.real()) {
        long n = std::lround(b.real());
        if (n == 0) return 1.0;
        if (n < 0 && a == 0.0) throw DomainError("zero raised to a negative power");
        unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
        cplx result = 1.0;
        cplx base = a;
        while (k != 0) {
            if ((k & 1UL) != 0) result *= base;
            base *= base;
            k >>= 1;
        }
        return n < 0 ? 1.0 / result : result;
    }
    if (a == 0.0) {
        if (b.real() > 0.0) return 0.0;
        throw DomainError("zero raised to a non-positive power");
    }
    return std::exp(b * std::log(principal(a)));
}

// ---- ParamMap -------------------------------------------------------------

ParamMap::ParamMap(std::initializer_list<std::pair<const std::string, cplx>> init) {
    for (const auto& [k, v] : init) bind(k, v);
}

void ParamMap::bind(const std::string& name, cplx value) {
    if (!values_.emplace(name, value).second) throw ConfigError("parameter '" + name + "' bound twice");
}

void ParamMap::set(const std::string& name, cplx value) { values_[name] = value; }

cplx ParamMap::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw UnboundParameter(name);
    return it->second;
}

bool ParamMap::contains(const std::string& name) const { return values_.count(name) != 0; }

// ---- Expr -----------------------------------------------------------------

Expr Expr::number(double v) { return Expr(num(v)); }
Expr Expr::imag_unit() { return Expr(make_node(ImagNode{})); }
Expr Expr::time() { return Expr(make_node(TimeNode{})); }
Expr Expr::param(std::string name) { return Expr(make_node(ParamNode{std::move(name)})); }

Expr Expr::constant(cplx v) {
    NodePtr re = num(std::fabs(v.real()));
    if (std::signbit(v.real())) re = make_node(NegNode{re});
    if (v.imag() == 0.0) return Expr(re);
    NodePtr im = make_node(BinaryNode{BinOp::mul, num(std::fabs(v.imag())), make_node(ImagNode{})});
    const BinOp op = std::signbit(v.imag()) ? BinOp::sub : BinOp::add;
    return Expr(make_node(BinaryNode{op, re, im}));
}

Expr::Kind Expr::kind() const noexcept { return static_cast<Kind>(root_->v.index()); }

std::string Expr::str() const {
    std::string out;
    print(root_, out);
    return out;
}

Expr Expr::derivative() const { return Expr(differentiate(root_)); }

cplx Expr::eval(double t, const ParamMap& params) const { return evaluate(root_, t, params); }

bool Expr::depends_on_time() const { return depends_on_t(root_); }

std::set<std::string> Expr::parameters() const {
    std::set<std::string> out;
    collect_params(root_, out);
    return out;
}

bool Expr::structurally_equal(const Expr& other) const { return equal(root_, other.root_); }

CompiledExpr Expr::compile(const ParamMap& params) const {
    CompiledExpr c;
    c.max_depth_ = emit(root_, params, c.code_);
    return c;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(make_node(BinaryNode{BinOp::add, a.root_, b.root_})); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make_node(BinaryNode{BinOp::sub, a.root_, b.root_})); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make_node(BinaryNode{BinOp::mul, a.root_, b.root_})); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make_node(BinaryNode{BinOp::div, a.root_, b.root_})); }
Expr operator-(const Expr& a) { return Expr(make_node(NegNode{a.root_})); }
Expr pow(const Expr& a, const Expr& b) { return Expr(make_node(BinaryNode{BinOp::pow, a.root_, b.root_})); }
Expr apply(Func f, const Expr& a) { return Expr(make_node(CallNode{f, a.root_})); }

// ---- CompiledExpr -----------------------------------------------------------

cplx CompiledExpr::operator()(double t) const {
    constexpr std::size_t kInline = 32;
    std::array<cplx, kInline> small;
    std::vector<cplx> big;
    cplx* stack = small.data();
    if (max_depth_ > kInline) {
        big.resize(max_depth_);
        stack = big.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Instr::Op::push: stack[sp++] = in.value; break;
            case Instr::Op::time: stack[sp++] = t; break;
            case Instr::Op::neg: stack[sp - 1] = -stack[sp - 1]; break;
            case Instr::Op::call: stack[sp - 1] = apply_func(in.fn, stack[sp - 1]); break;
            case Instr::Op::add: --sp; stack[sp - 1] += stack[sp]; break;
            case Instr::Op::sub: --sp; stack[sp - 1] -= stack[sp]; break;
            case Instr::Op::mul: --sp; stack[sp - 1] *= stack[sp]; break;
            case Instr::Op::div:
                --sp;
                if (stack[sp] == 0.0) throw DomainError("division by zero");
                stack[sp - 1] /= stack[sp];
                break;
            case Instr::Op::pow: --sp; stack[sp - 1] = power(stack[sp - 1], stack[sp]); break;
        }
    }
    return sp == 0 ? cplx{} : stack[0];
}

// ---- TimeFunction ---------------------------------------------------------

namespace {

struct ExprImpl final : TimeFunction::Impl {
    CompiledExpr f;
    CompiledExpr df;
    cplx value(double t) const override { return f(t); }
    cplx deriv(double t) const override { return df(t); }
};

struct ConstImpl final : TimeFunction::Impl {
    cplx c;
    cplx value(double) const override { return c; }
    cplx deriv(double) const override { return 0.0; }
};

}  // namespace

TimeFunction::TimeFunction() : TimeFunction(constant(0.0)) {}

TimeFunction::TimeFunction(const Expr& e, const ParamMap& params) {
    auto impl = std::make_shared<ExprImpl>();
    impl->f = e.compile(params);
    impl->df = e.derivative().compile(params);
    impl->text = e.str();
    impl->is_expr = true;
    impl_ = std::move(impl);
}

TimeFunction TimeFunction::from_text(std::string_view source, const ParamMap& params) {
    return TimeFunction(Expr::parse(source), params);
}

TimeFunction TimeFunction::constant(cplx v) {
    auto impl = std::make_shared<ConstImpl>();
    impl->c = v;
    impl->text = Expr::constant(v).str();
    impl->is_expr = true;
    return TimeFunction(std::move(impl));
}

}  // namespace ptkit::modfn
