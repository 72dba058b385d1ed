#include "node.hpp"

#include "ptkit/error.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace ptkit::modfn {

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

// Recursive descent, one function per precedence level:
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := primary ('^' unary)?
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        skip_ws();
        if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_node(BinaryNode{BinOp::add, lhs, term()});
            } else if (accept('-')) {
                lhs = make_node(BinaryNode{BinOp::sub, lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    // a leading sign covers the whole product: -g*t is -(g*t)
    NodePtr term() {
        if (accept('-')) return make_node(NegNode{term()});
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_node(BinaryNode{BinOp::mul, lhs, unary()});
            } else if (accept('/')) {
                lhs = make_node(BinaryNode{BinOp::div, lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make_node(NegNode{unary()});
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make_node(BinaryNode{BinOp::pow, base, unary()});
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ == src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (is_ident_start(static_cast<unsigned char>(c))) return identifier();
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) throw ParseError("malformed number", start);
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;  // "2e" is 2 followed by identifier e
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
        return make_node(NumberNode{value});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        skip_ws();
        const bool call = pos_ < src_.size() && src_[pos_] == '(';
        Func fn{};
        const bool known = lookup_func(name, fn);
        if (call) {
            if (!known) throw ParseError("unknown function '" + std::string(name) + "'", start);
            ++pos_;
            NodePtr arg = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return make_node(CallNode{fn, arg});
        }
        if (known) throw ParseError("function '" + std::string(name) + "' used without argument", start);
        if (name == "i") return make_node(ImagNode{});
        if (name == "t") return make_node(TimeNode{});
        return make_node(ParamNode{std::string(name)});
    }
};

}  // namespace

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).run()); }

}  // namespace ptkit::modfn
