#pragma once

#include "ptkit/modfn.hpp"

#include <string>
#include <variant>

namespace ptkit::modfn {

struct NumberNode {
    double value;
};
struct ImagNode {};
struct TimeNode {};
struct ParamNode {
    std::string name;
};
struct NegNode {
    NodePtr arg;
};
struct BinaryNode {
    BinOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct CallNode {
    Func fn;
    NodePtr arg;
};

struct Node {
    std::variant<NumberNode, ImagNode, TimeNode, ParamNode, NegNode, BinaryNode, CallNode> v;
};

inline NodePtr make_node(auto&& alt) {
    return std::make_shared<const Node>(Node{std::forward<decltype(alt)>(alt)});
}

bool lookup_func(std::string_view name, Func& out) noexcept;

/// Elementary function on the principal branch; throws DomainError at poles.
cplx apply_func(Func f, cplx z);
/// a^b with exact repeated multiplication for small integer exponents.
cplx power(cplx a, cplx b);

}  // namespace ptkit::modfn
