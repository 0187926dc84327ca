#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace revend::expr {

enum class Kind { Number, Variable, Constant, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression tree over the single variable t.
struct Node {
    Kind kind = Kind::Number;
    double number = 0.0;
    // Constant name ("pi", "e") or function name for calls.
    std::string name;
    NodePtr lhs;
    NodePtr rhs;
};

NodePtr number(double v);
NodePtr variable();
NodePtr constant(std::string name);
NodePtr negate(NodePtr operand);
NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs);
NodePtr call(std::string function, NodePtr arg);

const std::vector<std::string>& function_names();
const std::vector<std::string>& constant_names();

/// Parses
///   expr    := term (("+" | "-") term)*
///   term    := unary (("*" | "/") unary)*
///   unary   := "-" unary | power
///   power   := primary ("^" unary)?
///   primary := NUMBER | "t" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"
/// so "^" binds tighter than unary minus and is right-associative.
/// Throws ParseError carrying the byte offset of the problem.
NodePtr parse(std::string_view src);

/// Prints with the fewest parentheses that parse back to the same tree.
std::string print(const NodePtr& node);

double eval(const NodePtr& node, double t);

bool equal(const NodePtr& a, const NodePtr& b);

}  // namespace revend::expr
