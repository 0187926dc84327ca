#include "revend/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "revend/errors.hpp"

namespace revend::expr {

NodePtr number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
}

NodePtr variable() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    return n;
}

NodePtr constant(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->name = std::move(name);
    return n;
}

NodePtr negate(NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->lhs = std::move(operand);
    return n;
}

NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr call(std::string function, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->name = std::move(function);
    n->lhs = std::move(arg);
    return n;
}

const std::vector<std::string>& function_names() {
    static const std::vector<std::string> names = {"sin", "cos",  "tan",  "sinh", "cosh", "tanh",
                                                   "exp", "log", "sqrt", "abs",  "atan"};
    return names;
}

const std::vector<std::string>& constant_names() {
    static const std::vector<std::string> names = {"pi", "e"};
    return names;
}

namespace {

bool is_function(std::string_view name) {
    const auto& f = function_names();
    return std::find(f.begin(), f.end(), name) != f.end();
}

std::string allowed_names() {
    std::string out = "t";
    for (const auto& c : constant_names()) out += ", " + c;
    for (const auto& f : function_names()) out += ", " + f;
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        skip_space();
        if (pos_ == src_.size()) fail("empty expression");
        NodePtr e = expr();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (accept('+')) {
                lhs = binary(Kind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = binary(Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (accept('*')) {
                lhs = binary(Kind::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = binary(Kind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return negate(unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return binary(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ == src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (accept('(')) {
            NodePtr inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return literal();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr literal() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
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
        if (n == 0) fail("malformed number");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            // Only an exponent if digits follow; otherwise "e" is left for the caller.
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && src_[look] >= '0' && src_[look] <= '9') {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return number(value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "t") return variable();
        if (name == "pi" || name == "e") return constant(name);
        if (is_function(name)) {
            if (!accept('(')) fail("expected '(' after " + name);
            NodePtr arg = expr();
            if (!accept(')')) fail("expected ')'");
            return call(name, arg);
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'; allowed: " + allowed_names());
    }
};

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print_into(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool parens, std::string& out) {
    if (parens) out += '(';
    print_into(n, out);
    if (parens) out += ')';
}

void print_into(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Number: {
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof buf, n.number);
            out.append(buf, res.ptr);
            return;
        }
        case Kind::Variable: out += 't'; return;
        case Kind::Constant: out += n.name; return;
        case Kind::Call:
            out += n.name;
            print_wrapped(*n.lhs, true, out);
            return;
        case Kind::Neg:
            out += '-';
            print_wrapped(*n.lhs, precedence(*n.lhs) < 3, out);
            return;
        case Kind::Pow:
            print_wrapped(*n.lhs, precedence(*n.lhs) <= 4, out);
            out += '^';
            print_wrapped(*n.rhs, precedence(*n.rhs) < 3, out);
            return;
        default: {
            const int p = precedence(n);
            const char op = n.kind == Kind::Add ? '+' : n.kind == Kind::Sub ? '-' : n.kind == Kind::Mul ? '*' : '/';
            print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
            out += op;
            print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
            return;
        }
    }
}

double apply(const std::string& f, double x) {
    if (f == "sin") return std::sin(x);
    if (f == "cos") return std::cos(x);
    if (f == "tan") return std::tan(x);
    if (f == "sinh") return std::sinh(x);
    if (f == "cosh") return std::cosh(x);
    if (f == "tanh") return std::tanh(x);
    if (f == "exp") return std::exp(x);
    if (f == "log") return std::log(x);
    if (f == "sqrt") return std::sqrt(x);
    if (f == "abs") return std::abs(x);
    if (f == "atan") return std::atan(x);
    throw DomainError("unknown function '" + f + "'");
}

}  // namespace

NodePtr parse(std::string_view src) { return Parser(src).run(); }

std::string print(const NodePtr& node) {
    std::string out;
    print_into(*node, out);
    return out;
}

double eval(const NodePtr& node, double t) {
    const Node& n = *node;
    switch (n.kind) {
        case Kind::Number: return n.number;
        case Kind::Variable: return t;
        case Kind::Constant: return n.name == "pi" ? std::numbers::pi : std::numbers::e;
        case Kind::Neg: return -eval(n.lhs, t);
        case Kind::Add: return eval(n.lhs, t) + eval(n.rhs, t);
        case Kind::Sub: return eval(n.lhs, t) - eval(n.rhs, t);
        case Kind::Mul: return eval(n.lhs, t) * eval(n.rhs, t);
        case Kind::Div: return eval(n.lhs, t) / eval(n.rhs, t);
        case Kind::Pow: return std::pow(eval(n.lhs, t), eval(n.rhs, t));
        case Kind::Call: return apply(n.name, eval(n.lhs, t));
    }
    return 0.0;
}

bool equal(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Number: return a->number == b->number;
        case Kind::Variable: return true;
        case Kind::Constant: return a->name == b->name;
        case Kind::Call: return a->name == b->name && equal(a->lhs, b->lhs);
        case Kind::Neg: return equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

}  // namespace revend::expr
