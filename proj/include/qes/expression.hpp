#pragma once

// Expression trees over one real variable `x` with named real parameters.
// Trees are immutable and share structure; evaluation is a pure function.

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "qes/error.hpp"

namespace qes::expr {

enum class NodeKind { Constant, Variable, Parameter, Negate, Binary, Function };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sinh, Cosh, Tanh, Exp, Sqrt, Sin, Cos, Log };

inline constexpr std::array<std::pair<std::string_view, Func>, 8> kFunctions{{
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"tanh", Func::Tanh},
    {"exp", Func::Exp},
    {"sqrt", Func::Sqrt},
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"log", Func::Log},
}};

inline std::string_view function_name(Func f) {
    for (const auto& [name, func] : kFunctions)
        if (func == f) return name;
    return "?";
}

inline std::optional<Func> lookup_function(std::string_view name) {
    for (const auto& [n, func] : kFunctions)
        if (n == name) return func;
    return std::nullopt;
}

using ParameterBindings = std::map<std::string, double, std::less<>>;

class Expression;

namespace detail {
struct Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;
    std::string name;
    BinaryOp op = BinaryOp::Add;
    Func func = Func::Exp;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};
}  // namespace detail

/// Immutable expression tree. Copies share structure.
class Expression {
public:
    Expression() : Expression(constant(0.0)) {}

    static Expression constant(double v) {
        auto n = std::make_shared<detail::Node>();
        n->kind = NodeKind::Constant;
        n->value = v;
        return Expression(std::move(n));
    }
    static Expression variable() {
        auto n = std::make_shared<detail::Node>();
        n->kind = NodeKind::Variable;
        return Expression(std::move(n));
    }
    static Expression parameter(std::string name) {
        auto n = std::make_shared<detail::Node>();
        n->kind = NodeKind::Parameter;
        n->name = std::move(name);
        return Expression(std::move(n));
    }
    static Expression negate(const Expression& e) {
        auto n = std::make_shared<detail::Node>();
        n->kind = NodeKind::Negate;
        n->lhs = e.node_;
        return Expression(std::move(n));
    }
    static Expression binary(BinaryOp op, const Expression& a, const Expression& b) {
        auto n = std::make_shared<detail::Node>();
        n->kind = NodeKind::Binary;
        n->op = op;
        n->lhs = a.node_;
        n->rhs = b.node_;
        return Expression(std::move(n));
    }
    static Expression apply(Func f, const Expression& arg) {
        auto n = std::make_shared<detail::Node>();
        n->kind = NodeKind::Function;
        n->func = f;
        n->lhs = arg.node_;
        return Expression(std::move(n));
    }

    NodeKind kind() const { return node_->kind; }
    double value() const { return node_->value; }
    const std::string& name() const { return node_->name; }
    BinaryOp op() const { return node_->op; }
    Func func() const { return node_->func; }
    Expression lhs() const { return Expression(node_->lhs); }
    Expression rhs() const { return Expression(node_->rhs); }

    const detail::Node& node() const { return *node_; }

    bool is_constant(double v) const { return kind() == NodeKind::Constant && value() == v; }

    friend bool operator==(const Expression& a, const Expression& b) { return equal(*a.node_, *b.node_); }

private:
    explicit Expression(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}

    static bool equal(const detail::Node& a, const detail::Node& b) {
        if (&a == &b) return true;
        if (a.kind != b.kind) return false;
        switch (a.kind) {
        case NodeKind::Constant: return a.value == b.value;
        case NodeKind::Variable: return true;
        case NodeKind::Parameter: return a.name == b.name;
        case NodeKind::Negate: return equal(*a.lhs, *b.lhs);
        case NodeKind::Binary: return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
        case NodeKind::Function: return a.func == b.func && equal(*a.lhs, *b.lhs);
        }
        return false;
    }

    std::shared_ptr<const detail::Node> node_;
};

inline Expression operator+(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Add, a, b); }
inline Expression operator-(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Sub, a, b); }
inline Expression operator*(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Mul, a, b); }
inline Expression operator/(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Div, a, b); }
inline Expression operator-(const Expression& a) { return Expression::negate(a); }
inline Expression pow(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Pow, a, b); }
inline Expression num(double v) { return Expression::constant(v); }

// ---------------------------------------------------------------------------
// Queries

inline bool depends_on_x(const Expression& e) {
    switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Parameter: return false;
    case NodeKind::Variable: return true;
    case NodeKind::Negate:
    case NodeKind::Function: return depends_on_x(e.lhs());
    case NodeKind::Binary: return depends_on_x(e.lhs()) || depends_on_x(e.rhs());
    }
    return false;
}

inline void collect_parameters(const Expression& e, std::set<std::string>& out) {
    switch (e.kind()) {
    case NodeKind::Parameter: out.insert(e.name()); break;
    case NodeKind::Negate:
    case NodeKind::Function: collect_parameters(e.lhs(), out); break;
    case NodeKind::Binary:
        collect_parameters(e.lhs(), out);
        collect_parameters(e.rhs(), out);
        break;
    default: break;
    }
}

inline std::set<std::string> parameters(const Expression& e) {
    std::set<std::string> out;
    collect_parameters(e, out);
    return out;
}

inline std::size_t node_count(const Expression& e) {
    switch (e.kind()) {
    case NodeKind::Negate:
    case NodeKind::Function: return 1 + node_count(e.lhs());
    case NodeKind::Binary: return 1 + node_count(e.lhs()) + node_count(e.rhs());
    default: return 1;
    }
}

// ---------------------------------------------------------------------------
// Evaluation

/// Result of a non-throwing evaluation: a finite value or the error that
/// prevented one.
struct Evaluation {
    double value = 0.0;
    std::optional<Error> error;

    bool ok() const { return !error.has_value(); }
};

namespace detail {

inline Evaluation fail(ErrorKind kind, const std::string& msg) { return {0.0, Error(kind, msg)}; }

inline Evaluation finite_or_fail(double v, std::string_view what) {
    if (!std::isfinite(v)) return fail(ErrorKind::Domain, "non-finite result in " + std::string(what));
    return {v, std::nullopt};
}

inline Evaluation eval_function(Func f, double a) {
    switch (f) {
    case Func::Sinh: return finite_or_fail(std::sinh(a), "sinh");
    case Func::Cosh: return finite_or_fail(std::cosh(a), "cosh");
    case Func::Tanh: return {std::tanh(a), std::nullopt};
    case Func::Exp: return finite_or_fail(std::exp(a), "exp");
    case Func::Sqrt:
        if (a < 0.0) return fail(ErrorKind::Domain, "sqrt of negative argument");
        return {std::sqrt(a), std::nullopt};
    case Func::Sin: return {std::sin(a), std::nullopt};
    case Func::Cos: return {std::cos(a), std::nullopt};
    case Func::Log:
        if (a <= 0.0) return fail(ErrorKind::Domain, "log of non-positive argument");
        return {std::log(a), std::nullopt};
    }
    return fail(ErrorKind::Domain, "unknown function");
}

inline Evaluation eval_binary(BinaryOp op, double a, double b) {
    switch (op) {
    case BinaryOp::Add: return finite_or_fail(a + b, "addition");
    case BinaryOp::Sub: return finite_or_fail(a - b, "subtraction");
    case BinaryOp::Mul: return finite_or_fail(a * b, "multiplication");
    case BinaryOp::Div:
        if (b == 0.0) return fail(ErrorKind::Domain, "division by zero");
        return finite_or_fail(a / b, "division");
    case BinaryOp::Pow:
        if (a < 0.0 && b != std::nearbyint(b)) return fail(ErrorKind::Domain, "negative base to non-integer power");
        if (a == 0.0 && b < 0.0) return fail(ErrorKind::Domain, "division by zero (zero base to negative power)");
        return finite_or_fail(std::pow(a, b), "power");
    }
    return fail(ErrorKind::Domain, "unknown operator");
}

inline Evaluation eval_node(const Node& n, double x, const ParameterBindings& bindings) {
    switch (n.kind) {
    case NodeKind::Constant: return {n.value, std::nullopt};
    case NodeKind::Variable: return {x, std::nullopt};
    case NodeKind::Parameter: {
        auto it = bindings.find(n.name);
        if (it == bindings.end()) return fail(ErrorKind::UnboundParameter, "parameter '" + n.name + "' is not bound");
        return {it->second, std::nullopt};
    }
    case NodeKind::Negate: {
        auto a = eval_node(*n.lhs, x, bindings);
        if (a.ok()) a.value = -a.value;
        return a;
    }
    case NodeKind::Function: {
        auto a = eval_node(*n.lhs, x, bindings);
        if (!a.ok()) return a;
        return eval_function(n.func, a.value);
    }
    case NodeKind::Binary: {
        auto a = eval_node(*n.lhs, x, bindings);
        if (!a.ok()) return a;
        auto b = eval_node(*n.rhs, x, bindings);
        if (!b.ok()) return b;
        return eval_binary(n.op, a.value, b.value);
    }
    }
    return fail(ErrorKind::Domain, "malformed node");
}

}  // namespace detail

inline Evaluation try_evaluate(const Expression& e, double x, const ParameterBindings& bindings) {
    return detail::eval_node(e.node(), x, bindings);
}

/// Throwing evaluation.
inline double evaluate(const Expression& e, double x, const ParameterBindings& bindings) {
    auto r = try_evaluate(e, x, bindings);
    if (!r.ok()) throw *r.error;
    return r.value;
}

}  // namespace qes::expr
