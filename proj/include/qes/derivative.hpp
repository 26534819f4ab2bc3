#pragma once

#include "qes/expression.hpp"

namespace qes::expr {

/// d/dx by structural rules; parameters are constants. The result is not
/// simplified.
inline Expression differentiate(const Expression& e) {
    if (!depends_on_x(e)) return num(0.0);
    switch (e.kind()) {
    case NodeKind::Variable: return num(1.0);
    case NodeKind::Negate: return -differentiate(e.lhs());
    case NodeKind::Function: {
        Expression u = e.lhs();
        Expression du = differentiate(u);
        switch (e.func()) {
        case Func::Sinh: return du * Expression::apply(Func::Cosh, u);
        case Func::Cosh: return du * Expression::apply(Func::Sinh, u);
        case Func::Tanh: return du * (num(1.0) - pow(Expression::apply(Func::Tanh, u), num(2.0)));
        case Func::Exp: return du * e;
        case Func::Sqrt: return du / (num(2.0) * e);
        case Func::Sin: return du * Expression::apply(Func::Cos, u);
        case Func::Cos: return -(du * Expression::apply(Func::Sin, u));
        case Func::Log: return du / u;
        }
        break;
    }
    case NodeKind::Binary: {
        Expression u = e.lhs(), v = e.rhs();
        switch (e.op()) {
        case BinaryOp::Add: return differentiate(u) + differentiate(v);
        case BinaryOp::Sub: return differentiate(u) - differentiate(v);
        case BinaryOp::Mul: return differentiate(u) * v + u * differentiate(v);
        case BinaryOp::Div: return (differentiate(u) * v - u * differentiate(v)) / pow(v, num(2.0));
        case BinaryOp::Pow:
            if (!depends_on_x(v)) {
                Expression reduced = v.kind() == NodeKind::Constant ? num(v.value() - 1.0) : v - num(1.0);
                return v * pow(u, reduced) * differentiate(u);
            }
            if (!depends_on_x(u)) return e * Expression::apply(Func::Log, u) * differentiate(v);
            return e * (differentiate(v) * Expression::apply(Func::Log, u) + v * differentiate(u) / u);
        }
        break;
    }
    default: break;
    }
    return num(0.0);
}

namespace detail {

inline std::optional<double> fold(const Expression& e) {
    auto r = try_evaluate(e, 0.0, {});
    if (!r.ok()) return std::nullopt;
    return r.value;
}

inline Expression simplify_once(const Expression& e) {
    switch (e.kind()) {
    case NodeKind::Negate: {
        Expression a = simplify_once(e.lhs());
        if (a.kind() == NodeKind::Constant) return num(-a.value());
        if (a.kind() == NodeKind::Negate) return a.lhs();
        return -a;
    }
    case NodeKind::Function: {
        Expression a = simplify_once(e.lhs());
        Expression f = Expression::apply(e.func(), a);
        if (a.kind() == NodeKind::Constant)
            if (auto v = fold(f)) return num(*v);
        return f;
    }
    case NodeKind::Binary: {
        Expression a = simplify_once(e.lhs());
        Expression b = simplify_once(e.rhs());
        Expression whole = Expression::binary(e.op(), a, b);
        if (a.kind() == NodeKind::Constant && b.kind() == NodeKind::Constant)
            if (auto v = fold(whole)) return num(*v);
        switch (e.op()) {
        case BinaryOp::Add:
            if (a.is_constant(0.0)) return b;
            if (b.is_constant(0.0)) return a;
            if (b.kind() == NodeKind::Negate) return a - b.lhs();
            break;
        case BinaryOp::Sub:
            if (b.is_constant(0.0)) return a;
            if (a.is_constant(0.0)) return -b;
            if (b.kind() == NodeKind::Negate) return a + b.lhs();
            break;
        case BinaryOp::Mul:
            if (a.is_constant(0.0) || b.is_constant(0.0)) return num(0.0);
            if (a.is_constant(1.0)) return b;
            if (b.is_constant(1.0)) return a;
            if (a.is_constant(-1.0)) return -b;
            if (b.is_constant(-1.0)) return -a;
            break;
        case BinaryOp::Div:
            if (b.is_constant(1.0)) return a;
            if (a.is_constant(0.0) && !b.is_constant(0.0)) return num(0.0);
            break;
        case BinaryOp::Pow:
            if (b.is_constant(1.0)) return a;
            if (b.is_constant(0.0)) return num(1.0);
            if (a.is_constant(1.0)) return num(1.0);
            break;
        }
        return whole;
    }
    default: return e;
    }
}

}  // namespace detail

/// Constant folding plus the identities x+0, x*1, x*0, x^1 (and a few sign
/// rewrites), applied until nothing changes. No algebraic rearrangement.
inline Expression simplify(const Expression& e) {
    Expression cur = e;
    for (;;) {
        Expression next = detail::simplify_once(cur);
        if (next == cur) return next;
        cur = next;
    }
}

/// Repeated differentiation with simplification after each step.
inline Expression derivative(const Expression& e, int order) {
    Expression cur = simplify(e);
    for (int i = 0; i < order; ++i) cur = simplify(differentiate(cur));
    return cur;
}

}  // namespace qes::expr
