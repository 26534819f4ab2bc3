#pragma once

// Text form of expressions.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | name '(' expr ')' | name | '(' expr ')'
// `x` is the variable. Any other name is a parameter unless it is a supported
// function name followed by '('. A '-' directly in front of a number literal
// (not itself raised to a power) folds into a negative constant.

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "qes/expression.hpp"

namespace qes::expr {

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expression run() {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError(pos_, "empty expression, expected a number, name or '('");
        Expression e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "', expected an operator or end of input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (accept(c)) return;
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError(pos_, std::string("unexpected end of input, expected '") + c + "'");
        throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "', expected '" + c + "'");
    }

    bool at_number() {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        char c = text_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])));
    }

    Expression parse_expr() {
        Expression lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = lhs + parse_term();
            else if (accept('-'))
                lhs = lhs - parse_term();
            else
                return lhs;
        }
    }

    Expression parse_term() {
        Expression lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = lhs * parse_unary();
            else if (accept('/'))
                lhs = lhs / parse_unary();
            else
                return lhs;
        }
    }

    Expression parse_unary() {
        if (accept('-')) {
            if (at_number()) {
                std::size_t save = pos_;
                double v = read_number();
                if (!peek('^')) return Expression::constant(-v);
                pos_ = save;
            }
            return -parse_unary();
        }
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        if (accept('^')) return pow(base, parse_unary());
        return base;
    }

    double read_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_) throw SyntaxError(start, "malformed number");
        return v;
    }

    Expression parse_primary() {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError(pos_, "unexpected end of input, expected a number, name or '('");
        char c = text_[pos_];
        if (at_number()) return Expression::constant(read_number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name(text_.substr(start, pos_ - start));
            if (peek('(')) {
                auto f = lookup_function(name);
                if (!f)
                    throw Error(ErrorKind::UnknownFunction,
                                "unknown function '" + name + "' at offset " + std::to_string(start));
                ++pos_;
                Expression arg = parse_expr();
                expect(')');
                return Expression::apply(*f, arg);
            }
            if (name == "x") return Expression::variable();
            return Expression::parameter(std::move(name));
        }
        if (c == '(') {
            ++pos_;
            Expression e = parse_expr();
            expect(')');
            return e;
        }
        throw SyntaxError(pos_, std::string("unexpected '") + c + "', expected a number, name or '('");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// Binding strength used by the printer; higher binds tighter.
inline int precedence(const Expression& e) {
    switch (e.kind()) {
    case NodeKind::Constant: return e.value() < 0.0 || std::signbit(e.value()) ? 0 : 5;
    case NodeKind::Negate: return 3;
    case NodeKind::Binary:
        switch (e.op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
        }
        return 0;
    default: return 5;
    }
}

inline void print(const Expression& e, std::string& out);

inline void print_wrapped(const Expression& e, bool parens, std::string& out) {
    if (parens) out += '(';
    print(e, out);
    if (parens) out += ')';
}

inline void print(const Expression& e, std::string& out) {
    switch (e.kind()) {
    case NodeKind::Constant: out += format_number(e.value()); return;
    case NodeKind::Variable: out += 'x'; return;
    case NodeKind::Parameter: out += e.name(); return;
    case NodeKind::Function:
        out += function_name(e.func());
        print_wrapped(e.lhs(), true, out);
        return;
    case NodeKind::Negate: {
        out += '-';
        Expression a = e.lhs();
        // "-(2)" keeps a negated literal from reparsing as a negative constant.
        bool parens = precedence(a) < 3 || a.kind() == NodeKind::Constant;
        print_wrapped(a, parens, out);
        return;
    }
    case NodeKind::Binary: {
        static constexpr std::string_view ops = "+-*/^";
        int p = precedence(e);
        Expression l = e.lhs(), r = e.rhs();
        bool right_assoc = e.op() == BinaryOp::Pow;
        print_wrapped(l, precedence(l) < p || (right_assoc && precedence(l) <= p), out);
        out += ops[static_cast<int>(e.op())];
        print_wrapped(r, precedence(r) < p || (!right_assoc && precedence(r) <= p), out);
        return;
    }
    }
}

}  // namespace detail

/// Parses expression text. Throws SyntaxError (with offset) or an
/// UnknownFunction error.
inline Expression parse(std::string_view text) { return detail::Parser(text).run(); }

/// Prints with the minimum parentheses needed for parse() to rebuild the
/// same tree.
inline std::string to_string(const Expression& e) {
    std::string out;
    detail::print(e, out);
    return out;
}

}  // namespace qes::expr
