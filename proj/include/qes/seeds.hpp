#pragma once

// Built-in seed families with their closed-form potentials, wavefunctions and
// level spacings, used as reference oracles for the generic construction.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qes/error.hpp"
#include "qes/expr.hpp"
#include "qes/numeric.hpp"
#include "qes/susy.hpp"

namespace qes::seeds {

using expr::Expression;
using expr::ParameterBindings;
using numeric::Interval;

/// A named condition `expression > 0` over the parameters.
struct Constraint {
    std::string label;  // human form, e.g. "b+c>0"
    Expression positive;

    bool holds(const ParameterBindings& p) const { return expr::evaluate(positive, 0.0, p) > 0.0; }
};

enum class Normalizability { BothStates, GroundOnly };

inline std::string_view to_string(Normalizability n) {
    return n == Normalizability::BothStates ? "BothStates" : "GroundOnly";
}

struct SeedCatalogEntry {
    std::string name;
    std::string description;
    std::string wplus_text;
    Expression wplus;
    std::vector<std::string> param_names;
    std::vector<Constraint> constraints;
    std::optional<Expression> closed_form_v;
    std::optional<Expression> closed_form_psi0;
    std::optional<Expression> closed_form_psi1;
    Expression epsilon_formula;
    std::optional<Constraint> excited_state_rule;  // absent: both states always normalizable
    Interval default_interval;
    std::size_t default_points = 4001;
    ParameterBindings default_params;
};

namespace detail {

inline Constraint positive(std::string label, std::string_view text) { return {std::move(label), expr::parse(text)}; }

inline std::vector<SeedCatalogEntry> build_catalog() {
    std::vector<SeedCatalogEntry> out;

    {
        SeedCatalogEntry e;
        e.name = "razavy";
        e.description = "shifted sinh seed; asymmetric Razavy-type double well";
        e.wplus_text = "A*(sinh(alpha*x) - sinh(alpha*x0))";
        e.param_names = {"A", "alpha", "x0"};
        e.constraints = {positive("A>0", "A"), positive("alpha>0", "alpha")};
        e.closed_form_v = expr::parse(
            "(A^2*(sinh(alpha*x) - sinh(alpha*x0))^2/4 - A*alpha*cosh(alpha*x) + A*alpha*cosh(alpha*x0)/2"
            " + alpha^2/4)/2");
        e.closed_form_psi0 =
            expr::parse("cosh(alpha*(x + x0)/2)*exp(-A/(2*alpha)*cosh(alpha*x) + A/2*sinh(alpha*x0)*x)");
        e.closed_form_psi1 =
            expr::parse("sinh(alpha*(x - x0)/2)*exp(-A/(2*alpha)*cosh(alpha*x) + A/2*sinh(alpha*x0)*x)");
        e.epsilon_formula = expr::parse("alpha*A*cosh(alpha*x0)/2");
        e.default_interval = {-8.0, 8.0};
        e.default_params = {{"A", 1.0}, {"alpha", 2.0}, {"x0", 0.3}};
        out.push_back(std::move(e));
    }
    {
        SeedCatalogEntry e;
        e.name = "hyperbolic-ratio";
        e.description = "sinh over (b + c cosh); Razavy as c->0, Rosen-Morse partner as b->0";
        e.wplus_text = "A*sinh(alpha*x)/(b + c*cosh(alpha*x))";
        e.param_names = {"A", "alpha", "b", "c"};
        e.constraints = {positive("A>0", "A"), positive("alpha>0", "alpha"), positive("c>0", "c"),
                         positive("b+c>0", "b + c")};
        e.closed_form_v = expr::parse(
            "((b^2 - c^2)*(A + alpha*c)*(A + 3*alpha*c)/(b + c*cosh(alpha*x))^2"
            " - 2*b*(A + alpha*c)^2/(b + c*cosh(alpha*x))"
            " + alpha^2*b*c^3/(b + c)^2/cosh(alpha*x/2)^2"
            " + (alpha*c^2 + A*(b + c))^2/(b + c)^2)/(8*c^2)");
        e.closed_form_psi0 =
            expr::parse("cosh(alpha*x/2)^(b/(b + c))*(b + c*cosh(alpha*x))^(-1/2 - A/(2*alpha*c))");
        e.closed_form_psi1 = expr::parse(
            "sinh(alpha*x)*cosh(alpha*x/2)^(-b/(b + c))*(b + c*cosh(alpha*x))^(-1/2 - A/(2*alpha*c))");
        e.epsilon_formula = expr::parse("alpha*A/(2*(b + c))");
        e.excited_state_rule = positive("c/(b+c) < A/(alpha*c)", "A/(alpha*c) - c/(b + c)");
        e.default_interval = {-40.0, 40.0};
        e.default_params = {{"A", 2.0}, {"alpha", 1.0}, {"b", 1.0}, {"c", 1.0}};
        out.push_back(std::move(e));
    }
    {
        SeedCatalogEntry e;
        e.name = "sextic";
        e.description = "odd cubic polynomial; sextic anharmonic oscillator";
        e.wplus_text = "a*x + b*x^3";
        e.param_names = {"a", "b"};
        e.constraints = {positive("a>0", "a"), positive("b>0", "b")};
        e.closed_form_v = expr::parse(
            "(a^2 - 12*b)*x^2/8 + a*b*x^4/4 + b^2*x^6/8 + 3*a*b/(8*(a + b*x^2)^2) + 3*b/(8*(a + b*x^2)) - a/4");
        e.closed_form_psi0 = expr::parse("(a + b*x^2)^(3/4)*exp(-x^2*(2*a + b*x^2)/8)");
        e.closed_form_psi1 = expr::parse("x*(a + b*x^2)^(1/4)*exp(-x^2*(2*a + b*x^2)/8)");
        e.epsilon_formula = expr::parse("a/2");
        e.default_interval = {-8.0, 8.0};
        e.default_params = {{"a", 2.0}, {"b", 1.0}};
        out.push_back(std::move(e));
    }
    {
        SeedCatalogEntry e;
        e.name = "algebraic-sqrt";
        e.description = "x/sqrt(b^2+x^2); exponentially decaying states, excited one only for A*b>1";
        e.wplus_text = "A*x/sqrt(b^2 + x^2)";
        e.param_names = {"A", "b"};
        e.constraints = {positive("A>0", "A"), positive("b>0", "b")};
        e.closed_form_v = expr::parse(
            "(1 - A^2*b^2)/(8*(b^2 + x^2)) - A*b^2/(2*(b^2 + x^2)^(3/2)) - 5*b^2/(8*(b^2 + x^2)^2)"
            " + (1 + A*b)^2/(8*b^2)");
        e.closed_form_psi0 =
            expr::parse("(1 + b/sqrt(b^2 + x^2))^(1/2)*exp(-sqrt(b^2 + x^2)*(1 + A*b)/(2*b))");
        e.closed_form_psi1 = expr::parse(
            "x/sqrt(b^2 + x^2)*(1 + b/sqrt(b^2 + x^2))^(-1/2)*exp(-sqrt(b^2 + x^2)*(-1 + A*b)/(2*b))");
        e.epsilon_formula = expr::parse("A/(2*b)");
        e.excited_state_rule = positive("A*b>1", "A*b - 1");
        e.default_interval = {-60.0, 60.0};
        e.default_points = 12001;
        e.default_params = {{"A", 3.0}, {"b", 1.0}};
        out.push_back(std::move(e));
    }
    for (auto& e : out) e.wplus = expr::parse(e.wplus_text);
    return out;
}

}  // namespace detail

/// The four built-in families: razavy, hyperbolic-ratio, sextic,
/// algebraic-sqrt.
inline const std::vector<SeedCatalogEntry>& catalog() {
    static const std::vector<SeedCatalogEntry> entries = detail::build_catalog();
    return entries;
}

inline const SeedCatalogEntry& find_entry(std::string_view name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    std::string known;
    for (const auto& e : catalog()) known += (known.empty() ? "" : ", ") + e.name;
    throw Error(ErrorKind::UnknownSeed, "unknown seed '" + std::string(name) + "' (known: " + known + ")");
}

/// Defaults overlaid with `params`; rejects names the family does not have.
inline ParameterBindings resolve_params(const SeedCatalogEntry& entry, const ParameterBindings& params) {
    ParameterBindings merged = entry.default_params;
    for (const auto& [k, v] : params) {
        if (std::find(entry.param_names.begin(), entry.param_names.end(), k) == entry.param_names.end())
            throw Error(ErrorKind::UnknownParameter, "seed '" + entry.name + "' has no parameter '" + k + "'");
        merged[k] = v;
    }
    return merged;
}

inline void check_constraints(const SeedCatalogEntry& entry, const ParameterBindings& params) {
    for (const auto& c : entry.constraints)
        if (!c.holds(params)) throw Error(ErrorKind::ConstraintViolation, c.label);
}

struct Instance {
    susy::SeedFunction seed;
    SeedCatalogEntry entry;
};

/// Validated seed for a catalog family. Missing parameters take their
/// defaults; the interval defaults to the family's working interval.
inline Instance instantiate(std::string_view name, const ParameterBindings& params,
                            std::optional<Interval> interval = std::nullopt) {
    const SeedCatalogEntry& entry = find_entry(name);
    ParameterBindings bound = resolve_params(entry, params);
    check_constraints(entry, bound);
    return {susy::validate_seed(entry.wplus, bound, interval.value_or(entry.default_interval)), entry};
}

enum class ClosedForm { V, Psi0, Psi1 };

/// The printed closed form evaluated as is (wavefunctions unnormalized).
inline double closed_form_reference(const SeedCatalogEntry& entry, ClosedForm kind, const ParameterBindings& params,
                                    double x) {
    const std::optional<Expression>& f = kind == ClosedForm::V      ? entry.closed_form_v
                                         : kind == ClosedForm::Psi0 ? entry.closed_form_psi0
                                                                    : entry.closed_form_psi1;
    if (!f) throw Error(ErrorKind::MissingClosedForm, "seed '" + entry.name + "' has no such closed form");
    return expr::evaluate(*f, x, params);
}

inline Normalizability normalizability(const SeedCatalogEntry& entry, const ParameterBindings& params) {
    if (!entry.excited_state_rule) return Normalizability::BothStates;
    return entry.excited_state_rule->holds(params) ? Normalizability::BothStates : Normalizability::GroundOnly;
}

/// For hyperbolic-ratio with A = alpha*c the sinh term of W1 vanishes and
/// W1 = alpha*b/(2(b+c)) * tanh(alpha x/2). Returns the largest deviation
/// from that form over `probes` points of the working interval.
inline double ces_reduction_check(const ParameterBindings& params, std::size_t probes = 2001) {
    Instance inst = instantiate("hyperbolic-ratio", params);
    const auto& p = inst.seed.bindings;
    const double alpha = p.at("alpha"), b = p.at("b"), c = p.at("c");
    const double k = alpha * b / (2.0 * (b + c));
    numeric::Grid g(inst.seed.interval.lo, inst.seed.interval.hi, probes);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = g[i];
        worst = std::max(worst, std::abs(susy::superpotentials(inst.seed, x).w1 - k * std::tanh(alpha * x / 2.0)));
    }
    return worst;
}

}  // namespace qes::seeds
