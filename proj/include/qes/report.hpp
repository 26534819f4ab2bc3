#pragma once

// Full verification of a constructed model against the finite-difference
// spectrum and, for catalog seeds, against the closed forms.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qes/error.hpp"
#include "qes/expr.hpp"
#include "qes/numeric.hpp"
#include "qes/seeds.hpp"
#include "qes/susy.hpp"

namespace qes::report {

using expr::ParameterBindings;
using numeric::Grid;
using numeric::Interval;

inline constexpr std::size_t kDefaultPoints = 4001;
inline constexpr Interval kDefaultCustomInterval{-10.0, 10.0};

struct Tolerances {
    double eigenvalue = 1e-4;      // |E_numeric - E_analytic|
    double residual = 5e-6;        // Schrodinger residual of the analytic states
    double riccati = 1e-9;         // scaled Riccati residual
    double closed_form_v = 1e-10;  // |V - V_ref| / (1 + |V|)
    double closed_form_psi = 1e-8; // relative, where |psi| > 1e-6 max
    double susy_ratio = 1e-6;      // spread of B+ exp(-int W1) / psi1
    double edge = 1e-10;           // |psi(edge)| / max|psi|
    double epsilon_formula = 1e-12;
    double bisection = 1e-10;
};

/// A resolved problem: validated seed, its catalog entry when built in, and
/// the verification grid.
struct Problem {
    susy::SeedFunction seed;
    std::optional<seeds::SeedCatalogEntry> entry;
    std::string label;  // seed name, or the custom expression text
    Grid grid;
};

inline Problem make_builtin_problem(const std::string& name, const ParameterBindings& params,
                                    std::optional<Interval> interval, std::optional<std::size_t> points) {
    seeds::Instance inst = seeds::instantiate(name, params, interval);
    std::size_t n = points.value_or(inst.entry.default_points);
    Grid g = Grid::odd(inst.seed.interval.lo, inst.seed.interval.hi, n);
    return {std::move(inst.seed), std::move(inst.entry), name, g};
}

inline Problem make_custom_problem(const std::string& text, const ParameterBindings& params,
                                   std::optional<Interval> interval, std::optional<std::size_t> points) {
    Interval iv = interval.value_or(kDefaultCustomInterval);
    susy::SeedFunction seed = susy::validate_seed(expr::parse(text), params, iv);
    Grid g = Grid::odd(iv.lo, iv.hi, points.value_or(kDefaultPoints));
    return {std::move(seed), std::nullopt, text, g};
}

struct Check {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note;   // space-separated key=value tokens, e.g. "note=ground-only"
    std::string error;  // message of an error raised inside the check
};

struct VerificationReport {
    std::string seed;
    ParameterBindings params;
    double x0 = 0.0;
    double epsilon = 0.0;
    double e0 = 0.0;
    double e1 = 0.0;
    bool ground_only = false;
    std::vector<Check> checks;

    bool overall() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace detail {

inline Check at_most(std::string name, double value, double tol) {
    return {std::move(name), value, tol, std::isfinite(value) && value <= tol, {}, {}};
}

inline Check skipped(std::string name, double tol, std::string why) {
    return {std::move(name), std::nan(""), tol, true, "note=" + why, {}};
}

inline Check failed(std::string name, double tol, const std::exception& e) {
    return {std::move(name), std::nan(""), tol, false, {}, e.what()};
}

inline double verdict_code(numeric::ProbeVerdict v) { return static_cast<double>(static_cast<int>(v)); }

// Largest |a/|a|_2 - s b/|b|_2| / |a/|a|_2| over points where a is above
// 1e-6 of its peak; s aligns the overall sign.
inline double normalized_deviation(const std::vector<double>& a, const std::vector<double>& b, double h) {
    const double na = std::sqrt(numeric::l2_mass(a, h));
    const double nb = std::sqrt(numeric::l2_mass(b, h));
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    const double s = dot >= 0.0 ? 1.0 : -1.0;
    const double peak = numeric::max_abs(a) / na;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i] / na;
        if (std::abs(x) <= 1e-6 * peak) continue;
        worst = std::max(worst, std::abs(x - s * b[i] / nb) / std::abs(x));
    }
    return worst;
}

}  // namespace detail

/// Spread of B+ exp(-int W1) / psi1 (max relative deviation from the median)
/// over points with |psi1| > 1e-6 max and at least `node_gap` away from x0.
inline double susy_ratio_spread(const susy::SeedFunction& seed, const susy::WavefunctionTable& wf,
                                const susy::Operand& partner_ground, double node_gap) {
    std::vector<double> bplus = susy::apply_B_plus(seed, partner_ground);
    const double peak = numeric::max_abs(wf.psi1);
    std::vector<double> ratios;
    for (std::size_t i = 0; i < wf.grid.size(); ++i) {
        if (std::abs(wf.grid[i] - seed.x0) < node_gap) continue;
        if (std::abs(wf.psi1[i]) <= 1e-6 * peak) continue;
        ratios.push_back(bplus[i] / wf.psi1[i]);
    }
    if (ratios.empty()) return std::nan("");
    std::vector<double> sorted = ratios;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    double worst = 0.0;
    for (double r : ratios) worst = std::max(worst, std::abs(r - median) / std::abs(median));
    return worst;
}

/// Largest scaled Riccati residual over `count` equispaced points of the
/// working interval plus x0 and x0 +- {1e-6, 1e-3}.
inline double max_riccati_residual(const susy::SeedFunction& seed, std::size_t count = 1000) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < count; ++i)
        xs.push_back(seed.interval.lo + seed.interval.width() * static_cast<double>(i) / static_cast<double>(count - 1));
    for (double off : {0.0, 1e-6, -1e-6, 1e-3, -1e-3}) xs.push_back(seed.x0 + off);
    double worst = 0.0;
    for (double x : xs) worst = std::max(worst, susy::scaled_riccati_residual(seed, x));
    return worst;
}

/// Runs every check. Individual failures (including thrown errors inside a
/// check) are recorded as failed checks; nothing here aborts the report.
inline VerificationReport verify(const Problem& pb, const Tolerances& tol = {}) {
    const susy::SeedFunction& seed = pb.seed;
    const Grid& g = pb.grid;
    VerificationReport rep;
    rep.seed = pb.label;
    rep.params = seed.bindings;
    rep.x0 = seed.x0;
    rep.epsilon = susy::epsilon_of(seed);

    auto vminus = [&](double x) { return susy::potential(seed, susy::Branch::Minus, x); };

    // Normalizability: the printed rule when there is one, and the probe.
    std::optional<seeds::Normalizability> rule;
    if (pb.entry) rule = seeds::normalizability(*pb.entry, seed.bindings);
    numeric::ProbeVerdict probe0 = numeric::ProbeVerdict::Inconclusive;
    numeric::ProbeVerdict probe1 = numeric::ProbeVerdict::Inconclusive;
    std::string probe0_error, probe1_error;
    try {
        probe0 = susy::probe_normalizability(seed, susy::State::Ground, g.interval(), g.spacing()).verdict;
    } catch (const std::exception& e) {
        probe0_error = e.what();
    }
    try {
        probe1 = susy::probe_normalizability(seed, susy::State::Excited, g.interval(), g.spacing()).verdict;
    } catch (const std::exception& e) {
        probe1_error = e.what();
    }
    rep.ground_only = rule ? *rule == seeds::Normalizability::GroundOnly : probe1 == numeric::ProbeVerdict::Diverging;
    const std::string ground_only_note = "ground-only";

    // Spectrum of the discretized H-.
    std::optional<numeric::SpectrumResult> spec;
    try {
        spec = numeric::lowest_eigenvalues(numeric::discretize(vminus, g), 2, tol.bisection);
        rep.e0 = spec->eigenvalues[0];
        rep.e1 = spec->eigenvalues[1];
    } catch (const std::exception& e) {
        rep.checks.push_back(detail::failed("e0_abs", tol.eigenvalue, e));
        rep.checks.push_back(detail::failed("e1_minus_epsilon", tol.eigenvalue, e));
    }
    if (spec) {
        rep.checks.push_back(detail::at_most("e0_abs", std::abs(rep.e0), tol.eigenvalue));
        if (rep.ground_only)
            rep.checks.push_back(detail::skipped("e1_minus_epsilon", tol.eigenvalue, ground_only_note));
        else
            rep.checks.push_back(detail::at_most("e1_minus_epsilon", std::abs(rep.e1 - rep.epsilon), tol.eigenvalue));
    }

    try {
        rep.checks.push_back(detail::at_most("riccati_max_residual", max_riccati_residual(seed), tol.riccati));
    } catch (const std::exception& e) {
        rep.checks.push_back(detail::failed("riccati_max_residual", tol.riccati, e));
    }

    // Sign condition on both superpotentials at the ends of the box.
    for (int which = 0; which < 2; ++which) {
        std::string name = which == 0 ? "sign_condition_w" : "sign_condition_w1";
        if (which == 1 && rep.ground_only) {
            rep.checks.push_back(detail::skipped(name, 0.0, ground_only_note));
            continue;
        }
        try {
            auto lo = susy::superpotentials(seed, seed.interval.lo);
            auto hi = susy::superpotentials(seed, seed.interval.hi);
            double v = which == 0 ? std::min(-lo.w, hi.w) : std::min(-lo.w1, hi.w1);
            rep.checks.push_back({name, v, 0.0, v > 0.0, {}, {}});
        } catch (const std::exception& e) {
            rep.checks.push_back(detail::failed(name, 0.0, e));
        }
    }

    std::optional<susy::WavefunctionTable> wf;
    try {
        wf = susy::wavefunctions(seed, g);
    } catch (const std::exception& e) {
        for (const char* n : {"psi0_schrodinger_residual", "psi1_schrodinger_residual"})
            rep.checks.push_back(detail::failed(n, tol.residual, e));
        for (const char* n : {"psi0_nodes", "psi1_nodes"}) rep.checks.push_back(detail::failed(n, 0.0, e));
        for (const char* n : {"psi0_edge_decay", "psi1_edge_decay"}) rep.checks.push_back(detail::failed(n, tol.edge, e));
        rep.checks.push_back(detail::failed("susy_ratio_spread", tol.susy_ratio, e));
    }
    if (wf) {
        try {
            rep.checks.push_back(detail::at_most("psi0_schrodinger_residual",
                                                 numeric::schrodinger_residual(vminus, wf->psi0, 0.0, g), tol.residual));
        } catch (const std::exception& e) {
            rep.checks.push_back(detail::failed("psi0_schrodinger_residual", tol.residual, e));
        }
        if (rep.ground_only) {
            rep.checks.push_back(detail::skipped("psi1_schrodinger_residual", tol.residual, ground_only_note));
        } else {
            try {
                rep.checks.push_back(detail::at_most(
                    "psi1_schrodinger_residual", numeric::schrodinger_residual(vminus, wf->psi1, rep.epsilon, g),
                    tol.residual));
            } catch (const std::exception& e) {
                rep.checks.push_back(detail::failed("psi1_schrodinger_residual", tol.residual, e));
            }
        }
        auto n0 = static_cast<double>(numeric::count_nodes(wf->psi0));
        auto n1 = static_cast<double>(numeric::count_nodes(wf->psi1));
        rep.checks.push_back({"psi0_nodes", n0, 0.0, n0 == 0.0, {}, {}});
        rep.checks.push_back({"psi1_nodes", n1, 0.0, n1 == 1.0, {}, {}});

        auto edge = [](const std::vector<double>& p) {
            return std::max(std::abs(p.front()), std::abs(p.back())) / numeric::max_abs(p);
        };
        rep.checks.push_back(detail::at_most("psi0_edge_decay", edge(wf->psi0), tol.edge));
        if (rep.ground_only)
            rep.checks.push_back(detail::skipped("psi1_edge_decay", tol.edge, ground_only_note));
        else
            rep.checks.push_back(detail::at_most("psi1_edge_decay", edge(wf->psi1), tol.edge));

        try {
            susy::Operand f = susy::partner_ground_state(seed, g);
            double gap = std::max(10.0 * g.spacing(), 1e-3);
            rep.checks.push_back(
                detail::at_most("susy_ratio_spread", susy_ratio_spread(seed, *wf, f, gap), tol.susy_ratio));
        } catch (const std::exception& e) {
            rep.checks.push_back(detail::failed("susy_ratio_spread", tol.susy_ratio, e));
        }
    }

    {
        Check c{"psi0_norm_probe", detail::verdict_code(probe0), 0.0,
                probe0 == numeric::ProbeVerdict::Converged, "probe=" + std::string(numeric::to_string(probe0)), probe0_error};
        rep.checks.push_back(c);
    }
    {
        Check c{"psi1_normalizability", detail::verdict_code(probe1), 0.0, false, {}, probe1_error};
        std::string probe_txt(numeric::to_string(probe1));
        if (rule) {
            bool rule_both = *rule == seeds::Normalizability::BothStates;
            bool agree = (rule_both && probe1 == numeric::ProbeVerdict::Converged) ||
                         (!rule_both && probe1 == numeric::ProbeVerdict::Diverging);
            c.pass = agree;
            c.note = "rule=" + std::string(seeds::to_string(*rule)) + " probe=" + probe_txt;
        } else {
            c.pass = probe1 != numeric::ProbeVerdict::Inconclusive;
            c.note = "probe=" + probe_txt;
        }
        if (rep.ground_only) c.note += " note=ground-only";
        rep.checks.push_back(c);
    }

    if (pb.entry) {
        const auto& entry = *pb.entry;
        const auto& p = seed.bindings;
        try {
            double ef = expr::evaluate(entry.epsilon_formula, 0.0, p);
            rep.checks.push_back(detail::at_most("epsilon_formula_rel_dev",
                                                 std::abs(ef - rep.epsilon) / std::abs(rep.epsilon),
                                                 tol.epsilon_formula));
        } catch (const std::exception& e) {
            rep.checks.push_back(detail::failed("epsilon_formula_rel_dev", tol.epsilon_formula, e));
        }
        if (entry.closed_form_v) {
            try {
                double worst = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    double v = vminus(g[i]);
                    double r = seeds::closed_form_reference(entry, seeds::ClosedForm::V, p, g[i]);
                    worst = std::max(worst, std::abs(v - r) / (1.0 + std::abs(v)));
                }
                rep.checks.push_back(detail::at_most("closed_form_v_max_dev", worst, tol.closed_form_v));
            } catch (const std::exception& e) {
                rep.checks.push_back(detail::failed("closed_form_v_max_dev", tol.closed_form_v, e));
            }
        }
        if (wf) {
            for (auto [kind, name, generic] :
                 {std::tuple{seeds::ClosedForm::Psi0, "closed_form_psi0_max_dev", &wf->psi0},
                  std::tuple{seeds::ClosedForm::Psi1, "closed_form_psi1_max_dev", &wf->psi1}}) {
                const auto& cf = kind == seeds::ClosedForm::Psi0 ? entry.closed_form_psi0 : entry.closed_form_psi1;
                if (!cf) continue;
                try {
                    std::vector<double> ref(g.size());
                    for (std::size_t i = 0; i < g.size(); ++i)
                        ref[i] = seeds::closed_form_reference(entry, kind, p, g[i]);
                    rep.checks.push_back(detail::at_most(
                        name, detail::normalized_deviation(*generic, ref, g.spacing()), tol.closed_form_psi));
                } catch (const std::exception& e) {
                    rep.checks.push_back(detail::failed(name, tol.closed_form_psi, e));
                }
            }
        }
    }
    return rep;
}

}  // namespace qes::report
