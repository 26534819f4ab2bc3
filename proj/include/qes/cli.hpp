#pragma once

// Command-line front end: list-seeds, generate, verify, check-expr.
// Exit codes: 0 success, 1 verification or admissibility failure, 2 usage or
// input error.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qes/error.hpp"
#include "qes/expr.hpp"
#include "qes/numeric.hpp"
#include "qes/report.hpp"
#include "qes/seeds.hpp"
#include "qes/susy.hpp"

namespace qes::cli {

using expr::ParameterBindings;
using numeric::Interval;

enum class Format { Text, Records };

struct RunConfig {
    std::optional<std::string> seed_name;
    std::optional<std::string> custom_expression;
    ParameterBindings params;
    std::optional<Interval> interval;
    std::optional<std::size_t> points;
    report::Tolerances tolerances;
    std::optional<std::string> out_path;
    std::optional<std::string> meta_path;
    std::optional<std::string> report_path;
    Format format = Format::Text;
};

/// A usage problem in flags or config contents (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMinPoints = 101;

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view text, std::string_view what) {
    std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw UsageError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

inline Interval parse_interval(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) throw UsageError("interval must be 'a,b', got '" + std::string(text) + "'");
    Interval iv{parse_double(text.substr(0, comma), "interval"), parse_double(text.substr(comma + 1), "interval")};
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
        throw UsageError("interval must be finite with a < b, got '" + std::string(text) + "'");
    return iv;
}

inline std::size_t parse_points(std::string_view text) {
    std::string t = trim(text);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw UsageError("invalid point count '" + std::string(text) + "'");
    if (n < kMinPoints) throw UsageError("points must be at least " + std::to_string(kMinPoints));
    return n;
}

inline std::pair<std::string, double> parse_binding(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw UsageError("parameter must be 'name=value', got '" + std::string(text) + "'");
    std::string name = trim(text.substr(0, eq));
    return {name, parse_double(text.substr(eq + 1), name)};
}

inline Format parse_format(std::string_view text) {
    if (text == "text") return Format::Text;
    if (text == "records") return Format::Records;
    throw UsageError("format must be 'text' or 'records', got '" + std::string(text) + "'");
}

// Shortest round-trip decimal.
inline std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string fixed17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join_params(const ParameterBindings& p) {
    std::string s;
    for (const auto& [k, v] : p) s += (s.empty() ? "" : ";") + k + "=" + number(v);
    return s;
}

}  // namespace detail

/// Applies `key=value` lines from a config file. Keys: seed, wplus,
/// interval, points, format, out, meta, report, eigenvalue_tol,
/// residual_tol, and param.NAME for parameters. Blank lines and lines
/// starting with '#' are ignored.
inline void apply_config_text(RunConfig& cfg, std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = detail::trim(std::string_view(t).substr(0, eq));
        std::string val = detail::trim(std::string_view(t).substr(eq + 1));
        if (key == "seed") cfg.seed_name = val;
        else if (key == "wplus") cfg.custom_expression = val;
        else if (key == "interval") cfg.interval = detail::parse_interval(val);
        else if (key == "points") cfg.points = detail::parse_points(val);
        else if (key == "format") cfg.format = detail::parse_format(val);
        else if (key == "out") cfg.out_path = val;
        else if (key == "meta") cfg.meta_path = val;
        else if (key == "report") cfg.report_path = val;
        else if (key == "eigenvalue_tol") cfg.tolerances.eigenvalue = detail::parse_double(val, key);
        else if (key == "residual_tol") cfg.tolerances.residual = detail::parse_double(val, key);
        else if (key.rfind("param.", 0) == 0 && key.size() > 6) cfg.params[key.substr(6)] = detail::parse_double(val, key);
        else throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
}

inline report::Problem make_problem(const RunConfig& cfg) {
    if (cfg.seed_name.has_value() == cfg.custom_expression.has_value())
        throw UsageError("exactly one of --seed and --wplus is required");
    if (cfg.seed_name) return report::make_builtin_problem(*cfg.seed_name, cfg.params, cfg.interval, cfg.points);
    return report::make_custom_problem(*cfg.custom_expression, cfg.params, cfg.interval, cfg.points);
}

// ---------------------------------------------------------------- generate

struct GeneratedTables {
    std::string csv;
    std::string metadata;
};

inline GeneratedTables generate(const report::Problem& pb) {
    const auto& seed = pb.seed;
    const auto& g = pb.grid;
    susy::WavefunctionTable wf = susy::wavefunctions(seed, g);
    GeneratedTables t;
    std::string& csv = t.csv;
    csv = "x,W,W1,V_minus,V_plus,psi0,psi1\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g[i];
        auto w = susy::superpotentials(seed, x);
        const double row[] = {x,
                              w.w,
                              w.w1,
                              susy::potential(seed, susy::Branch::Minus, x),
                              susy::potential(seed, susy::Branch::Plus, x),
                              wf.psi0[i],
                              wf.psi1[i]};
        for (std::size_t k = 0; k < std::size(row); ++k) {
            if (k) csv += ',';
            csv += detail::fixed17(row[k]);
        }
        csv += '\n';
    }
    std::string& m = t.metadata;
    m += "seed=" + std::string(pb.entry ? pb.entry->name : "custom") + "\n";
    if (!pb.entry) m += "wplus=" + pb.label + "\n";
    m += "params=" + detail::join_params(seed.bindings) + "\n";
    m += "x0=" + detail::fixed17(seed.x0) + "\n";
    m += "epsilon=" + detail::fixed17(susy::epsilon_of(seed)) + "\n";
    m += "xmin=" + detail::fixed17(g.interval().lo) + "\n";
    m += "xmax=" + detail::fixed17(g.interval().hi) + "\n";
    m += "n=" + std::to_string(g.size()) + "\n";
    m += "c0=" + detail::fixed17(wf.c0) + "\n";
    m += "c1=" + detail::fixed17(wf.c1) + "\n";
    m += "log_c0=" + detail::fixed17(wf.log_c0) + "\n";
    m += "log_c1=" + detail::fixed17(wf.log_c1) + "\n";
    return t;
}

// ------------------------------------------------------------------ output

inline void write_records(const report::VerificationReport& rep, std::ostream& os) {
    for (const auto& c : rep.checks) {
        os << "check=" << c.name << " value=" << detail::number(c.value) << " tol=" << detail::number(c.tol)
           << " pass=" << (c.pass ? "true" : "false");
        if (!c.note.empty()) os << ' ' << c.note;
        if (!c.error.empty()) {
            std::string q;
            for (char ch : c.error) q += ch == '"' ? '\'' : ch;
            os << " error=\"" << q << '"';
        }
        os << '\n';
    }
    os << "overall=" << (rep.overall() ? "pass" : "fail") << '\n';
}

inline void write_text(const report::VerificationReport& rep, std::ostream& os) {
    os << "seed:     " << rep.seed << '\n';
    os << "params:   " << detail::join_params(rep.params) << '\n';
    os << "x0:       " << detail::number(rep.x0) << '\n';
    os << "epsilon:  " << detail::number(rep.epsilon) << '\n';
    os << "E0:       " << detail::number(rep.e0) << '\n';
    os << "E1:       " << detail::number(rep.e1) << (rep.ground_only ? "  (ground-only)" : "") << '\n';
    os << '\n';
    for (const auto& c : rep.checks) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-4s %-28s %-24s tol %-10s", c.pass ? "ok" : "FAIL", c.name.c_str(),
                      detail::number(c.value).c_str(), detail::number(c.tol).c_str());
        os << line;
        if (!c.note.empty()) os << ' ' << c.note;
        if (!c.error.empty()) os << " error: " << c.error;
        os << '\n';
    }
    os << '\n' << "overall: " << (rep.overall() ? "pass" : "fail") << '\n';
}

inline void list_seeds(Format format, std::ostream& os) {
    for (const auto& e : seeds::catalog()) {
        std::string params, constraints;
        for (const auto& p : e.param_names) params += (params.empty() ? "" : ",") + p;
        for (const auto& c : e.constraints) constraints += (constraints.empty() ? "" : ", ") + c.label;
        const std::string iv = detail::number(e.default_interval.lo) + "," + detail::number(e.default_interval.hi);
        if (format == Format::Records) {
            std::string cons;
            for (const auto& c : e.constraints) cons += (cons.empty() ? "" : ";") + c.label;
            os << "seed=" << e.name << " wplus=\"" << e.wplus_text << "\" params=" << params
               << " constraints=" << cons << " defaults=" << detail::join_params(e.default_params)
               << " interval=" << iv << " points=" << e.default_points << '\n';
        } else {
            os << e.name << "  W+ = " << e.wplus_text << "  (" << constraints << ")\n"
               << "    " << e.description << '\n'
               << "    defaults: " << detail::join_params(e.default_params) << "  interval [" << iv
               << "]  points " << e.default_points << '\n';
        }
    }
}

struct ExprDiagnostics {
    std::vector<std::string> params;
    std::optional<double> x0;
    std::optional<double> s0;
    bool admissible = false;
    std::optional<Error> failure;
};

/// Parse and admissibility checks on a W+ candidate without running the
/// spectral pipeline. Syntax and unbound-parameter errors propagate.
inline ExprDiagnostics check_expr(std::string_view text, const ParameterBindings& params, Interval iv) {
    ExprDiagnostics d;
    expr::Expression e = expr::parse(text);
    for (const auto& p : expr::parameters(e)) d.params.push_back(p);
    try {
        susy::SeedFunction s = susy::validate_seed(e, params, iv);
        d.x0 = s.x0;
        d.s0 = s.s0;
        d.admissible = true;
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::UnboundParameter) throw;
        d.failure = err;
    }
    return d;
}

// --------------------------------------------------------------- dispatch

namespace detail {

inline void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& fallback) {
    if (!path || *path == "-") {
        fallback << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + *path + "' for writing");
    f << text;
    if (!f) throw UsageError("failed writing '" + *path + "'");
}

struct RunFlags {
    std::string seed, wplus, interval, format, out, meta, report, config;
    std::vector<std::string> params;
    std::optional<std::size_t> points;
    std::optional<double> eigen_tol, residual_tol;
};

inline void add_run_options(CLI::App* sub, RunFlags& f) {
    sub->add_option("--seed", f.seed, "built-in seed name (see list-seeds)");
    sub->add_option("--wplus", f.wplus, "custom seed expression W+(x)");
    sub->add_option("-p,--param", f.params, "parameter binding name=value (repeatable)");
    sub->add_option("--interval", f.interval, "working interval a,b (use --interval=a,b for negative a)");
    sub->add_option("--points", f.points, "grid points (>= 101, rounded up to odd)");
    sub->add_option("--config", f.config, "config file of key=value lines; flags override it");
    sub->add_option("--eigenvalue-tol", f.eigen_tol, "analytic vs numeric eigenvalue tolerance");
    sub->add_option("--residual-tol", f.residual_tol, "Schrodinger residual tolerance");
}

inline RunConfig to_config(const RunFlags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw UsageError("cannot read config file '" + f.config + "'");
        apply_config_text(cfg, in);
    }
    if (!f.seed.empty()) {
        cfg.seed_name = f.seed;
        cfg.custom_expression.reset();
    }
    if (!f.wplus.empty()) {
        cfg.custom_expression = f.wplus;
        if (f.seed.empty()) cfg.seed_name.reset();
    }
    for (const auto& p : f.params) {
        auto [k, v] = parse_binding(p);
        cfg.params[k] = v;
    }
    if (!f.interval.empty()) cfg.interval = parse_interval(f.interval);
    if (f.points) {
        if (*f.points < kMinPoints) throw UsageError("points must be at least " + std::to_string(kMinPoints));
        cfg.points = f.points;
    }
    if (f.eigen_tol) cfg.tolerances.eigenvalue = *f.eigen_tol;
    if (f.residual_tol) cfg.tolerances.residual = *f.residual_tol;
    if (!f.format.empty()) cfg.format = parse_format(f.format);
    if (!f.out.empty()) cfg.out_path = f.out;
    if (!f.meta.empty()) cfg.meta_path = f.meta;
    if (!f.report.empty()) cfg.report_path = f.report;
    return cfg;
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-exactly solvable potentials from a seed superpotential"};
    app.name("qes");
    app.require_subcommand(1);

    std::string list_format;
    auto* list = app.add_subcommand("list-seeds", "show the built-in seed families");
    list->add_option("--format", list_format, "text or records");

    detail::RunFlags gen_flags;
    auto* gen = app.add_subcommand("generate", "write potential and wavefunction tables");
    detail::add_run_options(gen, gen_flags);
    gen->add_option("--out", gen_flags.out, "CSV output path (default: standard output)");
    gen->add_option("--meta", gen_flags.meta, "metadata output path (default: <out>.meta)");

    detail::RunFlags ver_flags;
    auto* ver = app.add_subcommand("verify", "run the full check suite");
    detail::add_run_options(ver, ver_flags);
    ver->add_option("--format", ver_flags.format, "text or records");
    ver->add_option("--report", ver_flags.report, "report output path (default: standard output)");

    std::string ce_text, ce_interval = "-10,10";
    std::vector<std::string> ce_params;
    auto* ce = app.add_subcommand("check-expr", "parse a W+ candidate and check admissibility");
    ce->add_option("expression", ce_text, "W+(x) expression")->required();
    ce->add_option("-p,--param", ce_params, "parameter binding name=value (repeatable)");
    ce->add_option("--interval", ce_interval, "interval a,b (use --interval=a,b for negative a)");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "qes: " << e.what() << '\n';
        return 2;
    }

    try {
        if (list->parsed()) {
            list_seeds(list_format.empty() ? Format::Text : detail::parse_format(list_format), out);
            return 0;
        }
        if (gen->parsed()) {
            RunConfig cfg = detail::to_config(gen_flags);
            auto tables = generate(make_problem(cfg));
            detail::emit(cfg.out_path, tables.csv, out);
            std::optional<std::string> meta = cfg.meta_path;
            if (!meta && cfg.out_path && *cfg.out_path != "-") meta = *cfg.out_path + ".meta";
            if (meta)
                detail::emit(meta, tables.metadata, out);
            else
                err << tables.metadata;
            return 0;
        }
        if (ver->parsed()) {
            RunConfig cfg = detail::to_config(ver_flags);
            auto rep = report::verify(make_problem(cfg), cfg.tolerances);
            std::ostringstream text;
            if (cfg.format == Format::Records)
                write_records(rep, text);
            else
                write_text(rep, text);
            detail::emit(cfg.report_path, text.str(), out);
            return rep.overall() ? 0 : 1;
        }
        ParameterBindings bindings;
        for (const auto& p : ce_params) bindings.insert(detail::parse_binding(p));
        auto d = check_expr(ce_text, bindings, detail::parse_interval(ce_interval));
        std::string ps;
        for (const auto& p : d.params) ps += (ps.empty() ? "" : ",") + p;
        out << "params=" << ps << '\n';
        if (d.admissible) {
            out << "x0=" << detail::number(*d.x0) << '\n';
            out << "s0=" << detail::number(*d.s0) << '\n';
            out << "epsilon=" << detail::number(*d.s0 / 2.0) << '\n';
            out << "admissible=true\n";
            return 0;
        }
        out << "admissible=false\n";
        out << "reason=" << to_string(d.failure->kind()) << '\n';
        out << "detail=" << d.failure->what() << '\n';
        return 1;
    } catch (const UsageError& e) {
        err << "qes: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "qes: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "qes: " << e.what() << '\n';
    }
    return 2;
}

}  // namespace qes::cli
