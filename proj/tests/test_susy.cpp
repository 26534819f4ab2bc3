#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qes/seeds.hpp"
#include "qes/susy.hpp"

using namespace qes;
using namespace qes::susy;
using expr::parse;
using expr::ParameterBindings;
using numeric::Grid;

namespace {

SeedFunction razavy(double x0) {
    return validate_seed(parse("A*(sinh(alpha*x) - sinh(alpha*x0))"), {{"A", 1}, {"alpha", 2}, {"x0", x0}}, {-8, 8});
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no qes::Error thrown";
    return ErrorKind::InvalidArgument;
}

std::vector<SeedFunction> builtin_defaults() {
    std::vector<SeedFunction> out;
    for (const auto& e : seeds::catalog()) out.push_back(seeds::instantiate(e.name, {}).seed);
    return out;
}

}  // namespace

TEST(ValidateSeed, OddMonotone) {
    auto s = validate_seed(parse("sinh(x)"), {}, {-5, 5});
    EXPECT_NEAR(s.x0, 0.0, 1e-15);
    EXPECT_NEAR(s.s0, 1.0, 1e-15);
    EXPECT_GT(s.reg_radius, 0.0);
}

TEST(ValidateSeed, ShiftedSinh) {
    auto s = razavy(0.3);
    EXPECT_NEAR(s.x0, 0.3, 1e-14);
    EXPECT_NEAR(s.s0, 2.0 * std::cosh(0.6), 1e-12);
    EXPECT_NEAR(s.s0, 2.3709, 1e-4);
    EXPECT_LE(std::abs(s.value(s.x0)), 1e-10 * std::max(1.0, s.s0));
}

TEST(ValidateSeed, Rejections) {
    EXPECT_EQ(kind_of([] { validate_seed(parse("cosh(x)"), {}, {-5, 5}); }), ErrorKind::NoSignChange);
    EXPECT_EQ(kind_of([] { validate_seed(parse("x*(x^2-1)"), {}, {-2, 2}); }), ErrorKind::MultipleZeros);
    EXPECT_EQ(kind_of([] { validate_seed(parse("-x"), {}, {-2, 2}); }), ErrorKind::SignCondition);
    EXPECT_EQ(kind_of([] { validate_seed(parse("x^3"), {}, {-2, 2}); }), ErrorKind::NonPositiveSlope);
    EXPECT_EQ(kind_of([] { validate_seed(parse("A*x"), {}, {-2, 2}); }), ErrorKind::UnboundParameter);
    EXPECT_EQ(kind_of([] { validate_seed(parse("x"), {}, {2, -2}); }), ErrorKind::InvalidArgument);
    EXPECT_STREQ(std::string(to_string(ErrorKind::NoSignChange)).c_str(), "NoZero");
}

TEST(Epsilon, Examples) {
    EXPECT_DOUBLE_EQ(epsilon_of(razavy(0.0)), 1.0);
    EXPECT_DOUBLE_EQ(epsilon_of(seeds::instantiate("sextic", {{"a", 2}, {"b", 1}}).seed), 1.0);
    EXPECT_DOUBLE_EQ(epsilon_of(seeds::instantiate("algebraic-sqrt", {{"A", 3}, {"b", 1}}).seed), 1.5);
    for (const auto& s : builtin_defaults()) {
        SusyModel m(s);
        EXPECT_EQ(m.epsilon, s.s0 / 2);
    }
}

TEST(Superpotentials, SymmetricSinhClosedForm) {
    auto s = razavy(0.0);
    for (double x = -3.0; x <= 3.0; x += 0.0625) {
        double want = 0.5 * (std::sinh(2 * x) - 2 * std::tanh(x));
        EXPECT_NEAR(superpotentials(s, x).w, want, 1e-12 * std::max(1.0, std::abs(want))) << x;
    }
}

TEST(Superpotentials, LimitAtZeroOfSeed) {
    for (const auto& s : builtin_defaults()) {
        const double s2 = s.derivative(2, s.x0);
        auto at = superpotentials(s, s.x0);
        EXPECT_NEAR(at.w, -s2 / (2 * s.s0), 1e-12);
        EXPECT_NEAR(at.w1, s2 / (2 * s.s0), 1e-12);
        // tiny-offset cross-check just outside the series region
        auto near = superpotentials(s, s.x0 + 2 * s.reg_radius);
        EXPECT_NEAR(near.w, at.w, 1e-3);
    }
    auto s = razavy(0.3);
    EXPECT_NE(s.derivative(2, s.x0), 0.0);
}

TEST(Superpotentials, Reconstruction) {
    std::mt19937_64 rng(3);
    for (const auto& s : builtin_defaults()) {
        std::uniform_real_distribution<double> u(s.interval.lo, s.interval.hi);
        for (int i = 0; i < 1000; ++i) {
            double x = u(rng);
            auto w = superpotentials(s, x);
            double wp = s.value(x);
            EXPECT_LE(std::abs(w.w + w.w1 - wp), 1e-12 * std::max(1.0, std::abs(wp)));
            if (std::abs(x - s.x0) > s.reg_radius) {
                double want = (s.derivative(1, x) - 2 * epsilon_of(s)) / wp;
                // the difference cancels W+, so rounding scales with |W+|
                EXPECT_LE(std::abs(w.w1 - w.w - want), 1e-12 * std::max({1.0, std::abs(want), std::abs(wp)}));
            }
        }
    }
}

TEST(Superpotentials, ContinuousAcrossSeriesBoundary) {
    for (double x0 : {0.0, 0.3, -1.2}) {
        auto s = razavy(x0);
        for (double side : {-1.0, 1.0}) {
            double inside = x0 + side * s.reg_radius * (1 - 1e-9);
            double outside = x0 + side * s.reg_radius * (1 + 1e-9);
            EXPECT_NEAR(superpotentials(s, inside).w, superpotentials(s, outside).w, 1e-8);
            EXPECT_NEAR(superpotential_slopes(s, inside).w, superpotential_slopes(s, outside).w, 1e-6);
        }
    }
}

TEST(Potential, SymmetricSinhAtOrigin) { EXPECT_NEAR(potential(razavy(0.0), Branch::Minus, 0.0), 0.0, 1e-14); }

TEST(Potential, LinearSeedIsHarmonic) {
    for (double a : {0.5, 2.0, 3.0}) {
        auto s = validate_seed(parse("a*x + b*x^3"), {{"a", a}, {"b", 0}}, {-8, 8});
        for (double x = -8; x <= 8; x += 0.25)
            EXPECT_NEAR(potential(s, Branch::Minus, x), a * a * x * x / 8 - a / 4, 1e-12 * (1 + a * a * x * x));
    }
}

TEST(Potential, PartnerShift) {
    for (const auto& s : builtin_defaults()) {
        double eps = epsilon_of(s);
        Grid g(s.interval.lo, s.interval.hi, 501);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double vp = potential(s, Branch::Plus, g[i]);
            double d = vp - shifted_partner_potential(s, g[i]) - eps;
            EXPECT_LE(std::abs(d), 1e-9 * std::max(1.0, std::abs(vp)));
        }
    }
}

TEST(Riccati, IdentityHolds) {
    for (const auto& s : builtin_defaults()) {
        for (double x : {0.7, s.x0, s.x0 + 1e-6, s.x0 - 1e-3}) EXPECT_LE(scaled_riccati_residual(s, x), 1e-9);
        Grid g(s.interval.lo, s.interval.hi, 1000);
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LE(scaled_riccati_residual(s, g[i]), 1e-9);
    }
}

TEST(Riccati, ShiftedEpsilonShowsUp) {
    for (const auto& s : builtin_defaults()) EXPECT_NEAR(riccati_residual(s, 0.7, epsilon_of(s) + 0.1), -0.2, 1e-9);
}

TEST(Wavefunctions, SymmetricSinhClosedForms) {
    auto s = razavy(0.0);
    Grid g(-8, 8, 4001);
    auto wf = wavefunctions(s, g);
    std::vector<double> r0(g.size()), r1(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double e = std::exp(-0.25 * std::cosh(2 * g[i]));
        r0[i] = std::cosh(g[i]) * e;
        r1[i] = std::sinh(g[i]) * e;
    }
    auto compare = [&](const std::vector<double>& got, std::vector<double> ref) {
        double n = std::sqrt(numeric::l2_mass(ref, g.spacing()));
        double sign = 0;
        for (std::size_t i = 0; i < got.size(); ++i) sign += got[i] * ref[i];
        sign = sign > 0 ? 1 : -1;
        double peak = numeric::max_abs(got), worst = 0;
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (std::abs(got[i]) <= 1e-6 * peak) continue;
            worst = std::max(worst, std::abs(got[i] - sign * ref[i] / n) / std::abs(got[i]));
        }
        return worst;
    };
    EXPECT_LE(compare(wf.psi0, r0), 1e-8);
    EXPECT_LE(compare(wf.psi1, r1), 1e-8);
}

TEST(Wavefunctions, Invariants) {
    for (const auto& e : seeds::catalog()) {
        auto inst = seeds::instantiate(e.name, {});
        Grid g = Grid::odd(inst.seed.interval.lo, inst.seed.interval.hi, e.default_points);
        auto wf = wavefunctions(inst.seed, g);
        EXPECT_NEAR(numeric::l2_mass(wf.psi0, g.spacing()), 1.0, 1e-12) << e.name;
        EXPECT_NEAR(numeric::l2_mass(wf.psi1, g.spacing()), 1.0, 1e-12) << e.name;
        for (double v : wf.psi0) EXPECT_GE(v, 0.0);
        EXPECT_EQ(numeric::count_nodes(wf.psi0), 0u);
        EXPECT_EQ(numeric::count_nodes(wf.psi1), 1u);
        EXPECT_EQ(wf.anchor, g.nearest_index(inst.seed.x0));
        // normalization constants reproduce psi0 from its phase
        auto ph = phases(inst.seed, g, wf.anchor);
        EXPECT_NEAR(wf.psi0[wf.anchor], std::exp(wf.log_c0 - ph.w[wf.anchor]), 1e-12);
    }
}

TEST(Wavefunctions, GridMustCoverZero) {
    EXPECT_EQ(kind_of([] { wavefunctions(razavy(0.3), Grid(1, 2, 11)); }), ErrorKind::InvalidArgument);
}

TEST(Wavefunctions, SchrodingerResiduals) {
    for (const auto& e : seeds::catalog()) {
        auto inst = seeds::instantiate(e.name, {});
        Grid g = Grid::odd(inst.seed.interval.lo, inst.seed.interval.hi, e.default_points);
        auto wf = wavefunctions(inst.seed, g);
        auto v = [&](double x) { return potential(inst.seed, Branch::Minus, x); };
        EXPECT_LE(numeric::schrodinger_residual(v, wf.psi0, 0.0, g), 5e-6) << e.name;
        EXPECT_LE(numeric::schrodinger_residual(v, wf.psi1, epsilon_of(inst.seed), g), 5e-6) << e.name;
    }
}

TEST(SignCondition, BuiltinDefaults) {
    for (const auto& s : builtin_defaults()) {
        auto lo = superpotentials(s, s.interval.lo), hi = superpotentials(s, s.interval.hi);
        EXPECT_LT(lo.w, 0);
        EXPECT_LT(lo.w1, 0);
        EXPECT_GT(hi.w, 0);
        EXPECT_GT(hi.w1, 0);
    }
}

TEST(Ladder, RaisingPartnerGroundGivesExcitedState) {
    for (const auto& e : seeds::catalog()) {
        auto inst = seeds::instantiate(e.name, {});
        const auto& s = inst.seed;
        Grid g = Grid::odd(s.interval.lo, s.interval.hi, e.default_points);
        Operand f = partner_ground_state(s, g);
        auto raised = apply_B_plus(s, f);
        // (-f' + W f)/sqrt2 with f' = -W1 f is W+ f / sqrt2 exactly
        for (std::size_t i = 0; i < g.size(); i += 37)
            EXPECT_NEAR(raised[i], s.value(g[i]) * f.f.values[i] / std::sqrt(2.0),
                        1e-12 * std::max(1.0, std::abs(raised[i])));
        auto wf = wavefunctions(s, g);
        double peak = numeric::max_abs(wf.psi1), ref = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(g[i] - s.x0) < 1e-3 || std::abs(wf.psi1[i]) <= 1e-6 * peak) continue;
            double ratio = raised[i] / wf.psi1[i];
            if (ref == 0) ref = ratio;
            EXPECT_NEAR(ratio / ref, 1.0, 1e-6) << e.name << " x=" << g[i];
        }
    }
}

TEST(Ladder, DifferencedDerivativePath) {
    auto s = razavy(0.3);
    Grid g(-8, 8, 4001);
    Operand exact = partner_ground_state(s, g);
    Operand fd{exact.f, std::nullopt};
    auto a = apply_B_plus(s, exact), b = apply_B_plus(s, fd);
    double peak = numeric::max_abs(a);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6 * peak);
}

TEST(Ladder, LoweringAnnihilatesGroundState) {
    auto s = razavy(0.3);
    Grid g(-8, 8, 4001);
    auto wf = wavefunctions(s, g);
    Operand psi0{{g, wf.psi0}, std::nullopt};
    auto lowered = apply_B_minus(s, psi0);
    EXPECT_LE(numeric::max_abs(lowered), 1e-7 * numeric::max_abs(wf.psi0));
}

TEST(Ladder, ConstantOperand) {
    auto s = razavy(0.3);
    Grid g(-2, 2, 41);
    Operand one{{g, std::vector<double>(g.size(), 1.0)}, std::vector<double>(g.size(), 0.0)};
    EXPECT_NEAR(apply_B_plus(s, one, g[7]), superpotentials(s, g[7]).w / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(apply_B_minus(s, one, g[7]), superpotentials(s, g[7]).w / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(apply_B_plus(s, one, g[7] + 0.01), Error);
}

TEST(Probe, NormalizabilityOfStates) {
    auto inst = seeds::instantiate("algebraic-sqrt", {{"A", 0.5}, {"b", 1}});
    Grid g = Grid::odd(-60, 60, 12001);
    EXPECT_EQ(probe_normalizability(inst.seed, State::Excited, g.interval(), g.spacing()).verdict,
              numeric::ProbeVerdict::Diverging);
    EXPECT_EQ(probe_normalizability(inst.seed, State::Ground, g.interval(), g.spacing()).verdict,
              numeric::ProbeVerdict::Converged);
}

TEST(Probe, GridThroughZeroOfSeed) {
    auto s = razavy(0.3);
    Grid g = grid_through_x0(s, {-5, 5}, 0.01);
    EXPECT_NEAR(g[g.nearest_index(0.3)], 0.3, 1e-12);
    EXPECT_LE(g.xmin(), -5.0);
    EXPECT_GE(g.xmax(), 5.0);
}
