#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qev/ops.hpp"
#include "qev/qe.hpp"
#include "qev/zoo.hpp"

using namespace qev;

namespace {

ScalarField random_trig(const ChartPtr& chart, std::mt19937& rng, int band = 2) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    ScalarField f(chart);
    const int n = chart->dim();
    for (int term = 0; term < 4; ++term) {
        double a = amp(rng);
        std::vector<double> freq(n), ph(n);
        for (int i = 0; i < n; ++i) {
            freq[i] = std::uniform_int_distribution<int>(-band, band)(rng);
            ph[i] = amp(rng);
        }
        for (std::size_t p = 0; p < chart->size(); ++p) {
            double arg = 0.0;
            for (int i = 0; i < n; ++i) arg += freq[i] * chart->coord(p, i) + ph[i];
            f[p] += a * std::cos(arg);
        }
    }
    return f;
}

VectorField random_vector(const ChartPtr& chart, std::mt19937& rng, int band = 2) {
    VectorField X(chart);
    for (int i = 0; i < chart->dim(); ++i) X.comp[i] = random_trig(chart, rng, band).v;
    return X;
}

ScalarField positive_gamma(const ChartPtr& chart, std::mt19937& rng) {
    ScalarField f = random_trig(chart, rng, 1);
    double worst = linf(f);
    ScalarField g(chart);
    for (std::size_t p = 0; p < chart->size(); ++p) g[p] = 1.5 + 0.5 * f[p] / (worst + 1.0);
    return g;
}

}  // namespace

TEST_CASE("rewrite identity with defect correction on random data") {
    std::mt19937 rng(101);
    Constructed t = construct(
        {.name = "torus_of_revolution", .params = {{"R0", 2.0}, {"r", 1.0}}, .grid_n = 64});
    CurvaturePackage pkg = curvature_package(*t.metric);
    for (int trial = 0; trial < 10; ++trial) {
        VectorField X = random_vector(t.chart, rng);
        double m = (trial % 2 ? 1.0 : -1.0) * (1.0 + trial * 0.4);
        double lambda = -1.0 + 0.25 * trial;
        QEInput in(*t.metric, pkg, X, m, lambda);
        ScalarField gamma = positive_gamma(t.chart, rng);
        KillingCandidate kc = killing_candidate(in, gamma);
        IdentityReport rep = section3_suite(in, gamma, kc);
        CHECK(rep.find("eq36_rewrite")->linf <= 1e-7);
        // trace entries carry their own correction terms, valid off solutions
        CHECK(rep.find("eq316_trace")->verdict == "pass");
        CHECK(rep.find("eq317_divided")->verdict == "pass");
        // unconditional Stokes entry
        CHECK(rep.find("eq315_stokes")->verdict == "pass");
        // substitution consistency on the same configurations
        IdentityReport s2 = section2_suite(in);
        CHECK(s2.find("eq24_to_25_substitution")->linf <= 1e-8);
    }
}

TEST_CASE("energy identity on random fields") {
    std::mt19937 rng(103);
    SUBCASE("flat three-torus") {
        Constructed t =
            construct({.name = "flat_torus", .params = {}, .grid_n = 16, .dim = 3});
        CurvaturePackage pkg = curvature_package(*t.metric);
        for (int trial = 0; trial < 10; ++trial) {
            VectorField K = random_vector(t.chart, rng, 2);
            EnergyIdentity en = lie_div_energy(*t.metric, pkg, K);
            CHECK(std::fabs(en.lhs - en.rhs) <= 1e-7 * std::max(1.0, std::fabs(en.rhs)));
        }
    }
    SUBCASE("torus of revolution") {
        Constructed t = construct(
            {.name = "torus_of_revolution", .params = {{"R0", 2.0}, {"r", 1.0}}, .grid_n = 48});
        CurvaturePackage pkg = curvature_package(*t.metric);
        for (int trial = 0; trial < 10; ++trial) {
            VectorField K = random_vector(t.chart, rng, 2);
            EnergyIdentity en = lie_div_energy(*t.metric, pkg, K);
            CHECK(std::fabs(en.lhs - en.rhs) <= 1e-7 * std::max(1.0, std::fabs(en.rhs)));
        }
    }
    SUBCASE("closed form on the flat two-torus") {
        Constructed t =
            construct({.name = "flat_torus", .params = {}, .grid_n = 32, .dim = 2});
        CurvaturePackage pkg = curvature_package(*t.metric);
        ScalarField f(t.chart);
        for (std::size_t p = 0; p < t.chart->size(); ++p) f[p] = std::sin(t.chart->coord(p, 0));
        VectorField K = sharp(differential(f), *t.metric);
        EnergyIdentity en = lie_div_energy(*t.metric, pkg, K);
        CHECK(en.rhs == doctest::Approx(-4.0 * M_PI * M_PI).epsilon(1e-7));
        CHECK(en.lhs == doctest::Approx(en.rhs).epsilon(1e-7));
    }
}

TEST_CASE("near-kernel solve recovers constant Gamma for divergence-free fields") {
    Constructed t = construct({.name = "circle_qe", .params = {{"c", 1.0}, {"m", 2.0}},
                               .grid_n = 32});
    CurvaturePackage pkg = curvature_package(*t.metric);
    GammaSolveResult res = gamma_solve(*t.metric, pkg, *t.X, 2.0);
    CHECK(res.converged);
    CHECK(std::fabs(res.mu) <= 1e-10);
    CHECK(res.positive);
    CHECK(1.0 - res.min_gamma <= 1e-9);  // constant after max-normalization
    CHECK(res.divK_linf <= 1e-9);
}

TEST_CASE("near-kernel solve on a gradient field") {
    Constructed t = construct({.name = "flat_torus", .params = {}, .grid_n = 32, .dim = 2});
    CurvaturePackage pkg = curvature_package(*t.metric);
    ScalarField f(t.chart);
    for (std::size_t p = 0; p < t.chart->size(); ++p) f[p] = std::sin(t.chart->coord(p, 0));
    VectorField X = sharp(differential(f), *t.metric);
    GammaSolveResult res = gamma_solve(*t.metric, pkg, X, 2.0);
    CHECK(res.converged);
    CHECK(res.positive);
    CHECK(res.min_gamma > 0.0);
    // independent verification through the density formula for div
    CHECK(res.divK_linf <= 1e-7);
    ScalarField divK = div_vector(res.candidate.K, *t.metric);
    CHECK(linf(divK) <= 1e-7);
}

TEST_CASE("full section 3 chain with solved Gamma on the circle") {
    Constructed t =
        construct({.name = "circle_qe", .params = {{"c", 1.0}, {"m", 2.0}}, .grid_n = 32});
    CurvaturePackage pkg = curvature_package(*t.metric);
    QEInput in(*t.metric, pkg, *t.X, *t.m, *t.lambda);
    GammaSolveResult res = gamma_solve(*t.metric, pkg, *t.X, *t.m);
    IdentityReport rep = section3_suite(in, res.gamma, res.candidate);
    CHECK(rep.passed());
    for (const char* name : {"eq38_divergence", "eq39_divergence", "eq310_divergence",
                             "eq311_divergence", "eq312_assembled", "eq314_stokes"})
        CHECK(rep.find(name)->verdict == "pass");
}

TEST_CASE("killing integral condition") {
    SUBCASE("solved Gamma on the circle, m = 2") {
        Constructed t =
            construct({.name = "circle_qe", .params = {{"c", 1.0}, {"m", 2.0}}, .grid_n = 32});
        CurvaturePackage pkg = curvature_package(*t.metric);
        QEInput in(*t.metric, pkg, *t.X, *t.m, *t.lambda);
        GammaSolveResult res = gamma_solve(*t.metric, pkg, *t.X, *t.m);
        IdentityReport rep = killing_integral_condition(in, res.gamma, res.candidate);
        CHECK(rep.passed());
        CHECK(rep.scalars.at("coefficient") == 0.0);  // (2m-4)/m at m = 2, exactly
        REQUIRE(rep.find("m2_always_killing"));
        CHECK(rep.find("m2_always_killing")->verdict == "pass");
        REQUIRE(rep.find("corollary14_gamma_constant"));
        CHECK(rep.find("corollary14_gamma_constant")->verdict == "pass");
    }
    SUBCASE("analytic product, m = -4") {
        Constructed t = construct(
            {.name = "s1_cross_einstein", .params = {{"rho", 1.0}, {"m", -4.0}}});
        AnalyticSolution s{t.amanifold, t.aX, *t.m, *t.lambda};
        IdentityReport rep = killing_integral_condition(s);
        CHECK(rep.passed());
        CHECK(rep.find("theorem13_biconditional")->verdict == "pass");
    }
    SUBCASE("preconditions are reported, not masked") {
        Constructed t =
            construct({.name = "flat_torus", .params = {}, .grid_n = 16, .dim = 2});
        CurvaturePackage pkg = curvature_package(*t.metric);
        VectorField X(t.chart);
        for (std::size_t p = 0; p < t.chart->size(); ++p) X.comp[0][p] = 2.0;
        QEInput in(*t.metric, pkg, X, 1.0, -4.0);
        ScalarField gamma(t.chart, 1.0);
        KillingCandidate kc = killing_candidate(in, gamma);
        IdentityReport rep = killing_integral_condition(in, gamma, kc);
        CHECK(rep.find("theorem13_biconditional")->verdict == "inapplicable");
    }
}

TEST_CASE("killing candidate requires positive Gamma") {
    Constructed t =
        construct({.name = "circle_qe", .params = {{"c", 1.0}, {"m", 2.0}}, .grid_n = 16});
    CurvaturePackage pkg = curvature_package(*t.metric);
    QEInput in(*t.metric, pkg, *t.X, *t.m, *t.lambda);
    ScalarField gamma(t.chart, -1.0);
    CHECK_THROWS(killing_candidate(in, gamma));
}
