// End-to-end acceptance gate.  Each numbered criterion prints exactly one
// pass/fail line; the process exits nonzero if any of them fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qev/algebra.hpp"
#include "qev/ops.hpp"
#include "qev/qe.hpp"
#include "qev/runner.hpp"
#include "qev/zoo.hpp"

using namespace qev;

namespace {

int failures = 0;

void verdict(int number, const char* what, bool ok, const std::string& detail = {}) {
    std::printf("criterion %2d [%s] %s%s%s\n", number, ok ? "pass" : "FAIL", what,
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
}

double now_sec() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

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

std::shared_ptr<const MetricField> perturbed_flat(const ChartPtr& chart, std::mt19937& rng) {
    SymTensorField g(chart);
    ScalarField a = random_trig(chart, rng, 2), b = random_trig(chart, rng, 2),
                c = random_trig(chart, rng, 2);
    for (std::size_t p = 0; p < chart->size(); ++p) {
        g.set(p, 0, 0, 1.0 + 0.1 * a[p]);
        g.set(p, 1, 1, 1.0 + 0.1 * b[p]);
        g.set(p, 0, 1, 0.025 * c[p]);
    }
    return std::make_shared<const MetricField>(std::move(g));
}

Constructed torus(int n) {
    return construct(
        {.name = "torus_of_revolution", .params = {{"R0", 2.0}, {"r", 1.0}}, .grid_n = n});
}

double bianchi_linf(const MetricField& g) {
    CurvaturePackage pkg = curvature_package(g);
    OneFormField dv = div_symtensor(pkg.ricci, g, pkg.chris);
    OneFormField ds = differential(pkg.scalar);
    double worst = 0.0;
    for (std::size_t i = 0; i < dv.comp.size(); ++i)
        for (std::size_t p = 0; p < g.size(); ++p)
            worst = std::max(worst, std::fabs(dv.comp[i][p] - 0.5 * ds.comp[i][p]));
    return worst;
}

void criterion1() {
    double t0 = now_sec();
    Constructed t = torus(64);
    CurvaturePackage pkg = curvature_package(*t.metric);
    double worst = 0.0;
    for (std::size_t p = 0; p < t.chart->size(); ++p) {
        double u2 = t.chart->coord(p, 1);
        worst = std::max(worst,
                         std::fabs(pkg.scalar[p] - 2.0 * std::cos(u2) / (2.0 + std::cos(u2))));
    }
    double dt = now_sec() - t0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "linf %.2e, %.2fs", worst, dt);
    verdict(1, "scalar curvature closed form on the torus of revolution",
            worst <= 1e-8 && dt < 5.0, buf);
}

void criterion2() {
    std::mt19937 rng(2026);
    double worst = bianchi_linf(*torus(64).metric);
    auto chart = ChartGrid::make_uniform(2, 64);
    for (int trial = 0; trial < 2; ++trial)
        worst = std::max(worst, bianchi_linf(*perturbed_flat(chart, rng)));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "linf %.2e", worst);
    verdict(2, "twice-contracted second Bianchi identity", worst <= 1e-7, buf);
}

void criterion3() {
    Constructed t = construct({.name = "flat_torus", .params = {}, .grid_n = 32, .dim = 2});
    CurvaturePackage pkg = curvature_package(*t.metric);
    ScalarField f(t.chart);
    for (std::size_t p = 0; p < t.chart->size(); ++p) f[p] = std::sin(t.chart->coord(p, 0));
    VectorField X = sharp(differential(f), *t.metric);
    IdentityReport rep = lemma21_check(*t.metric, pkg, X);
    bool ok = rep.passed() &&
              std::fabs(rep.scalars.at("lhs_integral") - 2.0 * M_PI * M_PI) <= 1e-8 &&
              std::fabs(rep.scalars.at("rhs_integral") - 2.0 * M_PI * M_PI) <= 1e-8;
    std::mt19937 rng(3);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        IdentityReport r = lemma21_check(*t.metric, pkg, random_vector(t.chart, rng));
        worst = std::max(worst, r.find("lemma21_pointwise")->linf);
        ok = ok && r.passed();
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "gradient integrals 2 pi^2, pointwise linf %.2e", worst);
    verdict(3, "divergence integral identity", ok && worst <= 1e-8, buf);
}

void criterion4() {
    bool ok = true;
    double worst = 0.0;
    {
        Constructed t =
            construct({.name = "circle_qe", .params = {{"c", 1.0}, {"m", 2.0}}, .grid_n = 32});
        CurvaturePackage pkg = curvature_package(*t.metric);
        QEInput in(*t.metric, pkg, *t.X, *t.m, *t.lambda);
        QEResidualResult res = qe_residual(in);
        worst = std::max(worst, res.report.scalars.at("E_linf"));
        ok = ok && res.report.passed() && theorem11_check(in).passed();
    }
    {
        Constructed t =
            construct({.name = "round_sphere", .params = {{"radius", 1.0}, {"m", 3.0}}});
        AnalyticSolution s{t.amanifold, t.aX, *t.m, *t.lambda};
        IdentityReport rep = qe_residual(s);
        worst = std::max(worst, rep.scalars.at("E_linf"));
        ok = ok && rep.passed() && theorem11_check(s).passed();
    }
    for (double m : {-2.0, -4.0}) {
        Constructed t =
            construct({.name = "s1_cross_einstein", .params = {{"rho", 1.0}, {"m", m}}});
        AnalyticSolution s{t.amanifold, t.aX, *t.m, *t.lambda};
        IdentityReport rep = qe_residual(s);
        worst = std::max(worst, rep.scalars.at("E_linf"));
        ok = ok && rep.passed() && theorem11_check(s).passed();
        if (m == -2.0) {
            IdentityReport ki = killing_integral_condition(s);
            const CheckEntry* c14 = ki.find("corollary14_gamma_constant");
            ok = ok && c14 != nullptr && c14->verdict == "pass";
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max defect %.2e", worst);
    verdict(4, "exact solution gate", ok && worst <= 1e-10, buf);
}

void criterion5() {
    Constructed t = construct({.name = "flat_torus", .params = {}, .grid_n = 32, .dim = 2});
    CurvaturePackage pkg = curvature_package(*t.metric);
    VectorField X(t.chart);
    for (std::size_t p = 0; p < t.chart->size(); ++p) X.comp[0][p] = 2.0;
    QEInput in(*t.metric, pkg, X, 1.0, -4.0);
    QEResidualResult res = qe_residual(in);
    double e = res.report.scalars.at("E_linf");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "defect %.12f", e);
    verdict(5, "negative control defect equals 4",
            !res.report.passed() && std::fabs(e - 4.0) <= 1e-9, buf);
}

void criterion6() {
    std::mt19937 rng(6);
    Constructed t = torus(64);
    CurvaturePackage pkg = curvature_package(*t.metric);
    double worst_a = 0.0, worst_s = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        VectorField X = random_vector(t.chart, rng);
        double m = (trial % 2 ? 1.0 : -1.0) * (1.0 + 0.35 * trial);
        double lambda = -1.0 + 0.2 * trial;
        QEInput in(*t.metric, pkg, X, m, lambda);
        ScalarField base = random_trig(t.chart, rng, 1);
        ScalarField gamma(t.chart);
        double scale = linf(base) + 1.0;
        for (std::size_t p = 0; p < t.chart->size(); ++p)
            gamma[p] = 1.5 + 0.5 * base[p] / scale;
        KillingCandidate kc = killing_candidate(in, gamma);
        worst_a = std::max(worst_a, section3_suite(in, gamma, kc).find("eq36_rewrite")->linf);
        worst_s =
            std::max(worst_s, section2_suite(in).find("eq24_to_25_substitution")->linf);
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "rewrite %.2e, substitution %.2e", worst_a, worst_s);
    verdict(6, "arbitrary-field identity chain", worst_a <= 1e-7 && worst_s <= 1e-8, buf);
}

void criterion7() {
    std::mt19937 rng(7);
    double worst = 0.0;
    {
        Constructed t = construct({.name = "flat_torus", .params = {}, .grid_n = 16, .dim = 3});
        CurvaturePackage pkg = curvature_package(*t.metric);
        for (int trial = 0; trial < 10; ++trial) {
            EnergyIdentity en = lie_div_energy(*t.metric, pkg, random_vector(t.chart, rng));
            worst = std::max(worst,
                             std::fabs(en.lhs - en.rhs) / std::max(1.0, std::fabs(en.rhs)));
        }
    }
    {
        Constructed t = torus(48);
        CurvaturePackage pkg = curvature_package(*t.metric);
        for (int trial = 0; trial < 10; ++trial) {
            EnergyIdentity en = lie_div_energy(*t.metric, pkg, random_vector(t.chart, rng));
            worst = std::max(worst,
                             std::fabs(en.lhs - en.rhs) / std::max(1.0, std::fabs(en.rhs)));
        }
    }
    Constructed t2 = construct({.name = "flat_torus", .params = {}, .grid_n = 32, .dim = 2});
    CurvaturePackage pkg2 = curvature_package(*t2.metric);
    ScalarField f(t2.chart);
    for (std::size_t p = 0; p < t2.chart->size(); ++p) f[p] = std::sin(t2.chart->coord(p, 0));
    EnergyIdentity closed =
        lie_div_energy(*t2.metric, pkg2, sharp(differential(f), *t2.metric));
    bool closed_ok = std::fabs(closed.rhs + 4.0 * M_PI * M_PI) <= 1e-7;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "relative gap %.2e, closed-form rhs %.8f", worst, closed.rhs);
    verdict(7, "energy identity for the Lie-derivative divergence", worst <= 1e-7 && closed_ok,
            buf);
}

void criterion8() {
    double t0 = now_sec();
    bool ok = true;
    {
        Constructed t =
            construct({.name = "circle_qe", .params = {{"c", 1.0}, {"m", 2.0}}, .grid_n = 64});
        CurvaturePackage pkg = curvature_package(*t.metric);
        GammaSolveResult res = gamma_solve(*t.metric, pkg, *t.X, *t.m);
        ok = ok && res.converged && std::fabs(res.mu) <= 1e-10 && 1.0 - res.min_gamma <= 1e-8;
    }
    double divk = 0.0, min_gamma = 0.0;
    {
        Constructed t = construct({.name = "flat_torus", .params = {}, .grid_n = 64, .dim = 2});
        CurvaturePackage pkg = curvature_package(*t.metric);
        ScalarField f(t.chart);
        for (std::size_t p = 0; p < t.chart->size(); ++p) f[p] = std::sin(t.chart->coord(p, 0));
        VectorField X = sharp(differential(f), *t.metric);
        GammaSolveResult res = gamma_solve(*t.metric, pkg, X, 2.0);
        min_gamma = res.min_gamma;
        divk = linf(div_vector(res.candidate.K, *t.metric));
        ok = ok && res.converged && res.positive && divk <= 1e-7;
    }
    double dt = now_sec() - t0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "min Gamma %.4f, div K %.2e, %.1fs", min_gamma, divk, dt);
    verdict(8, "near-kernel eigen-solve for Gamma", ok && dt < 30.0, buf);
}

void criterion9() {
    bool ok = true;
    {
        Constructed t =
            construct({.name = "circle_qe", .params = {{"c", 1.0}, {"m", 2.0}}, .grid_n = 32});
        CurvaturePackage pkg = curvature_package(*t.metric);
        QEInput in(*t.metric, pkg, *t.X, *t.m, *t.lambda);
        GammaSolveResult res = gamma_solve(*t.metric, pkg, *t.X, *t.m);
        IdentityReport rep = killing_integral_condition(in, res.gamma, res.candidate);
        ok = ok && rep.passed() && rep.scalars.at("coefficient") == 0.0 &&
             rep.find("m2_always_killing") != nullptr;
    }
    for (double m : {-4.0, -2.0}) {
        Constructed t =
            construct({.name = "s1_cross_einstein", .params = {{"rho", 1.0}, {"m", m}}});
        AnalyticSolution s{t.amanifold, t.aX, *t.m, *t.lambda};
        ok = ok && killing_integral_condition(s).passed();
    }
    {
        Constructed t =
            construct({.name = "round_sphere", .params = {{"radius", 1.0}, {"m", 2.0}}});
        AnalyticSolution s{t.amanifold, t.aX, *t.m, *t.lambda};
        IdentityReport rep = killing_integral_condition(s);
        ok = ok && rep.passed() && rep.scalars.at("coefficient") == 0.0;
    }
    verdict(9, "Killing integral criterion on exact solutions", ok);
}

void criterion10() {
    double t0 = now_sec();
    LieAlgebraModel bi = LieAlgebraModel::su2();
    AlgebraCurvature C = algebra_curvature(bi);
    double ric_err = (C.ric - 0.5 * Eigen::MatrixXd::Identity(3, 3)).norm();
    bool ok = ric_err <= 1e-10;
    int count = 0;
    for (double a = 0.2; a <= 5.0 + 1e-9; a += 0.2) {
        LieAlgebraModel L = LieAlgebraModel::su2(a, 1.0, 1.0);
        AlgebraCurvature Ca = algebra_curvature(L);
        for (const auto& s : qe_solve(L, 2.0)) {
            ++count;
            ok = ok && algebraic_qe_residual(L, Ca, s.X, 2.0, s.lambda).norm() <= 1e-10 &&
                 s.killing_norm <= 1e-8;
        }
    }
    double dt = now_sec() - t0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ric gap %.2e, %d solutions, %.1fs", ric_err, count, dt);
    verdict(10, "homogeneous suite", ok && count > 0 && dt < 60.0, buf);
}

void criterion11(const char* cli) {
    if (cli == nullptr) {
        verdict(11, "byte-identical reports", false, "path to the CLI binary not supplied");
        return;
    }
    const char* spec_path = "acceptance_spec.tmp";
    {
        std::ofstream spec(spec_path, std::ios::binary);
        spec << "[manifold]\ngenerator = circle_qe\nc = 1\nm = 2\n\n[params]\ngamma = solve\n";
    }
    auto capture = [&](const char* out) {
        std::string cmd = std::string("\"") + cli + "\" " + spec_path + " --out " + out;
        return std::system(cmd.c_str());
    };
    int rc1 = capture("acceptance_run1.tmp");
    int rc2 = capture("acceptance_run2.tmp");
    std::ifstream a("acceptance_run1.tmp", std::ios::binary), b("acceptance_run2.tmp",
                                                                std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    bool ok = rc1 == 0 && rc2 == 0 && sa.str() == sb.str() && !sa.str().empty();
    std::remove(spec_path);
    std::remove("acceptance_run1.tmp");
    std::remove("acceptance_run2.tmp");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu bytes each", sa.str().size());
    verdict(11, "byte-identical reports across repeated runs", ok, buf);
}

}  // namespace

int main(int argc, char** argv) {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11(argc > 1 ? argv[1] : nullptr);
    std::printf("%s\n", failures == 0 ? "all criteria pass" : "FAILURES present");
    return failures == 0 ? 0 : 1;
}
