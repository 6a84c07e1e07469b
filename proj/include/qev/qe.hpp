#pragma once

#include <optional>

#include "qev/analytic.hpp"
#include "qev/ops.hpp"
#include "qev/report.hpp"

namespace qev {

// Grid-backed quasi-Einstein problem instance.  Curvature is computed once
// and shared by every check.
struct QEInput {
    const MetricField& g;
    const CurvaturePackage& curv;
    const VectorField& X;
    double m;
    double lambda;

    QEInput(const MetricField& g_, const CurvaturePackage& c_, const VectorField& X_, double m_,
            double l_)
        : g(g_), curv(c_), X(X_), m(m_), lambda(l_) {
        if (m == 0.0) throw std::invalid_argument("quasi-Einstein equation undefined for m = 0");
    }
};

struct Tolerances {
    double solution = 1e-8;   // |E|_inf relative to max(1, |lambda|)
    double constant = 1e-8;   // sd <= constant * max(1, |mean|)
    double identity = 1e-7;   // pointwise identity residuals
    double algebraic = 1e-8;  // pure-substitution residuals
    double integral = 1e-7;   // integral balances (relative)
    double section3 = 1e-6;   // divergence-piece entries (require div K ~ 0)
    double div_k = 1e-6;      // admissible |div K|_inf for section 3 pieces
    double eigen = 1e-7;      // Ricci eigenvalue multisets
};

// Defect tensor E = Ric + 1/2 L_X g - (1/m) X* (x) X* - lambda g; identically
// zero exactly on solutions of the quasi-Einstein equation.
SymTensorField qe_defect(const QEInput& in);

struct QEResidualResult {
    SymTensorField E;
    ScalarField trace_residual;  // R + div X - (1/m)|X|^2 - lambda n
    IdentityReport report;
};
QEResidualResult qe_residual(const QEInput& in, const Tolerances& tol = {});

// Integral identity int (div X)^2 = -int grad_X div X plus its pointwise
// product-rule form; holds for arbitrary X on closed grid manifolds.
IdentityReport lemma21_check(const MetricField& g, const CurvaturePackage& curv,
                             const VectorField& X, const Tolerances& tol = {});

// The constant-scalar-curvature chain: the (2.4) pointwise identity on
// solutions, the algebraic (2.4)->(2.5) substitution on arbitrary fields,
// and the integral balances (2.6)-(2.8).  c defaults to mean(lambda n - R).
IdentityReport section2_suite(const QEInput& in, const Tolerances& tol = {},
                              std::optional<double> c_override = {});

// Constant scalar curvature <=> X Killing (m != -2).
IdentityReport theorem11_check(const QEInput& in, const Tolerances& tol = {});

struct KillingCandidate {
    VectorField K;  // (2/m) Gamma X + grad Gamma
    ScalarField divK;
};
KillingCandidate killing_candidate(const QEInput& in, const ScalarField& gamma);

struct GammaSolveOptions {
    int max_iterations = 500;
    double eigen_residual = 1e-10;
    double kernel_tol = 1e-8;  // accept |mu| <= kernel_tol * |L|_scale
};
struct GammaSolveResult {
    ScalarField gamma;  // normalized to max = 1
    double mu = 0.0;
    double min_gamma = 0.0;
    double eigen_residual = 0.0;
    double operator_scale = 0.0;
    int iterations = 0;
    bool converged = false;
    bool positive = false;
    KillingCandidate candidate;  // built from the returned gamma
    double divK_linf = 0.0;
};
// Near-kernel eigen-solve of L(G) = Lap G + (2/m)(G div X + <grad G, X>),
// by shifted inverse iteration (shift 0, all-ones start vector).
GammaSolveResult gamma_solve(const MetricField& g, const CurvaturePackage& curv,
                             const VectorField& X, double m, const GammaSolveOptions& opt = {});

// Rewrite chain, divergence pieces, Stokes entries, trace and derivative
// identities, all with explicit defect-correction terms so they hold on
// arbitrary smooth inputs.
IdentityReport section3_suite(const QEInput& in, const ScalarField& gamma,
                              const KillingCandidate& kc, const Tolerances& tol = {});

struct EnergyIdentity {
    double lhs = 0.0;  // int div(L_K g)(K) dV
    double rhs = 0.0;  // -1/2 int |L_K g|^2 dV
};
EnergyIdentity lie_div_energy(const MetricField& g, const CurvaturePackage& curv,
                              const VectorField& K);

IdentityReport killing_integral_condition(const QEInput& in, const ScalarField& gamma,
                                          const KillingCandidate& kc, const Tolerances& tol = {});

IdentityReport structure_checks(const QEInput& in, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Analytic path: the same checks evaluated on closed-form Killing-type
// solutions (parallel X, parallel Ricci, constant R; Gamma constant).
IdentityReport qe_residual(const AnalyticSolution& s, const Tolerances& tol = {});
IdentityReport lemma21_check(const AnalyticSolution& s, const Tolerances& tol = {});
IdentityReport section2_suite(const AnalyticSolution& s, const Tolerances& tol = {});
IdentityReport theorem11_check(const AnalyticSolution& s, const Tolerances& tol = {});
IdentityReport section3_suite(const AnalyticSolution& s, double gamma_const = 1.0,
                              const Tolerances& tol = {});
EnergyIdentity lie_div_energy(const AnalyticSolution& s, double gamma_const = 1.0);
IdentityReport killing_integral_condition(const AnalyticSolution& s, double gamma_const = 1.0,
                                          const Tolerances& tol = {});
IdentityReport structure_checks(const AnalyticSolution& s, const Tolerances& tol = {});

}  // namespace qev
