#include <algorithm>
#include <cmath>

#include "qev/qe.hpp"

namespace qev {

namespace {

SymTensorField t_zero(const ChartPtr& c) { return SymTensorField(c); }

SymTensorField t_add(const SymTensorField& a, const SymTensorField& b) {
    SymTensorField out(a.chart);
    for (std::size_t q = 0; q < a.comp.size(); ++q)
        for (std::size_t p = 0; p < a.comp[q].size(); ++p)
            out.comp[q][p] = a.comp[q][p] + b.comp[q][p];
    return out;
}
SymTensorField t_sub(const SymTensorField& a, const SymTensorField& b) {
    SymTensorField out(a.chart);
    for (std::size_t q = 0; q < a.comp.size(); ++q)
        for (std::size_t p = 0; p < a.comp[q].size(); ++p)
            out.comp[q][p] = a.comp[q][p] - b.comp[q][p];
    return out;
}
SymTensorField t_scale(double s, const SymTensorField& a) {
    SymTensorField out(a.chart);
    for (std::size_t q = 0; q < a.comp.size(); ++q)
        for (std::size_t p = 0; p < a.comp[q].size(); ++p) out.comp[q][p] = s * a.comp[q][p];
    return out;
}
SymTensorField t_scale(const ScalarField& s, const SymTensorField& a) {
    SymTensorField out(a.chart);
    for (std::size_t q = 0; q < a.comp.size(); ++q)
        for (std::size_t p = 0; p < a.comp[q].size(); ++p) out.comp[q][p] = s[p] * a.comp[q][p];
    return out;
}
SymTensorField outer2(const OneFormField& w) {
    SymTensorField out(w.chart);
    const int n = w.chart->dim();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (std::size_t p = 0; p < w.chart->size(); ++p)
                out.at(i, j)[p] = w.comp[i][p] * w.comp[j][p];
    return out;
}

OneFormField w_sub(const OneFormField& a, const OneFormField& b) {
    OneFormField out(a.chart);
    for (std::size_t i = 0; i < a.comp.size(); ++i)
        for (std::size_t p = 0; p < a.comp[i].size(); ++p)
            out.comp[i][p] = a.comp[i][p] - b.comp[i][p];
    return out;
}

double oneform_linf(const OneFormField& w, const MetricField& g) {
    const int n = g.dim();
    double m = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += g.ginv(p, i, j) * w.comp[i][p] * w.comp[j][p];
        m = std::max(m, std::sqrt(std::fabs(acc)));
    }
    return m;
}

ScalarField trace_g(const SymTensorField& T, const MetricField& g) {
    const int n = g.dim();
    ScalarField out(g.chart());
    for (std::size_t p = 0; p < g.size(); ++p) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += g.ginv(p, i, j) * T.get(p, i, j);
        out[p] = acc;
    }
    return out;
}

// one-form dual of Ric applied to a vector: (Ric(Y))_j = Ric_jk Y^k
OneFormField ric_apply(const SymTensorField& ric, const VectorField& Y) {
    const int n = Y.chart->dim();
    OneFormField out(Y.chart);
    for (int j = 0; j < n; ++j)
        for (std::size_t p = 0; p < Y.chart->size(); ++p) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += ric.get(p, j, k) * Y.comp[k][p];
            out.comp[j][p] = acc;
        }
    return out;
}

// lowered directional derivative of a vector field: ((nabla_Y Z))^* as one-form
OneFormField directional_covd_lowered(const VectorField& Y, const VectorField& Z,
                                      const MetricField& g, const Christoffels& chris) {
    auto dZ = covd_vector(Z, chris);
    const int n = g.dim();
    OneFormField out(g.chart());
    for (std::size_t p = 0; p < g.size(); ++p)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    acc += g.g(p, j, k) * Y.comp[i][p] * dZ[static_cast<std::size_t>(i * n + k)][p];
            out.comp[j][p] = acc;
        }
    return out;
}

double max_abs_vector(const VectorField& X, const MetricField& g) {
    ScalarField n2 = vector_norm2(X, g);
    double m = 0.0;
    for (std::size_t p = 0; p < n2.size(); ++p) m = std::max(m, std::sqrt(std::fabs(n2[p])));
    return m;
}

ScalarField recip(const ScalarField& s) {
    ScalarField out(s.chart);
    for (std::size_t p = 0; p < s.size(); ++p) out[p] = 1.0 / s[p];
    return out;
}

}  // namespace

SymTensorField qe_defect(const QEInput& in) {
    SymTensorField lie = lie_derivative_metric(in.g, in.X, in.curv.chris);
    OneFormField Xf = flat(in.X, in.g);
    SymTensorField E = t_add(in.curv.ricci, t_scale(0.5, lie));
    E = t_sub(E, t_scale(1.0 / in.m, outer2(Xf)));
    E = t_sub(E, t_scale(in.lambda, in.g.lower()));
    return E;
}

QEResidualResult qe_residual(const QEInput& in, const Tolerances& tol) {
    const int n = in.g.dim();
    QEResidualResult out{qe_defect(in), ScalarField(in.g.chart()), {}};
    out.report.name = "qe_residual";

    ScalarField divX = div_vector(in.X, in.g);
    ScalarField X2 = vector_norm2(in.X, in.g);
    for (std::size_t p = 0; p < in.g.size(); ++p)
        out.trace_residual[p] =
            in.curv.scalar[p] + divX[p] - X2[p] / in.m - in.lambda * n;

    const double scale = std::max(1.0, std::fabs(in.lambda));
    double e_linf = tensor_linf(out.E, in.g);
    double e_l2 = std::sqrt(std::fabs(integrate(tensor_norm2(out.E, in.g), in.g)));

    CheckEntry main = CheckEntry::residual("qe_residual", "1.1", e_linf, tol.solution * scale);
    main.l2 = e_l2;
    out.report.add(main);

    ScalarField trE = trace_g(out.E, in.g);
    double consist = linf(trE - out.trace_residual);
    out.report.add(CheckEntry::residual("qe_trace_consistency", "2.3", consist, 1e-12,
                                        "trace_g(E) vs R + div X - (1/m)|X|^2 - lambda n"));

    SymTensorField lie = lie_derivative_metric(in.g, in.X, in.curv.chris);
    out.report.scalars["E_linf"] = e_linf;
    out.report.scalars["E_l2"] = e_l2;
    out.report.scalars["lie_Xg_linf"] = tensor_linf(lie, in.g);
    out.report.scalars["sd_R"] = stddev(in.curv.scalar, in.g);
    out.report.scalars["c"] = in.lambda * n - mean(in.curv.scalar, in.g);
    return out;
}

IdentityReport lemma21_check(const MetricField& g, const CurvaturePackage& curv,
                             const VectorField& X, const Tolerances& tol) {
    IdentityReport rep;
    rep.name = "lemma21";

    ScalarField divX = div_vector(X, g);
    ScalarField gradX_divX = covariant_directional(divX, X);
    double lhs = integrate(divX * divX, g);
    double rhs = -integrate(gradX_divX, g);
    rep.add(CheckEntry::balance("lemma21_integral", "2.1", lhs, rhs,
                                tol.algebraic * std::max(1.0, std::fabs(lhs))));

    // pointwise product rule: div((div X) X) = (div X)^2 + grad_X div X
    VectorField scaled(X.chart);
    for (int i = 0; i < g.dim(); ++i)
        for (std::size_t p = 0; p < g.size(); ++p) scaled.comp[i][p] = divX[p] * X.comp[i][p];
    ScalarField lhs_pt = div_vector(scaled, g);
    ScalarField rhs_pt = divX * divX + gradX_divX;
    rep.add(CheckEntry::residual("lemma21_pointwise", "2.2", linf(lhs_pt - rhs_pt),
                                 tol.algebraic * std::max(1.0, linf(lhs_pt))));
    rep.scalars["lhs_integral"] = lhs;
    rep.scalars["rhs_integral"] = rhs;
    return rep;
}

IdentityReport section2_suite(const QEInput& in, const Tolerances& tol,
                              std::optional<double> c_override) {
    IdentityReport rep;
    rep.name = "section2";
    const int n = in.g.dim();
    const double m = in.m;

    SymTensorField E = qe_defect(in);
    const double e_linf = tensor_linf(E, in.g);
    const bool is_solution = e_linf <= tol.solution * std::max(1.0, std::fabs(in.lambda));

    ScalarField divX = div_vector(in.X, in.g);
    ScalarField X2 = vector_norm2(in.X, in.g);
    SymTensorField lie = lie_derivative_metric(in.g, in.X, in.curv.chris);
    ScalarField lie2 = tensor_norm2(lie, in.g);
    ScalarField lapX2 = laplacian(X2, in.g, in.curv.chris);
    ScalarField gradX_X2 = covariant_directional(X2, in.X);
    ScalarField lapDiv = laplacian(divX, in.g, in.curv.chris);
    ScalarField gradX_div = covariant_directional(divX, in.X);

    const double sd_R = stddev(in.curv.scalar, in.g);
    const double mean_R = mean(in.curv.scalar, in.g);
    const double c = c_override ? *c_override : in.lambda * n - mean_R;
    const bool R_const = sd_R <= tol.constant * std::max(1.0, std::fabs(mean_R));
    rep.scalars["c"] = c;
    rep.scalars["sd_R"] = sd_R;
    rep.scalars["E_linf"] = e_linf;

    // (a) Eq (2.4): stated only for solutions; no defect correction available.
    {
        ScalarField lhs(in.g.chart()), rhs(in.g.chart());
        for (std::size_t p = 0; p < in.g.size(); ++p) {
            lhs[p] = (2.0 / m) * lapX2[p] + (2.0 / m) * gradX_X2[p] -
                     (1.0 / m + 0.5) * lie2[p];
            rhs[p] = -lapDiv[p] + (4.0 / m + 1.0) * gradX_div[p] - 2.0 * in.lambda * divX[p] +
                     (4.0 / (m * m)) * X2[p] * divX[p] + (2.0 / m) * divX[p] * divX[p];
        }
        if (is_solution)
            rep.add(CheckEntry::residual("eq24_pointwise", "2.4", linf(lhs - rhs), tol.identity));
        else
            rep.add(CheckEntry::skipped("eq24_pointwise", "2.4",
                                        "input is not a QE solution; (2.4) holds only on solutions"));
    }

    // (b) substitution consistency (2.4)->(2.5): pure algebra, arbitrary fields.
    {
        ScalarField S(in.g.chart());  // m div X - m c, standing in for |X|^2
        for (std::size_t p = 0; p < in.g.size(); ++p) S[p] = m * divX[p] - m * c;
        ScalarField lapS = laplacian(S, in.g, in.curv.chris);
        ScalarField gradX_S = covariant_directional(S, in.X);
        ScalarField form1(in.g.chart()), form2(in.g.chart());
        for (std::size_t p = 0; p < in.g.size(); ++p) {
            double lhs24 = (2.0 / m) * lapS[p] + (2.0 / m) * gradX_S[p] -
                           (1.0 / m + 0.5) * lie2[p];
            double rhs24 = -lapDiv[p] + (4.0 / m + 1.0) * gradX_div[p] -
                           2.0 * in.lambda * divX[p] + (4.0 / (m * m)) * S[p] * divX[p] +
                           (2.0 / m) * divX[p] * divX[p];
            form1[p] = lhs24 - rhs24;
            double lhs25 = 3.0 * lapDiv[p] + (1.0 - 4.0 / m) * gradX_div[p] -
                           (1.0 / m + 0.5) * lie2[p];
            double rhs25 = (-2.0 * in.lambda - 4.0 * c / m) * divX[p] +
                           (6.0 / m) * divX[p] * divX[p];
            form2[p] = lhs25 - rhs25;
        }
        double scale = std::max(1.0, linf(form1));
        rep.add(CheckEntry::residual("eq24_to_25_substitution", "2.5", linf(form1 - form2),
                                     tol.algebraic * scale));
    }

    // (c) integral balances, meaningful on solutions with constant R.
    double int_gradX_div = integrate(gradX_div, in.g);
    double int_lie2 = integrate(lie2, in.g);
    double int_div2 = integrate(divX * divX, in.g);
    rep.scalars["int_div2"] = int_div2;
    rep.scalars["int_lie2"] = int_lie2;

    auto integral_entry = [&](std::string name, std::string tag, double lhs, double rhs) {
        if (!is_solution)
            rep.add(CheckEntry::skipped(std::move(name), std::move(tag), "not a QE solution"));
        else if (!R_const)
            rep.add(CheckEntry::skipped(std::move(name), std::move(tag),
                                        "scalar curvature not constant; c undefined"));
        else
            rep.add(CheckEntry::balance(std::move(name), std::move(tag), lhs, rhs,
                                        tol.integral * std::max(1.0, std::fabs(rhs))));
    };
    integral_entry("eq26_integral", "2.6", (1.0 - 4.0 / m) * int_gradX_div,
                   (1.0 / m + 0.5) * int_lie2 + (6.0 / m) * int_div2);
    integral_entry("eq27_integral", "2.7", -(1.0 + 2.0 / m) * int_div2,
                   (0.5 + 1.0 / m) * int_lie2);
    if (m == -2.0)
        rep.add(CheckEntry::skipped("eq28_integral", "2.8", "skipped: m = -2"));
    else
        integral_entry("eq28_integral", "2.8", -2.0 * int_div2, int_lie2);
    return rep;
}

IdentityReport theorem11_check(const QEInput& in, const Tolerances& tol) {
    IdentityReport rep;
    rep.name = "theorem11";
    const double scale = std::max(1.0, std::fabs(in.lambda));

    SymTensorField E = qe_defect(in);
    const double e_linf = tensor_linf(E, in.g);
    rep.scalars["E_linf"] = e_linf;

    if (e_linf > tol.solution * scale) {
        CheckEntry e = CheckEntry::skipped("theorem11_equivalence", "T1.1",
                                           "input is not a QE solution");
        e.verdict = "inapplicable";
        rep.add(e);
        return rep;
    }
    if (in.m == -2.0) {
        rep.add(CheckEntry::skipped("theorem11_equivalence", "T1.1", "out of theorem scope: m = -2"));
        return rep;
    }

    const double sd_R = stddev(in.curv.scalar, in.g);
    const double mean_R = mean(in.curv.scalar, in.g);
    SymTensorField lie = lie_derivative_metric(in.g, in.X, in.curv.chris);
    const double lie_linf = tensor_linf(lie, in.g);

    ScalarField Xnorm(in.g.chart());
    ScalarField X2 = vector_norm2(in.X, in.g);
    for (std::size_t p = 0; p < X2.size(); ++p) Xnorm[p] = std::sqrt(std::fabs(X2[p]));
    const double sd_Xnorm = stddev(Xnorm, in.g);

    const bool R_const = sd_R <= tol.constant * std::max(1.0, std::fabs(mean_R));
    const bool killing = lie_linf <= tol.identity;

    CheckEntry e;
    e.check = "theorem11_equivalence";
    e.paper_tag = "T1.1";
    e.lhs = sd_R;
    e.rhs = lie_linf;
    e.tolerance = tol.identity;
    e.verdict = (R_const == killing) ? "pass" : "fail";
    e.note = R_const ? "constant R and Killing X" : "nonconstant R and non-Killing X";
    if (R_const != killing) e.note = "equivalence violated";
    rep.add(e);

    rep.scalars["sd_R"] = sd_R;
    rep.scalars["lie_Xg_linf"] = lie_linf;
    rep.scalars["sd_X_norm"] = sd_Xnorm;
    return rep;
}

KillingCandidate killing_candidate(const QEInput& in, const ScalarField& gamma) {
    double min_g = gamma[0];
    for (std::size_t p = 0; p < gamma.size(); ++p) min_g = std::min(min_g, gamma[p]);
    if (!(min_g > 0)) throw std::invalid_argument("killing_candidate: Gamma must be positive");

    VectorField grad = sharp(differential(gamma), in.g);
    KillingCandidate kc{VectorField(in.g.chart()), ScalarField(in.g.chart())};
    for (int i = 0; i < in.g.dim(); ++i)
        for (std::size_t p = 0; p < in.g.size(); ++p)
            kc.K.comp[i][p] = (2.0 / in.m) * gamma[p] * in.X.comp[i][p] + grad.comp[i][p];
    kc.divK = div_vector(kc.K, in.g);
    return kc;
}

IdentityReport section3_suite(const QEInput& in, const ScalarField& gamma,
                              const KillingCandidate& kc, const Tolerances& tol) {
    IdentityReport rep;
    rep.name = "section3";
    const int n = in.g.dim();
    const double m = in.m;
    const std::size_t M = in.g.size();

    double min_g = gamma[0];
    for (std::size_t p = 0; p < M; ++p) min_g = std::min(min_g, gamma[p]);
    if (!(min_g > 0)) throw std::invalid_argument("section3_suite: Gamma must be positive");

    const ScalarField inv_gamma = recip(gamma);
    const OneFormField dG = differential(gamma);
    const VectorField gradG = sharp(dG, in.g);
    const SymTensorField hessG = hessian(gamma, in.g, in.curv.chris);
    const ScalarField lapG = trace_g(hessG, in.g);
    const OneFormField Kf = flat(kc.K, in.g);
    const SymTensorField lieK = lie_derivative_metric(in.g, kc.K, in.curv.chris);
    const SymTensorField E = qe_defect(in);
    const ScalarField trE = trace_g(E, in.g);
    const ScalarField K2 = vector_norm2(kc.K, in.g);
    const ScalarField gradG2 = vector_norm2(gradG, in.g);
    const ScalarField dG_K = inner(dG, kc.K);
    const double divK_linf = linf(kc.divK);
    rep.scalars["divK_linf"] = divK_linf;
    const bool divfree = divK_linf <= tol.div_k;

    // RHS of (3.6): (1/G)K*K* - (1/G)dGdG - (4G/m)Ric + 2 Hess G + (4Gl/m)g
    SymTensorField T1 = t_scale(inv_gamma, outer2(Kf));
    SymTensorField T2 = t_scale(-1.0, t_scale(inv_gamma, outer2(dG)));
    SymTensorField T3 = t_scale(-4.0 / m, t_scale(gamma, in.curv.ricci));
    SymTensorField T4 = t_scale(2.0, hessG);
    SymTensorField T5 = t_scale(4.0 * in.lambda / m, t_scale(gamma, in.g.lower()));
    SymTensorField rhs36 = t_add(t_add(T1, T2), t_add(t_add(T3, T4), T5));

    // (a) rewrite identity with defect correction, valid on arbitrary fields
    {
        SymTensorField corr = t_scale(4.0 / m, t_scale(gamma, E));
        SymTensorField resid = t_sub(t_sub(lieK, rhs36), corr);
        rep.add(CheckEntry::residual("eq36_rewrite", "3.6", tensor_linf(resid, in.g),
                                     tol.identity * std::max(1.0, tensor_linf(lieK, in.g))));
    }

    // (b) divergence pieces (3.8)-(3.11): formula vs direct div_symtensor,
    // each derived under div K = 0.
    auto piece = [&](const char* name, const char* tag, const SymTensorField& T,
                     const OneFormField& formula) {
        if (!divfree) {
            rep.add(CheckEntry::skipped(name, tag, "requires |div K|_inf <= div_k tolerance"));
            return;
        }
        OneFormField direct = div_symtensor(T, in.g, in.curv.chris);
        double resid = oneform_linf(w_sub(direct, formula), in.g);
        double scale = std::max(1.0, oneform_linf(direct, in.g));
        rep.add(CheckEntry::residual(name, tag, resid, tol.section3 * scale));
    };

    OneFormField nabla_K_K = directional_covd_lowered(kc.K, kc.K, in.g, in.curv.chris);
    OneFormField nabla_G_G = directional_covd_lowered(gradG, gradG, in.g, in.curv.chris);
    OneFormField ricG = ric_apply(in.curv.ricci, gradG);
    OneFormField dR = differential(in.curv.scalar);
    OneFormField dLapG = differential(lapG);

    OneFormField f38(in.g.chart()), f39(in.g.chart()), f310(in.g.chart()), f311(in.g.chart());
    for (int j = 0; j < n; ++j)
        for (std::size_t p = 0; p < M; ++p) {
            double ig = inv_gamma[p];
            f38.comp[j][p] = ig * nabla_K_K.comp[j][p] - ig * ig * dG_K[p] * Kf.comp[j][p];
            f39.comp[j][p] = -ig * lapG[p] * dG.comp[j][p] - ig * nabla_G_G.comp[j][p] +
                             ig * ig * gradG2[p] * dG.comp[j][p];
            f310.comp[j][p] = -(2.0 / m) * gamma[p] * dR.comp[j][p] -
                              (4.0 / m) * ricG.comp[j][p];
            f311.comp[j][p] = 2.0 * ricG.comp[j][p] + 2.0 * dLapG.comp[j][p];
        }
    piece("eq38_divergence", "3.8", T1, f38);
    piece("eq39_divergence", "3.9", T2, f39);
    piece("eq310_divergence", "3.10", T3, f310);
    piece("eq311_divergence", "3.11", T4, f311);

    // (c) assembled (3.12): pieces contracted with K vs direct divergence of
    // L_K g - (4G/m)E contracted with K
    if (divfree) {
        OneFormField f35_last = div_symtensor(T5, in.g, in.curv.chris);
        ScalarField lhs(in.g.chart());
        for (std::size_t p = 0; p < M; ++p) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += (f38.comp[j][p] + f39.comp[j][p] + f310.comp[j][p] + f311.comp[j][p] +
                        f35_last.comp[j][p]) *
                       kc.K.comp[j][p];
            lhs[p] = acc;
        }
        SymTensorField corrected = t_sub(lieK, t_scale(4.0 / m, t_scale(gamma, E)));
        OneFormField div_corr = div_symtensor(corrected, in.g, in.curv.chris);
        ScalarField rhs = inner(div_corr, kc.K);
        rep.add(CheckEntry::residual("eq312_assembled", "3.12", linf(lhs - rhs),
                                     tol.section3 * std::max(1.0, linf(rhs))));
    } else {
        rep.add(CheckEntry::skipped("eq312_assembled", "3.12",
                                    "requires |div K|_inf <= div_k tolerance"));
    }

    // (d) Stokes entries (3.14), (3.15)
    if (divfree) {
        OneFormField divT5 = div_symtensor(T5, in.g, in.curv.chris);
        ScalarField integrand14 = inner(divT5, kc.K);
        double i14 = integrate(integrand14, in.g);
        ScalarField abs14(in.g.chart());
        for (std::size_t p = 0; p < M; ++p) abs14[p] = std::fabs(integrand14[p]);
        double scale14 = std::max(1.0, integrate(abs14, in.g));
        rep.add(CheckEntry::residual("eq314_stokes", "3.14", std::fabs(i14),
                                     tol.section3 * scale14));
    } else {
        rep.add(CheckEntry::skipped("eq314_stokes", "3.14",
                                    "requires |div K|_inf <= div_k tolerance"));
    }
    {
        VectorField lapG_K(in.g.chart());
        for (int i = 0; i < n; ++i)
            for (std::size_t p = 0; p < M; ++p) lapG_K.comp[i][p] = lapG[p] * kc.K.comp[i][p];
        double i15 = 2.0 * integrate(div_vector(lapG_K, in.g), in.g);
        rep.add(CheckEntry::residual("eq315_stokes", "3.15", std::fabs(i15), tol.integral,
                                     "integral of a divergence; unconditional"));
    }

    // (e) trace of (3.6) with defect correction, arbitrary inputs
    {
        ScalarField lhs(in.g.chart()), rhs(in.g.chart());
        for (std::size_t p = 0; p < M; ++p) {
            lhs[p] = 2.0 * kc.divK[p];
            rhs[p] = inv_gamma[p] * K2[p] - inv_gamma[p] * gradG2[p] -
                     (4.0 / m) * gamma[p] * in.curv.scalar[p] + 2.0 * lapG[p] +
                     (4.0 * in.lambda * n / m) * gamma[p] + (4.0 / m) * gamma[p] * trE[p];
        }
        rep.add(CheckEntry::residual("eq316_trace", "3.16", linf(lhs - rhs),
                                     tol.identity * std::max(1.0, linf(rhs))));
    }
    ScalarField rhs317(in.g.chart());
    {
        ScalarField lhs(in.g.chart());
        for (std::size_t p = 0; p < M; ++p) {
            double ig = inv_gamma[p];
            lhs[p] = (4.0 / m) * in.curv.scalar[p];
            rhs317[p] = ig * ig * K2[p] - ig * ig * gradG2[p] + 2.0 * ig * lapG[p] +
                        4.0 * in.lambda * n / m - 2.0 * ig * kc.divK[p] + (4.0 / m) * trE[p];
        }
        rep.add(CheckEntry::residual("eq317_divided", "3.17", linf(lhs - rhs317),
                                     tol.identity * std::max(1.0, linf(rhs317))));
    }

    // (f) derivative identity (3.18) on the corrected (3.17)
    {
        ScalarField lhs(in.g.chart());
        ScalarField dR_K = inner(dR, kc.K);
        ScalarField d317_K = covariant_directional(rhs317, kc.K);
        ScalarField rhs(in.g.chart());
        for (std::size_t p = 0; p < M; ++p) {
            lhs[p] = (2.0 / m) * gamma[p] * dR_K[p];
            rhs[p] = 0.5 * gamma[p] * d317_K[p];
        }
        rep.add(CheckEntry::residual("eq318_derivative", "3.18", linf(lhs - rhs),
                                     tol.section3 * std::max(1.0, linf(lhs))));
    }
    return rep;
}

EnergyIdentity lie_div_energy(const MetricField& g, const CurvaturePackage& curv,
                              const VectorField& K) {
    SymTensorField lieK = lie_derivative_metric(g, K, curv.chris);
    OneFormField divlie = div_symtensor(lieK, g, curv.chris);
    EnergyIdentity out;
    out.lhs = integrate(inner(divlie, K), g);
    out.rhs = -0.5 * integrate(tensor_norm2(lieK, g), g);
    return out;
}

IdentityReport killing_integral_condition(const QEInput& in, const ScalarField& gamma,
                                          const KillingCandidate& kc, const Tolerances& tol) {
    IdentityReport rep;
    rep.name = "killing_integral";
    const double m = in.m;

    double min_g = gamma[0];
    for (std::size_t p = 0; p < gamma.size(); ++p) min_g = std::min(min_g, gamma[p]);

    SymTensorField E = qe_defect(in);
    const double e_linf = tensor_linf(E, in.g);
    const double divK_linf = linf(kc.divK);
    rep.scalars["E_linf"] = e_linf;
    rep.scalars["divK_linf"] = divK_linf;

    std::string why;
    if (e_linf > tol.solution * std::max(1.0, std::fabs(in.lambda)))
        why = "input is not a QE solution";
    else if (divK_linf > tol.div_k)
        why = "div K is not numerically zero";
    else if (!(min_g > 0))
        why = "Gamma is not positive";
    if (!why.empty()) {
        CheckEntry e = CheckEntry::skipped("theorem13_biconditional", "T1.3", why);
        e.verdict = "inapplicable";
        rep.add(e);
        return rep;
    }

    VectorField gradG = sharp(differential(gamma), in.g);
    ScalarField ric_gG_K(in.g.chart());
    for (std::size_t p = 0; p < in.g.size(); ++p) {
        double acc = 0.0;
        for (int i = 0; i < in.g.dim(); ++i)
            for (int j = 0; j < in.g.dim(); ++j)
                acc += in.curv.ricci.get(p, i, j) * gradG.comp[i][p] * kc.K.comp[j][p];
        ric_gG_K[p] = acc;
    }
    const double I = integrate(ric_gG_K, in.g);
    const double coeff = (2.0 * m - 4.0) / m;

    SymTensorField lieK = lie_derivative_metric(in.g, kc.K, in.curv.chris);
    const double lieK_linf = tensor_linf(lieK, in.g);
    const double energy = -0.5 * integrate(tensor_norm2(lieK, in.g), in.g);
    const double mid = integrate(inner(div_symtensor(lieK, in.g, in.curv.chris), kc.K), in.g);

    rep.scalars["I"] = I;
    rep.scalars["coefficient"] = coeff;
    rep.scalars["energy"] = energy;
    rep.scalars["lie_Kg_linf"] = lieK_linf;

    // (i) Eq (3.19): -1/2 int |L_K g|^2 = int div(L_K g)(K) = (2m-4)/m * I
    double s19 = std::max({1.0, std::fabs(energy), std::fabs(coeff * I)});
    rep.add(CheckEntry::balance("eq319_energy_vs_integral", "3.19", energy, coeff * I,
                                tol.integral * s19));
    rep.add(CheckEntry::balance("eq313_energy_route", "3.13", mid, energy,
                                tol.integral * std::max(1.0, std::fabs(energy))));

    // (ii) Theorem 1.3 biconditional
    const bool integral_zero = std::fabs((m - 2.0) * I) <= tol.integral * s19;
    const bool killing = lieK_linf <= tol.section3;
    CheckEntry bic;
    bic.check = "theorem13_biconditional";
    bic.paper_tag = "T1.3";
    bic.lhs = (m - 2.0) * I;
    bic.rhs = lieK_linf;
    bic.tolerance = tol.section3;
    bic.verdict = (integral_zero == killing) ? "pass" : "fail";
    rep.add(bic);

    // (iii) div X = 0 forces Gamma constant
    if (linf(div_vector(in.X, in.g)) <= tol.div_k) {
        double sd_g = stddev(gamma, in.g) / std::max(1.0, std::fabs(mean(gamma, in.g)));
        rep.add(CheckEntry::residual("corollary14_gamma_constant", "C1.4", sd_g, tol.section3,
                                     "div-free X admits only constant Gamma"));
    }

    // (iv) m = 2: the coefficient vanishes identically and K must be Killing
    if (m == 2.0) {
        CheckEntry e;
        e.check = "m2_always_killing";
        e.paper_tag = "3.20";
        e.lhs = coeff;
        e.rhs = lieK_linf;
        e.tolerance = tol.section3;
        e.verdict = (coeff == 0.0 && killing) ? "pass" : "fail";
        e.note = "m = 2 makes the integral coefficient vanish";
        rep.add(e);
    }
    return rep;
}

IdentityReport structure_checks(const QEInput& in, const Tolerances& tol) {
    IdentityReport rep;
    rep.name = "structure";
    const int n = in.g.dim();
    const double m = in.m;
    const std::size_t M = in.g.size();

    SymTensorField E = qe_defect(in);
    const double e_linf = tensor_linf(E, in.g);
    rep.scalars["E_linf"] = e_linf;
    if (e_linf > tol.solution * std::max(1.0, std::fabs(in.lambda))) {
        CheckEntry e = CheckEntry::skipped("einstein_branch", "C1.2", "input is not a QE solution");
        e.verdict = "inapplicable";
        rep.add(e);
        return rep;
    }

    // (a) Einstein test: if Ric = (R/n) g and n >= 2 then X must vanish
    ScalarField Rn(in.g.chart());
    for (std::size_t p = 0; p < M; ++p) Rn[p] = in.curv.scalar[p] / n;
    double einstein_dev = tensor_linf(t_sub(in.curv.ricci, t_scale(Rn, in.g.lower())), in.g);
    double X_linf = max_abs_vector(in.X, in.g);
    rep.scalars["einstein_deviation"] = einstein_dev;
    rep.scalars["X_linf"] = X_linf;
    {
        CheckEntry e;
        e.check = "einstein_branch";
        e.paper_tag = "C1.2";
        e.lhs = einstein_dev;
        e.rhs = X_linf;
        e.tolerance = tol.identity;
        if (einstein_dev <= tol.identity && n >= 2)
            e.verdict = X_linf <= tol.identity ? "pass" : "fail";
        else if (einstein_dev <= tol.identity && n == 1) {
            e.verdict = "pass";
            e.note = "n = 1 exemption: S^1 admits Einstein solutions with X != 0";
        } else {
            e.verdict = "pass";
            e.note = "metric not Einstein; branch not triggered";
        }
        rep.add(e);
    }

    SymTensorField lie = lie_derivative_metric(in.g, in.X, in.curv.chris);
    const double lie_linf = tensor_linf(lie, in.g);
    const bool killing = lie_linf <= tol.identity;

    // (b) Ricci eigenvalue multiset {lambda x (n-1), lambda + |X|^2/m}
    if (killing && X_linf > 1e-6) {
        ScalarField X2 = vector_norm2(in.X, in.g);
        double worst = 0.0;
        Eigen::MatrixXd A(n, n), B(n, n);
        for (std::size_t p = 0; p < M; ++p) {
            if (std::sqrt(std::fabs(X2[p])) <= 1e-6) continue;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    A(i, j) = in.curv.ricci.get(p, i, j);
                    B(i, j) = in.g.g(p, i, j);
                }
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
            std::vector<double> got(n), want(n);
            for (int i = 0; i < n; ++i) got[i] = es.eigenvalues()(i);
            for (int i = 0; i < n - 1; ++i) want[i] = in.lambda;
            want[n - 1] = in.lambda + X2[p] / m;
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            for (int i = 0; i < n; ++i) worst = std::max(worst, std::fabs(got[i] - want[i]));
        }
        rep.add(CheckEntry::residual("ricci_eigenvalues", "R2.3", worst, tol.eigen));
    } else {
        rep.add(CheckEntry::skipped("ricci_eigenvalues", "R2.3",
                                    killing ? "X vanishes; eigenvalue split degenerate"
                                            : "X not Killing; Remark 2.3 needs constant R"));
    }

    // (c) parallel Ric <=> parallel X
    auto covdRic = covd_symtensor(in.curv.ricci, in.curv.chris);
    auto dX = covd_vector(in.X, in.curv.chris);
    const std::size_t np = in.curv.ricci.comp.size();

    double ric_par = 0.0, X_par = 0.0, id_resid = 0.0;
    OneFormField Xf = flat(in.X, in.g);
    std::vector<double> dRic(static_cast<std::size_t>(n * n * n));
    std::vector<double> dXl(static_cast<std::size_t>(n * n));  // nabla_k X*_i
    std::vector<double> idt(static_cast<std::size_t>(n * n * n));
    for (std::size_t p = 0; p < M; ++p) {
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                double v = 0.0;
                for (int l = 0; l < n; ++l)
                    v += in.g.g(p, i, l) * dX[static_cast<std::size_t>(k * n + l)][p];
                dXl[static_cast<std::size_t>(k * n + i)] = v;
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dRic[static_cast<std::size_t>(k * n * n + i * n + j)] =
                        covdRic[static_cast<std::size_t>(k) * np +
                                static_cast<std::size_t>(in.curv.ricci.pack(i, j))][p];
        }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    idt[static_cast<std::size_t>(k * n * n + i * n + j)] =
                        dRic[static_cast<std::size_t>(k * n * n + i * n + j)] -
                        (1.0 / m) * (dXl[static_cast<std::size_t>(k * n + i)] * Xf.comp[j][p] +
                                     Xf.comp[i][p] * dXl[static_cast<std::size_t>(k * n + j)]);
        // frame-invariant norms via full inverse-metric contraction
        double a_ric = 0.0, a_X = 0.0, a_id = 0.0;
        for (int k = 0; k < n; ++k)
            for (int a = 0; a < n; ++a) {
                double wka = in.g.ginv(p, k, a);
                for (int i = 0; i < n; ++i)
                    for (int b = 0; b < n; ++b) {
                        double wib = in.g.ginv(p, i, b);
                        for (int j = 0; j < n; ++j)
                            for (int c = 0; c < n; ++c) {
                                double w = wka * wib * in.g.ginv(p, j, c);
                                a_ric += w * dRic[static_cast<std::size_t>(k * n * n + i * n + j)] *
                                         dRic[static_cast<std::size_t>(a * n * n + b * n + c)];
                                a_id += w * idt[static_cast<std::size_t>(k * n * n + i * n + j)] *
                                        idt[static_cast<std::size_t>(a * n * n + b * n + c)];
                            }
                        a_X += wka * wib * dXl[static_cast<std::size_t>(k * n + i)] *
                               dXl[static_cast<std::size_t>(a * n + b)];
                    }
            }
        ric_par = std::max(ric_par, std::sqrt(std::fabs(a_ric)));
        X_par = std::max(X_par, std::sqrt(std::fabs(a_X)));
        id_resid = std::max(id_resid, std::sqrt(std::fabs(a_id)));
    }
    rep.scalars["covd_ric_linf"] = ric_par;
    rep.scalars["covd_X_linf"] = X_par;

    const bool ric_parallel = ric_par <= tol.identity;
    const bool X_parallel = X_par <= tol.identity;
    CheckEntry par;
    par.check = "parallel_equivalence";
    par.paper_tag = "R2.3";
    par.lhs = ric_par;
    par.rhs = X_par;
    par.tolerance = tol.identity;
    par.verdict = (ric_parallel == X_parallel) ? "pass" : "fail";
    rep.add(par);

    if (killing)
        rep.add(CheckEntry::residual("parallel_identity", "R2.3", id_resid,
                                     tol.identity * std::max(1.0, ric_par),
                                     "grad Ric = (1/m)(grad X* (x) X* + X* (x) grad X*)"));
    else
        rep.add(CheckEntry::skipped("parallel_identity", "R2.3", "X not Killing"));
    return rep;
}

}  // namespace qev
