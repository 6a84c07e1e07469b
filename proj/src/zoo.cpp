#include "qev/zoo.hpp"

#include <cmath>
#include <stdexcept>

namespace qev {

namespace {

double param(const GeneratorSpec& s, const std::string& key, double fallback,
             bool required = false) {
    auto it = s.params.find(key);
    if (it != s.params.end()) return it->second;
    if (required) throw std::invalid_argument("generator '" + s.name + "' needs parameter " + key);
    return fallback;
}

Constructed flat_torus(const GeneratorSpec& s) {
    int dim = s.dim > 0 ? s.dim : static_cast<int>(param(s, "dim", 2));
    double period = param(s, "period", 2.0 * M_PI);
    Constructed out;
    out.name = s.name;
    out.chart = ChartGrid::make_uniform(dim, s.grid_n, period);
    SymTensorField g(out.chart);
    for (int i = 0; i < dim; ++i)
        for (std::size_t p = 0; p < out.chart->size(); ++p) g.at(i, i)[p] = 1.0;
    out.metric = std::make_shared<MetricField>(std::move(g));
    return out;
}

Constructed torus_of_revolution(const GeneratorSpec& s) {
    double R0 = param(s, "R0", 2.0);
    double r = param(s, "r", 1.0);
    if (!(r > 0) || r >= R0)
        throw std::invalid_argument("torus_of_revolution: need 0 < r < R0");
    Constructed out;
    out.name = s.name;
    out.chart = ChartGrid::make_uniform(2, s.grid_n);
    SymTensorField g(out.chart);
    for (std::size_t p = 0; p < out.chart->size(); ++p) {
        double u2 = out.chart->coord(p, 1);
        double w = R0 + r * std::cos(u2);
        g.at(0, 0)[p] = w * w;
        g.at(1, 1)[p] = r * r;
    }
    out.metric = std::make_shared<MetricField>(std::move(g));
    return out;
}

Constructed circle_qe(const GeneratorSpec& s) {
    double c = param(s, "c", 1.0);
    double m = param(s, "m", 1.0, true);
    if (m == 0.0) throw std::invalid_argument("circle_qe: m must be nonzero");
    Constructed out;
    out.name = s.name;
    out.chart = ChartGrid::make_uniform(1, s.grid_n);
    SymTensorField g(out.chart);
    for (std::size_t p = 0; p < out.chart->size(); ++p) g.at(0, 0)[p] = 1.0;
    out.metric = std::make_shared<MetricField>(std::move(g));
    VectorField X(out.chart);
    for (std::size_t p = 0; p < out.chart->size(); ++p) X.comp[0][p] = c;
    out.X = std::move(X);
    out.m = m;
    out.lambda = -c * c / m;
    return out;
}

Constructed sphere(const GeneratorSpec& s) {
    double radius = param(s, "radius", 1.0);
    Constructed out;
    out.name = s.name;
    out.analytic = true;
    out.amanifold = round_sphere(radius);
    out.aX.assign(out.amanifold->size(), Eigen::VectorXd::Zero(2));
    out.m = param(s, "m", 1.0);
    out.lambda = 1.0 / (radius * radius);  // Ric = (1/a^2) g, trivial solution
    return out;
}

Constructed s1_cross_einstein(const GeneratorSpec& s) {
    double rho = param(s, "rho", 1.0);
    double m = param(s, "m", -2.0, true);
    if (m == 0.0) throw std::invalid_argument("s1_cross_einstein: m must be nonzero");
    if (!(rho > 0)) throw std::invalid_argument("s1_cross_einstein: need rho > 0");
    if (m * rho > 0)
        throw std::invalid_argument("s1_cross_einstein: need m*rho <= 0 so c = sqrt(-m*rho)");
    const double c = std::sqrt(-m * rho);
    const double radius = 1.0 / std::sqrt(rho);  // Ric_N = rho g_N on S^2(radius)

    auto sph = round_sphere(radius, 16, 32);
    auto M = std::make_shared<AnalyticManifold>();
    M->name = "s1_cross_einstein";
    M->n = 3;
    const int ntheta = 16;
    const double wtheta = 2.0 * M_PI / ntheta;
    M->volume = 2.0 * M_PI * sph->volume;
    for (int t = 0; t < ntheta; ++t)
        for (std::size_t p = 0; p < sph->size(); ++p) {
            M->w.push_back(wtheta * sph->w[p]);
            Eigen::MatrixXd r = Eigen::MatrixXd::Zero(3, 3);
            r.block(1, 1, 2, 2) = sph->ric[p];
            M->ric.push_back(r);
            M->R.push_back(sph->R[p]);
        }

    Constructed out;
    out.name = s.name;
    out.analytic = true;
    out.amanifold = M;
    Eigen::VectorXd X = Eigen::VectorXd::Zero(3);
    X(0) = c;  // c * d/dtheta along the flat circle factor
    out.aX.assign(M->size(), X);
    out.m = m;
    out.lambda = rho;
    return out;
}

Constructed custom_chart(const GeneratorSpec& s) {
    if (s.dim < 1 || s.metric_expr.size() != static_cast<std::size_t>(s.dim * s.dim))
        throw std::invalid_argument("custom_chart: need dim and dim*dim metric expressions");
    Constructed out;
    out.name = s.name;
    double period = param(s, "period", 2.0 * M_PI);
    out.chart = ChartGrid::make_uniform(s.dim, s.grid_n, period);
    Bindings b;
    for (const auto& [k, v] : s.params) b[k] = v;
    out.metric = metric_from_expressions(s.metric_expr, out.chart, b);
    return out;
}

}  // namespace

Constructed construct(const GeneratorSpec& spec) {
    if (spec.name == "flat_torus") return flat_torus(spec);
    if (spec.name == "torus_of_revolution") return torus_of_revolution(spec);
    if (spec.name == "circle_qe") return circle_qe(spec);
    if (spec.name == "round_sphere") return sphere(spec);
    if (spec.name == "s1_cross_einstein") return s1_cross_einstein(spec);
    if (spec.name == "custom_chart") return custom_chart(spec);
    throw std::invalid_argument("unknown generator '" + spec.name + "'");
}

ScalarField sample(const Expr::Ptr& e, const ChartPtr& chart, const Bindings& params) {
    ScalarField out(chart);
    Bindings b = params;
    for (std::size_t p = 0; p < chart->size(); ++p) {
        for (int a = 0; a < chart->dim(); ++a)
            b["u" + std::to_string(a + 1)] = chart->coord(p, a);
        out[p] = e->eval(b);
    }
    return out;
}

ScalarField sample(const std::string& text, const ChartPtr& chart, const Bindings& params) {
    return sample(parse(text), chart, params);
}

std::shared_ptr<const MetricField> metric_from_expressions(const std::vector<std::string>& comps,
                                                           const ChartPtr& chart,
                                                           const Bindings& params) {
    const int n = chart->dim();
    if (comps.size() != static_cast<std::size_t>(n * n))
        throw std::invalid_argument("metric_from_expressions: need n*n components");
    SymTensorField g(chart);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            ScalarField a = sample(comps[static_cast<std::size_t>(i * n + j)], chart, params);
            ScalarField b = sample(comps[static_cast<std::size_t>(j * n + i)], chart, params);
            for (std::size_t p = 0; p < chart->size(); ++p) {
                if (std::fabs(a[p] - b[p]) > 1e-12)
                    throw std::invalid_argument("metric_from_expressions: components not symmetric");
                g.at(i, j)[p] = 0.5 * (a[p] + b[p]);
            }
        }
    return std::make_shared<MetricField>(std::move(g));
}

VectorField vector_from_expressions(const std::vector<std::string>& comps, const ChartPtr& chart,
                                    const Bindings& params) {
    const int n = chart->dim();
    if (comps.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("vector_from_expressions: need n components");
    VectorField X(chart);
    for (int i = 0; i < n; ++i) X.comp[i] = sample(comps[i], chart, params).v;
    return X;
}

}  // namespace qev
