#pragma once

#include <map>
#include <optional>
#include <string>

#include "qev/analytic.hpp"
#include "qev/expr.hpp"
#include "qev/metric.hpp"

namespace qev {

struct GeneratorSpec {
    std::string name;
    std::map<std::string, double> params;
    int grid_n = 64;                       // nodes per axis on grid manifolds
    std::vector<std::string> metric_expr;  // custom_chart only, row-major n*n
    int dim = 0;                           // custom_chart only
};

// Result of a generator: exactly one of grid/analytic is populated; m and
// lambda are present when the generator ships an exact quasi-Einstein triple.
struct Constructed {
    std::string name;
    bool analytic = false;

    ChartPtr chart;
    std::shared_ptr<const MetricField> metric;
    std::optional<VectorField> X;

    AnalyticPtr amanifold;
    std::vector<Eigen::VectorXd> aX;

    std::optional<double> m, lambda;
};

// Generators: flat_torus(dim, period), torus_of_revolution(R0, r),
// round_sphere(radius), circle_qe(c, m), s1_cross_einstein(rho, m),
// custom_chart(metric expressions).
Constructed construct(const GeneratorSpec& spec);

// Sample a closed-form expression on a chart; coordinates are u1..un,
// remaining symbols are looked up in `params`.
ScalarField sample(const Expr::Ptr& e, const ChartPtr& chart, const Bindings& params = {});
ScalarField sample(const std::string& text, const ChartPtr& chart, const Bindings& params = {});

// Metric from row-major component expressions (n*n entries).
std::shared_ptr<const MetricField> metric_from_expressions(const std::vector<std::string>& comps,
                                                           const ChartPtr& chart,
                                                           const Bindings& params = {});

VectorField vector_from_expressions(const std::vector<std::string>& comps, const ChartPtr& chart,
                                    const Bindings& params = {});

}  // namespace qev
