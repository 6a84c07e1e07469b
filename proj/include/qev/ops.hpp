#pragma once

#include "qev/grid.hpp"
#include "qev/metric.hpp"

namespace qev {

// Fourier-collocation derivative along one periodic axis.  Exact (to
// round-off) for trigonometric polynomials of degree < N/2.
ScalarField spectral_partial(const ScalarField& f, int axis);
void spectral_partial_raw(const ChartGrid& chart, const double* in, double* out, int axis);

// Connection coefficients, full storage c[k*n*n + i*n + j] = Gamma^k_ij.
struct Christoffels {
    ChartPtr chart;
    std::vector<std::vector<double>> c;

    double get(std::size_t node, int k, int i, int j) const {
        int n = chart->dim();
        return c[static_cast<std::size_t>(k * n * n + i * n + j)][node];
    }
};

struct CurvaturePackage {
    Christoffels chris;
    SymTensorField ricci;
    ScalarField scalar;
    double ricci_asymmetry = 0.0;  // max |Ric_ij - Ric_ji| before symmetrization
};

Christoffels christoffels(const MetricField& g);
CurvaturePackage curvature_package(const MetricField& g);

// grids[i*n + j] = covariant derivative (nabla_i X)^j
std::vector<std::vector<double>> covd_vector(const VectorField& X, const Christoffels& chris);

// grids[k*np + p] with p the packed (i,j) index: nabla_k T_ij
std::vector<std::vector<double>> covd_symtensor(const SymTensorField& T,
                                                const Christoffels& chris);

SymTensorField lie_derivative_metric(const MetricField& g, const VectorField& X,
                                     const Christoffels& chris);
SymTensorField hessian(const ScalarField& f, const MetricField& g, const Christoffels& chris);
ScalarField laplacian(const ScalarField& f, const MetricField& g, const Christoffels& chris);
ScalarField div_vector(const VectorField& X, const MetricField& g);
OneFormField div_symtensor(const SymTensorField& T, const MetricField& g,
                           const Christoffels& chris);

// Quadrature: sum of f * sqrt(det g) * cell volume in fixed index order.
double integrate(const ScalarField& f, const MetricField& g);

VectorField sharp(const OneFormField& w, const MetricField& g);
OneFormField flat(const VectorField& X, const MetricField& g);
OneFormField differential(const ScalarField& f);
ScalarField inner(const VectorField& X, const VectorField& Y, const MetricField& g);
ScalarField inner(const OneFormField& w, const VectorField& X);  // natural pairing
ScalarField tensor_norm2(const SymTensorField& T, const MetricField& g);
ScalarField vector_norm2(const VectorField& X, const MetricField& g);
ScalarField covariant_directional(const ScalarField& f, const VectorField& X);

// Pointwise field arithmetic helpers.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double a, const ScalarField& b);

double linf(const ScalarField& f);
double linf(const std::vector<double>& v);
double l2_norm(const ScalarField& f, const MetricField& g);  // sqrt(int f^2 dV)
double tensor_linf(const SymTensorField& T, const MetricField& g);
double mean(const ScalarField& f, const MetricField& g);     // volume average
double stddev(const ScalarField& f, const MetricField& g);   // volume-weighted sd

// Serial reference implementations, kept as an independent oracle for the
// OpenMP kernels.  The derivative goes through an explicit DFT rather than
// the collocation differentiation matrix.
namespace ref {
ScalarField spectral_partial(const ScalarField& f, int axis);
CurvaturePackage curvature_package(const MetricField& g);
double integrate(const ScalarField& f, const MetricField& g);
}  // namespace ref

}  // namespace qev
