#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qev {

// Closed-form manifold sampled at quadrature nodes.  All tensor data lives
// in a g-orthonormal frame, so the metric is the identity at every node and
// curvature is carried as explicit matrices.  Spheres and their products
// enter only through this path; nothing is ever differentiated numerically
// across a pole.
struct AnalyticManifold {
    std::string name;
    int n = 0;
    double volume = 0.0;               // known closed-form total volume
    std::vector<double> w;             // quadrature weights, sum == volume
    std::vector<Eigen::MatrixXd> ric;  // Ricci in the orthonormal frame
    std::vector<double> R;

    // designated closed-form scalar fields: name -> (values, Laplacian, |grad|^2)
    struct NamedField {
        std::vector<double> f, lap, grad2;
    };
    std::map<std::string, NamedField> fields;

    std::size_t size() const { return w.size(); }
    double quadrature(const std::vector<double>& f) const {
        double acc = 0.0;
        for (std::size_t p = 0; p < w.size(); ++p) acc += f[p] * w[p];
        return acc;
    }
};

using AnalyticPtr = std::shared_ptr<const AnalyticManifold>;

// Exact Killing-type quasi-Einstein data on an analytic manifold: the frame
// components of X are parallel (covariant derivative zero), so L_X g = 0,
// div X = 0 and |X| is constant.  The zoo only emits solutions of this kind.
struct AnalyticSolution {
    AnalyticPtr manifold;
    std::vector<Eigen::VectorXd> X;  // frame components per node
    double m = 1.0;
    double lambda = 0.0;
};

// Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

// Round sphere of the given radius (dimension 2).  Registers the designated
// field "z" (cosine of the colatitude) with its closed-form Laplacian.
AnalyticPtr round_sphere(double radius, int q_polar = 32, int n_azimuth = 64);

}  // namespace qev
