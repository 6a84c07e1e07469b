#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qev {

// Left-invariant data on a Lie algebra: structure constants c^k_ij
// (antisymmetric in i,j) and an inner product Q.  Curvature is exact
// finite-dimensional algebra via the Koszul formula, no grids involved.
struct LieAlgebraModel {
    int d = 0;
    std::vector<double> c;  // c[k*d*d + i*d + j] = c^k_ij
    Eigen::MatrixXd Q;

    double structure(int k, int i, int j) const {
        return c[static_cast<std::size_t>(k * d * d + i * d + j)];
    }
    double& structure(int k, int i, int j) {
        return c[static_cast<std::size_t>(k * d * d + i * d + j)];
    }
    double jacobi_residual() const;
    void validate() const;  // Jacobi <= 1e-12, Q positive definite

    static LieAlgebraModel abelian(int d);
    // su(2) with c^k_ij = eps_ijk and Q = diag(a, b, c)
    static LieAlgebraModel su2(double a = 1.0, double b = 1.0, double cc = 1.0);
};

struct AlgebraCurvature {
    std::vector<double> conn;  // conn[l*d*d + i*d + j]: nabla_{e_i} e_j = conn e_l
    Eigen::MatrixXd ric;
    double R = 0.0;

    double A(int l, int i, int j, int d) const {
        return conn[static_cast<std::size_t>(l * d * d + i * d + j)];
    }
};

AlgebraCurvature algebra_curvature(const LieAlgebraModel& L);

// (L_X g) at the algebra level: Sym of Q contracted with the Koszul
// covariant derivative of X.
Eigen::MatrixXd algebra_lie_derivative(const LieAlgebraModel& L, const AlgebraCurvature& C,
                                       const Eigen::VectorXd& X);

// E = Ric + 1/2 Sym(Q grad X) - (1/m)(QX)(QX)^T - lambda Q
Eigen::MatrixXd algebraic_qe_residual(const LieAlgebraModel& L, const AlgebraCurvature& C,
                                      const Eigen::VectorXd& X, double m, double lambda);

struct AlgebraSolution {
    Eigen::VectorXd X;
    double lambda = 0.0;
    double residual = 0.0;      // Frobenius norm of E, re-evaluated
    double killing_norm = 0.0;  // Frobenius norm of L_X g
};

struct QESolveOptions {
    double accept_residual = 1e-10;
    double merge_tol = 1e-6;
    int max_newton = 100;
    int max_backtrack = 30;
};

// Damped Gauss-Newton sweep over the deterministic start grid
// X in {-2,-1,0,1,2}^d  x  lambda in {-2,-1,0,1/2,1,2}; d <= 4.
std::vector<AlgebraSolution> qe_solve(const LieAlgebraModel& L, double m,
                                      const QESolveOptions& opt = {});

}  // namespace qev
