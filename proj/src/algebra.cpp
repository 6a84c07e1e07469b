#include "qev/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qev {

double LieAlgebraModel::jacobi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double acc = 0.0;
                    for (int m = 0; m < d; ++m)
                        acc += structure(m, i, j) * structure(l, m, k) +
                               structure(m, j, k) * structure(l, m, i) +
                               structure(m, k, i) * structure(l, m, j);
                    worst = std::max(worst, std::fabs(acc));
                }
    return worst;
}

void LieAlgebraModel::validate() const {
    if (d < 1 || c.size() != static_cast<std::size_t>(d * d * d) || Q.rows() != d ||
        Q.cols() != d)
        throw std::invalid_argument("LieAlgebraModel: inconsistent dimensions");
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (std::fabs(structure(k, i, j) + structure(k, j, i)) > 1e-12)
                    throw std::invalid_argument(
                        "LieAlgebraModel: structure constants not antisymmetric");
    if (jacobi_residual() > 1e-12)
        throw std::invalid_argument("LieAlgebraModel: Jacobi identity violated");
    Eigen::LLT<Eigen::MatrixXd> llt(Q);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("LieAlgebraModel: Q not positive definite");
}

LieAlgebraModel LieAlgebraModel::abelian(int d) {
    LieAlgebraModel L;
    L.d = d;
    L.c.assign(static_cast<std::size_t>(d * d * d), 0.0);
    L.Q = Eigen::MatrixXd::Identity(d, d);
    return L;
}

LieAlgebraModel LieAlgebraModel::su2(double a, double b, double cc) {
    LieAlgebraModel L;
    L.d = 3;
    L.c.assign(27, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                int eps = (i - j) * (j - k) * (k - i) / 2;  // Levi-Civita for {0,1,2}
                L.structure(k, i, j) = static_cast<double>(eps);
            }
    L.Q = Eigen::Vector3d(a, b, cc).asDiagonal();
    return L;
}

AlgebraCurvature algebra_curvature(const LieAlgebraModel& L) {
    L.validate();
    const int d = L.d;
    Eigen::MatrixXd Qinv = L.Q.inverse();

    AlgebraCurvature C;
    C.conn.assign(static_cast<std::size_t>(d * d * d), 0.0);
    // Koszul: Q(nabla_{e_i} e_j, e_k)
    //   = 1/2 ( Q([e_i,e_j], e_k) - Q([e_j,e_k], e_i) + Q([e_k,e_i], e_j) )
    std::vector<double> w(static_cast<std::size_t>(d * d * d), 0.0);
    auto qbracket = [&](int i, int j, int k) {
        double acc = 0.0;
        for (int l = 0; l < d; ++l) acc += L.structure(l, i, j) * L.Q(l, k);
        return acc;
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                w[static_cast<std::size_t>(i * d * d + j * d + k)] =
                    0.5 * (qbracket(i, j, k) - qbracket(j, k, i) + qbracket(k, i, j));
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                for (int k = 0; k < d; ++k)
                    acc += Qinv(l, k) * w[static_cast<std::size_t>(i * d * d + j * d + k)];
                C.conn[static_cast<std::size_t>(l * d * d + i * d + j)] = acc;
            }

    // Ric(e_j, e_k) = tr( e_i -> R(e_i, e_j) e_k )
    C.ric = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            double acc = 0.0;
            for (int i = 0; i < d; ++i)
                for (int m = 0; m < d; ++m)
                    acc += C.A(m, j, k, d) * C.A(i, i, m, d) - C.A(m, i, k, d) * C.A(i, j, m, d) -
                           L.structure(m, i, j) * C.A(i, m, k, d);
            C.ric(j, k) = acc;
        }
    C.ric = (0.5 * (C.ric + C.ric.transpose())).eval();
    C.R = (Qinv * C.ric).trace();
    return C;
}

Eigen::MatrixXd algebra_lie_derivative(const LieAlgebraModel& L, const AlgebraCurvature& C,
                                       const Eigen::VectorXd& X) {
    const int d = L.d;
    Eigen::MatrixXd dX = Eigen::MatrixXd::Zero(d, d);  // dX(l, i) = (nabla_{e_i} X)^l
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) dX(l, i) += C.A(l, i, k, d) * X(k);
    Eigen::MatrixXd lie = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) lie(i, j) += L.Q(j, l) * dX(l, i) + L.Q(i, l) * dX(l, j);
    return lie;
}

Eigen::MatrixXd algebraic_qe_residual(const LieAlgebraModel& L, const AlgebraCurvature& C,
                                      const Eigen::VectorXd& X, double m, double lambda) {
    if (m == 0.0) throw std::invalid_argument("algebraic_qe_residual: m must be nonzero");
    Eigen::VectorXd Xl = L.Q * X;
    return C.ric + 0.5 * algebra_lie_derivative(L, C, X) - (1.0 / m) * Xl * Xl.transpose() -
           lambda * L.Q;
}

namespace {

Eigen::VectorXd pack_sym(const Eigen::MatrixXd& E) {
    const int d = static_cast<int>(E.rows());
    Eigen::VectorXd r(d * (d + 1) / 2);
    int q = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) r(q++) = E(i, j);
    return r;
}

}  // namespace

std::vector<AlgebraSolution> qe_solve(const LieAlgebraModel& L, double m,
                                      const QESolveOptions& opt) {
    if (m == 0.0) throw std::invalid_argument("qe_solve: m must be nonzero");
    if (L.d > 4) throw std::invalid_argument("qe_solve: d <= 4 only");
    const int d = L.d;
    const int nr = d * (d + 1) / 2;
    AlgebraCurvature C = algebra_curvature(L);

    auto residual = [&](const Eigen::VectorXd& X, double lambda) {
        return pack_sym(algebraic_qe_residual(L, C, X, m, lambda));
    };
    auto jacobian = [&](const Eigen::VectorXd& X) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nr, d + 1);
        Eigen::VectorXd Xl = L.Q * X;
        for (int k = 0; k < d; ++k) {
            Eigen::MatrixXd dE = Eigen::MatrixXd::Zero(d, d);
            // Lie term is linear in X
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int l = 0; l < d; ++l)
                        dE(i, j) += 0.5 * (L.Q(j, l) * C.A(l, i, k, d) +
                                           L.Q(i, l) * C.A(l, j, k, d));
            Eigen::VectorXd Qk = L.Q.col(k);
            dE -= (1.0 / m) * (Qk * Xl.transpose() + Xl * Qk.transpose());
            J.col(k) = pack_sym(dE);
        }
        J.col(d) = pack_sym((-L.Q).eval());
        return J;
    };

    const std::vector<double> xgrid = {-2.0, -1.0, 0.0, 1.0, 2.0};
    const std::vector<double> lgrid = {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0};

    std::vector<AlgebraSolution> found;
    std::size_t nstarts = 1;
    for (int i = 0; i < d; ++i) nstarts *= xgrid.size();

    for (std::size_t sx = 0; sx < nstarts; ++sx)
        for (double l0 : lgrid) {
            Eigen::VectorXd X(d);
            std::size_t t = sx;
            for (int i = 0; i < d; ++i) {
                X(i) = xgrid[t % xgrid.size()];
                t /= xgrid.size();
            }
            double lambda = l0;
            Eigen::VectorXd r = residual(X, lambda);
            double norm = r.norm();
            bool ok = false;
            for (int it = 0; it < opt.max_newton; ++it) {
                if (norm <= 1e-13) {
                    ok = true;
                    break;
                }
                Eigen::MatrixXd J = jacobian(X);
                Eigen::VectorXd step =
                    J.colPivHouseholderQr().solve((-r).eval());
                double t_step = 1.0;
                bool improved = false;
                for (int bt = 0; bt < opt.max_backtrack; ++bt) {
                    Eigen::VectorXd Xn = X + t_step * step.head(d);
                    double ln = lambda + t_step * step(d);
                    Eigen::VectorXd rn = residual(Xn, ln);
                    if (rn.norm() < norm) {
                        X = Xn;
                        lambda = ln;
                        r = rn;
                        norm = rn.norm();
                        improved = true;
                        break;
                    }
                    t_step *= 0.5;
                }
                if (!improved) break;
            }
            if (!(ok || norm <= opt.accept_residual)) continue;
            // the rank-1 term has zero Jacobian at X = 0, so accepted roots
            // near it carry O(sqrt(tol)) noise in X; snap if that is exact too
            {
                Eigen::VectorXd Xz = X;
                for (int i = 0; i < d; ++i)
                    if (std::fabs(Xz(i)) < 1e-5) Xz(i) = 0.0;
                if (residual(Xz, lambda).norm() <= std::max(norm, 1e-14)) X = Xz;
            }
            // merge with already-found solutions
            bool dup = false;
            for (const auto& s : found)
                if ((s.X - X).norm() + std::fabs(s.lambda - lambda) <= opt.merge_tol) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            AlgebraSolution s;
            s.X = X;
            s.lambda = lambda;
            s.residual = algebraic_qe_residual(L, C, X, m, lambda).norm();
            s.killing_norm = algebra_lie_derivative(L, C, X).norm();
            if (s.residual <= opt.accept_residual) found.push_back(std::move(s));
        }

    std::sort(found.begin(), found.end(), [](const AlgebraSolution& a, const AlgebraSolution& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        for (int i = 0; i < a.X.size(); ++i)
            if (a.X(i) != b.X(i)) return a.X(i) < b.X(i);
        return false;
    });
    return found;
}

}  // namespace qev
