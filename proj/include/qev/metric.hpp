#pragma once

#include <Eigen/Dense>

#include "qev/grid.hpp"

namespace qev {

// Metric on a chart grid.  Inverse components and the volume density
// sqrt(det g) are computed once at construction; the field is a value
// snapshot and immutable afterwards.
class MetricField {
  public:
    explicit MetricField(SymTensorField g) : g_(std::move(g)), inv_(g_.chart) {
        const int n = g_.chart->dim();
        const std::size_t M = g_.chart->size();
        sqrtdet_.assign(M, 0.0);
        Eigen::MatrixXd A(n, n);
        for (std::size_t p = 0; p < M; ++p) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) A(i, j) = g_.get(p, i, j);
            Eigen::LLT<Eigen::MatrixXd> llt(A);
            if (llt.info() != Eigen::Success)
                throw std::invalid_argument("MetricField: metric not positive definite");
            double det = 1.0;
            for (int i = 0; i < n; ++i) det *= llt.matrixL()(i, i);
            sqrtdet_[p] = det;  // det(L) = sqrt(det g)
            Eigen::MatrixXd Ainv = llt.solve(Eigen::MatrixXd::Identity(n, n));
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) inv_.set(p, i, j, 0.5 * (Ainv(i, j) + Ainv(j, i)));
        }
    }

    const ChartPtr& chart() const { return g_.chart; }
    int dim() const { return g_.chart->dim(); }
    std::size_t size() const { return g_.chart->size(); }

    const SymTensorField& lower() const { return g_; }
    const SymTensorField& upper() const { return inv_; }
    double g(std::size_t node, int i, int j) const { return g_.get(node, i, j); }
    double ginv(std::size_t node, int i, int j) const { return inv_.get(node, i, j); }
    double sqrtdet(std::size_t node) const { return sqrtdet_[node]; }
    const std::vector<double>& sqrtdet() const { return sqrtdet_; }

  private:
    SymTensorField g_;
    SymTensorField inv_;
    std::vector<double> sqrtdet_;
};

}  // namespace qev
