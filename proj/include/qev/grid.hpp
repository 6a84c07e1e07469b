#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace qev {

// Periodic product chart: axis i carries N_i equispaced nodes on [0, L_i).
// All fields below are plain component grids tied to a shared ChartGrid.
class ChartGrid {
  public:
    ChartGrid(std::vector<int> nodes, std::vector<double> periods)
        : N_(std::move(nodes)), L_(std::move(periods)) {
        if (N_.empty() || N_.size() != L_.size())
            throw std::invalid_argument("ChartGrid: node/period mismatch");
        size_ = 1;
        for (std::size_t a = 0; a < N_.size(); ++a) {
            if (N_[a] < 8 || N_[a] % 2 != 0)
                throw std::invalid_argument("ChartGrid: node count must be even and >= 8");
            if (!(L_[a] > 0)) throw std::invalid_argument("ChartGrid: period must be positive");
            size_ *= static_cast<std::size_t>(N_[a]);
        }
        strides_.assign(N_.size(), 1);
        for (int a = static_cast<int>(N_.size()) - 2; a >= 0; --a)
            strides_[a] = strides_[a + 1] * static_cast<std::size_t>(N_[a + 1]);
    }

    static std::shared_ptr<const ChartGrid> make(std::vector<int> nodes,
                                                 std::vector<double> periods) {
        return std::make_shared<const ChartGrid>(std::move(nodes), std::move(periods));
    }
    static std::shared_ptr<const ChartGrid> make_uniform(int dim, int n_per_axis,
                                                         double period = 2.0 * M_PI) {
        return make(std::vector<int>(dim, n_per_axis), std::vector<double>(dim, period));
    }

    int dim() const { return static_cast<int>(N_.size()); }
    int nodes(int axis) const { return N_[axis]; }
    double period(int axis) const { return L_[axis]; }
    double spacing(int axis) const { return L_[axis] / N_[axis]; }
    std::size_t size() const { return size_; }
    std::size_t stride(int axis) const { return strides_[axis]; }

    // coordinate of the node holding flat index `idx` along `axis`
    double coord(std::size_t idx, int axis) const {
        std::size_t k = (idx / strides_[axis]) % static_cast<std::size_t>(N_[axis]);
        return static_cast<double>(k) * spacing(axis);
    }

    // cell measure for the product quadrature rule
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim(); ++a) v *= spacing(a);
        return v;
    }

    bool same(const ChartGrid& other) const { return this == &other; }

  private:
    std::vector<int> N_;
    std::vector<double> L_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

using ChartPtr = std::shared_ptr<const ChartGrid>;

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a.get() != b.get())
        throw std::invalid_argument("fields defined on different charts cannot combine");
}

struct ScalarField {
    ChartPtr chart;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(ChartPtr c, double fill = 0.0) : chart(std::move(c)) {
        v.assign(chart->size(), fill);
    }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }
};

struct VectorField {
    ChartPtr chart;
    std::vector<std::vector<double>> comp;  // comp[i] = X^i grid

    VectorField() = default;
    explicit VectorField(ChartPtr c) : chart(std::move(c)) {
        comp.assign(chart->dim(), std::vector<double>(chart->size(), 0.0));
    }
};

struct OneFormField {
    ChartPtr chart;
    std::vector<std::vector<double>> comp;  // comp[i] = omega_i grid

    OneFormField() = default;
    explicit OneFormField(ChartPtr c) : chart(std::move(c)) {
        comp.assign(chart->dim(), std::vector<double>(chart->size(), 0.0));
    }
};

// Symmetric 2-tensor with lower indices; packed triangular storage.
struct SymTensorField {
    ChartPtr chart;
    std::vector<std::vector<double>> comp;  // packed (i<=j)

    SymTensorField() = default;
    explicit SymTensorField(ChartPtr c) : chart(std::move(c)) {
        int n = chart->dim();
        comp.assign(static_cast<std::size_t>(n * (n + 1) / 2),
                    std::vector<double>(chart->size(), 0.0));
    }

    int pack(int i, int j) const {
        if (i > j) std::swap(i, j);
        int n = chart->dim();
        return i * n - i * (i - 1) / 2 + (j - i);
    }
    std::vector<double>& at(int i, int j) { return comp[pack(i, j)]; }
    const std::vector<double>& at(int i, int j) const { return comp[pack(i, j)]; }
    double get(std::size_t node, int i, int j) const { return comp[pack(i, j)][node]; }
    void set(std::size_t node, int i, int j, double val) { comp[pack(i, j)][node] = val; }
};

}  // namespace qev
