#include "qev/ops.hpp"

#include <cmath>
#include <complex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qev {

namespace {

// Collocation differentiation matrix for an even-N uniform periodic grid.
std::vector<double> diff_matrix(int N, double L) {
    std::vector<double> D(static_cast<std::size_t>(N) * N, 0.0);
    const double h = 2.0 * M_PI / N;
    const double scale = 2.0 * M_PI / L;
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            if (j == k) continue;
            int d = j - k;
            double sign = (d % 2 == 0) ? 1.0 : -1.0;
            D[static_cast<std::size_t>(j) * N + k] =
                scale * 0.5 * sign / std::tan(0.5 * d * h);
        }
    return D;
}

}  // namespace

void spectral_partial_raw(const ChartGrid& chart, const double* in, double* out, int axis) {
    const int N = chart.nodes(axis);
    const std::size_t stride = chart.stride(axis);
    const std::size_t M = chart.size();
    const std::vector<double> D = diff_matrix(N, chart.period(axis));

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        const std::size_t j = (p / stride) % static_cast<std::size_t>(N);
        const std::size_t base = p - j * stride;
        const double* row = D.data() + j * static_cast<std::size_t>(N);
        double acc = 0.0;
        for (int k = 0; k < N; ++k) acc += row[k] * in[base + static_cast<std::size_t>(k) * stride];
        out[p] = acc;
    }
}

ScalarField spectral_partial(const ScalarField& f, int axis) {
    ScalarField out(f.chart);
    spectral_partial_raw(*f.chart, f.v.data(), out.v.data(), axis);
    return out;
}

Christoffels christoffels(const MetricField& gm) {
    const ChartPtr& chart = gm.chart();
    const int n = chart->dim();
    const std::size_t M = chart->size();

    // dg[a][packed(i,j)] = partial_a g_ij
    std::vector<std::vector<std::vector<double>>> dg(n);
    for (int a = 0; a < n; ++a) {
        dg[a].resize(gm.lower().comp.size());
        for (std::size_t p = 0; p < gm.lower().comp.size(); ++p) {
            dg[a][p].assign(M, 0.0);
            spectral_partial_raw(*chart, gm.lower().comp[p].data(), dg[a][p].data(), a);
        }
    }

    Christoffels out;
    out.chart = chart;
    out.c.assign(static_cast<std::size_t>(n * n * n), std::vector<double>(M, 0.0));

    const SymTensorField& gl = gm.lower();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l) {
                        double term = dg[i][gl.pack(j, l)][p] + dg[j][gl.pack(i, l)][p] -
                                      dg[l][gl.pack(i, j)][p];
                        acc += gm.ginv(p, k, l) * term;
                    }
                    out.c[static_cast<std::size_t>(k * n * n + i * n + j)][p] = 0.5 * acc;
                }
    }
    return out;
}

CurvaturePackage curvature_package(const MetricField& gm) {
    const ChartPtr& chart = gm.chart();
    const int n = chart->dim();
    const std::size_t M = chart->size();

    CurvaturePackage pkg;
    pkg.chris = christoffels(gm);
    pkg.ricci = SymTensorField(chart);
    pkg.scalar = ScalarField(chart);

    // dchris[a][k*n*n+i*n+j] = partial_a Gamma^k_ij
    std::vector<std::vector<std::vector<double>>> dchris(n);
    for (int a = 0; a < n; ++a) {
        dchris[a].resize(pkg.chris.c.size());
        for (std::size_t q = 0; q < pkg.chris.c.size(); ++q) {
            dchris[a][q].assign(M, 0.0);
            spectral_partial_raw(*chart, pkg.chris.c[q].data(), dchris[a][q].data(), a);
        }
    }

    auto cidx = [n](int k, int i, int j) {
        return static_cast<std::size_t>(k * n * n + i * n + j);
    };

    std::vector<double> asym(M, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        // Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj + Gamma^k_kl Gamma^l_ij
        //          - Gamma^k_il Gamma^l_kj
        double ric[16];  // n <= 4
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) {
                    acc += dchris[k][cidx(k, i, j)][p];
                    acc -= dchris[i][cidx(k, k, j)][p];
                    for (int l = 0; l < n; ++l) {
                        acc += pkg.chris.c[cidx(k, k, l)][p] * pkg.chris.c[cidx(l, i, j)][p];
                        acc -= pkg.chris.c[cidx(k, i, l)][p] * pkg.chris.c[cidx(l, k, j)][p];
                    }
                }
                ric[i * n + j] = acc;
            }
        double a = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                a = std::max(a, std::fabs(ric[i * n + j] - ric[j * n + i]));
                pkg.ricci.set(p, i, j, 0.5 * (ric[i * n + j] + ric[j * n + i]));
            }
        asym[p] = a;
        double R = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) R += gm.ginv(p, i, j) * pkg.ricci.get(p, i, j);
        pkg.scalar[p] = R;
    }
    for (std::size_t p = 0; p < M; ++p) pkg.ricci_asymmetry = std::max(pkg.ricci_asymmetry, asym[p]);
    return pkg;
}

std::vector<std::vector<double>> covd_vector(const VectorField& X, const Christoffels& chris) {
    require_same_chart(X.chart, chris.chart);
    const int n = X.chart->dim();
    const std::size_t M = X.chart->size();

    std::vector<std::vector<double>> dX(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            dX[static_cast<std::size_t>(i * n + j)].assign(M, 0.0);
            spectral_partial_raw(*X.chart, X.comp[j].data(),
                                 dX[static_cast<std::size_t>(i * n + j)].data(), i);
        }

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += chris.get(p, j, i, k) * X.comp[k][p];
                dX[static_cast<std::size_t>(i * n + j)][p] += acc;
            }
    }
    return dX;
}

std::vector<std::vector<double>> covd_symtensor(const SymTensorField& T,
                                                const Christoffels& chris) {
    require_same_chart(T.chart, chris.chart);
    const int n = T.chart->dim();
    const std::size_t M = T.chart->size();
    const std::size_t np = T.comp.size();

    std::vector<std::vector<double>> dT(static_cast<std::size_t>(n) * np);
    for (int k = 0; k < n; ++k)
        for (std::size_t q = 0; q < np; ++q) {
            dT[k * np + q].assign(M, 0.0);
            spectral_partial_raw(*T.chart, T.comp[q].data(), dT[k * np + q].data(), k);
        }

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l) {
                        acc -= chris.get(p, l, k, i) * T.get(p, l, j);
                        acc -= chris.get(p, l, k, j) * T.get(p, i, l);
                    }
                    dT[k * np + static_cast<std::size_t>(T.pack(i, j))][p] += acc;
                }
    }
    return dT;
}

SymTensorField lie_derivative_metric(const MetricField& g, const VectorField& X,
                                     const Christoffels& chris) {
    require_same_chart(g.chart(), X.chart);
    const int n = g.dim();
    const std::size_t M = g.size();
    auto dX = covd_vector(X, chris);

    SymTensorField out(g.chart());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += g.g(p, j, k) * dX[static_cast<std::size_t>(i * n + k)][p] +
                           g.g(p, i, k) * dX[static_cast<std::size_t>(j * n + k)][p];
                out.set(p, i, j, acc);
            }
    }
    return out;
}

SymTensorField hessian(const ScalarField& f, const MetricField& g, const Christoffels& chris) {
    require_same_chart(f.chart, g.chart());
    const int n = g.dim();
    const std::size_t M = g.size();

    std::vector<ScalarField> df(n);
    for (int i = 0; i < n; ++i) df[i] = spectral_partial(f, i);

    SymTensorField out(g.chart());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            ScalarField ddf = spectral_partial(df[j], i);
            auto& comp = out.at(i, j);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
                const std::size_t p = static_cast<std::size_t>(ip);
                double acc = ddf[p];
                for (int k = 0; k < n; ++k) acc -= chris.get(p, k, i, j) * df[k][p];
                comp[p] = acc;
            }
        }
    return out;
}

ScalarField laplacian(const ScalarField& f, const MetricField& g, const Christoffels& chris) {
    SymTensorField H = hessian(f, g, chris);
    const int n = g.dim();
    const std::size_t M = g.size();
    ScalarField out(g.chart());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += g.ginv(p, i, j) * H.get(p, i, j);
        out[p] = acc;
    }
    return out;
}

ScalarField div_vector(const VectorField& X, const MetricField& g) {
    require_same_chart(X.chart, g.chart());
    const int n = g.dim();
    const std::size_t M = g.size();

    ScalarField out(g.chart());
    std::vector<double> tmp(M), dtmp(M);
    for (int i = 0; i < n; ++i) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(M); ++p)
            tmp[static_cast<std::size_t>(p)] =
                g.sqrtdet(static_cast<std::size_t>(p)) * X.comp[i][static_cast<std::size_t>(p)];
        spectral_partial_raw(*g.chart(), tmp.data(), dtmp.data(), i);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(M); ++p)
            out[static_cast<std::size_t>(p)] += dtmp[static_cast<std::size_t>(p)];
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(M); ++p)
        out[static_cast<std::size_t>(p)] /= g.sqrtdet(static_cast<std::size_t>(p));
    return out;
}

OneFormField div_symtensor(const SymTensorField& T, const MetricField& g,
                           const Christoffels& chris) {
    require_same_chart(T.chart, g.chart());
    const int n = g.dim();
    const std::size_t M = g.size();
    const std::size_t np = T.comp.size();
    auto dT = covd_symtensor(T, chris);

    OneFormField out(g.chart());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    acc += g.ginv(p, i, k) *
                           dT[static_cast<std::size_t>(k) * np +
                              static_cast<std::size_t>(T.pack(i, j))][p];
            out.comp[j][p] = acc;
        }
    }
    return out;
}

double integrate(const ScalarField& f, const MetricField& g) {
    require_same_chart(f.chart, g.chart());
    const double cell = g.chart()->cell_volume();
    double acc = 0.0;  // fixed-order serial sum for reproducibility
    for (std::size_t p = 0; p < f.size(); ++p) acc += f[p] * g.sqrtdet(p);
    return acc * cell;
}

VectorField sharp(const OneFormField& w, const MetricField& g) {
    require_same_chart(w.chart, g.chart());
    const int n = g.dim();
    const std::size_t M = g.size();
    VectorField out(g.chart());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += g.ginv(p, i, j) * w.comp[j][p];
            out.comp[i][p] = acc;
        }
    }
    return out;
}

OneFormField flat(const VectorField& X, const MetricField& g) {
    require_same_chart(X.chart, g.chart());
    const int n = g.dim();
    const std::size_t M = g.size();
    OneFormField out(g.chart());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += g.g(p, i, j) * X.comp[j][p];
            out.comp[i][p] = acc;
        }
    }
    return out;
}

OneFormField differential(const ScalarField& f) {
    OneFormField out(f.chart);
    for (int i = 0; i < f.chart->dim(); ++i)
        spectral_partial_raw(*f.chart, f.v.data(), out.comp[i].data(), i);
    return out;
}

ScalarField inner(const VectorField& X, const VectorField& Y, const MetricField& g) {
    require_same_chart(X.chart, Y.chart);
    const int n = g.dim();
    const std::size_t M = g.size();
    ScalarField out(g.chart());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += g.g(p, i, j) * X.comp[i][p] * Y.comp[j][p];
        out[p] = acc;
    }
    return out;
}

ScalarField inner(const OneFormField& w, const VectorField& X) {
    require_same_chart(w.chart, X.chart);
    const int n = w.chart->dim();
    const std::size_t M = w.chart->size();
    ScalarField out(w.chart);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += w.comp[i][p] * X.comp[i][p];
        out[p] = acc;
    }
    return out;
}

ScalarField tensor_norm2(const SymTensorField& T, const MetricField& g) {
    require_same_chart(T.chart, g.chart());
    const int n = g.dim();
    const std::size_t M = g.size();
    ScalarField out(g.chart());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(M); ++ip) {
        const std::size_t p = static_cast<std::size_t>(ip);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        acc += g.ginv(p, i, k) * g.ginv(p, j, l) * T.get(p, i, j) * T.get(p, k, l);
        out[p] = acc;
    }
    return out;
}

ScalarField vector_norm2(const VectorField& X, const MetricField& g) { return inner(X, X, g); }

ScalarField covariant_directional(const ScalarField& f, const VectorField& X) {
    require_same_chart(f.chart, X.chart);
    return inner(differential(f), X);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a.chart, b.chart);
    ScalarField out(a.chart);
    for (std::size_t p = 0; p < a.size(); ++p) out[p] = a[p] + b[p];
    return out;
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a.chart, b.chart);
    ScalarField out(a.chart);
    for (std::size_t p = 0; p < a.size(); ++p) out[p] = a[p] - b[p];
    return out;
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a.chart, b.chart);
    ScalarField out(a.chart);
    for (std::size_t p = 0; p < a.size(); ++p) out[p] = a[p] * b[p];
    return out;
}
ScalarField operator*(double a, const ScalarField& b) {
    ScalarField out(b.chart);
    for (std::size_t p = 0; p < b.size(); ++p) out[p] = a * b[p];
    return out;
}

double linf(const ScalarField& f) { return linf(f.v); }
double linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double l2_norm(const ScalarField& f, const MetricField& g) {
    return std::sqrt(std::fabs(integrate(f * f, g)));
}

double tensor_linf(const SymTensorField& T, const MetricField& g) {
    ScalarField n2 = tensor_norm2(T, g);
    double m = 0.0;
    for (std::size_t p = 0; p < n2.size(); ++p) m = std::max(m, std::sqrt(std::fabs(n2[p])));
    return m;
}

double mean(const ScalarField& f, const MetricField& g) {
    ScalarField one(f.chart, 1.0);
    return integrate(f, g) / integrate(one, g);
}

double stddev(const ScalarField& f, const MetricField& g) {
    double mu = mean(f, g);
    ScalarField d(f.chart);
    for (std::size_t p = 0; p < f.size(); ++p) d[p] = f[p] - mu;
    ScalarField one(f.chart, 1.0);
    return std::sqrt(std::fabs(integrate(d * d, g) / integrate(one, g)));
}

// ---------------------------------------------------------------------------
// Serial reference path.

namespace ref {

ScalarField spectral_partial(const ScalarField& f, int axis) {
    const ChartGrid& chart = *f.chart;
    const int N = chart.nodes(axis);
    const std::size_t stride = chart.stride(axis);
    const std::size_t M = chart.size();
    const double scale = 2.0 * M_PI / chart.period(axis);

    ScalarField out(f.chart);
    std::vector<std::complex<double>> coeff(static_cast<std::size_t>(N));
    std::vector<double> line(static_cast<std::size_t>(N));

    // walk every grid line along `axis` once
    for (std::size_t p = 0; p < M; ++p) {
        if ((p / stride) % static_cast<std::size_t>(N) != 0) continue;
        for (int k = 0; k < N; ++k) line[k] = f[p + static_cast<std::size_t>(k) * stride];
        // DFT, derivative in coefficient space, inverse DFT (Nyquist dropped)
        for (int m = 0; m < N; ++m) {
            std::complex<double> c(0.0, 0.0);
            for (int k = 0; k < N; ++k) {
                double th = -2.0 * M_PI * m * k / N;
                c += line[k] * std::complex<double>(std::cos(th), std::sin(th));
            }
            coeff[m] = c / static_cast<double>(N);
        }
        for (int j = 0; j < N; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (int m = -N / 2 + 1; m < N / 2; ++m) {
                int mm = (m + N) % N;
                double th = 2.0 * M_PI * m * j / N;
                acc += std::complex<double>(0.0, m) * coeff[mm] *
                       std::complex<double>(std::cos(th), std::sin(th));
            }
            out[p + static_cast<std::size_t>(j) * stride] = scale * acc.real();
        }
    }
    return out;
}

CurvaturePackage curvature_package(const MetricField& gm) {
    const ChartPtr& chart = gm.chart();
    const int n = chart->dim();
    const std::size_t M = chart->size();
    const SymTensorField& gl = gm.lower();

    auto d = [&](const std::vector<double>& comp, int axis) {
        ScalarField f(chart);
        f.v = comp;
        return ref::spectral_partial(f, axis).v;
    };

    std::vector<std::vector<std::vector<double>>> dg(n);
    for (int a = 0; a < n; ++a) {
        dg[a].resize(gl.comp.size());
        for (std::size_t q = 0; q < gl.comp.size(); ++q) dg[a][q] = d(gl.comp[q], a);
    }

    CurvaturePackage pkg;
    pkg.chris.chart = chart;
    pkg.chris.c.assign(static_cast<std::size_t>(n * n * n), std::vector<double>(M, 0.0));
    for (std::size_t p = 0; p < M; ++p)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l)
                        acc += gm.ginv(p, k, l) * (dg[i][gl.pack(j, l)][p] +
                                                   dg[j][gl.pack(i, l)][p] -
                                                   dg[l][gl.pack(i, j)][p]);
                    pkg.chris.c[static_cast<std::size_t>(k * n * n + i * n + j)][p] = 0.5 * acc;
                }

    std::vector<std::vector<std::vector<double>>> dc(n);
    for (int a = 0; a < n; ++a) {
        dc[a].resize(pkg.chris.c.size());
        for (std::size_t q = 0; q < pkg.chris.c.size(); ++q) dc[a][q] = d(pkg.chris.c[q], a);
    }

    auto cidx = [n](int k, int i, int j) {
        return static_cast<std::size_t>(k * n * n + i * n + j);
    };
    pkg.ricci = SymTensorField(chart);
    pkg.scalar = ScalarField(chart);
    for (std::size_t p = 0; p < M; ++p) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double a1 = 0.0, a2 = 0.0;
                for (int k = 0; k < n; ++k) {
                    a1 += dc[k][cidx(k, i, j)][p] - dc[i][cidx(k, k, j)][p];
                    a2 += dc[k][cidx(k, j, i)][p] - dc[j][cidx(k, k, i)][p];
                    for (int l = 0; l < n; ++l) {
                        a1 += pkg.chris.c[cidx(k, k, l)][p] * pkg.chris.c[cidx(l, i, j)][p] -
                              pkg.chris.c[cidx(k, i, l)][p] * pkg.chris.c[cidx(l, k, j)][p];
                        a2 += pkg.chris.c[cidx(k, k, l)][p] * pkg.chris.c[cidx(l, j, i)][p] -
                              pkg.chris.c[cidx(k, j, l)][p] * pkg.chris.c[cidx(l, k, i)][p];
                    }
                }
                pkg.ricci_asymmetry = std::max(pkg.ricci_asymmetry, std::fabs(a1 - a2));
                pkg.ricci.set(p, i, j, 0.5 * (a1 + a2));
            }
        double R = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) R += gm.ginv(p, i, j) * pkg.ricci.get(p, i, j);
        pkg.scalar[p] = R;
    }
    return pkg;
}

double integrate(const ScalarField& f, const MetricField& g) {
    const double cell = g.chart()->cell_volume();
    double acc = 0.0;
    for (std::size_t p = 0; p < f.size(); ++p) acc += f[p] * g.sqrtdet(p);
    return acc * cell;
}

}  // namespace ref

}  // namespace qev
