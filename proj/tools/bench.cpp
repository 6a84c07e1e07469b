// Timing comparison of the OpenMP kernels against the serial reference
// path on the curvature pipeline.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "qev/ops.hpp"
#include "qev/zoo.hpp"

namespace {

template <class F>
double time_best(F&& f, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 64;
    int reps = argc > 2 ? std::atoi(argv[2]) : 3;

    qev::GeneratorSpec gen;
    gen.name = "torus_of_revolution";
    gen.params = {{"R0", 2.0}, {"r", 1.0}};
    gen.grid_n = n;
    qev::Constructed mf = qev::construct(gen);

    std::printf("torus of revolution, %d x %d nodes, best of %d\n", n, n, reps);

    qev::ScalarField f = qev::sample("sin(u1)*cos(2*u2)", mf.chart);
    double t_par = time_best([&] { qev::spectral_partial(f, 0); }, reps);
    double t_ser = time_best([&] { qev::ref::spectral_partial(f, 0); }, reps);
    std::printf("spectral_partial     omp %10.6fs   serial %10.6fs   speedup %5.2fx\n", t_par,
                t_ser, t_ser / t_par);

    double t_cpar = time_best([&] { qev::curvature_package(*mf.metric); }, reps);
    double t_cser = time_best([&] { qev::ref::curvature_package(*mf.metric); }, reps);
    std::printf("curvature_package    omp %10.6fs   serial %10.6fs   speedup %5.2fx\n", t_cpar,
                t_cser, t_cser / t_cpar);

    qev::CurvaturePackage omp_pkg = qev::curvature_package(*mf.metric);
    qev::CurvaturePackage ser_pkg = qev::ref::curvature_package(*mf.metric);
    double drift = 0.0;
    for (std::size_t p = 0; p < omp_pkg.scalar.v.size(); ++p)
        drift = std::max(drift, std::fabs(omp_pkg.scalar.v[p] - ser_pkg.scalar.v[p]));
    std::printf("scalar curvature max |omp - serial| = %.3e\n", drift);
    return 0;
}
