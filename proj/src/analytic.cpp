#include "qev/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace qev {

void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(q, 0.0);
    weights.assign(q, 0.0);
    for (int i = 0; i < q; ++i) {
        // Newton on P_q from the Chebyshev initial guess
        double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= q; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

AnalyticPtr round_sphere(double radius, int q_polar, int n_azimuth) {
    if (!(radius > 0)) throw std::invalid_argument("round_sphere: radius must be positive");
    auto M = std::make_shared<AnalyticManifold>();
    M->name = "round_sphere";
    M->n = 2;
    M->volume = 4.0 * M_PI * radius * radius;

    std::vector<double> mu, wmu;
    gauss_legendre(q_polar, mu, wmu);
    const double wphi = 2.0 * M_PI / n_azimuth;
    const double a2 = radius * radius;

    AnalyticManifold::NamedField z;
    for (int i = 0; i < q_polar; ++i)
        for (int j = 0; j < n_azimuth; ++j) {
            // dA = a^2 dmu dphi in mu = cos(theta)
            M->w.push_back(a2 * wmu[i] * wphi);
            Eigen::MatrixXd r = (1.0 / a2) * Eigen::MatrixXd::Identity(2, 2);
            M->ric.push_back(r);
            M->R.push_back(2.0 / a2);
            // z = cos(theta); on the unit sphere Delta z = -2 z and
            // |grad z|^2 = sin^2(theta); radius scales both by 1/a^2
            z.f.push_back(mu[i]);
            z.lap.push_back(-2.0 * mu[i] / a2);
            z.grad2.push_back((1.0 - mu[i] * mu[i]) / a2);
        }
    M->fields["z"] = std::move(z);
    return M;
}

}  // namespace qev
