#include "uavmac/ellipsoid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uavmac {

namespace {

// log(det A) via Cholesky; also serves as the SPD check.
double log_det_spd(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    double ld = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (int k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            if (i == j) {
                if (s <= 0.0) return -std::numeric_limits<double>::infinity();
                a[i][i] = std::sqrt(s);
                ld += 2.0 * std::log(a[i][i]);
            } else {
                a[i][j] = s / a[j][j];
            }
        }
    }
    return ld;
}

}  // namespace

EllipsoidResult ellipsoid_minimize(
    const std::function<std::pair<double, std::vector<double>>(
        const std::vector<double>&)>& oracle,
    const std::vector<EllipsoidConstraint>& constraints,
    const std::vector<double>& x0, double radius,
    const EllipsoidOptions& opts) {
    const int n = static_cast<int>(x0.size());
    if (n < 1) throw std::invalid_argument("ellipsoid_minimize: empty start");
    if (!(radius > 0)) throw std::invalid_argument("ellipsoid_minimize: radius <= 0");

    std::vector<double> c = x0;
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) A[i][i] = radius * radius;

    EllipsoidResult res;
    res.best_value = std::numeric_limits<double>::infinity();
    const int max_iters = opts.max_iters > 0 ? opts.max_iters : 500 * n * n;

    std::vector<double> g(n), ag(n);
    for (int iter = 0; iter < max_iters; ++iter) {
        if (opts.log_det_trace) opts.log_det_trace->push_back(log_det_spd(A));

        // feasibility cut if any constraint is violated at the center
        bool objective_cut = true;
        for (const auto& con : constraints) {
            if (con.value(c) > opts.constraint_tol) {
                g = con.subgradient(c);
                objective_cut = false;
                break;
            }
        }
        double cert = 0.0;
        if (objective_cut) {
            auto [val, sub] = oracle(c);
            g = sub;
            if (!res.found_feasible || val < res.best_value) {
                res.found_feasible = true;
                res.best_value = val;
                res.best.weights = c;
            }
            if (val < opts.abort_below) {
                res.aborted = true;
                res.iterations = iter + 1;
                return res;
            }
            double gag = 0.0;
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += A[i][j] * g[j];
                ag[i] = s;
                gag += g[i] * s;
            }
            cert = gag > 0 ? std::sqrt(gag) : 0.0;
            res.final_certificate = cert;
            if (cert <= opts.tol) {
                res.converged = true;
                res.iterations = iter + 1;
                return res;
            }
        } else {
            double gag = 0.0;
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += A[i][j] * g[j];
                ag[i] = s;
                gag += g[i] * s;
            }
            cert = gag > 0 ? std::sqrt(gag) : 0.0;
        }
        if (cert <= 0.0) break;  // degenerate ellipsoid, nothing left to cut

        if (n == 1) {
            // interval halving: keep the half where g points away
            const double half = 0.5 * cert / std::abs(g[0]);  // = sqrt(A)/2
            c[0] += (g[0] > 0 ? -half : half);
            A[0][0] *= 0.25;
        } else {
            const double nn = static_cast<double>(n);
            for (int i = 0; i < n; ++i) c[i] -= ag[i] / (cert * (nn + 1.0));
            const double f1 = nn * nn / (nn * nn - 1.0);
            const double f2 = 2.0 / (nn + 1.0);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    A[i][j] = f1 * (A[i][j] - f2 * ag[i] * ag[j] / (cert * cert));
                }
            }
            for (int i = 0; i < n; ++i) {  // keep symmetric against drift
                for (int j = 0; j < i; ++j) {
                    const double v = 0.5 * (A[i][j] + A[j][i]);
                    A[i][j] = A[j][i] = v;
                }
            }
        }
        res.iterations = iter + 1;
    }
    return res;
}

}  // namespace uavmac
