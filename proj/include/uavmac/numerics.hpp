#pragma once

#include <functional>
#include <vector>

namespace uavmac {

// Nonnegative dual multipliers (lambda/mu/nu depending on scheme).
struct DualVector {
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
    double& operator[](int k) { return weights[k]; }
    double operator[](int k) const { return weights[k]; }
};

// Principal branch of the Lambert W function, valid for x >= -1/e.
// Halley iteration from a piecewise initial guess; residual target 1e-14.
double lambert_w0(double x);

// Bisection on a sign change; `tol` bounds the final bracket width.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol);

// Composite Simpson over `panels` even subintervals (panels is rounded up to
// the next even count).
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels);

struct GridMaximum {
    double value = 0.0;
    std::vector<double> maximizers;        // cluster representatives, ascending
    std::vector<double> maximizer_values;  // f at each representative
};

// Evaluates f on the uniform grid lo..hi (step adjusted so hi lands on the
// grid), then clusters every point within near_tie_tol of the max: runs of
// consecutive grid points merge to their best representative.
GridMaximum grid_search_1d(const std::function<double(double)>& f, double lo,
                           double hi, double step, double near_tie_tol);

// Same clustering on precomputed values. Points whose spacing is at most
// merge_distance coalesce; merge_distance = 0 keeps every near-tie point.
GridMaximum cluster_maxima(const std::vector<double>& xs,
                           const std::vector<double>& values,
                           double near_tie_tol, double merge_distance);

}  // namespace uavmac
