#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "uavmac/numerics.hpp"

namespace uavmac {

struct EllipsoidState {
    std::vector<double> center;
    std::vector<std::vector<double>> shape_matrix;  // SPD
    int iteration = 0;
};

// h(x) <= 0 constraint with a subgradient of h.
struct EllipsoidConstraint {
    std::function<double(const std::vector<double>&)> value;
    std::function<std::vector<double>(const std::vector<double>&)> subgradient;
};

struct EllipsoidOptions {
    double tol = 1e-5;            // stop when sqrt(g'Ag) of an objective cut drops below
    int max_iters = 0;            // 0 means 500 * n^2
    double constraint_tol = 1e-6;
    // Abort as soon as a feasible center's value drops below this threshold:
    // the running value upper-bounds the constrained minimum, so the caller
    // can discard dominated subproblems early.
    double abort_below = -std::numeric_limits<double>::infinity();
    std::vector<double>* log_det_trace = nullptr;  // optional volume diagnostics
};

struct EllipsoidResult {
    DualVector best;        // best feasible center seen
    double best_value = 0;  // objective there
    bool found_feasible = false;
    bool converged = false;
    bool aborted = false;   // stopped through the abort_below threshold
    int iterations = 0;
    double final_certificate = 0;  // last objective-cut sqrt(g'Ag)
};

// Minimizes a convex function given by a value+subgradient oracle over the
// set cut out by the constraints, starting from the ball B(x0, radius) that
// must contain the optimum. Central-cut ellipsoid updates; n = 1 degenerates
// to interval halving.
EllipsoidResult ellipsoid_minimize(
    const std::function<std::pair<double, std::vector<double>>(
        const std::vector<double>&)>& oracle,
    const std::vector<EllipsoidConstraint>& constraints,
    const std::vector<double>& x0, double radius,
    const EllipsoidOptions& opts = {});

}  // namespace uavmac
