#pragma once

#include <vector>

#include "uavmac/config.hpp"
#include "uavmac/noma.hpp"
#include "uavmac/numerics.hpp"
#include "uavmac/trajectory.hpp"

namespace uavmac {

struct BandwidthAllocation {
    std::vector<double> fractions;  // b_k, sums to 1
    double eta = 0.0;               // inner dual of the sum constraint
};

struct FdmaSolution {
    double x_initial = 0, x_final = 0;
    ShfTrajectory shf;
    std::vector<double> hover_points;
    std::vector<double> hover_durations;
    std::vector<double> kappa;  // normalized time shares of the hover points
    std::vector<std::vector<double>> hover_allocations;  // [hover][k]
    std::vector<double> rates;
    double sum_rate = 0;
    DualVector dual;  // mu
    double dual_value = 0;
    double duality_gap = 0;
    int hover_count = 0;
    SolveDiagnostics diag;
};

// b log2(1 + g_k / b) with the continuous limit 0 at b = 0.
double user_rate_fdma(double b, double x, int k, const Scenario& sc);

// KKT-optimal bandwidth split for the weighted sum-rate at location x.
// Users with mu_k = 0 are excluded and get b_k = 0; the inner dual eta comes
// from a bracketed root search on sum(b) = 1.
BandwidthAllocation bandwidth_allocation(const DualVector& mu, double x,
                                         const Scenario& sc,
                                         double eta_tol = 1e-12);

// Maximum weighted sum-rate at location x under the optimal split.
double g1(const DualVector& mu, double x, const Scenario& sc,
          double eta_tol = 1e-12);

DualEvaluation evaluate_dual_fdma(const DualVector& mu, double x_i, double x_f,
                                  const Scenario& sc, const SolverOptions& opt);

// Same LP as the NOMA time-sharing, over per-location FDMA rate tuples.
TimeshareResult timeshare_lp_fdma(
    const std::vector<std::vector<double>>& rate_tuples,
    const std::vector<double>& alpha);

FdmaSolution solve_p2_fixed_endpoints(
    double x_i, double x_f, const std::vector<double>& alpha,
    const Scenario& sc, const SolverOptions& opt,
    const std::vector<double>* hover_candidates = nullptr);

FdmaSolution solve_p2(const std::vector<double>& alpha, const Scenario& sc,
                      const SolverOptions& opt);

}  // namespace uavmac
