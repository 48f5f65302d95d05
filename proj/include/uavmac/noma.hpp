#pragma once

#include <vector>

#include "uavmac/config.hpp"
#include "uavmac/numerics.hpp"
#include "uavmac/trajectory.hpp"

namespace uavmac {

// SIC decoding order: perm[0] is decoded last and sees no interference,
// perm[K-1] is decoded first and sees everyone.
struct DecodingOrder {
    std::vector<int> perm;
};

struct SolveDiagnostics {
    int ellipsoid_iterations = 0;
    bool ellipsoid_converged = false;
    double ellipsoid_certificate = 0.0;
    int cells_solved = 0;
    int cells_pruned = 0;
};

struct NomaSolution {
    double x_initial = 0, x_final = 0;
    ShfTrajectory shf;
    std::vector<double> hover_points;
    std::vector<double> hover_durations;
    std::vector<DecodingOrder> orders;
    std::vector<std::vector<double>> tau;  // [hover][order] time shares
    std::vector<double> rates;
    double sum_rate = 0;
    DualVector dual;
    double dual_value = 0;
    double duality_gap = 0;
    int hover_count = 0;  // hovers with duration above the reporting floor
    SolveDiagnostics diag;
};

// log2(1 + sum of subset SNR gains) at location x.
double subset_sum_rate(double x, const std::vector<int>& subset,
                       const Scenario& sc);

// Per-user vertex rates of the polymatroid for one decoding order, averaged
// over leg + hover schedule (or a general speed-free trajectory).
std::vector<double> vertex_rates(const DecodingOrder& order,
                                 const MaxSpeedLeg& leg,
                                 const SpeedFreeSchedule& hovers,
                                 const Scenario& sc, int quad_panels = 256);
std::vector<double> vertex_rates(const DecodingOrder& order,
                                 const MaxSpeedLeg& leg,
                                 const PiecewiseLinearTrajectory& speed_free,
                                 const Scenario& sc, int quad_panels = 256);

// Weighted hover objective of the per-instant subproblem (includes the 1/T
// normalization). Requires the order to sort the dual descending.
double psi_objective(double x, const DualVector& dual,
                     const DecodingOrder& order, const Scenario& sc,
                     double tie_tol = 1e-9);

struct DualEvaluation {
    double value = 0;
    std::vector<double> subgradient;  // achieved rate tuple r*
    std::vector<double> maximizers;   // hover maximizer cluster reps
    double max_psi = 0;               // T-scaled psi at the best maximizer
    double best_x = 0;
};

DualEvaluation evaluate_dual(const DualVector& dual, double x_i, double x_f,
                             const Scenario& sc, const SolverOptions& opt);

// Decoding orders compatible with a descending sort of the dual. Tie groups
// contribute their cyclic rotations (|I| = prod |J_m|), or every permutation
// when all_permutations is set.
std::vector<DecodingOrder> enumerate_orders(const DualVector& dual,
                                            double tie_tol,
                                            bool all_permutations = false);

struct TimeshareResult {
    std::vector<double> tau;
    std::vector<double> rates;
    double sum_rate = 0;
};

// (P1.3)-style LP: pick convex weights over rate tuples maximizing the
// common scale R with rates >= alpha R.
TimeshareResult timeshare_lp(const std::vector<std::vector<double>>& rate_tuples,
                             const std::vector<double>& alpha);

NomaSolution solve_p1_fixed_endpoints(
    double x_i, double x_f, const std::vector<double>& alpha,
    const Scenario& sc, const SolverOptions& opt,
    const std::vector<double>* hover_candidates = nullptr);

NomaSolution solve_p1(const std::vector<double>& alpha, const Scenario& sc,
                      const SolverOptions& opt);

}  // namespace uavmac
