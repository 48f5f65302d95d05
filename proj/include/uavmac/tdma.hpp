#pragma once

#include <vector>

#include "uavmac/config.hpp"
#include "uavmac/noma.hpp"
#include "uavmac/numerics.hpp"
#include "uavmac/trajectory.hpp"

namespace uavmac {

struct TdmaSchedule {
    struct Segment {
        double t_start = 0, t_end = 0;  // leg clock, within (0, leg duration]
        int user = 0;
    };
    std::vector<Segment> flight_segments;
    std::vector<double> hover_durations;  // per user, zero outside [k_i, k_f]
};

struct TdmaSolution {
    double x_initial = 0, x_final = 0;
    int k_initial = 0, k_final = -1;  // user index window of hover points
    ShfTrajectory shf;
    std::vector<double> hover_points;     // subset of user positions
    std::vector<double> hover_durations;  // matching hover_points
    TdmaSchedule schedule;
    std::vector<double> rates;
    double sum_rate = 0;
    DualVector dual;  // nu
    double dual_value = 0;
    double duality_gap = 0;
    int hover_count = 0;
    SolveDiagnostics diag;
};

// argmax_j nu_j log2(1 + g_j(x)); ties break toward the lower index.
int best_user(const DualVector& nu, double x, const Scenario& sc);

struct Crossing {
    int user;   // crossing between `user` and `user + 1`
    double x;
};

// Weighted-rate crossings between consecutive users, bisected to 1e-6 m over
// (w_k, w_k+1); absent when one side dominates throughout.
std::vector<Crossing> switching_points(const DualVector& nu, const Scenario& sc);

// Time-integrated own-rate per user over the leg sub-intervals where it is
// the argmax (units bps/Hz * s). Segment boundaries are refined by bisection
// and each segment is integrated separately.
std::vector<double> flight_rate_integrals(const DualVector& nu,
                                          const MaxSpeedLeg& leg,
                                          const Scenario& sc,
                                          const SolverOptions& opt,
                                          std::vector<TdmaSchedule::Segment>*
                                              segments = nullptr);

struct HoverLpResult {
    std::vector<double> tau;  // per user, K entries
    std::vector<double> rates;
    double sum_rate = 0;
};

// Proposition-style LP over the hover durations at user positions k_i..k_f.
HoverLpResult hover_duration_lp(const std::vector<double>& flight_integrals,
                                const std::vector<double>& alpha, int k_i,
                                int k_f, double hover_time, const Scenario& sc);

// User index window induced by the endpoints: smallest k with x_i <= w_k and
// largest k with w_k <= x_f.
std::pair<int, int> hover_user_window(double x_i, double x_f, const Scenario& sc);

TdmaSolution solve_p3_fixed_endpoints(double x_i, double x_f,
                                      const std::vector<double>& alpha,
                                      const Scenario& sc,
                                      const SolverOptions& opt);

TdmaSolution solve_p3(const std::vector<double>& alpha, const Scenario& sc,
                      const SolverOptions& opt);

}  // namespace uavmac
