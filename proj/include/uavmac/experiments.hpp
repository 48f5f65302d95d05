#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavmac/config.hpp"
#include "uavmac/fdma.hpp"
#include "uavmac/noma.hpp"
#include "uavmac/tdma.hpp"

namespace uavmac {

struct RateProfile {
    std::vector<double> alpha;
};

// alpha_1 in {0, 1/(n-1), ..., 1} boundary profiles for two users.
std::vector<RateProfile> boundary_profiles_k2(int n = 21);

// Scheme-independent view of one solve, for sweeps and reports.
struct SolveSummary {
    Scheme scheme = Scheme::noma;
    std::vector<double> alpha;
    std::vector<double> rates;
    double sum_rate = 0;
    double dual_value = 0;
    double duality_gap = 0;
    int hover_count = 0;
    double x_initial = 0, x_final = 0;
    std::vector<double> hover_points, hover_durations;
};

SolveSummary summarize(const NomaSolution& s, const std::vector<double>& alpha);
SolveSummary summarize(const FdmaSolution& s, const std::vector<double>& alpha);
SolveSummary summarize(const TdmaSolution& s, const std::vector<double>& alpha);

SolveSummary solve_scheme(Scheme scheme, const std::vector<double>& alpha,
                          const Scenario& sc, const SolverOptions& opt);

struct BoundaryPoint {
    std::vector<double> alpha;
    std::vector<double> rates;
    double sum_rate = 0;
    int hover_count = 0;
};

struct RegionBoundary {
    Scheme scheme = Scheme::noma;
    std::vector<BoundaryPoint> points;
    std::vector<std::string> errors;  // per-profile failures, sweep continues
};

RegionBoundary pareto_sweep(Scheme scheme, const std::vector<RateProfile>& profiles,
                            const Scenario& sc, const SolverOptions& opt);

struct BenchmarkResult {
    std::vector<double> rates;
    double sum_rate = 0;
    double x_hover = 0;  // static benchmark only
};

// Benchmark 1: fly w_1 -> w_K at max speed, hover only above users, resource
// allocation optimized by the scheme's inner machinery. Requires
// T >= (w_K - w_1) / v_max.
BenchmarkResult benchmark_successive_hover(Scheme scheme,
                                           const std::vector<double>& alpha,
                                           const Scenario& sc,
                                           const SolverOptions& opt);

// Benchmark 2: hover at one optimized location for the whole period; the
// per-location problem is a conventional resource allocation.
BenchmarkResult benchmark_static_hover(Scheme scheme,
                                       const std::vector<double>& alpha,
                                       const Scenario& sc,
                                       const SolverOptions& opt);

// Static per-location allocators (also used by the benchmark).
double static_rate_noma(double x, const std::vector<double>& alpha,
                        const Scenario& sc);
double static_rate_fdma(double x, const std::vector<double>& alpha,
                        const Scenario& sc);
double static_rate_tdma(double x, const std::vector<double>& alpha,
                        const Scenario& sc);

struct OracleGrids {
    int endpoint_points = 81;  // x_I and x_F over [w_1, w_2]
    int t_points = 41;         // hover split of the slack time
    int fine_divisions = 800;  // position grid behind the tables
    int weight_points = 1001;  // frontier trace for FDMA/TDMA
    bool refine = true;        // one local pass at a quarter step
};

// Independent brute force over the two-user hover-fly-hover family with
// exact inner resource allocation per scheme.
double oracle_two_user_hfh(Scheme scheme, const std::vector<double>& alpha,
                           const Scenario& sc, const OracleGrids& grids = {});

struct NestingRow {
    std::vector<double> alpha;
    double r_noma = 0, r_fdma = 0, r_tdma = 0;
    double margin_fdma = 0;  // r_noma - r_fdma
    double margin_tdma = 0;  // r_fdma - r_tdma
    bool ordered = false;
};

struct NestingReport {
    std::vector<NestingRow> rows;
    bool all_ordered = false;
};

// Solves all three schemes per profile and checks
// R_TDMA <= R_FDMA <= R_NOMA within tol.
NestingReport region_nesting_report(const std::vector<RateProfile>& profiles,
                                    const Scenario& sc, const SolverOptions& opt,
                                    double tol = 1e-6);

}  // namespace uavmac
