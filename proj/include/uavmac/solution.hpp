#pragma once

#include <string>
#include <vector>

#include "uavmac/config.hpp"
#include "uavmac/experiments.hpp"
#include "uavmac/fdma.hpp"
#include "uavmac/noma.hpp"
#include "uavmac/tdma.hpp"

namespace uavmac {

// Deterministic JSON for the solution files (insertion-ordered keys,
// shortest-round-trip doubles).
std::string solution_json(const NomaSolution& s, const std::vector<double>& alpha,
                          const Scenario& sc);
std::string solution_json(const FdmaSolution& s, const std::vector<double>& alpha,
                          const Scenario& sc);
std::string solution_json(const TdmaSolution& s, const std::vector<double>& alpha,
                          const Scenario& sc);

// Re-evaluates the achieved rates and R from the emitted trajectory and
// schedule structure; returns the largest absolute discrepancy against the
// claimed values.
double validate_solution(const NomaSolution& s, const std::vector<double>& alpha,
                         const Scenario& sc, const SolverOptions& opt);
double validate_solution(const FdmaSolution& s, const std::vector<double>& alpha,
                         const Scenario& sc, const SolverOptions& opt);
double validate_solution(const TdmaSolution& s, const std::vector<double>& alpha,
                         const Scenario& sc, const SolverOptions& opt);

// Per-scheme schedule CSV: t, x, then per-user resource columns
// (NOMA: instantaneous rates under the order mixture; FDMA: bandwidth
// fractions; TDMA: binary activity).
void write_schedule_csv(const NomaSolution& s, const Scenario& sc,
                        const std::string& path, double step);
void write_schedule_csv(const FdmaSolution& s, const Scenario& sc,
                        const std::string& path, double step);
void write_schedule_csv(const TdmaSolution& s, const Scenario& sc,
                        const std::string& path, double step);

void write_region_csv(const RegionBoundary& boundary, const std::string& path);

std::string nesting_report_json(const NestingReport& report);

}  // namespace uavmac
