#pragma once

#include <vector>

namespace uavmac {

// Small dense LP:  max c'x  s.t.  A x <= b,  E x = f,  x >= lower_bounds.
// Lower bounds default to 0.
struct LpProblem {
    std::vector<double> objective;
    std::vector<std::vector<double>> ineq_rows;
    std::vector<double> ineq_rhs;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<double> lower_bounds;  // empty means all zeros
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double value = 0.0;
    // Duals in original row order (inequalities first, then equalities).
    std::vector<double> dual;
    // |primal - dual objective|; checked against 1e-8 on every solve.
    double duality_residual = 0.0;
};

// Two-phase simplex with Bland's rule. Problem sizes here are tiny, so the
// dense tableau is fine.
LpSolution solve_lp(const LpProblem& p);

}  // namespace uavmac
