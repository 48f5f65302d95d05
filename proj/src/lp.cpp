#include "uavmac/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uavmac/errors.hpp"

namespace uavmac {

namespace {

constexpr double kEps = 1e-10;

struct Tableau {
    int rows = 0, cols = 0;           // cols excludes the rhs column
    std::vector<std::vector<double>> a;  // rows x (cols + 1)
    std::vector<double> cost;            // phase-2 objective (maximize)
    std::vector<int> basis;              // basic column per row
    std::vector<bool> banned;            // artificials banned in phase 2

    double& rhs(int i) { return a[i][cols]; }
};

// One simplex phase maximizing `cost` with Bland's anti-cycling rule.
// Returns false when unbounded.
bool run_simplex(Tableau& t) {
    std::vector<double> red(t.cols);
    for (long iter = 0;; ++iter) {
        if (iter > 100000L * (t.rows + t.cols))
            throw SolverError("solve_lp: simplex iteration cap exceeded");
        // reduced costs z_j - c_j = cB' B^-1 A_j - c_j
        for (int j = 0; j < t.cols; ++j) {
            double z = 0.0;
            for (int i = 0; i < t.rows; ++i) z += t.cost[t.basis[i]] * t.a[i][j];
            red[j] = z - t.cost[j];
        }
        int enter = -1;
        for (int j = 0; j < t.cols; ++j) {
            if (t.banned[j]) continue;
            if (red[j] < -kEps) { enter = j; break; }  // Bland: lowest index
        }
        if (enter < 0) return true;  // optimal
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < t.rows; ++i) {
            if (t.a[i][enter] > kEps) {
                const double ratio = t.rhs(i) / t.a[i][enter];
                if (ratio < best_ratio - kEps ||
                    (ratio < best_ratio + kEps &&
                     (leave < 0 || t.basis[i] < t.basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return false;  // unbounded
        // pivot
        const double piv = t.a[leave][enter];
        for (int j = 0; j <= t.cols; ++j) t.a[leave][j] /= piv;
        for (int i = 0; i < t.rows; ++i) {
            if (i == leave) continue;
            const double m = t.a[i][enter];
            if (m == 0.0) continue;
            for (int j = 0; j <= t.cols; ++j) t.a[i][j] -= m * t.a[leave][j];
        }
        t.basis[leave] = enter;
    }
}

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
    const int n = static_cast<int>(p.objective.size());
    const int m_ineq = static_cast<int>(p.ineq_rows.size());
    const int m_eq = static_cast<int>(p.eq_rows.size());
    const int m = m_ineq + m_eq;
    if (static_cast<int>(p.ineq_rhs.size()) != m_ineq ||
        static_cast<int>(p.eq_rhs.size()) != m_eq)
        throw std::invalid_argument("solve_lp: rhs size mismatch");
    for (const auto& r : p.ineq_rows)
        if (static_cast<int>(r.size()) != n)
            throw std::invalid_argument("solve_lp: ineq row size mismatch");
    for (const auto& r : p.eq_rows)
        if (static_cast<int>(r.size()) != n)
            throw std::invalid_argument("solve_lp: eq row size mismatch");

    std::vector<double> lb(n, 0.0);
    if (!p.lower_bounds.empty()) {
        if (static_cast<int>(p.lower_bounds.size()) != n)
            throw std::invalid_argument("solve_lp: lower_bounds size mismatch");
        lb = p.lower_bounds;
    }

    LpSolution sol;
    if (m == 0) {
        // only bound constraints: bounded iff every objective coefficient <= 0
        sol.x = lb;
        double v = 0.0;
        bool bounded = true;
        for (int j = 0; j < n; ++j) {
            if (p.objective[j] > kEps) bounded = false;
            v += p.objective[j] * lb[j];
        }
        sol.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
        sol.value = v;
        return sol;
    }

    // shift x = y + lb, y >= 0, and collect rows as  a'y (<=|=) rhs
    std::vector<std::vector<double>> rowa(m, std::vector<double>(n));
    std::vector<double> rowb(m);
    std::vector<bool> is_eq(m, false);
    for (int i = 0; i < m_ineq; ++i) {
        rowa[i] = p.ineq_rows[i];
        double shift = 0.0;
        for (int j = 0; j < n; ++j) shift += rowa[i][j] * lb[j];
        rowb[i] = p.ineq_rhs[i] - shift;
    }
    for (int i = 0; i < m_eq; ++i) {
        rowa[m_ineq + i] = p.eq_rows[i];
        double shift = 0.0;
        for (int j = 0; j < n; ++j) shift += rowa[m_ineq + i][j] * lb[j];
        rowb[m_ineq + i] = p.eq_rhs[i] - shift;
        is_eq[m_ineq + i] = true;
    }

    // columns: n structural | m_ineq slack | m artificial
    const int ncols = n + m_ineq + m;
    Tableau t;
    t.rows = m;
    t.cols = ncols;
    t.a.assign(m, std::vector<double>(ncols + 1, 0.0));
    t.basis.assign(m, 0);
    t.banned.assign(ncols, false);
    std::vector<double> rowsign(m, 1.0);

    for (int i = 0; i < m; ++i) {
        const double s = rowb[i] < 0.0 ? -1.0 : 1.0;
        rowsign[i] = s;
        for (int j = 0; j < n; ++j) t.a[i][j] = s * rowa[i][j];
        if (i < m_ineq) t.a[i][n + i] = s;  // slack
        t.a[i][n + m_ineq + i] = 1.0;       // artificial
        t.rhs(i) = s * rowb[i];
        t.basis[i] = n + m_ineq + i;
    }

    // phase 1: maximize -sum(artificials)
    t.cost.assign(ncols, 0.0);
    for (int i = 0; i < m; ++i) t.cost[n + m_ineq + i] = -1.0;
    if (!run_simplex(t)) throw SolverError("solve_lp: phase-1 unbounded");
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= n + m_ineq) art_sum += t.rhs(i);
    if (art_sum > 1e-7) {
        sol.status = LpStatus::infeasible;
        return sol;
    }

    // phase 2: real objective; artificials may stay basic at zero but can
    // never re-enter
    t.cost.assign(ncols, 0.0);
    for (int j = 0; j < n; ++j) t.cost[j] = p.objective[j];
    for (int j = n + m_ineq; j < ncols; ++j) t.banned[j] = true;
    if (!run_simplex(t)) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    std::vector<double> y(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) y[t.basis[i]] = t.rhs(i);

    sol.status = LpStatus::optimal;
    sol.x.resize(n);
    sol.value = 0.0;
    for (int j = 0; j < n; ++j) {
        sol.x[j] = y[j] + lb[j];
        sol.value += p.objective[j] * sol.x[j];
    }

    // duals from the objective row entries under the initial unit columns;
    // slack columns carry the row sign twice (column and constraint), so it
    // cancels there and only the artificial (equality) columns need it
    sol.dual.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const int col = i < m_ineq ? n + i : n + m_ineq + i;
        double z = 0.0;
        for (int r = 0; r < m; ++r) z += t.cost[t.basis[r]] * t.a[r][col];
        sol.dual[i] = (i < m_ineq ? 1.0 : rowsign[i]) * z;
    }

    double dual_value = 0.0;
    for (int i = 0; i < m; ++i) dual_value += sol.dual[i] * rowb[i];
    // undo the x = y + lb shift in both objectives before comparing
    double shift_obj = 0.0;
    for (int j = 0; j < n; ++j) shift_obj += p.objective[j] * lb[j];
    sol.duality_residual = std::abs((sol.value - shift_obj) - dual_value);
    return sol;
}

}  // namespace uavmac
