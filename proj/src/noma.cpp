#include "uavmac/noma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dual_common.hpp"
#include "uavmac/ellipsoid.hpp"
#include "uavmac/errors.hpp"
#include "uavmac/lp.hpp"

namespace uavmac {

namespace {

using detail::CellGeometry;

std::vector<int> descending_order(const std::vector<double>& w) {
    std::vector<int> idx(w.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (w[a] != w[b]) return w[a] > w[b];
        return a < b;
    });
    return idx;
}

// Evaluation of the dual function on one cell: vertex rates for the
// descending order plus the hover maximizer set of the T-scaled psi.
struct CellEval {
    double value = 0;
    std::vector<double> rates;
    GridMaximum hover;  // values are T * psi (weighted bps/Hz)
    int best_index = 0;
};

CellEval eval_cell(const CellGeometry& cell, const std::vector<double>& lam,
                   const Scenario& sc, const SolverOptions& opt) {
    const int K = sc.K();
    const double T = sc.horizon;
    const std::vector<int> order = descending_order(lam);

    CellEval out;
    out.rates.assign(K, 0.0);

    // leg share of the vertex rates, Simpson over cached prefix gains
    if (!cell.quad_x.empty()) {
        std::vector<double> cum(cell.quad_x.size(), 0.0);
        double prev_integral = 0.0;
        for (int k = 0; k < K; ++k) {
            const auto& g = cell.quad_gain[order[k]];
            double integral = 0.0;
            for (std::size_t j = 0; j < cum.size(); ++j) {
                cum[j] += g[j];
                integral += cell.quad_tw[j] * std::log2(1.0 + cum[j]);
            }
            out.rates[order[k]] = (integral - prev_integral) / T;
            prev_integral = integral;
        }
    }

    // hover psi over the candidate set (T-scaled: weighted bps/Hz)
    const std::size_t npts = cell.hover_x.size();
    std::vector<double> psi(npts, 0.0);
    for (std::size_t j = 0; j < npts; ++j) {
        double cum = 0.0, val = 0.0;
        for (int k = 0; k < K; ++k) {
            cum += cell.hover_gain[order[k]][j];
            const double next = (k + 1 < K) ? lam[order[k + 1]] : 0.0;
            val += (lam[order[k]] - next) * std::log2(1.0 + cum);
        }
        psi[j] = val;
    }
    out.hover = cluster_maxima(cell.hover_x, psi, opt.near_tie_tol,
                               cell.hover_merge_dist);

    if (cell.hover_time > 0 && npts > 0) {
        // leftmost best-value point
        std::size_t best = 0;
        for (std::size_t j = 1; j < npts; ++j)
            if (psi[j] > psi[best]) best = j;
        out.best_index = static_cast<int>(best);
        double cum = 0.0, prev_log = 0.0;
        for (int k = 0; k < K; ++k) {
            cum += cell.hover_gain[order[k]][best];
            const double lg = std::log2(1.0 + cum);
            out.rates[order[k]] += cell.hover_time / T * (lg - prev_log);
            prev_log = lg;
        }
    }

    for (int k = 0; k < K; ++k) out.value += lam[k] * out.rates[k];
    return out;
}

// psi at an arbitrary location (used for candidate scoring).
double psi_scaled_at(double x, const std::vector<double>& lam,
                     const Scenario& sc) {
    const std::vector<int> order = descending_order(lam);
    double cum = 0.0, val = 0.0;
    for (int k = 0; k < sc.K(); ++k) {
        cum += sc.snr_gain(order[k], x);
        const double next = (k + 1 < sc.K()) ? lam[order[k + 1]] : 0.0;
        val += (lam[order[k]] - next) * std::log2(1.0 + cum);
    }
    return val;
}

std::vector<double> vertex_rates_impl(const DecodingOrder& order,
                                      const MaxSpeedLeg& leg,
                                      const PiecewiseLinearTrajectory* free_traj,
                                      const SpeedFreeSchedule* hovers,
                                      const Scenario& sc, int quad_panels) {
    const int K = sc.K();
    if (static_cast<int>(order.perm.size()) != K)
        throw std::invalid_argument("vertex_rates: order size mismatch");
    const double free_time = free_traj
                                 ? free_traj->duration()
                                 : hovers->total();
    const double T = leg.duration() + free_time;
    if (std::abs(T - sc.horizon) > 1e-6 * std::max(1.0, sc.horizon))
        throw std::invalid_argument(
            "vertex_rates: leg + speed-free durations do not sum to the horizon");

    std::vector<double> rates(K, 0.0);
    double prev = 0.0;
    std::vector<int> prefix;
    for (int k = 0; k < K; ++k) {
        prefix.push_back(order.perm[k]);
        auto f = [&](double x) {
            double s = 0.0;
            for (int u : prefix) s += sc.snr_gain(u, x);
            return std::log2(1.0 + s);
        };
        double integral = 0.0;
        if (leg.duration() > 0)
            integral += simpson(f, leg.x_start, leg.x_end, quad_panels) / leg.v_max;
        if (free_traj) {
            integral += trajectory_integral(*free_traj, f, 32);
        } else {
            for (std::size_t h = 0; h < hovers->hover_points.size(); ++h)
                integral += hovers->hover_durations[h] * f(hovers->hover_points[h]);
        }
        rates[order.perm[k]] = (integral - prev) / T;
        prev = integral;
    }
    return rates;
}

}  // namespace

double subset_sum_rate(double x, const std::vector<int>& subset,
                       const Scenario& sc) {
    if (subset.empty()) throw std::invalid_argument("subset_sum_rate: empty subset");
    double s = 0.0;
    for (int k : subset) s += sc.snr_gain(k, x);
    return std::log2(1.0 + s);
}

std::vector<double> vertex_rates(const DecodingOrder& order,
                                 const MaxSpeedLeg& leg,
                                 const SpeedFreeSchedule& hovers,
                                 const Scenario& sc, int quad_panels) {
    return vertex_rates_impl(order, leg, nullptr, &hovers, sc, quad_panels);
}

std::vector<double> vertex_rates(const DecodingOrder& order,
                                 const MaxSpeedLeg& leg,
                                 const PiecewiseLinearTrajectory& speed_free,
                                 const Scenario& sc, int quad_panels) {
    return vertex_rates_impl(order, leg, &speed_free, nullptr, sc, quad_panels);
}

double psi_objective(double x, const DualVector& dual,
                     const DecodingOrder& order, const Scenario& sc,
                     double tie_tol) {
    const int K = sc.K();
    if (dual.size() != K || static_cast<int>(order.perm.size()) != K)
        throw std::invalid_argument("psi_objective: size mismatch");
    for (int k = 0; k + 1 < K; ++k)
        if (dual[order.perm[k]] < dual[order.perm[k + 1]] - tie_tol)
            throw std::invalid_argument(
                "psi_objective: order does not sort the dual descending");
    double cum = 0.0, val = 0.0;
    for (int k = 0; k < K; ++k) {
        cum += sc.snr_gain(order.perm[k], x);
        const double next = (k + 1 < K) ? dual[order.perm[k + 1]] : 0.0;
        val += (dual[order.perm[k]] - next) * std::log2(1.0 + cum);
    }
    return val / sc.horizon;
}

DualEvaluation evaluate_dual(const DualVector& dual, double x_i, double x_f,
                             const Scenario& sc, const SolverOptions& opt) {
    if (dual.size() != sc.K())
        throw std::invalid_argument("evaluate_dual: dual size mismatch");
    for (double v : dual.weights)
        if (v < 0) throw std::invalid_argument("evaluate_dual: negative dual");
    const CellGeometry cell = detail::make_cell(sc, opt, x_i, x_f, nullptr);
    const CellEval ev = eval_cell(cell, dual.weights, sc, opt);
    DualEvaluation out;
    out.value = ev.value;
    out.subgradient = ev.rates;
    out.maximizers = ev.hover.maximizers;
    out.max_psi = ev.hover.value;
    out.best_x = cell.hover_x.empty() ? x_i : cell.hover_x[ev.best_index];
    return out;
}

std::vector<DecodingOrder> enumerate_orders(const DualVector& dual,
                                            double tie_tol,
                                            bool all_permutations) {
    const int K = dual.size();
    const std::vector<int> base = descending_order(dual.weights);
    // tie groups as (start, length) runs over the sorted order
    std::vector<std::pair<int, int>> groups;
    int i = 0;
    while (i < K) {
        int j = i + 1;
        while (j < K &&
               dual[base[i]] - dual[base[j]] <= tie_tol)
            ++j;
        groups.emplace_back(i, j - i);
        i = j;
    }

    std::vector<DecodingOrder> orders;
    std::vector<std::vector<std::vector<int>>> variants;
    for (auto [start, len] : groups) {
        std::vector<int> members(base.begin() + start, base.begin() + start + len);
        std::vector<std::vector<int>> vs;
        if (all_permutations && len > 1) {
            std::vector<int> p = members;
            std::sort(p.begin(), p.end());
            do {
                vs.push_back(p);
            } while (std::next_permutation(p.begin(), p.end()));
        } else {
            for (int r = 0; r < len; ++r) {
                std::vector<int> rot(members.begin() + r, members.end());
                rot.insert(rot.end(), members.begin(), members.begin() + r);
                vs.push_back(rot);
                if (len == 1) break;
            }
        }
        variants.push_back(std::move(vs));
    }

    // cartesian product across groups
    std::vector<std::size_t> pick(groups.size(), 0);
    while (true) {
        DecodingOrder ord;
        ord.perm.reserve(K);
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (int u : variants[g][pick[g]]) ord.perm.push_back(u);
        orders.push_back(std::move(ord));
        std::size_t g = 0;
        while (g < groups.size()) {
            if (++pick[g] < variants[g].size()) break;
            pick[g] = 0;
            ++g;
        }
        if (g == groups.size()) break;
    }
    return orders;
}

TimeshareResult timeshare_lp(const std::vector<std::vector<double>>& rate_tuples,
                             const std::vector<double>& alpha) {
    if (rate_tuples.empty())
        throw std::invalid_argument("timeshare_lp: no rate tuples");
    const int K = static_cast<int>(alpha.size());
    const int n = static_cast<int>(rate_tuples.size());

    LpProblem p;
    p.objective.assign(n + 1, 0.0);
    p.objective[n] = 1.0;  // maximize R
    for (int k = 0; k < K; ++k) {
        std::vector<double> row(n + 1, 0.0);
        for (int i = 0; i < n; ++i) row[i] = -rate_tuples[i][k];
        row[n] = alpha[k];
        p.ineq_rows.push_back(std::move(row));
        p.ineq_rhs.push_back(0.0);
    }
    std::vector<double> eq(n + 1, 1.0);
    eq[n] = 0.0;
    p.eq_rows.push_back(std::move(eq));
    p.eq_rhs.push_back(1.0);

    const LpSolution sol = solve_lp(p);
    if (sol.status != LpStatus::optimal)
        throw SolverError("timeshare_lp: LP not optimal (all-zero rate tuples?)");
    TimeshareResult out;
    out.tau.assign(sol.x.begin(), sol.x.begin() + n);
    double tsum = 0.0;
    for (double t : out.tau) tsum += t;
    if (tsum > 0)
        for (double& t : out.tau) t /= tsum;
    out.rates.assign(K, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) out.rates[k] += out.tau[i] * rate_tuples[i][k];
    out.sum_rate = sol.value;
    return out;
}

namespace {

NomaSolution solve_cell_noma(double x_i, double x_f,
                             const std::vector<double>& alpha,
                             const Scenario& sc, const SolverOptions& opt,
                             double abort_below,
                             const std::vector<double>* hover_candidates,
                             const std::vector<double>* warm_dual = nullptr) {
    const int K = sc.K();
    const CellGeometry cell = detail::make_cell(sc, opt, x_i, x_f, hover_candidates);
    const detail::DualSpace ds = detail::make_dual_space(alpha, K);

    detail::CandidateHarvest harvest;
    auto oracle = [&](const std::vector<double>& reduced) {
        const double s = detail::feasibility_scale(reduced, ds.alpha_active);
        std::vector<double> scaled = reduced;
        if (s > 1e-12)
            for (double& v : scaled) v /= s;
        const std::vector<double> lam = ds.expand(scaled);
        const CellEval ev = eval_cell(cell, lam, sc, opt);
        if (s > 1e-12 && ev.value < abort_below) throw detail::CellDominated{};
        harvest.offer(ev.value, ev.hover.maximizers);
        std::vector<double> sub(ds.active.size());
        for (std::size_t i = 0; i < ds.active.size(); ++i)
            sub[i] = ev.rates[ds.active[i]];
        return std::make_pair(ev.value * std::max(s, 1e-12), sub);
    };

    std::vector<double> x0;
    double radius = 0;
    detail::initial_ball(ds, x0, radius, warm_dual);
    EllipsoidOptions eopt;
    eopt.tol = opt.ellipsoid_tol;
    eopt.max_iters = opt.ellipsoid_iter_factor * static_cast<int>(ds.active.size() * ds.active.size());
    const EllipsoidResult er =
        ellipsoid_minimize(oracle, detail::dual_constraints(ds), x0, radius, eopt);
    if (!er.found_feasible)
        throw SolverError("solve_p1: ellipsoid found no feasible dual");

    std::vector<double> lam = detail::snap_dual_ties(
        ds.expand(er.best.weights), alpha, opt.tie_rel_tol);
    const CellEval final_ev = eval_cell(cell, lam, sc, opt);

    // hover candidate set: final maximizers plus the ones harvested near the
    // optimum; the LP decides which ones carry time
    std::vector<double> cand = final_ev.hover.maximizers;
    {
        const auto extra = harvest.all_points();
        cand.insert(cand.end(), extra.begin(), extra.end());
        cand = detail::dedupe_candidates(
            std::move(cand), std::max(cell.hover_merge_dist, 1e-12),
            [&](double x) { return psi_scaled_at(x, lam, sc); },
            opt.hover_candidate_window);
    }
    if (cand.empty()) cand.push_back(cell.hover_x[final_ev.best_index]);

    double mx = 0.0;
    for (double v : lam) mx = std::max(mx, v);
    const std::vector<DecodingOrder> orders = enumerate_orders(
        DualVector{lam}, opt.tie_rel_tol * std::max(mx, 1e-300),
        opt.full_permutations);

    // rate tuples r^(i)(x_gamma): leg part per order + hover part per pair
    const int G = static_cast<int>(cand.size());
    const int I = static_cast<int>(orders.size());
    const double T = sc.horizon;
    std::vector<std::vector<std::vector<double>>> tuples(
        G, std::vector<std::vector<double>>(I, std::vector<double>(K, 0.0)));
    for (int i = 0; i < I; ++i) {
        std::vector<double> leg_rates(K, 0.0);
        if (!cell.quad_x.empty()) {
            std::vector<double> cum(cell.quad_x.size(), 0.0);
            double prev = 0.0;
            for (int k = 0; k < K; ++k) {
                const auto& g = cell.quad_gain[orders[i].perm[k]];
                double integral = 0.0;
                for (std::size_t j = 0; j < cum.size(); ++j) {
                    cum[j] += g[j];
                    integral += cell.quad_tw[j] * std::log2(1.0 + cum[j]);
                }
                leg_rates[orders[i].perm[k]] = (integral - prev) / T;
                prev = integral;
            }
        }
        for (int gidx = 0; gidx < G; ++gidx) {
            double cum = 0.0, prev_log = 0.0;
            for (int k = 0; k < K; ++k) {
                const int u = orders[i].perm[k];
                cum += sc.snr_gain(u, cand[gidx]);
                const double lg = std::log2(1.0 + cum);
                tuples[gidx][i][u] =
                    leg_rates[u] + cell.hover_time / T * (lg - prev_log);
                prev_log = lg;
            }
        }
    }

    std::vector<std::vector<double>> flat;
    flat.reserve(G * I);
    for (int gidx = 0; gidx < G; ++gidx)
        for (int i = 0; i < I; ++i) flat.push_back(tuples[gidx][i]);
    const TimeshareResult ts = timeshare_lp(flat, alpha);

    NomaSolution sol;
    sol.x_initial = x_i;
    sol.x_final = x_f;
    sol.hover_points = cand;
    sol.orders = orders;
    sol.tau.assign(G, std::vector<double>(I, 0.0));
    sol.hover_durations.assign(G, 0.0);
    for (int gidx = 0; gidx < G; ++gidx) {
        for (int i = 0; i < I; ++i) {
            sol.tau[gidx][i] = ts.tau[gidx * I + i];
            sol.hover_durations[gidx] += sol.tau[gidx][i] * cell.hover_time;
        }
    }
    sol.rates = ts.rates;
    sol.sum_rate = ts.sum_rate;
    sol.dual = DualVector{lam};
    sol.dual_value = final_ev.value;
    sol.duality_gap = std::abs(sol.dual_value - sol.sum_rate);
    sol.hover_count = 0;
    for (double d : sol.hover_durations)
        if (d > opt.hover_duration_floor) ++sol.hover_count;
    sol.shf = assemble_shf(x_i, x_f, sol.hover_points, sol.hover_durations,
                           sc.v_max, sc.horizon);
    sol.diag.ellipsoid_iterations = er.iterations;
    sol.diag.ellipsoid_converged = er.converged;
    sol.diag.ellipsoid_certificate = er.final_certificate;
    return sol;
}

}  // namespace

NomaSolution solve_p1_fixed_endpoints(double x_i, double x_f,
                                      const std::vector<double>& alpha,
                                      const Scenario& sc,
                                      const SolverOptions& opt,
                                      const std::vector<double>* hover_candidates) {
    sc.validate(1);
    if (static_cast<int>(alpha.size()) != sc.K())
        throw ConfigError("alpha: size mismatch");
    return solve_cell_noma(x_i, x_f, alpha, sc, opt,
                           -std::numeric_limits<double>::infinity(),
                           hover_candidates);
}

NomaSolution solve_p1(const std::vector<double>& alpha, const Scenario& sc,
                      const SolverOptions& opt) {
    sc.validate();
    if (static_cast<int>(alpha.size()) != sc.K())
        throw ConfigError("alpha: size mismatch");
    int solved = 0, pruned = 0;
    NomaSolution best = detail::endpoint_search<NomaSolution>(
        sc, opt,
        [&](const detail::CellRequest& req) {
            return solve_cell_noma(req.x_i, req.x_f, alpha, sc, opt,
                                   req.abort_below, nullptr, req.warm_dual);
        },
        [&](double xi, double xf, const DualVector& d) {
            const CellGeometry cell = detail::make_cell(sc, opt, xi, xf, nullptr);
            return eval_cell(cell, d.weights, sc, opt).value;
        },
        &solved, &pruned);
    best.diag.cells_solved = solved;
    best.diag.cells_pruned = pruned;
    return best;
}

}  // namespace uavmac
