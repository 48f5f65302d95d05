#include "uavmac/tdma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dual_common.hpp"
#include "uavmac/ellipsoid.hpp"
#include "uavmac/errors.hpp"
#include "uavmac/lp.hpp"

namespace uavmac {

namespace {

using detail::CellGeometry;

double weighted_rate(const DualVector& nu, int k, double x, const Scenario& sc) {
    return nu[k] * std::log2(1.0 + sc.snr_gain(k, x));
}

int argmax_user(const std::vector<double>& nu, double x, const Scenario& sc) {
    int best = 0;
    double bv = -1.0;
    for (int k = 0; k < sc.K(); ++k) {
        const double v = nu[k] * std::log2(1.0 + sc.snr_gain(k, x));
        if (v > bv) {
            bv = v;
            best = k;
        }
    }
    return best;
}

// argmax runs over [x_lo, x_hi] with boundaries bisected to 1e-6 m.
struct Run {
    double x_lo, x_hi;
    int user;
};

std::vector<Run> argmax_runs(const std::vector<double>& nu, double x_lo,
                             double x_hi, const Scenario& sc, int scan_points) {
    std::vector<Run> runs;
    if (x_hi <= x_lo) return runs;
    const int n = std::max(scan_points, 8);
    std::vector<int> who(n + 1);
    for (int j = 0; j <= n; ++j)
        who[j] = argmax_user(nu, x_lo + (x_hi - x_lo) * j / n, sc);
    double seg_start = x_lo;
    for (int j = 0; j < n; ++j) {
        if (who[j + 1] == who[j]) continue;
        const int a = who[j], b = who[j + 1];
        // g < 0 where a wins, g > 0 where b wins
        auto g = [&](double x) {
            return nu[b] * std::log2(1.0 + sc.snr_gain(b, x)) -
                   nu[a] * std::log2(1.0 + sc.snr_gain(a, x));
        };
        double xj = x_lo + (x_hi - x_lo) * j / n;
        double xj1 = x_lo + (x_hi - x_lo) * (j + 1) / n;
        double cross;
        try {
            cross = bisect(g, xj, xj1, 1e-6);
        } catch (const std::invalid_argument&) {
            cross = 0.5 * (xj + xj1);
        }
        runs.push_back(Run{seg_start, cross, a});
        seg_start = cross;
    }
    runs.push_back(Run{seg_start, x_hi, who[n]});
    return runs;
}

struct TdmaCellEval {
    double value = 0;
    std::vector<double> rates;             // subgradient
    std::vector<double> flight_integrals;  // per user, bps/Hz * s
    std::vector<TdmaSchedule::Segment> segments;
    int hover_user = -1;
};

// Per-cell caches: log2(1 + gain) on the quadrature grid, its cumulative
// trapezoid, and the overhead rates at the user positions.
struct TdmaScratch {
    bool ready = false;
    std::vector<std::vector<double>> lr;  // [k][node]
    std::vector<std::vector<double>> ct;  // cumulative integral of lr in x
    std::vector<double> hover_rate;       // C_k(w_k)

    void build(const CellGeometry& cell, const Scenario& sc) {
        if (ready) return;
        const int K = sc.K();
        const std::size_t n = cell.quad_x.size();
        lr.assign(K, std::vector<double>(n));
        ct.assign(K, std::vector<double>(n, 0.0));
        for (int k = 0; k < K; ++k) {
            for (std::size_t j = 0; j < n; ++j)
                lr[k][j] = std::log2(1.0 + cell.quad_gain[k][j]);
            for (std::size_t j = 1; j < n; ++j)
                ct[k][j] = ct[k][j - 1] + 0.5 * (cell.quad_x[j] - cell.quad_x[j - 1]) *
                                              (lr[k][j] + lr[k][j - 1]);
        }
        hover_rate.resize(K);
        for (int k = 0; k < K; ++k)
            hover_rate[k] =
                std::log2(1.0 + sc.snr_gain(k, sc.layout.positions[k]));
        ready = true;
    }

    // integral of the linear interpolant of lr[k] from the grid start to x
    double ct_at(const CellGeometry& cell, int k, double x) const {
        const auto& xs = cell.quad_x;
        if (x <= xs.front()) return 0.0;
        if (x >= xs.back()) return ct[k].back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double h = xs[j + 1] - xs[j];
        const double dx = x - xs[j];
        const double slope = (lr[k][j + 1] - lr[k][j]) / h;
        return ct[k][j] + dx * lr[k][j] + 0.5 * dx * dx * slope;
    }
};

// `exact` integrates each argmax run with its own Simpson rule (used for the
// final reconstruction and the pruning bounds); the iteration path inside
// the ellipsoid uses the cached trapezoid tables instead.
TdmaCellEval eval_cell_tdma(const CellGeometry& cell,
                            const std::vector<double>& nu, const Scenario& sc,
                            const SolverOptions& opt, int k_i, int k_f,
                            TdmaScratch& scratch, bool exact) {
    const int K = sc.K();
    const double T = sc.horizon;
    scratch.build(cell, sc);
    TdmaCellEval out;
    out.flight_integrals.assign(K, 0.0);
    out.rates.assign(K, 0.0);

    if (cell.leg_time > 0) {
        std::vector<Run> runs;
        if (exact) {
            runs = argmax_runs(nu, cell.x_i, cell.x_f, sc, opt.quad_panels);
        } else {
            // argmax scan on the cached node rates, crossings by bisection
            const auto& xs = cell.quad_x;
            const std::size_t n = xs.size();
            std::vector<int> who(n);
            for (std::size_t j = 0; j < n; ++j) {
                int bestk = 0;
                double bv = -1.0;
                for (int k = 0; k < K; ++k) {
                    const double v = nu[k] * scratch.lr[k][j];
                    if (v > bv) {
                        bv = v;
                        bestk = k;
                    }
                }
                who[j] = bestk;
            }
            double seg_start = cell.x_i;
            for (std::size_t j = 0; j + 1 < n; ++j) {
                if (who[j + 1] == who[j]) continue;
                const int a = who[j], b = who[j + 1];
                auto g = [&](double x) {
                    return nu[b] * std::log2(1.0 + sc.snr_gain(b, x)) -
                           nu[a] * std::log2(1.0 + sc.snr_gain(a, x));
                };
                double cross;
                try {
                    cross = bisect(g, xs[j], xs[j + 1], 1e-6);
                } catch (const std::invalid_argument&) {
                    cross = 0.5 * (xs[j] + xs[j + 1]);
                }
                runs.push_back(Run{seg_start, cross, a});
                seg_start = cross;
            }
            runs.push_back(Run{seg_start, cell.x_f, who[n - 1]});
        }
        for (const auto& run : runs) {
            const double len = run.x_hi - run.x_lo;
            if (len <= 0) continue;
            double integral;
            if (exact) {
                int panels = static_cast<int>(
                    std::ceil(opt.quad_panels * len / (cell.x_f - cell.x_i)));
                panels = std::max(panels, 4);
                integral = simpson([&](double x) {
                               return std::log2(1.0 + sc.snr_gain(run.user, x));
                           }, run.x_lo, run.x_hi, panels) / sc.v_max;
            } else {
                integral = (scratch.ct_at(cell, run.user, run.x_hi) -
                            scratch.ct_at(cell, run.user, run.x_lo)) / sc.v_max;
            }
            out.flight_integrals[run.user] += integral;
            out.segments.push_back(TdmaSchedule::Segment{
                (run.x_lo - cell.x_i) / sc.v_max, (run.x_hi - cell.x_i) / sc.v_max,
                run.user});
        }
    }
    for (int k = 0; k < K; ++k) out.rates[k] = out.flight_integrals[k] / T;

    double hover_term = 0.0;
    if (cell.hover_time > 0) {
        int best = -1;
        double bv = -std::numeric_limits<double>::infinity();
        for (int k = k_i; k <= k_f; ++k) {
            const double v = nu[k] * scratch.hover_rate[k];
            if (v > bv) {
                bv = v;
                best = k;
            }
        }
        if (best < 0) throw SolverError("tdma: no hover user available");
        out.hover_user = best;
        out.rates[best] += cell.hover_time / T * scratch.hover_rate[best];
        hover_term = cell.hover_time / T * nu[best] * scratch.hover_rate[best];
    }
    for (int k = 0; k < K; ++k) out.value += nu[k] * out.flight_integrals[k] / T;
    out.value += hover_term;
    return out;
}

}  // namespace

int best_user(const DualVector& nu, double x, const Scenario& sc) {
    if (nu.size() != sc.K()) throw std::invalid_argument("best_user: size mismatch");
    bool any = false;
    for (double v : nu.weights) {
        if (v < 0) throw std::invalid_argument("best_user: negative dual");
        if (v > 0) any = true;
    }
    if (!any) throw std::invalid_argument("best_user: all-zero dual");
    return argmax_user(nu.weights, x, sc);
}

std::vector<Crossing> switching_points(const DualVector& nu, const Scenario& sc) {
    if (nu.size() != sc.K())
        throw std::invalid_argument("switching_points: size mismatch");
    std::vector<Crossing> out;
    for (int k = 0; k + 1 < sc.K(); ++k) {
        const double a = sc.layout.positions[k], b = sc.layout.positions[k + 1];
        if (!(b > a)) continue;
        auto g = [&](double x) {
            return weighted_rate(nu, k + 1, x, sc) - weighted_rate(nu, k, x, sc);
        };
        if (g(a) >= 0 || g(b) <= 0) continue;  // one side dominates throughout
        out.push_back(Crossing{k, bisect(g, a, b, 1e-6)});
    }
    return out;
}

std::vector<double> flight_rate_integrals(
    const DualVector& nu, const MaxSpeedLeg& leg, const Scenario& sc,
    const SolverOptions& opt, std::vector<TdmaSchedule::Segment>* segments) {
    if (nu.size() != sc.K())
        throw std::invalid_argument("flight_rate_integrals: size mismatch");
    std::vector<double> F(sc.K(), 0.0);
    if (segments) segments->clear();
    if (leg.duration() <= 0) return F;
    const auto runs = argmax_runs(nu.weights, leg.x_start, leg.x_end, sc,
                                  opt.quad_panels);
    for (const auto& run : runs) {
        const double len = run.x_hi - run.x_lo;
        if (len <= 0) continue;
        int panels = static_cast<int>(
            std::ceil(opt.quad_panels * len / (leg.x_end - leg.x_start)));
        panels = std::max(panels, 4);
        F[run.user] += simpson([&](double x) {
                           return std::log2(1.0 + sc.snr_gain(run.user, x));
                       }, run.x_lo, run.x_hi, panels) /
                       leg.v_max;
        if (segments)
            segments->push_back(TdmaSchedule::Segment{
                (run.x_lo - leg.x_start) / leg.v_max,
                (run.x_hi - leg.x_start) / leg.v_max, run.user});
    }
    return F;
}

std::pair<int, int> hover_user_window(double x_i, double x_f,
                                      const Scenario& sc) {
    const auto& w = sc.layout.positions;
    int k_i = sc.K();
    for (int k = 0; k < sc.K(); ++k)
        if (x_i <= w[k]) {
            k_i = k;
            break;
        }
    int k_f = -1;
    for (int k = sc.K() - 1; k >= 0; --k)
        if (w[k] <= x_f) {
            k_f = k;
            break;
        }
    return {k_i, k_f};
}

HoverLpResult hover_duration_lp(const std::vector<double>& flight_integrals,
                                const std::vector<double>& alpha, int k_i,
                                int k_f, double hover_time, const Scenario& sc) {
    const int K = sc.K();
    if (k_i > k_f && hover_time > 1e-12)
        throw SolverError("hover_duration_lp: empty hover window with hover time left");
    const double T = sc.horizon;
    std::vector<int> hover_users;
    for (int k = std::max(0, k_i); k <= std::min(K - 1, k_f); ++k)
        hover_users.push_back(k);
    const int H = static_cast<int>(hover_users.size());

    // variables: tau_h for h in the window, then R
    LpProblem p;
    p.objective.assign(H + 1, 0.0);
    p.objective[H] = 1.0;
    std::vector<double> hover_rate(K, 0.0);
    for (int k = 0; k < K; ++k)
        hover_rate[k] = std::log2(1.0 + sc.snr_gain(k, sc.layout.positions[k]));
    for (int k = 0; k < K; ++k) {
        std::vector<double> row(H + 1, 0.0);
        row[H] = alpha[k];
        for (int h = 0; h < H; ++h)
            if (hover_users[h] == k) row[h] = -hover_rate[k] / T;
        p.ineq_rows.push_back(std::move(row));
        p.ineq_rhs.push_back(flight_integrals[k] / T);
    }
    if (H > 0) {
        std::vector<double> eq(H + 1, 1.0);
        eq[H] = 0.0;
        p.eq_rows.push_back(std::move(eq));
        p.eq_rhs.push_back(hover_time);
    }

    const LpSolution sol = solve_lp(p);
    if (sol.status != LpStatus::optimal)
        throw SolverError("hover_duration_lp: LP not optimal");
    HoverLpResult out;
    out.tau.assign(K, 0.0);
    for (int h = 0; h < H; ++h) out.tau[hover_users[h]] = sol.x[h];
    out.sum_rate = sol.value;
    out.rates.assign(K, 0.0);
    for (int k = 0; k < K; ++k)
        out.rates[k] = flight_integrals[k] / T + out.tau[k] * hover_rate[k] / T;
    return out;
}

namespace {

TdmaSolution solve_cell_tdma(double x_i, double x_f,
                             const std::vector<double>& alpha,
                             const Scenario& sc, const SolverOptions& opt,
                             double abort_below,
                             const std::vector<double>* warm_dual = nullptr) {
    const int K = sc.K();
    const CellGeometry cell = detail::make_cell(sc, opt, x_i, x_f, nullptr);
    const auto [k_i, k_f] = hover_user_window(x_i, x_f, sc);
    if (k_i > k_f && cell.hover_time > 1e-12)
        throw SolverError("solve_p3: no user position inside [x_i, x_f] to hover at");
    const detail::DualSpace ds = detail::make_dual_space(alpha, K);

    TdmaScratch scratch;
    double fast_bias = 0.0;
    auto oracle = [&](const std::vector<double>& reduced) {
        const double s = detail::feasibility_scale(reduced, ds.alpha_active);
        std::vector<double> scaled = reduced;
        if (s > 1e-12)
            for (double& v : scaled) v /= s;
        const std::vector<double> nu = ds.expand(scaled);
        TdmaCellEval ev = eval_cell_tdma(cell, nu, sc, opt, k_i, k_f,
                                         scratch, false);
        if (s > 1e-12 && ev.value + fast_bias < abort_below) {
            const double fast_value = ev.value;
            ev = eval_cell_tdma(cell, nu, sc, opt, k_i, k_f, scratch, true);
            if (ev.value < abort_below) throw detail::CellDominated{};
            fast_bias = ev.value - fast_value;
        }
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
    eopt.max_iters = opt.ellipsoid_iter_factor *
                     static_cast<int>(ds.active.size() * ds.active.size());
    const EllipsoidResult er =
        ellipsoid_minimize(oracle, detail::dual_constraints(ds), x0, radius, eopt);
    if (!er.found_feasible)
        throw SolverError("solve_p3: ellipsoid found no feasible dual");

    const std::vector<double> nu = detail::snap_dual_ties(
        ds.expand(er.best.weights), alpha, opt.tie_rel_tol);
    const TdmaCellEval final_ev =
        eval_cell_tdma(cell, nu, sc, opt, k_i, k_f, scratch, true);
    const HoverLpResult lp = hover_duration_lp(final_ev.flight_integrals, alpha,
                                               k_i, k_f, cell.hover_time, sc);

    TdmaSolution sol;
    sol.x_initial = x_i;
    sol.x_final = x_f;
    sol.k_initial = k_i;
    sol.k_final = k_f;
    for (int k = 0; k < K; ++k) {
        if (k < k_i || k > k_f) continue;
        sol.hover_points.push_back(sc.layout.positions[k]);
        sol.hover_durations.push_back(lp.tau[k]);
    }
    sol.schedule.flight_segments = final_ev.segments;
    sol.schedule.hover_durations = lp.tau;
    sol.rates = lp.rates;
    sol.sum_rate = lp.sum_rate;
    sol.dual = DualVector{nu};
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

TdmaSolution solve_p3_fixed_endpoints(double x_i, double x_f,
                                      const std::vector<double>& alpha,
                                      const Scenario& sc,
                                      const SolverOptions& opt) {
    sc.validate(1);
    if (static_cast<int>(alpha.size()) != sc.K())
        throw ConfigError("alpha: size mismatch");
    return solve_cell_tdma(x_i, x_f, alpha, sc, opt,
                           -std::numeric_limits<double>::infinity());
}

TdmaSolution solve_p3(const std::vector<double>& alpha, const Scenario& sc,
                      const SolverOptions& opt) {
    sc.validate();
    if (static_cast<int>(alpha.size()) != sc.K())
        throw ConfigError("alpha: size mismatch");
    int solved = 0, pruned = 0;
    TdmaSolution best = detail::endpoint_search<TdmaSolution>(
        sc, opt,
        [&](const detail::CellRequest& req) {
            return solve_cell_tdma(req.x_i, req.x_f, alpha, sc, opt,
                                   req.abort_below, req.warm_dual);
        },
        [&](double xi, double xf, const DualVector& d) {
            const auto [ki, kf] = hover_user_window(xi, xf, sc);
            const CellGeometry cell = detail::make_cell(sc, opt, xi, xf, nullptr);
            if (ki > kf && cell.hover_time > 1e-12)
                throw SolverError("invalid tdma cell");
            TdmaScratch scratch;
            return eval_cell_tdma(cell, d.weights, sc, opt, ki, kf, scratch, true)
                .value;
        },
        &solved, &pruned);
    best.diag.cells_solved = solved;
    best.diag.cells_pruned = pruned;
    return best;
}

}  // namespace uavmac
