#pragma once

// Internal plumbing shared by the NOMA/FDMA/TDMA dual-decomposition solvers:
// per-cell gain caches, the dual feasible set, and the pruned 2D endpoint
// sweep. Not part of the public API.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "uavmac/config.hpp"
#include "uavmac/ellipsoid.hpp"
#include "uavmac/errors.hpp"
#include "uavmac/exec.hpp"
#include "uavmac/numerics.hpp"

namespace uavmac::detail {

// Thrown by a cell's dual oracle once the cell is provably dominated by the
// sweep incumbent (the dual value of a feasible multiplier upper-bounds the
// cell's achievable rate).
struct CellDominated : SolverError {
    CellDominated() : SolverError("cell dominated by the incumbent") {}
};

// The dual functions are positively homogeneous, so any multiplier can be
// rescaled onto the exact feasible slice sum(w alpha) = 1 before evaluation;
// f(w) = s f(w/s) recovers the value at the original point.
inline double feasibility_scale(const std::vector<double>& reduced,
                                const std::vector<double>& alpha_active) {
    double s = 0.0;
    for (std::size_t i = 0; i < reduced.size(); ++i)
        s += std::max(0.0, reduced[i]) * alpha_active[i];
    return s;
}

// Gains sampled over the hover-candidate set and the leg quadrature nodes of
// one endpoint cell [x_i, x_f].
struct CellGeometry {
    double x_i = 0, x_f = 0;
    double leg_time = 0, hover_time = 0, horizon = 0;
    std::vector<double> hover_x;
    double hover_merge_dist = 0;  // 0 for discrete candidate sets
    std::vector<std::vector<double>> hover_gain;  // [k][point]
    std::vector<double> quad_x, quad_tw;          // Simpson nodes, time weights
    std::vector<std::vector<double>> quad_gain;   // [k][node]
};

inline CellGeometry make_cell(const Scenario& sc, const SolverOptions& opt,
                              double x_i, double x_f,
                              const std::vector<double>* hover_override) {
    CellGeometry cell;
    cell.x_i = x_i;
    cell.x_f = x_f;
    cell.horizon = sc.horizon;
    cell.leg_time = sc.v_max > 0 ? (x_f - x_i) / sc.v_max : 0.0;
    if (x_f < x_i) throw SolverError("cell: x_f < x_i");
    if (x_f > x_i && sc.v_max <= 0) throw SolverError("cell: v_max = 0 cannot fly");
    if (cell.leg_time > sc.horizon * (1 + 1e-9))
        throw SolverError("cell: horizon shorter than flight time");
    cell.leg_time = std::min(cell.leg_time, sc.horizon);
    cell.hover_time = sc.horizon - cell.leg_time;

    const int K = sc.K();
    if (hover_override) {
        for (double x : *hover_override)
            if (x >= x_i - 1e-9 && x <= x_f + 1e-9)
                cell.hover_x.push_back(std::clamp(x, x_i, x_f));
        cell.hover_merge_dist = 0.0;
        if (cell.hover_x.empty() && cell.hover_time > 1e-12)
            throw SolverError("cell: no admissible hover candidates");
    } else if (x_f > x_i) {
        const int n = std::max(1, opt.hover_divisions);
        cell.hover_x.resize(n + 1);
        for (int j = 0; j <= n; ++j)
            cell.hover_x[j] = x_i + (x_f - x_i) * j / n;
        cell.hover_merge_dist = (x_f - x_i) / n;
    } else {
        cell.hover_x = {x_i};
        cell.hover_merge_dist = 0.0;
    }
    cell.hover_gain.assign(K, std::vector<double>(cell.hover_x.size()));
    for (int k = 0; k < K; ++k)
        for (std::size_t j = 0; j < cell.hover_x.size(); ++j)
            cell.hover_gain[k][j] = sc.snr_gain(k, cell.hover_x[j]);

    if (cell.leg_time > 0) {
        int n = opt.quad_panels;
        if (n % 2) ++n;
        const double h = (x_f - x_i) / n;
        cell.quad_x.resize(n + 1);
        cell.quad_tw.resize(n + 1);
        for (int j = 0; j <= n; ++j) {
            cell.quad_x[j] = (j == n) ? x_f : x_i + h * j;
            const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            cell.quad_tw[j] = w * h / 3.0 / sc.v_max;  // dt = dx / v
        }
        cell.quad_gain.assign(K, std::vector<double>(n + 1));
        for (int k = 0; k < K; ++k)
            for (int j = 0; j <= n; ++j)
                cell.quad_gain[k][j] = sc.snr_gain(k, cell.quad_x[j]);
    }
    return cell;
}

// Active users (alpha_k > 0) get dual variables; the rest are pinned to 0.
struct DualSpace {
    std::vector<int> active;  // indices into 1..K
    std::vector<double> alpha_active;
    int K = 0;

    std::vector<double> expand(const std::vector<double>& reduced) const {
        std::vector<double> full(K, 0.0);
        for (std::size_t i = 0; i < active.size(); ++i)
            full[active[i]] = std::max(0.0, reduced[i]);
        return full;
    }
};

inline DualSpace make_dual_space(const std::vector<double>& alpha, int K) {
    DualSpace ds;
    ds.K = K;
    double sum = 0;
    for (int k = 0; k < K; ++k) {
        if (alpha[k] < 0) throw ConfigError("alpha: entries must be >= 0");
        sum += alpha[k];
        if (alpha[k] > 0) {
            ds.active.push_back(k);
            ds.alpha_active.push_back(alpha[k]);
        }
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("alpha: must sum to 1");
    if (ds.active.empty()) throw ConfigError("alpha: all entries zero");
    return ds;
}

// lambda >= 0 componentwise plus the equality sum(lambda alpha) = 1 treated
// as two inequality cuts.
inline std::vector<EllipsoidConstraint> dual_constraints(const DualSpace& ds) {
    std::vector<EllipsoidConstraint> cons;
    const int n = static_cast<int>(ds.active.size());
    for (int i = 0; i < n; ++i) {
        cons.push_back({[i](const std::vector<double>& x) { return -x[i]; },
                        [i, n](const std::vector<double>&) {
                            std::vector<double> g(n, 0.0);
                            g[i] = -1.0;
                            return g;
                        }});
    }
    const std::vector<double> a = ds.alpha_active;
    cons.push_back({[a](const std::vector<double>& x) {
                        double s = -1.0;
                        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
                        return s;
                    },
                    [a](const std::vector<double>&) { return a; }});
    cons.push_back({[a](const std::vector<double>& x) {
                        double s = 1.0;
                        for (std::size_t i = 0; i < a.size(); ++i) s -= a[i] * x[i];
                        return s;
                    },
                    [a](const std::vector<double>&) {
                        std::vector<double> g = a;
                        for (double& v : g) v = -v;
                        return g;
                    }});
    return cons;
}

// Default initial ball: center 1/(K alpha_k) (rescaled onto the dual
// equality when some users are inactive), radius 10 max_k 1/alpha_k. A warm
// dual recenters the ball; the radius grows by the recentering distance so
// the original containment region stays covered.
inline void initial_ball(const DualSpace& ds, std::vector<double>& x0,
                         double& radius,
                         const std::vector<double>* warm_full = nullptr) {
    const int n = static_cast<int>(ds.active.size());
    x0.assign(n, 0.0);
    double cap = 0.0;
    for (int i = 0; i < n; ++i) {
        x0[i] = 1.0 / (ds.K * ds.alpha_active[i]);
        cap = std::max(cap, 1.0 / ds.alpha_active[i]);
    }
    const double scale = static_cast<double>(ds.K) / n;
    for (double& v : x0) v = std::min(v * scale, 10.0 * cap);
    radius = 10.0 * cap;
    if (warm_full && static_cast<int>(warm_full->size()) == ds.K) {
        double dist2 = 0.0;
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) {
            w[i] = std::max(0.0, (*warm_full)[ds.active[i]]);
            dist2 += (w[i] - x0[i]) * (w[i] - x0[i]);
        }
        radius += std::sqrt(dist2);
        x0 = std::move(w);
    }
}

// Keeps the hover maximizer lists of the lowest-valued dual evaluations seen
// during the ellipsoid run; they seed the primal reconstruction.
struct CandidateHarvest {
    struct Item {
        double value;
        std::vector<double> xs;
    };
    std::size_t cap = 8;
    std::vector<Item> items;  // sorted by value ascending

    void offer(double value, const std::vector<double>& xs) {
        auto pos = std::lower_bound(
            items.begin(), items.end(), value,
            [](const Item& it, double v) { return it.value < v; });
        if (pos == items.end() && items.size() >= cap) return;
        items.insert(pos, Item{value, xs});
        if (items.size() > cap) items.pop_back();
    }
    std::vector<double> all_points() const {
        std::vector<double> out;
        for (const auto& it : items) out.insert(out.end(), it.xs.begin(), it.xs.end());
        return out;
    }
};

// Group near-equal dual weights (relative tolerance on the max entry) and
// replace each group by its mean, then renormalize onto sum(w alpha) = 1.
// Downstream tie handling then sees exact plateaus, which keeps symmetric
// scenarios exactly symmetric after the ellipsoid's finite precision.
inline std::vector<double> snap_dual_ties(std::vector<double> w,
                                          const std::vector<double>& alpha,
                                          double rel_tol) {
    std::vector<int> idx(w.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (w[a] != w[b]) return w[a] > w[b];
        return a < b;
    });
    double mx = 0.0;
    for (double v : w) mx = std::max(mx, v);
    const double tol = rel_tol * std::max(mx, 1e-300);
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i + 1;
        double sum = w[idx[i]];
        while (j < idx.size() && w[idx[i]] - w[idx[j]] <= tol) {
            sum += w[idx[j]];
            ++j;
        }
        const double mean = sum / (j - i);
        for (std::size_t t = i; t < j; ++t) w[idx[t]] = mean;
        i = j;
    }
    double dot = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) dot += w[k] * alpha[k];
    if (dot > 0)
        for (double& v : w) v /= dot;
    for (double& v : w)
        if (v < 0) v = 0;
    return w;
}

// Merge candidate hover points: sort, drop points closer than min_gap to an
// already-kept better one. `score` ranks candidates (higher is better).
inline std::vector<double> dedupe_candidates(
    std::vector<double> xs, double min_gap,
    const std::function<double(double)>& score, double keep_window) {
    if (xs.empty()) return xs;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> vals(xs.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        vals[i] = score(xs[i]);
        best = std::max(best, vals[i]);
    }
    // greedy keep-best within each min_gap neighborhood
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    std::vector<bool> kept(xs.size(), false);
    for (std::size_t idx : order) {
        if (vals[idx] < best - keep_window) continue;
        bool clash = false;
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (kept[j] && std::abs(xs[j] - xs[idx]) < min_gap * 1.000001) clash = true;
        if (!clash) kept[idx] = true;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (kept[i]) out.push_back(xs[i]);
    return out;
}

// One cell of the endpoint sweep: abort_below lets the cell's dual solve
// stop once it is provably dominated, warm_dual centers its initial
// ellipsoid near the incumbent's dual (with the radius enlarged so the
// containment guarantee is kept).
struct CellRequest {
    double x_i = 0, x_f = 0;
    double abort_below = -std::numeric_limits<double>::infinity();
    const std::vector<double>* warm_dual = nullptr;
};

// 2D endpoint sweep with weak-duality pruning. `solve_cell` runs the full
// dual decomposition for one (x_i, x_f) cell; `bound` evaluates the cell's
// dual function at a feasible dual vector, an upper bound on the cell's
// primal value. Cells whose bound cannot beat the incumbent are skipped.
// Deterministic for any thread count: cells are processed in fixed-size
// blocks against the block-start incumbent.
template <class Sol>
Sol endpoint_search(const Scenario& sc, const SolverOptions& opt,
                    const std::function<Sol(const CellRequest&)>& solve_cell,
                    const std::function<double(double, double,
                                               const DualVector&)>& bound,
                    int* cells_solved = nullptr, int* cells_pruned = nullptr) {
    const double w1 = sc.layout.positions.front();
    const double wK = sc.layout.positions.back();
    const double reach = sc.v_max * sc.horizon;

    struct Cell {
        double x_i, x_f;
        double bound_value;
        int index;
    };

    auto enumerate = [&](double lo_i, double hi_i, double lo_f, double hi_f,
                         int points) {
        std::vector<Cell> cells;
        std::vector<double> xi(points), xf(points);
        for (int i = 0; i < points; ++i) {
            xi[i] = points > 1 ? lo_i + (hi_i - lo_i) * i / (points - 1) : lo_i;
            xf[i] = points > 1 ? lo_f + (hi_f - lo_f) * i / (points - 1) : lo_f;
        }
        int idx = 0;
        for (int i = 0; i < points; ++i)
            for (int j = 0; j < points; ++j) {
                if (xf[j] < xi[i] - 1e-12) continue;
                const double span = std::max(0.0, xf[j] - xi[i]);
                if (span > reach * (1 + 1e-9)) continue;
                cells.push_back(Cell{xi[i], std::min(xf[j], xi[i] + reach),
                                     0.0, idx++});
            }
        return cells;
    };

    Sol best{};
    bool have_best = false;
    DualVector bound_dual;
    int solved = 0, pruned = 0;

    // seed the incumbent so the bound pass can prune from the start
    auto try_seed = [&](double xi, double xf) {
        if (have_best) return;
        if (xf < xi || xf - xi > reach * (1 + 1e-9)) return;
        try {
            best = solve_cell(CellRequest{xi, xf,
                                          -std::numeric_limits<double>::infinity(),
                                          nullptr});
            have_best = true;
            bound_dual = best.dual;
            ++solved;
        } catch (const SolverError&) {
        }
    };

    auto sweep = [&](std::vector<Cell> cells) {
        if (cells.empty()) return;
        // bound pass with the incumbent dual (or none on the cold start)
        if (!bound_dual.weights.empty()) {
            parallel_for(
                cells.size(),
                [&](std::size_t i) {
                    try {
                        cells[i].bound_value = bound(cells[i].x_i, cells[i].x_f,
                                                     bound_dual);
                    } catch (const SolverError&) {
                        cells[i].bound_value = -std::numeric_limits<double>::infinity();
                    }
                },
                opt.parallel);
        } else {
            for (auto& c : cells)
                c.bound_value = std::numeric_limits<double>::infinity();
        }
        std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
            if (a.bound_value != b.bound_value) return a.bound_value > b.bound_value;
            return a.index < b.index;
        });

        const int block = std::max(2 * max_threads(), 4);
        std::vector<Sol> sols(block);
        std::vector<char> ok(block);
        for (std::size_t base = 0; base < cells.size(); base += block) {
            const std::size_t hi = std::min(cells.size(), base + block);
            const double incumbent =
                have_best ? best.sum_rate : -std::numeric_limits<double>::infinity();
            std::size_t n = hi - base;
            parallel_for(
                n,
                [&](std::size_t b) {
                    const Cell& c = cells[base + b];
                    ok[b] = 0;
                    if (c.bound_value <= incumbent * (1 + 1e-12) + 1e-15 &&
                        c.bound_value != std::numeric_limits<double>::infinity())
                        return;
                    try {
                        // losing cells abort once their dual value drops
                        // below what the incumbent already achieves
                        sols[b] = solve_cell(CellRequest{
                            c.x_i, c.x_f,
                            incumbent - 1e-9 * std::max(1.0, std::abs(incumbent)),
                            have_best ? &bound_dual.weights : nullptr});
                        ok[b] = 1;
                    } catch (const SolverError&) {
                    }
                },
                opt.parallel);
            for (std::size_t b = 0; b < n; ++b) {
                if (!ok[b]) {
                    ++pruned;
                    continue;
                }
                ++solved;
                bool better = !have_best;
                if (have_best) {
                    const double eps = 1e-9 * std::max(1.0, best.sum_rate);
                    if (sols[b].sum_rate > best.sum_rate + eps) {
                        better = true;
                    } else if (sols[b].sum_rate > best.sum_rate - eps) {
                        // value tie: prefer the shorter flight span
                        better = (sols[b].x_final - sols[b].x_initial) <
                                 (best.x_final - best.x_initial) - 1e-12;
                    }
                }
                if (better) {
                    best = sols[b];
                    have_best = true;
                    bound_dual = best.dual;
                }
            }
        }
    };

    try_seed(w1, std::min(wK, w1 + reach));
    try_seed(0.5 * (w1 + wK), 0.5 * (w1 + wK));
    try_seed(w1, w1);

    sweep(enumerate(w1, wK, w1, wK, opt.endpoint_points));
    if (!have_best) throw SolverError("endpoint search: no feasible cell");

    if (opt.endpoint_refine && opt.endpoint_points > 1) {
        const double step = (wK - w1) / (opt.endpoint_points - 1);
        const double xi0 = best.x_initial, xf0 = best.x_final;
        auto cells = enumerate(std::max(w1, xi0 - step), std::min(wK, xi0 + step),
                               std::max(w1, xf0 - step), std::min(wK, xf0 + step),
                               9);
        sweep(std::move(cells));
    }

    if (cells_solved) *cells_solved = solved;
    if (cells_pruned) *cells_pruned = pruned;
    return best;
}

}  // namespace uavmac::detail
