#include "uavmac/fdma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dual_common.hpp"
#include "uavmac/ellipsoid.hpp"
#include "uavmac/errors.hpp"

namespace uavmac {

namespace {

using detail::CellGeometry;

constexpr double kInvE = 0.36787944117144232160;
constexpr double kLn2 = 0.69314718055994530942;

// phi(c) = -W(-e^-(c+1)) / (1 + W(.)) and its derivative; b_k = gain * phi.
struct Phi {
    double v;
    double dv_dc;
};

Phi phi_of(double c) {
    double z = -std::exp(-(c + 1.0));
    if (z < -kInvE + 1e-15) z = -kInvE + 1e-15;  // underflow clamp near the branch point
    const double w = lambert_w0(z);
    const double v = -w / (1.0 + w);
    return Phi{v, -v / ((1.0 + w) * (1.0 + w))};
}

// Solves sum_k gain_k phi(eta ln2 / mu_k) = 1 for eta > 0 (the T-free inner
// dual; the reported eta is divided by T to match the closed form). Bracketed
// Newton: bisection safeguards every step, tolerance on |sum b - 1|.
struct EtaSolve {
    double eta = 0;        // internal (T-free) value
    std::vector<double> b; // all K users, zeros for mu_k = 0
};

EtaSolve solve_eta(const std::vector<double>& mu, const std::vector<double>& gain,
                   double eta_tol, double warm) {
    const int K = static_cast<int>(mu.size());
    EtaSolve out;
    out.b.assign(K, 0.0);
    std::vector<int> act;
    for (int k = 0; k < K; ++k)
        if (mu[k] > 0 && gain[k] > 0) act.push_back(k);
    if (act.empty())
        throw std::invalid_argument("bandwidth_allocation: no positive dual weight");
    if (act.size() == 1) {
        out.b[act[0]] = 1.0;
        out.eta = 0.0;
        return out;
    }

    auto sum_b = [&](double eta, double* deriv) {
        double s = 0.0, d = 0.0;
        for (int k : act) {
            const Phi p = phi_of(eta * kLn2 / mu[k]);
            s += gain[k] * p.v;
            if (deriv) d += gain[k] * p.dv_dc * kLn2 / mu[k];
        }
        if (deriv) *deriv = d;
        return s;
    };

    double hi = (warm > 0 && std::isfinite(warm)) ? 2.0 * warm : 1.0;
    int guard = 0;
    while (sum_b(hi, nullptr) > 1.0) {
        hi *= 2.0;
        if (++guard > 400)
            throw SolverError("bandwidth_allocation: eta bracket failure");
    }
    double lo = 0.0;  // sum diverges as eta -> 0+
    double eta = (warm > lo && warm < hi) ? warm : 0.5 * hi;
    double f = 0.0;
    for (int it = 0; it < 200; ++it) {
        double deriv;
        f = sum_b(eta, &deriv) - 1.0;
        if (std::abs(f) <= eta_tol) break;
        if (f > 0)
            lo = eta;
        else
            hi = eta;
        double next = deriv < 0 ? eta - f / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == eta) break;  // double resolution exhausted
        eta = next;
    }
    if (std::abs(f) > 1e-9)
        throw SolverError("bandwidth_allocation: eta search did not converge");
    out.eta = eta;
    for (int k : act) out.b[k] = gain[k] * phi_of(eta * kLn2 / mu[k]).v;
    return out;
}

double rate_of(double b, double gain) {
    return b > 0 ? b * std::log2(1.0 + gain / b) : 0.0;
}

// Weighted rates and g1 at one location given cached gains.
struct PointAlloc {
    std::vector<double> b;
    std::vector<double> rates;
    double g1 = 0;
    double eta = 0;
};

PointAlloc point_alloc(const std::vector<double>& mu,
                       const std::vector<double>& gain, double eta_tol,
                       double warm) {
    PointAlloc out;
    EtaSolve es = solve_eta(mu, gain, eta_tol, warm);
    out.b = std::move(es.b);
    out.eta = es.eta;
    const int K = static_cast<int>(mu.size());
    out.rates.assign(K, 0.0);
    for (int k = 0; k < K; ++k) {
        out.rates[k] = rate_of(out.b[k], gain[k]);
        out.g1 += mu[k] * out.rates[k];
    }
    return out;
}

std::vector<double> gains_at(const Scenario& sc, double x) {
    std::vector<double> g(sc.K());
    for (int k = 0; k < sc.K(); ++k) g[k] = sc.snr_gain(k, x);
    return g;
}

struct FdmaCellEval {
    double value = 0;
    std::vector<double> rates;     // subgradient r~ at the best maximizer
    std::vector<double> leg_rates; // leg share only
    GridMaximum hover;             // g1 over the candidates
    int best_index = 0;
};

// Warm-started eta caches and coarse grids per cell, reused across
// ellipsoid iterations.
struct FdmaScratch {
    std::vector<double> eta_quad;
    std::vector<double> eta_grid;
    // coarse leg quadrature for the iteration path
    bool coarse_ready = false;
    std::vector<double> cq_x, cq_tw, eta_cq;
    std::vector<std::vector<double>> cq_gain;

    void build_coarse(const CellGeometry& cell, const Scenario& sc) {
        if (coarse_ready) return;
        coarse_ready = true;
        if (cell.quad_x.empty()) return;
        const int K = sc.K();
        const int n = 64;
        const double h = (cell.x_f - cell.x_i) / n;
        cq_x.resize(n + 1);
        cq_tw.resize(n + 1);
        cq_gain.assign(K, std::vector<double>(n + 1));
        for (int j = 0; j <= n; ++j) {
            cq_x[j] = (j == n) ? cell.x_f : cell.x_i + h * j;
            const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            cq_tw[j] = w * h / 3.0 / sc.v_max;
            for (int k = 0; k < K; ++k) cq_gain[k][j] = sc.snr_gain(k, cq_x[j]);
        }
        eta_cq.assign(n + 1, 0.0);
    }
};

// The iteration path trades the exhaustive hover scan for a coarse scan with
// a local full-grid refinement and integrates the leg on a 64-panel Simpson
// rule; the final reconstruction and the pruning bounds use the full grids.
FdmaCellEval eval_cell_fdma(const CellGeometry& cell,
                            const std::vector<double>& mu, const Scenario& sc,
                            const SolverOptions& opt, FdmaScratch& scratch,
                            bool exact = true) {
    const int K = sc.K();
    const double T = sc.horizon;
    FdmaCellEval out;
    out.leg_rates.assign(K, 0.0);
    std::vector<double> gain(K);

    if (!cell.quad_x.empty()) {
        const bool coarse = !exact && cell.quad_x.size() > 65;
        if (coarse) scratch.build_coarse(cell, sc);
        const auto& xs = coarse ? scratch.cq_x : cell.quad_x;
        const auto& tw = coarse ? scratch.cq_tw : cell.quad_tw;
        const auto& gg = coarse ? scratch.cq_gain : cell.quad_gain;
        auto& etas = coarse ? scratch.eta_cq : scratch.eta_quad;
        if (etas.size() != xs.size()) etas.assign(xs.size(), 0.0);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            for (int k = 0; k < K; ++k) gain[k] = gg[k][j];
            PointAlloc pa = point_alloc(mu, gain, opt.eta_tol, etas[j]);
            etas[j] = pa.eta;
            for (int k = 0; k < K; ++k)
                out.leg_rates[k] += tw[j] * pa.rates[k] / T;
        }
    }

    const std::size_t npts = cell.hover_x.size();
    if (scratch.eta_grid.size() != npts) scratch.eta_grid.assign(npts, 0.0);
    auto g1_at = [&](std::size_t j) {
        for (int k = 0; k < K; ++k) gain[k] = cell.hover_gain[k][j];
        PointAlloc pa = point_alloc(mu, gain, opt.eta_tol, scratch.eta_grid[j]);
        scratch.eta_grid[j] = pa.eta;
        return pa.g1;
    };

    std::size_t best = 0;
    if (exact || npts <= 64) {
        std::vector<double> g1v(npts, 0.0);
        for (std::size_t j = 0; j < npts; ++j) g1v[j] = g1_at(j);
        out.hover = cluster_maxima(cell.hover_x, g1v, opt.near_tie_tol,
                                   cell.hover_merge_dist);
        for (std::size_t j = 1; j < npts; ++j)
            if (g1v[j] > g1v[best]) best = j;
    } else {
        // coarse scan, then walk the full grid around the best coarse basin
        const std::size_t stride = npts / 48 + 1;
        double bv = -std::numeric_limits<double>::infinity();
        std::size_t cbest = 0;
        for (std::size_t j = 0; j < npts; j += stride) {
            const double v = g1_at(j);
            if (v > bv) {
                bv = v;
                cbest = j;
            }
        }
        const std::size_t lo = cbest > stride ? cbest - stride : 0;
        const std::size_t hi = std::min(npts - 1, cbest + stride);
        best = lo;
        double fv = -std::numeric_limits<double>::infinity();
        for (std::size_t j = lo; j <= hi; ++j) {
            const double v = g1_at(j);
            if (v > fv) {
                fv = v;
                best = j;
            }
        }
        out.hover.value = fv;
        out.hover.maximizers = {cell.hover_x[best]};
        out.hover.maximizer_values = {fv};
    }

    out.rates = out.leg_rates;
    double hover_term = 0.0;
    if (cell.hover_time > 0 && npts > 0) {
        out.best_index = static_cast<int>(best);
        for (int k = 0; k < K; ++k) gain[k] = cell.hover_gain[k][best];
        PointAlloc pa = point_alloc(mu, gain, opt.eta_tol, scratch.eta_grid[best]);
        for (int k = 0; k < K; ++k)
            out.rates[k] += cell.hover_time / T * pa.rates[k];
        hover_term = cell.hover_time / T * pa.g1;
    }
    for (int k = 0; k < K; ++k) out.value += mu[k] * out.leg_rates[k];
    out.value += hover_term;
    return out;
}

}  // namespace

double user_rate_fdma(double b, double x, int k, const Scenario& sc) {
    if (b < 0) throw std::invalid_argument("user_rate_fdma: b < 0");
    return rate_of(b, sc.snr_gain(k, x));
}

BandwidthAllocation bandwidth_allocation(const DualVector& mu, double x,
                                         const Scenario& sc, double eta_tol) {
    if (mu.size() != sc.K())
        throw std::invalid_argument("bandwidth_allocation: dual size mismatch");
    EtaSolve es = solve_eta(mu.weights, gains_at(sc, x), eta_tol, 0.0);
    // report eta in the closed form's normalization (c = eta T ln2 / mu_k)
    return BandwidthAllocation{std::move(es.b), es.eta / sc.horizon};
}

double g1(const DualVector& mu, double x, const Scenario& sc, double eta_tol) {
    if (mu.size() != sc.K())
        throw std::invalid_argument("g1: dual size mismatch");
    return point_alloc(mu.weights, gains_at(sc, x), eta_tol, 0.0).g1;
}

DualEvaluation evaluate_dual_fdma(const DualVector& mu, double x_i, double x_f,
                                  const Scenario& sc, const SolverOptions& opt) {
    if (mu.size() != sc.K())
        throw std::invalid_argument("evaluate_dual_fdma: dual size mismatch");
    for (double v : mu.weights)
        if (v < 0) throw std::invalid_argument("evaluate_dual_fdma: negative dual");
    const CellGeometry cell = detail::make_cell(sc, opt, x_i, x_f, nullptr);
    FdmaScratch scratch;
    const FdmaCellEval ev = eval_cell_fdma(cell, mu.weights, sc, opt, scratch);
    DualEvaluation out;
    out.value = ev.value;
    out.subgradient = ev.rates;
    out.maximizers = ev.hover.maximizers;
    out.max_psi = ev.hover.value;
    out.best_x = cell.hover_x.empty() ? x_i : cell.hover_x[ev.best_index];
    return out;
}

TimeshareResult timeshare_lp_fdma(
    const std::vector<std::vector<double>>& rate_tuples,
    const std::vector<double>& alpha) {
    return timeshare_lp(rate_tuples, alpha);
}

namespace {

FdmaSolution solve_cell_fdma(double x_i, double x_f,
                             const std::vector<double>& alpha,
                             const Scenario& sc, const SolverOptions& opt,
                             double abort_below,
                             const std::vector<double>* hover_candidates,
                             const std::vector<double>* warm_dual = nullptr) {
    const int K = sc.K();
    const CellGeometry cell = detail::make_cell(sc, opt, x_i, x_f, hover_candidates);
    const detail::DualSpace ds = detail::make_dual_space(alpha, K);

    detail::CandidateHarvest harvest;
    FdmaScratch scratch;
    double fast_bias = 0.0;  // exact minus fast value, tracked on abort checks
    auto oracle = [&](const std::vector<double>& reduced) {
        const double s = detail::feasibility_scale(reduced, ds.alpha_active);
        std::vector<double> scaled = reduced;
        if (s > 1e-12)
            for (double& v : scaled) v /= s;
        const std::vector<double> mu = ds.expand(scaled);
        FdmaCellEval ev = eval_cell_fdma(cell, mu, sc, opt, scratch, false);
        if (s > 1e-12 && ev.value + fast_bias < abort_below) {
            // the iteration path carries quadrature bias; only an exact
            // evaluation may discard the cell
            const double fast_value = ev.value;
            ev = eval_cell_fdma(cell, mu, sc, opt, scratch, true);
            if (ev.value < abort_below) throw detail::CellDominated{};
            fast_bias = ev.value - fast_value;
        }
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
    eopt.max_iters = opt.ellipsoid_iter_factor *
                     static_cast<int>(ds.active.size() * ds.active.size());
    const EllipsoidResult er =
        ellipsoid_minimize(oracle, detail::dual_constraints(ds), x0, radius, eopt);
    if (!er.found_feasible)
        throw SolverError("solve_p2: ellipsoid found no feasible dual");

    const std::vector<double> mu = detail::snap_dual_ties(
        ds.expand(er.best.weights), alpha, opt.tie_rel_tol);
    const FdmaCellEval final_ev = eval_cell_fdma(cell, mu, sc, opt, scratch);

    std::vector<double> cand = final_ev.hover.maximizers;
    {
        const auto extra = harvest.all_points();
        cand.insert(cand.end(), extra.begin(), extra.end());
        cand = detail::dedupe_candidates(
            std::move(cand), std::max(cell.hover_merge_dist, 1e-12),
            [&](double x) {
                return point_alloc(mu, gains_at(sc, x), opt.eta_tol, 0.0).g1;
            },
            opt.hover_candidate_window);
    }
    if (cand.empty()) cand.push_back(cell.hover_x[final_ev.best_index]);

    // r~(x_v) per hover candidate: shared leg part + local allocation
    const int G = static_cast<int>(cand.size());
    const double T = sc.horizon;
    std::vector<std::vector<double>> tuples(G);
    std::vector<std::vector<double>> allocs(G);
    for (int g = 0; g < G; ++g) {
        PointAlloc pa = point_alloc(mu, gains_at(sc, cand[g]), opt.eta_tol, 0.0);
        tuples[g] = final_ev.leg_rates;
        for (int k = 0; k < K; ++k)
            tuples[g][k] += cell.hover_time / T * pa.rates[k];
        allocs[g] = pa.b;
    }
    const TimeshareResult ts = timeshare_lp(tuples, alpha);

    FdmaSolution sol;
    sol.x_initial = x_i;
    sol.x_final = x_f;
    sol.hover_points = cand;
    sol.kappa = ts.tau;
    sol.hover_allocations = allocs;
    sol.hover_durations.assign(G, 0.0);
    for (int g = 0; g < G; ++g)
        sol.hover_durations[g] = ts.tau[g] * cell.hover_time;
    sol.rates = ts.rates;
    sol.sum_rate = ts.sum_rate;
    sol.dual = DualVector{mu};
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

FdmaSolution solve_p2_fixed_endpoints(double x_i, double x_f,
                                      const std::vector<double>& alpha,
                                      const Scenario& sc,
                                      const SolverOptions& opt,
                                      const std::vector<double>* hover_candidates) {
    sc.validate(1);
    if (static_cast<int>(alpha.size()) != sc.K())
        throw ConfigError("alpha: size mismatch");
    return solve_cell_fdma(x_i, x_f, alpha, sc, opt,
                           -std::numeric_limits<double>::infinity(),
                           hover_candidates);
}

FdmaSolution solve_p2(const std::vector<double>& alpha, const Scenario& sc,
                      const SolverOptions& opt) {
    sc.validate();
    if (static_cast<int>(alpha.size()) != sc.K())
        throw ConfigError("alpha: size mismatch");
    int solved = 0, pruned = 0;
    FdmaSolution best = detail::endpoint_search<FdmaSolution>(
        sc, opt,
        [&](const detail::CellRequest& req) {
            return solve_cell_fdma(req.x_i, req.x_f, alpha, sc, opt,
                                   req.abort_below, nullptr, req.warm_dual);
        },
        [&](double xi, double xf, const DualVector& d) {
            const CellGeometry cell = detail::make_cell(sc, opt, xi, xf, nullptr);
            FdmaScratch scratch;
            return eval_cell_fdma(cell, d.weights, sc, opt, scratch).value;
        },
        &solved, &pruned);
    best.diag.cells_solved = solved;
    best.diag.cells_pruned = pruned;
    return best;
}

}  // namespace uavmac
