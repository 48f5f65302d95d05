#include "uavmac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "uavmac/errors.hpp"
#include "uavmac/exec.hpp"

namespace uavmac {

std::vector<RateProfile> boundary_profiles_k2(int n) {
    if (n < 2) throw ConfigError("profiles: need at least 2");
    std::vector<RateProfile> out;
    for (int i = 0; i < n; ++i) {
        const double a1 = static_cast<double>(i) / (n - 1);
        out.push_back(RateProfile{{a1, 1.0 - a1}});
    }
    return out;
}

namespace {

SolveSummary base_summary(Scheme scheme, const std::vector<double>& alpha) {
    SolveSummary s;
    s.scheme = scheme;
    s.alpha = alpha;
    return s;
}

}  // namespace

SolveSummary summarize(const NomaSolution& s, const std::vector<double>& alpha) {
    SolveSummary out = base_summary(Scheme::noma, alpha);
    out.rates = s.rates;
    out.sum_rate = s.sum_rate;
    out.dual_value = s.dual_value;
    out.duality_gap = s.duality_gap;
    out.hover_count = s.hover_count;
    out.x_initial = s.x_initial;
    out.x_final = s.x_final;
    out.hover_points = s.hover_points;
    out.hover_durations = s.hover_durations;
    return out;
}

SolveSummary summarize(const FdmaSolution& s, const std::vector<double>& alpha) {
    SolveSummary out = base_summary(Scheme::fdma, alpha);
    out.rates = s.rates;
    out.sum_rate = s.sum_rate;
    out.dual_value = s.dual_value;
    out.duality_gap = s.duality_gap;
    out.hover_count = s.hover_count;
    out.x_initial = s.x_initial;
    out.x_final = s.x_final;
    out.hover_points = s.hover_points;
    out.hover_durations = s.hover_durations;
    return out;
}

SolveSummary summarize(const TdmaSolution& s, const std::vector<double>& alpha) {
    SolveSummary out = base_summary(Scheme::tdma, alpha);
    out.rates = s.rates;
    out.sum_rate = s.sum_rate;
    out.dual_value = s.dual_value;
    out.duality_gap = s.duality_gap;
    out.hover_count = s.hover_count;
    out.x_initial = s.x_initial;
    out.x_final = s.x_final;
    out.hover_points = s.hover_points;
    out.hover_durations = s.hover_durations;
    return out;
}

SolveSummary solve_scheme(Scheme scheme, const std::vector<double>& alpha,
                          const Scenario& sc, const SolverOptions& opt) {
    switch (scheme) {
        case Scheme::noma: return summarize(solve_p1(alpha, sc, opt), alpha);
        case Scheme::fdma: return summarize(solve_p2(alpha, sc, opt), alpha);
        case Scheme::tdma: return summarize(solve_p3(alpha, sc, opt), alpha);
    }
    throw SolverError("unknown scheme");
}

RegionBoundary pareto_sweep(Scheme scheme, const std::vector<RateProfile>& profiles,
                            const Scenario& sc, const SolverOptions& opt) {
    RegionBoundary rb;
    rb.scheme = scheme;
    for (const auto& prof : profiles) {
        try {
            const SolveSummary s = solve_scheme(scheme, prof.alpha, sc, opt);
            rb.points.push_back(BoundaryPoint{prof.alpha, s.rates, s.sum_rate,
                                              s.hover_count});
        } catch (const std::exception& e) {
            rb.errors.push_back(std::string(e.what()));
        }
    }
    return rb;
}

BenchmarkResult benchmark_successive_hover(Scheme scheme,
                                           const std::vector<double>& alpha,
                                           const Scenario& sc,
                                           const SolverOptions& opt) {
    sc.validate();
    const double w1 = sc.layout.positions.front();
    const double wK = sc.layout.positions.back();
    if (sc.v_max <= 0 || (wK - w1) / sc.v_max > sc.horizon * (1 + 1e-9))
        throw SolverError(
            "benchmark_successive_hover: horizon too short to visit all users");
    BenchmarkResult out;
    switch (scheme) {
        case Scheme::noma: {
            const NomaSolution s = solve_p1_fixed_endpoints(
                w1, wK, alpha, sc, opt, &sc.layout.positions);
            out.rates = s.rates;
            out.sum_rate = s.sum_rate;
            break;
        }
        case Scheme::fdma: {
            const FdmaSolution s = solve_p2_fixed_endpoints(
                w1, wK, alpha, sc, opt, &sc.layout.positions);
            out.rates = s.rates;
            out.sum_rate = s.sum_rate;
            break;
        }
        case Scheme::tdma: {
            const TdmaSolution s = solve_p3_fixed_endpoints(w1, wK, alpha, sc, opt);
            out.rates = s.rates;
            out.sum_rate = s.sum_rate;
            break;
        }
    }
    return out;
}

double static_rate_noma(double x, const std::vector<double>& alpha,
                        const Scenario& sc) {
    const int K = sc.K();
    std::vector<double> gain(K);
    for (int k = 0; k < K; ++k) gain[k] = sc.snr_gain(k, x);
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << K); ++mask) {
        double asum = 0, gsum = 0;
        for (int k = 0; k < K; ++k)
            if (mask & (1u << k)) {
                asum += alpha[k];
                gsum += gain[k];
            }
        if (asum <= 0) continue;
        best = std::min(best, std::log2(1.0 + gsum) / asum);
    }
    return best;
}

double static_rate_fdma(double x, const std::vector<double>& alpha,
                        const Scenario& sc) {
    const int K = sc.K();
    std::vector<double> gain(K);
    std::vector<int> act;
    for (int k = 0; k < K; ++k) {
        gain[k] = sc.snr_gain(k, x);
        if (alpha[k] > 0) act.push_back(k);
    }
    if (act.size() == 1)
        return std::log2(1.0 + gain[act[0]]) / alpha[act[0]];

    // needed bandwidth for rate target: invert b log2(1 + g/b), monotone in b
    auto needed_b = [&](double g, double target) {
        if (target <= 0) return 0.0;
        if (target >= g / std::log(2.0)) return std::numeric_limits<double>::infinity();
        double lo = 0.0, hi = 1.0;
        while (hi * std::log2(1.0 + g / hi) < target) {
            hi *= 2.0;
            if (hi > 1e12) return std::numeric_limits<double>::infinity();
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid * std::log2(1.0 + g / mid) < target)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
        }
        return 0.5 * (lo + hi);
    };
    auto feasible = [&](double R) {
        double sum = 0;
        for (int k : act) {
            sum += needed_b(gain[k], alpha[k] * R);
            if (!(sum <= 1.0)) return false;
        }
        return sum <= 1.0;
    };
    double lo = 0.0, hi = 1.0;
    while (feasible(hi)) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double static_rate_tdma(double x, const std::vector<double>& alpha,
                        const Scenario& sc) {
    double denom = 0.0;
    for (int k = 0; k < sc.K(); ++k) {
        if (alpha[k] <= 0) continue;
        denom += alpha[k] / std::log2(1.0 + sc.snr_gain(k, x));
    }
    return denom > 0 ? 1.0 / denom : 0.0;
}

BenchmarkResult benchmark_static_hover(Scheme scheme,
                                       const std::vector<double>& alpha,
                                       const Scenario& sc,
                                       const SolverOptions& opt) {
    sc.validate();
    const double w1 = sc.layout.positions.front();
    const double wK = sc.layout.positions.back();
    const int n = std::max(1, opt.hover_divisions);
    std::vector<double> xs(n + 1), vals(n + 1);
    for (int j = 0; j <= n; ++j)
        xs[j] = w1 + (wK - w1) * j / n;
    parallel_for(
        xs.size(),
        [&](std::size_t j) {
            switch (scheme) {
                case Scheme::noma: vals[j] = static_rate_noma(xs[j], alpha, sc); break;
                case Scheme::fdma: vals[j] = static_rate_fdma(xs[j], alpha, sc); break;
                case Scheme::tdma: vals[j] = static_rate_tdma(xs[j], alpha, sc); break;
            }
        },
        opt.parallel);
    std::size_t best = 0;
    for (std::size_t j = 1; j < xs.size(); ++j)
        if (vals[j] > vals[best]) best = j;
    BenchmarkResult out;
    out.sum_rate = vals[best];
    out.x_hover = xs[best];
    out.rates.resize(alpha.size());
    for (std::size_t k = 0; k < alpha.size(); ++k)
        out.rates[k] = alpha[k] * out.sum_rate;
    return out;
}

namespace {

// ----- two-user HFH oracle ----------------------------------------------
//
// Brute force over (x_I, x_F, t_I) with exact inner allocation:
//  - NOMA: the three polymatroid constraints give R in closed form;
//  - FDMA/TDMA: trace the two-user rate frontier over a weight grid (golden
//    section / winner-take-all per position), then balance the ratio on the
//    bracketing chord. Leg integrals come from prefix sums over a fine
//    position grid so each cell costs O(log #weights).

struct FrontierTables {
    int M = 0;                 // fine grid divisions
    int W = 0;                 // weight grid points
    double x0 = 0, h = 0;
    // r{1,2}p[w][j]: per-position optimal pair at weight w
    std::vector<std::vector<double>> r1p, r2p;
    // prefix trapezoid integrals over position index
    std::vector<std::vector<double>> r1i, r2i;
};

// max_b w b log2(1+g1/b) + (1-w)(1-b) log2(1+g2/(1-b)) via golden section
void fdma_point_split(double w, double g1v, double g2v, double& r1, double& r2) {
    if (w <= 0) { r1 = 0; r2 = std::log2(1.0 + g2v); return; }
    if (w >= 1) { r1 = std::log2(1.0 + g1v); r2 = 0; return; }
    auto obj = [&](double b) {
        const double ra = b > 0 ? b * std::log2(1.0 + g1v / b) : 0.0;
        const double rb = b < 1 ? (1.0 - b) * std::log2(1.0 + g2v / (1.0 - b)) : 0.0;
        return w * ra + (1.0 - w) * rb;
    };
    const double gr = 0.6180339887498949;
    double lo = 0.0, hi = 1.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = obj(c), fd = obj(d);
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo); fc = obj(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo); fd = obj(d);
        }
    }
    const double b = 0.5 * (lo + hi);
    r1 = b > 0 ? b * std::log2(1.0 + g1v / b) : 0.0;
    r2 = b < 1 ? (1.0 - b) * std::log2(1.0 + g2v / (1.0 - b)) : 0.0;
}

FrontierTables build_tables(Scheme scheme, const Scenario& sc,
                            const OracleGrids& grids) {
    FrontierTables t;
    t.M = grids.fine_divisions;
    t.W = grids.weight_points;
    const double w1 = sc.layout.positions.front();
    const double w2 = sc.layout.positions.back();
    t.x0 = w1;
    t.h = t.M > 0 ? (w2 - w1) / t.M : 0.0;
    std::vector<double> g1v(t.M + 1), g2v(t.M + 1);
    for (int j = 0; j <= t.M; ++j) {
        const double x = w1 + t.h * j;
        g1v[j] = sc.snr_gain(0, x);
        g2v[j] = sc.snr_gain(1, x);
    }
    t.r1p.assign(t.W, std::vector<double>(t.M + 1));
    t.r2p.assign(t.W, std::vector<double>(t.M + 1));
    t.r1i.assign(t.W, std::vector<double>(t.M + 1, 0.0));
    t.r2i.assign(t.W, std::vector<double>(t.M + 1, 0.0));
    parallel_for(static_cast<std::size_t>(t.W), [&](std::size_t wi) {
        const double w = static_cast<double>(wi) / (t.W - 1);
        auto& a = t.r1p[wi];
        auto& b = t.r2p[wi];
        for (int j = 0; j <= t.M; ++j) {
            if (scheme == Scheme::fdma) {
                fdma_point_split(w, g1v[j], g2v[j], a[j], b[j]);
            } else {  // TDMA: winner takes the slot
                const double v1 = w * std::log2(1.0 + g1v[j]);
                const double v2 = (1.0 - w) * std::log2(1.0 + g2v[j]);
                if (v1 >= v2) {
                    a[j] = std::log2(1.0 + g1v[j]);
                    b[j] = 0.0;
                } else {
                    a[j] = 0.0;
                    b[j] = std::log2(1.0 + g2v[j]);
                }
            }
        }
        for (int j = 1; j <= t.M; ++j) {
            t.r1i[wi][j] = t.r1i[wi][j - 1] + 0.5 * t.h * (a[j - 1] + a[j]);
            t.r2i[wi][j] = t.r2i[wi][j - 1] + 0.5 * t.h * (b[j - 1] + b[j]);
        }
    });
    return t;
}

struct PairRates {
    double r1 = 0, r2 = 0;
};

// Balance r1/a1 = r2/a2 on the piecewise frontier given by `rates_at(wi)`;
// chord interpolation between the bracketing weight grid points.
double balance_on_frontier(const std::function<PairRates(int)>& rates_at, int W,
                           const std::vector<double>& alpha) {
    const double a1 = alpha[0], a2 = alpha[1];
    if (a1 <= 0) {
        const PairRates p = rates_at(0);  // all weight on user 2
        return p.r2 / a2;
    }
    if (a2 <= 0) {
        const PairRates p = rates_at(W - 1);
        return p.r1 / a1;
    }
    auto ratio_gap = [&](const PairRates& p) { return p.r1 / a1 - p.r2 / a2; };
    int lo = 0, hi = W - 1;
    PairRates plo = rates_at(lo), phi = rates_at(hi);
    if (ratio_gap(plo) >= 0) return std::min(plo.r1 / a1, plo.r2 / a2);
    if (ratio_gap(phi) <= 0) return std::min(phi.r1 / a1, phi.r2 / a2);
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        const PairRates pm = rates_at(mid);
        if (ratio_gap(pm) < 0) {
            lo = mid;
            plo = pm;
        } else {
            hi = mid;
            phi = pm;
        }
    }
    // time-share the two frontier points to balance the ratio exactly
    const double d1 = phi.r1 - plo.r1, d2 = phi.r2 - plo.r2;
    const double den = a2 * d1 - a1 * d2;
    double best = std::max(std::min(plo.r1 / a1, plo.r2 / a2),
                           std::min(phi.r1 / a1, phi.r2 / a2));
    if (std::abs(den) > 1e-300) {
        const double th = (a1 * plo.r2 - a2 * plo.r1) / den;
        if (th >= -1e-12 && th <= 1 + 1e-12) {
            const double r1 = plo.r1 + std::clamp(th, 0.0, 1.0) * d1;
            best = std::max(best, r1 / a1);
        }
    }
    return best;
}

// Exact-ish cell evaluation without tables (for off-grid refinement).
class DirectCell {
  public:
    DirectCell(Scheme scheme, const Scenario& sc, double xi, double xf,
               int leg_nodes)
        : scheme_(scheme), sc_(sc), xi_(xi), xf_(xf) {
        const int n = std::max(leg_nodes, 2);
        if (xf > xi) {
            xs_.resize(n + 1);
            for (int j = 0; j <= n; ++j) xs_[j] = xi + (xf - xi) * j / n;
        }
    }

    PairRates rates(int wi, int W, double t_i, double t_f, double leg_scale) {
        auto it = memo_.find(wi);
        if (it == memo_.end()) {
            Entry e;
            const double w = static_cast<double>(wi) / (W - 1);
            point_rates(w, xi_, e.pi1, e.pi2);
            point_rates(w, xf_, e.pf1, e.pf2);
            if (!xs_.empty()) {
                // trapezoid over the leg nodes
                double prev1, prev2;
                point_rates(w, xs_[0], prev1, prev2);
                for (std::size_t j = 1; j < xs_.size(); ++j) {
                    double c1, c2;
                    point_rates(w, xs_[j], c1, c2);
                    const double hx = xs_[j] - xs_[j - 1];
                    e.leg1 += 0.5 * hx * (prev1 + c1);
                    e.leg2 += 0.5 * hx * (prev2 + c2);
                    prev1 = c1;
                    prev2 = c2;
                }
            }
            it = memo_.emplace(wi, e).first;
        }
        const Entry& e = it->second;
        PairRates out;
        out.r1 = t_i * e.pi1 + leg_scale * e.leg1 + t_f * e.pf1;
        out.r2 = t_i * e.pi2 + leg_scale * e.leg2 + t_f * e.pf2;
        return out;
    }

  private:
    struct Entry {
        double pi1 = 0, pi2 = 0, pf1 = 0, pf2 = 0, leg1 = 0, leg2 = 0;
    };

    void point_rates(double w, double x, double& r1, double& r2) const {
        const double g1v = sc_.snr_gain(0, x), g2v = sc_.snr_gain(1, x);
        if (scheme_ == Scheme::fdma) {
            fdma_point_split(w, g1v, g2v, r1, r2);
        } else {
            const double v1 = w * std::log2(1.0 + g1v);
            const double v2 = (1.0 - w) * std::log2(1.0 + g2v);
            if (v1 >= v2) {
                r1 = std::log2(1.0 + g1v);
                r2 = 0;
            } else {
                r1 = 0;
                r2 = std::log2(1.0 + g2v);
            }
        }
    }

    Scheme scheme_;
    const Scenario& sc_;
    double xi_, xf_;
    std::vector<double> xs_;
    std::map<int, Entry> memo_;
};

double oracle_cell_noma(const Scenario& sc, const std::vector<double>& alpha,
                        double xi, double xf, double t_i, int leg_nodes) {
    const double T = sc.horizon;
    const double t_leg = sc.v_max > 0 ? (xf - xi) / sc.v_max : 0.0;
    const double t_f = T - t_leg - t_i;
    auto cs = [&](double x, unsigned mask) {
        double g = 0;
        if (mask & 1u) g += sc.snr_gain(0, x);
        if (mask & 2u) g += sc.snr_gain(1, x);
        return std::log2(1.0 + g);
    };
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask <= 3; ++mask) {
        const double asum = (mask & 1u ? alpha[0] : 0.0) + (mask & 2u ? alpha[1] : 0.0);
        if (asum <= 0) continue;
        double integral = t_i * cs(xi, mask) + t_f * cs(xf, mask);
        if (xf > xi) {
            integral += simpson([&](double x) { return cs(x, mask); }, xi, xf,
                                std::max(leg_nodes, 2)) /
                        sc.v_max;
        }
        best = std::min(best, integral / T / asum);
    }
    return best;
}

}  // namespace

double oracle_two_user_hfh(Scheme scheme, const std::vector<double>& alpha,
                           const Scenario& sc, const OracleGrids& grids) {
    sc.validate();
    if (sc.K() != 2) throw ConfigError("oracle_two_user_hfh: needs K = 2");
    if (alpha.size() != 2) throw ConfigError("oracle_two_user_hfh: alpha size");
    const double w1 = sc.layout.positions.front();
    const double w2 = sc.layout.positions.back();
    const double T = sc.horizon;

    FrontierTables tables;
    if (scheme != Scheme::noma) tables = build_tables(scheme, sc, grids);

    const int NE = grids.endpoint_points;
    const int stride = NE > 1 ? grids.fine_divisions / (NE - 1) : 0;
    if (NE > 1 && stride * (NE - 1) != grids.fine_divisions)
        throw ConfigError("oracle grids: endpoint grid must divide the fine grid");

    double best = -std::numeric_limits<double>::infinity();
    double best_xi = w1, best_xf = w1, best_ti = 0;

    auto eval_cell = [&](double xi, double xf, int ia, int ib) {
        const double t_leg = sc.v_max > 0 ? (xf - xi) / sc.v_max
                                          : (xf > xi ? T * 2 : 0.0);
        if (t_leg > T * (1 + 1e-12)) return;
        const double slack = std::max(0.0, T - t_leg);
        const int NT = slack > 0 ? grids.t_points : 1;
        for (int ti_idx = 0; ti_idx < NT; ++ti_idx) {
            const double t_i = NT > 1 ? slack * ti_idx / (NT - 1) : 0.0;
            const double t_f = slack - t_i;
            double value;
            if (scheme == Scheme::noma) {
                value = oracle_cell_noma(sc, alpha, xi, xf, t_i, 128);
            } else {
                auto rates_at = [&](int wi) {
                    PairRates p;
                    p.r1 = (t_i * tables.r1p[wi][ia] +
                            (sc.v_max > 0
                                 ? (tables.r1i[wi][ib] - tables.r1i[wi][ia]) / sc.v_max
                                 : 0.0) +
                            t_f * tables.r1p[wi][ib]) / T;
                    p.r2 = (t_i * tables.r2p[wi][ia] +
                            (sc.v_max > 0
                                 ? (tables.r2i[wi][ib] - tables.r2i[wi][ia]) / sc.v_max
                                 : 0.0) +
                            t_f * tables.r2p[wi][ib]) / T;
                    return p;
                };
                value = balance_on_frontier(rates_at, tables.W, alpha);
            }
            if (value > best) {
                best = value;
                best_xi = xi;
                best_xf = xf;
                best_ti = t_i;
            }
        }
    };

    for (int i = 0; i < NE; ++i) {
        for (int j = i; j < NE; ++j) {
            const int ia = i * stride, ib = j * stride;
            eval_cell(w1 + (w2 - w1) * i / (NE - 1), w1 + (w2 - w1) * j / (NE - 1),
                      ia, ib);
        }
    }

    if (grids.refine && NE > 1) {
        const double step = (w2 - w1) / (NE - 1);
        const double rstep = step / 4;
        const double cxi = best_xi, cxf = best_xf;
        for (int di = -4; di <= 4; ++di) {
            const double xi = std::clamp(cxi + di * rstep, w1, w2);
            for (int dj = -4; dj <= 4; ++dj) {
                const double xf = std::clamp(cxf + dj * rstep, w1, w2);
                if (xf < xi) continue;
                const double t_leg = sc.v_max > 0 ? (xf - xi) / sc.v_max : (xf > xi ? 2 * T : 0.0);
                if (t_leg > T * (1 + 1e-12)) continue;
                const double slack = std::max(0.0, T - t_leg);
                const int NT = slack > 0 ? grids.t_points : 1;
                if (scheme == Scheme::noma) {
                    for (int ti_idx = 0; ti_idx < NT; ++ti_idx) {
                        const double t_i = NT > 1 ? slack * ti_idx / (NT - 1) : 0.0;
                        const double v = oracle_cell_noma(sc, alpha, xi, xf, t_i, 128);
                        if (v > best) best = v;
                    }
                } else {
                    DirectCell cell(scheme, sc, xi, xf, 128);
                    for (int ti_idx = 0; ti_idx < NT; ++ti_idx) {
                        const double t_i = NT > 1 ? slack * ti_idx / (NT - 1) : 0.0;
                        const double t_f = slack - t_i;
                        auto rates_at = [&](int wi) {
                            PairRates p = cell.rates(wi, tables.W, t_i, t_f,
                                                     sc.v_max > 0 ? 1.0 / sc.v_max : 0.0);
                            p.r1 /= T;
                            p.r2 /= T;
                            return p;
                        };
                        const double v = balance_on_frontier(rates_at, tables.W, alpha);
                        if (v > best) best = v;
                    }
                }
            }
        }
    }
    (void)best_ti;
    return best;
}

NestingReport region_nesting_report(const std::vector<RateProfile>& profiles,
                                    const Scenario& sc, const SolverOptions& opt,
                                    double tol) {
    NestingReport report;
    report.all_ordered = true;
    for (const auto& prof : profiles) {
        NestingRow row;
        row.alpha = prof.alpha;
        row.r_noma = solve_p1(prof.alpha, sc, opt).sum_rate;
        row.r_fdma = solve_p2(prof.alpha, sc, opt).sum_rate;
        row.r_tdma = solve_p3(prof.alpha, sc, opt).sum_rate;
        row.margin_fdma = row.r_noma - row.r_fdma;
        row.margin_tdma = row.r_fdma - row.r_tdma;
        row.ordered = row.r_tdma <= row.r_fdma + tol && row.r_fdma <= row.r_noma + tol;
        report.all_ordered = report.all_ordered && row.ordered;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace uavmac
