#include "uavmac/solution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "uavmac/errors.hpp"

namespace uavmac {

namespace {

using json = nlohmann::ordered_json;

json scenario_json(const Scenario& sc) {
    json j;
    j["positions"] = sc.layout.positions;
    j["altitude"] = sc.layout.altitude;
    j["v_max"] = sc.v_max;
    j["horizon"] = sc.horizon;
    j["channel"] = {{"beta0", sc.channel.beta0},
                    {"epsilon", sc.channel.epsilon},
                    {"xi", sc.channel.xi},
                    {"c", sc.channel.c_env},
                    {"d", sc.channel.d_env},
                    {"noise_power", sc.channel.noise_power},
                    {"tx_power", sc.channel.tx_power}};
    return j;
}

json common_json(const char* scheme, const std::vector<double>& alpha,
                 const Scenario& sc, double x_i, double x_f,
                 const std::vector<double>& hover_points,
                 const std::vector<double>& hover_durations,
                 const std::vector<double>& rates, double sum_rate,
                 const DualVector& dual, double dual_value, double gap,
                 int hover_count, const SolveDiagnostics& diag) {
    json j;
    j["scheme"] = scheme;
    j["alpha"] = alpha;
    j["scenario"] = scenario_json(sc);
    j["x_initial"] = x_i;
    j["x_final"] = x_f;
    j["flight_time"] = sc.v_max > 0 ? (x_f - x_i) / sc.v_max : 0.0;
    json hovers = json::array();
    for (std::size_t i = 0; i < hover_points.size(); ++i)
        hovers.push_back({{"x", hover_points[i]}, {"duration", hover_durations[i]}});
    j["hover"] = hovers;
    j["hover_count"] = hover_count;
    j["rates"] = rates;
    j["sum_rate"] = sum_rate;
    j["dual"] = dual.weights;
    j["dual_value"] = dual_value;
    j["duality_gap"] = gap;
    j["diagnostics"] = {{"ellipsoid_iterations", diag.ellipsoid_iterations},
                        {"ellipsoid_converged", diag.ellipsoid_converged},
                        {"ellipsoid_certificate", diag.ellipsoid_certificate},
                        {"cells_solved", diag.cells_solved},
                        {"cells_pruned", diag.cells_pruned}};
    return j;
}

// 1-based user indices in emitted artifacts
json orders_json(const std::vector<DecodingOrder>& orders) {
    json arr = json::array();
    for (const auto& o : orders) {
        json p = json::array();
        for (int u : o.perm) p.push_back(u + 1);
        arr.push_back(p);
    }
    return arr;
}

// instantaneous per-user rates at location x for one decoding order
std::vector<double> order_point_rates(const DecodingOrder& order, double x,
                                      const Scenario& sc) {
    std::vector<double> r(sc.K(), 0.0);
    double cum = 0.0, prev = 0.0;
    for (int k = 0; k < sc.K(); ++k) {
        cum += sc.snr_gain(order.perm[k], x);
        const double lg = std::log2(1.0 + cum);
        r[order.perm[k]] = lg - prev;
        prev = lg;
    }
    return r;
}

double min_ratio(const std::vector<double>& rates,
                 const std::vector<double>& alpha) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < alpha.size(); ++k)
        if (alpha[k] > 0) r = std::min(r, rates[k] / alpha[k]);
    return r;
}

struct ScheduleWriter {
    std::FILE* fp;
    explicit ScheduleWriter(const std::string& path, int K, const char* col) {
        fp = std::fopen(path.c_str(), "w");
        if (!fp) throw ConfigError("cannot open for writing: " + path);
        std::fprintf(fp, "t,x");
        for (int k = 1; k <= K; ++k) std::fprintf(fp, ",%s_%d", col, k);
        std::fprintf(fp, "\n");
    }
    ~ScheduleWriter() { std::fclose(fp); }
    void row(double t, double x, const std::vector<double>& cols) {
        std::fprintf(fp, "%.12g,%.12g", t, x);
        for (double v : cols) std::fprintf(fp, ",%.12g", v);
        std::fprintf(fp, "\n");
    }
};

template <class F>
void sample_schedule(const ShfTrajectory& shf, double step, F&& emit) {
    const PiecewiseLinearTrajectory pw = shf.to_piecewise();
    const double T = shf.horizon;
    for (double t = 0.0;; t += step) {
        const double tt = std::min(t, T);
        emit(tt, pw.position_at(tt));
        if (tt >= T) break;
    }
}

}  // namespace

std::string solution_json(const NomaSolution& s, const std::vector<double>& alpha,
                          const Scenario& sc) {
    json j = common_json("noma", alpha, sc, s.x_initial, s.x_final,
                         s.hover_points, s.hover_durations, s.rates, s.sum_rate,
                         s.dual, s.dual_value, s.duality_gap, s.hover_count,
                         s.diag);
    j["orders"] = orders_json(s.orders);
    j["tau"] = s.tau;
    return j.dump(2) + "\n";
}

std::string solution_json(const FdmaSolution& s, const std::vector<double>& alpha,
                          const Scenario& sc) {
    json j = common_json("fdma", alpha, sc, s.x_initial, s.x_final,
                         s.hover_points, s.hover_durations, s.rates, s.sum_rate,
                         s.dual, s.dual_value, s.duality_gap, s.hover_count,
                         s.diag);
    j["kappa"] = s.kappa;
    j["hover_allocations"] = s.hover_allocations;
    return j.dump(2) + "\n";
}

std::string solution_json(const TdmaSolution& s, const std::vector<double>& alpha,
                          const Scenario& sc) {
    json j = common_json("tdma", alpha, sc, s.x_initial, s.x_final,
                         s.hover_points, s.hover_durations, s.rates, s.sum_rate,
                         s.dual, s.dual_value, s.duality_gap, s.hover_count,
                         s.diag);
    j["k_initial"] = s.k_initial + 1;
    j["k_final"] = s.k_final + 1;
    json segs = json::array();
    for (const auto& seg : s.schedule.flight_segments)
        segs.push_back({{"t_start", seg.t_start},
                        {"t_end", seg.t_end},
                        {"user", seg.user + 1}});
    j["flight_segments"] = segs;
    j["hover_durations_by_user"] = s.schedule.hover_durations;
    return j.dump(2) + "\n";
}

double validate_solution(const NomaSolution& s, const std::vector<double>& alpha,
                         const Scenario& sc, const SolverOptions& opt) {
    const int K = sc.K();
    const MaxSpeedLeg leg{s.x_initial, s.x_final, sc.v_max};
    const double T = sc.horizon;
    const double hover_time = T - leg.duration();
    std::vector<double> rates(K, 0.0);
    for (std::size_t g = 0; g < s.hover_points.size(); ++g) {
        for (std::size_t i = 0; i < s.orders.size(); ++i) {
            const double tau = s.tau[g][i];
            if (tau <= 0) continue;
            SpeedFreeSchedule hover{{s.hover_points[g]}, {hover_time}};
            const std::vector<double> tuple =
                vertex_rates(s.orders[i], leg, hover, sc, opt.quad_panels);
            for (int k = 0; k < K; ++k) rates[k] += tau * tuple[k];
        }
    }
    double err = 0.0;
    for (int k = 0; k < K; ++k) err = std::max(err, std::abs(rates[k] - s.rates[k]));
    err = std::max(err, std::abs(min_ratio(rates, alpha) - s.sum_rate));
    return err;
}

double validate_solution(const FdmaSolution& s, const std::vector<double>& alpha,
                         const Scenario& sc, const SolverOptions& opt) {
    const int K = sc.K();
    const double T = sc.horizon;
    const double leg_time = sc.v_max > 0 ? (s.x_final - s.x_initial) / sc.v_max : 0.0;
    const double hover_time = T - leg_time;
    std::vector<double> rates(K, 0.0);
    // leg share: optimal allocation follows the closed form at x(t)
    if (leg_time > 0) {
        for (int k = 0; k < K; ++k) {
            if (s.dual[k] <= 0) continue;
            rates[k] = simpson(
                           [&](double x) {
                               const BandwidthAllocation ba =
                                   bandwidth_allocation(s.dual, x, sc, opt.eta_tol);
                               return user_rate_fdma(ba.fractions[k], x, k, sc);
                           },
                           s.x_initial, s.x_final, 64) /
                       sc.v_max / T;
        }
    }
    for (std::size_t g = 0; g < s.hover_points.size(); ++g) {
        if (s.kappa[g] <= 0) continue;
        for (int k = 0; k < K; ++k)
            rates[k] += s.kappa[g] * hover_time / T *
                        user_rate_fdma(s.hover_allocations[g][k], s.hover_points[g],
                                       k, sc);
    }
    double err = 0.0;
    for (int k = 0; k < K; ++k) err = std::max(err, std::abs(rates[k] - s.rates[k]));
    err = std::max(err, std::abs(min_ratio(rates, alpha) - s.sum_rate));
    return err;
}

double validate_solution(const TdmaSolution& s, const std::vector<double>& alpha,
                         const Scenario& sc, const SolverOptions& opt) {
    (void)opt;
    const int K = sc.K();
    const double T = sc.horizon;
    std::vector<double> rates(K, 0.0);
    for (const auto& seg : s.schedule.flight_segments) {
        const double xa = s.x_initial + sc.v_max * seg.t_start;
        const double xb = s.x_initial + sc.v_max * seg.t_end;
        if (xb <= xa) continue;
        rates[seg.user] += simpson(
                               [&](double x) {
                                   return std::log2(1.0 + sc.snr_gain(seg.user, x));
                               },
                               xa, xb, 64) /
                           sc.v_max / T;
    }
    for (int k = 0; k < K; ++k)
        rates[k] += s.schedule.hover_durations[k] / T *
                    std::log2(1.0 + sc.snr_gain(k, sc.layout.positions[k]));
    double err = 0.0;
    for (int k = 0; k < K; ++k) err = std::max(err, std::abs(rates[k] - s.rates[k]));
    err = std::max(err, std::abs(min_ratio(rates, alpha) - s.sum_rate));
    return err;
}

void write_schedule_csv(const NomaSolution& s, const Scenario& sc,
                        const std::string& path, double step) {
    ScheduleWriter w(path, sc.K(), "rate");
    const int I = static_cast<int>(s.orders.size());
    // order usage fraction over the whole horizon
    std::vector<double> f(I, 0.0);
    for (const auto& row : s.tau)
        for (int i = 0; i < I; ++i) f[i] += row[i];
    // per-hover order fractions
    std::vector<std::vector<double>> hover_frac(s.tau.size(),
                                                std::vector<double>(I, 0.0));
    for (std::size_t g = 0; g < s.tau.size(); ++g) {
        double tot = 0;
        for (int i = 0; i < I; ++i) tot += s.tau[g][i];
        for (int i = 0; i < I; ++i)
            hover_frac[g][i] = tot > 0 ? s.tau[g][i] / tot : (i == 0 ? 1.0 : 0.0);
    }
    // hover time windows along the SHF timeline
    struct Window {
        double t0, t1;
        std::size_t g;
    };
    std::vector<Window> windows;
    double t = 0.0, x = s.x_initial;
    for (std::size_t g = 0; g < s.hover_points.size(); ++g) {
        if (s.hover_durations[g] <= 0) continue;
        t += sc.v_max > 0 ? (s.hover_points[g] - x) / sc.v_max : 0.0;
        x = s.hover_points[g];
        windows.push_back(Window{t, t + s.hover_durations[g], g});
        t += s.hover_durations[g];
    }
    sample_schedule(s.shf, step, [&](double tt, double xx) {
        const std::vector<double>* frac = &f;
        for (const auto& wdw : windows)
            if (tt >= wdw.t0 && tt < wdw.t1) {
                frac = &hover_frac[wdw.g];
                break;
            }
        std::vector<double> cols(sc.K(), 0.0);
        for (int i = 0; i < I; ++i) {
            if ((*frac)[i] <= 0) continue;
            const std::vector<double> r = order_point_rates(s.orders[i], xx, sc);
            for (int k = 0; k < sc.K(); ++k) cols[k] += (*frac)[i] * r[k];
        }
        w.row(tt, xx, cols);
    });
}

void write_schedule_csv(const FdmaSolution& s, const Scenario& sc,
                        const std::string& path, double step) {
    ScheduleWriter w(path, sc.K(), "b");
    sample_schedule(s.shf, step, [&](double tt, double xx) {
        // at a stored hover point use its stored allocation
        for (std::size_t g = 0; g < s.hover_points.size(); ++g) {
            if (s.hover_durations[g] > 0 && std::abs(xx - s.hover_points[g]) < 1e-9) {
                w.row(tt, xx, s.hover_allocations[g]);
                return;
            }
        }
        const BandwidthAllocation ba = bandwidth_allocation(s.dual, xx, sc);
        w.row(tt, xx, ba.fractions);
    });
}

void write_schedule_csv(const TdmaSolution& s, const Scenario& sc,
                        const std::string& path, double step) {
    ScheduleWriter w(path, sc.K(), "rho");
    // absolute-time windows: hovers interleaved with flight segments
    struct Window {
        double t0, t1;
        int user;
    };
    std::vector<Window> windows;
    {
        double t = 0.0, x = s.x_initial;
        std::size_t h = 0;
        auto flush_flight_until = [&](double x_to) {
            if (sc.v_max <= 0 || x_to <= x) return;
            for (const auto& seg : s.schedule.flight_segments) {
                const double xa = s.x_initial + sc.v_max * seg.t_start;
                const double xb = s.x_initial + sc.v_max * seg.t_end;
                const double a = std::max(xa, x), b = std::min(xb, x_to);
                if (b <= a) continue;
                windows.push_back(Window{t + (a - x) / sc.v_max,
                                         t + (b - x) / sc.v_max, seg.user});
            }
            t += (x_to - x) / sc.v_max;
            x = x_to;
        };
        for (h = 0; h < s.hover_points.size(); ++h) {
            if (s.hover_durations[h] <= 0) continue;
            flush_flight_until(s.hover_points[h]);
            int user = 0;
            for (int k = 0; k < sc.K(); ++k)
                if (sc.layout.positions[k] == s.hover_points[h]) user = k;
            windows.push_back(Window{t, t + s.hover_durations[h], user});
            t += s.hover_durations[h];
        }
        flush_flight_until(s.x_final);
    }
    sample_schedule(s.shf, step, [&](double tt, double xx) {
        std::vector<double> cols(sc.K(), 0.0);
        for (const auto& wdw : windows)
            if (tt >= wdw.t0 && tt < wdw.t1) {
                cols[wdw.user] = 1.0;
                break;
            }
        if (tt >= s.shf.horizon && !windows.empty())
            cols[windows.back().user] = 1.0;
        w.row(tt, xx, cols);
    });
}

void write_region_csv(const RegionBoundary& boundary, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ConfigError("cannot open for writing: " + path);
    if (!boundary.points.empty()) {
        const std::size_t K = boundary.points.front().alpha.size();
        for (std::size_t k = 1; k <= K; ++k) std::fprintf(fp, "alpha_%zu,", k);
        for (std::size_t k = 1; k <= K; ++k) std::fprintf(fp, "r_%zu,", k);
        std::fprintf(fp, "R\n");
        for (const auto& p : boundary.points) {
            for (double a : p.alpha) std::fprintf(fp, "%.12g,", a);
            for (double r : p.rates) std::fprintf(fp, "%.12g,", r);
            std::fprintf(fp, "%.12g\n", p.sum_rate);
        }
    }
    std::fclose(fp);
}

std::string nesting_report_json(const NestingReport& report) {
    json j;
    j["all_ordered"] = report.all_ordered;
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"alpha", r.alpha},
                        {"r_noma", r.r_noma},
                        {"r_fdma", r.r_fdma},
                        {"r_tdma", r.r_tdma},
                        {"margin_fdma", r.margin_fdma},
                        {"margin_tdma", r.margin_tdma},
                        {"ordered", r.ordered}});
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

}  // namespace uavmac
