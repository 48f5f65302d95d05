#include "uavmac/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "uavmac/errors.hpp"
#include "uavmac/numerics.hpp"

namespace uavmac {

double SpeedFreeSchedule::total() const {
    double t = 0.0;
    for (double d : hover_durations) t += d;
    return t;
}

void SpeedFreeSchedule::validate(double x_lo, double x_hi) const {
    if (hover_points.size() != hover_durations.size())
        throw std::invalid_argument("SpeedFreeSchedule: size mismatch");
    for (std::size_t i = 0; i < hover_points.size(); ++i) {
        if (i > 0 && !(hover_points[i] > hover_points[i - 1]))
            throw std::invalid_argument("SpeedFreeSchedule: points not increasing");
        if (hover_points[i] < x_lo - 1e-9 || hover_points[i] > x_hi + 1e-9)
            throw std::invalid_argument("SpeedFreeSchedule: point outside leg range");
        if (hover_durations[i] < 0)
            throw std::invalid_argument("SpeedFreeSchedule: negative duration");
    }
}

double PiecewiseLinearTrajectory::position_at(double t) const {
    if (breakpoints.empty()) throw std::invalid_argument("empty trajectory");
    if (t <= breakpoints.front().first) return breakpoints.front().second;
    if (t >= breakpoints.back().first) return breakpoints.back().second;
    auto it = std::upper_bound(
        breakpoints.begin(), breakpoints.end(), t,
        [](double v, const auto& bp) { return v < bp.first; });
    const auto& [t1, x1] = *it;
    const auto& [t0, x0] = *(it - 1);
    const double w = (t - t0) / (t1 - t0);
    return x0 + w * (x1 - x0);
}

void PiecewiseLinearTrajectory::validate(bool allow_jumps) const {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("trajectory: needs at least 2 breakpoints");
    if (breakpoints.front().first != 0.0)
        throw std::invalid_argument("trajectory: must start at t = 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const double dt = breakpoints[i].first - breakpoints[i - 1].first;
        if (allow_jumps ? dt < 0.0 : dt <= 0.0)
            throw std::invalid_argument("trajectory: times not increasing");
    }
}

bool PiecewiseLinearTrajectory::is_unidirectional(double tol) const {
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (breakpoints[i].second < breakpoints[i - 1].second - tol) return false;
    return true;
}

double PiecewiseLinearTrajectory::max_speed() const {
    double v = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const double dt = breakpoints[i].first - breakpoints[i - 1].first;
        const double dx = breakpoints[i].second - breakpoints[i - 1].second;
        v = std::max(v, std::abs(dx) / dt);
    }
    return v;
}

PiecewiseLinearTrajectory ShfTrajectory::to_piecewise() const {
    PiecewiseLinearTrajectory out;
    double t = 0.0, x = x_initial;
    out.breakpoints.emplace_back(t, x);
    auto fly_to = [&](double target) {
        if (target > x) {
            t += (target - x) / v_max;
            x = target;
            out.breakpoints.emplace_back(t, x);
        }
    };
    for (std::size_t i = 0; i < hover_points.size(); ++i) {
        if (hover_durations[i] <= 0.0) continue;
        fly_to(hover_points[i]);
        t += hover_durations[i];
        out.breakpoints.emplace_back(t, x);
    }
    fly_to(x_final);
    if (t < horizon) {
        // numerical residue of duration bookkeeping lands on the final hover
        out.breakpoints.emplace_back(horizon, x);
    }
    return out;
}

std::pair<MaxSpeedLeg, PiecewiseLinearTrajectory> decompose(
    const PiecewiseLinearTrajectory& traj, double v_max, int n_subperiods) {
    traj.validate();
    const double tol = 1e-9;
    if (!traj.is_unidirectional(1e-12))
        throw std::invalid_argument("decompose: trajectory not unidirectional");
    if (traj.max_speed() > v_max * (1.0 + tol) + 1e-300)
        throw std::invalid_argument("decompose: speed constraint violated");

    // refine breakpoints onto the uniform sub-period grid; inserting
    // breakpoints does not change the path, so the construction stays exact
    PiecewiseLinearTrajectory ref = traj;
    if (n_subperiods > 0) {
        const double T = traj.duration();
        for (int i = 1; i < n_subperiods; ++i) {
            const double t = T * i / n_subperiods;
            ref.breakpoints.emplace_back(t, traj.position_at(t));
        }
        std::sort(ref.breakpoints.begin(), ref.breakpoints.end());
        ref.breakpoints.erase(
            std::unique(ref.breakpoints.begin(), ref.breakpoints.end(),
                        [](const auto& a, const auto& b) {
                            return std::abs(a.first - b.first) < 1e-12;
                        }),
            ref.breakpoints.end());
    }

    MaxSpeedLeg leg{ref.breakpoints.front().second, ref.breakpoints.back().second,
                    v_max};

    // Speed-free remainder: each sub-period keeps its displacement but sheds
    // the max-speed share of its duration. Sub-periods flown exactly at
    // v_max contribute a position jump (zero-duration segment), which the
    // speed-free trajectory is allowed to contain.
    PiecewiseLinearTrajectory free_part;
    double t_hat = 0.0;
    free_part.breakpoints.emplace_back(0.0, ref.breakpoints.front().second);
    for (std::size_t i = 1; i < ref.breakpoints.size(); ++i) {
        const double dt = ref.breakpoints[i].first - ref.breakpoints[i - 1].first;
        const double dx = ref.breakpoints[i].second - ref.breakpoints[i - 1].second;
        const double dt_leg = v_max > 0 ? dx / v_max : 0.0;
        const double dt_free = dt - dt_leg;
        if (dt_free > 1e-12 * std::max(1.0, dt)) t_hat += dt_free;
        free_part.breakpoints.emplace_back(t_hat, ref.breakpoints[i].second);
    }
    return {leg, free_part};
}

ShfTrajectory assemble_shf(double x_i, double x_f,
                           std::vector<double> hover_points,
                           std::vector<double> hover_durations, double v_max,
                           double horizon) {
    if (hover_points.size() != hover_durations.size())
        throw std::invalid_argument("assemble_shf: size mismatch");
    if (x_f < x_i) throw std::invalid_argument("assemble_shf: x_f < x_i");
    if (v_max <= 0 && x_f > x_i)
        throw SolverError("assemble_shf: cannot reach x_f with v_max = 0");
    const double flight = v_max > 0 ? (x_f - x_i) / v_max : 0.0;
    if (flight > horizon * (1.0 + 1e-9) + 1e-12)
        throw SolverError("assemble_shf: horizon shorter than flight time");
    double prev = x_i;
    for (double p : hover_points) {
        if (p < x_i - 1e-9 || p > x_f + 1e-9 || p < prev - 1e-9)
            throw std::invalid_argument("assemble_shf: hover points not sorted inside [x_i, x_f]");
        prev = p;
    }
    const double hover_total = horizon - flight;
    double sum = 0.0;
    for (double d : hover_durations) {
        if (d < -1e-12) throw std::invalid_argument("assemble_shf: negative duration");
        sum += d;
    }
    if (std::abs(sum - hover_total) > 1e-6 * std::max(1.0, horizon))
        throw std::invalid_argument("assemble_shf: durations do not fill the horizon");
    if (sum > 0.0) {
        const double scale = hover_total / sum;  // absorb sub-1e-6 residue
        for (double& d : hover_durations) d *= scale;
    } else if (hover_total > 1e-9 * std::max(1.0, horizon)) {
        throw std::invalid_argument("assemble_shf: hover time left but no hover points");
    }
    return ShfTrajectory{x_i, x_f, std::move(hover_points),
                         std::move(hover_durations), v_max, horizon};
}

double OccupationHistogram::total() const {
    double t = 0.0;
    for (double m : mass) t += m;
    return t;
}

OccupationHistogram occupation_histogram(const PiecewiseLinearTrajectory& traj,
                                         double bin_width) {
    if (!(bin_width > 0)) throw std::invalid_argument("bin_width <= 0");
    traj.validate(true);
    double lo = traj.breakpoints.front().second, hi = lo;
    for (const auto& [t, x] : traj.breakpoints) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const int nbins = std::max(1, static_cast<int>(std::ceil((hi - lo) / bin_width - 1e-12)));
    OccupationHistogram h{lo, bin_width, std::vector<double>(nbins, 0.0)};

    auto bin_of = [&](double x) {
        int b = static_cast<int>((x - lo) / bin_width);
        return std::clamp(b, 0, nbins - 1);
    };

    for (std::size_t i = 1; i < traj.breakpoints.size(); ++i) {
        const auto& [t0, x0] = traj.breakpoints[i - 1];
        const auto& [t1, x1] = traj.breakpoints[i];
        const double dt = t1 - t0;
        if (dt <= 0) continue;
        if (x1 == x0) {
            h.mass[bin_of(x0)] += dt;
            continue;
        }
        // deposit time proportional to the overlap length in each bin
        const double a = std::min(x0, x1), b = std::max(x0, x1);
        const double inv_speed = dt / (b - a);
        for (int bin = bin_of(a); bin <= bin_of(b); ++bin) {
            const double bl = lo + bin * bin_width;
            const double br = bl + bin_width;
            const double overlap = std::min(b, br) - std::max(a, bl);
            if (overlap > 0) h.mass[bin] += overlap * inv_speed;
        }
    }
    return h;
}

double trajectory_integral(const PiecewiseLinearTrajectory& traj,
                           const std::function<double(double)>& f,
                           int panels_per_segment) {
    traj.validate(true);
    double acc = 0.0;
    for (std::size_t i = 1; i < traj.breakpoints.size(); ++i) {
        const auto& [t0, x0] = traj.breakpoints[i - 1];
        const auto& [t1, x1] = traj.breakpoints[i];
        const double dt = t1 - t0;
        if (dt <= 0) continue;
        if (x1 == x0) {
            acc += dt * f(x0);
        } else {
            // dt_per_dx * integral of f over the swept interval
            acc += dt / (x1 - x0) * simpson(f, x0, x1, panels_per_segment);
        }
    }
    return acc;
}

void write_trajectory_csv(const PiecewiseLinearTrajectory& traj,
                          const std::string& path, double sample_step) {
    if (!(sample_step > 0)) throw std::invalid_argument("sample_step <= 0");
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ConfigError("cannot open for writing: " + path);
    std::fprintf(fp, "t,x\n");
    const double T = traj.duration();
    for (double t = 0.0; t < T + sample_step * 0.5; t += sample_step) {
        const double tt = std::min(t, T);
        std::fprintf(fp, "%.12g,%.12g\n", tt, traj.position_at(tt));
        if (tt >= T) break;
    }
    std::fclose(fp);
}

}  // namespace uavmac
