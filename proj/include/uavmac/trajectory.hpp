#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace uavmac {

// Max-speed flight from x_start to x_end; position at leg time t is
// x_start + v_max * t.
struct MaxSpeedLeg {
    double x_start = 0.0;
    double x_end = 0.0;
    double v_max = 0.0;

    double duration() const {
        return v_max > 0 ? (x_end - x_start) / v_max : 0.0;
    }
    double position_at(double t) const { return x_start + v_max * t; }
};

// Speed-free part reduced to hover points with dwell times.
struct SpeedFreeSchedule {
    std::vector<double> hover_points;
    std::vector<double> hover_durations;

    double total() const;
    void validate(double x_lo, double x_hi) const;
};

// Breakpoint representation of x(t); linear between breakpoints.
struct PiecewiseLinearTrajectory {
    std::vector<std::pair<double, double>> breakpoints;  // (t, x), t ascending

    double duration() const {
        return breakpoints.empty() ? 0.0 : breakpoints.back().first;
    }
    double position_at(double t) const;
    void validate(bool allow_jumps = false) const;
    bool is_unidirectional(double tol = 0.0) const;
    double max_speed() const;
};

// Successive hover-and-fly trajectory: unidirectional max-speed flight from
// x_initial to x_final interrupted by hovers.
struct ShfTrajectory {
    double x_initial = 0.0;
    double x_final = 0.0;
    std::vector<double> hover_points;
    std::vector<double> hover_durations;
    double v_max = 0.0;
    double horizon = 0.0;

    double flight_time() const {
        return v_max > 0 ? (x_final - x_initial) / v_max : 0.0;
    }
    // Per-segment speed is exactly 0 or v_max; zero-duration hovers are
    // omitted from the emitted form.
    PiecewiseLinearTrajectory to_piecewise() const;
};

// Splits a speed-constrained unidirectional trajectory into a max-speed leg
// and a speed-free remainder with the same occupation measure. With
// n_subperiods = 0 the trajectory's own segments are used, which makes the
// construction exact; otherwise breakpoints are first refined onto the
// uniform n-subperiod grid.
std::pair<MaxSpeedLeg, PiecewiseLinearTrajectory> decompose(
    const PiecewiseLinearTrajectory& traj, double v_max, int n_subperiods = 0);

ShfTrajectory assemble_shf(double x_i, double x_f,
                           std::vector<double> hover_points,
                           std::vector<double> hover_durations, double v_max,
                           double horizon);

struct OccupationHistogram {
    double origin = 0.0;
    double bin_width = 0.0;
    std::vector<double> mass;  // seconds per bin

    double total() const;
};

OccupationHistogram occupation_histogram(const PiecewiseLinearTrajectory& traj,
                                         double bin_width);

// Time integral of f(x(t)) over the whole trajectory; moving segments are
// integrated in position space with composite Simpson.
double trajectory_integral(const PiecewiseLinearTrajectory& traj,
                           const std::function<double(double)>& f,
                           int panels_per_segment);

void write_trajectory_csv(const PiecewiseLinearTrajectory& traj,
                          const std::string& path, double sample_step);

}  // namespace uavmac
