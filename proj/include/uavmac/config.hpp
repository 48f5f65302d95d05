#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavmac/channel.hpp"

namespace uavmac {

enum class Scheme { noma, fdma, tdma };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

// Problem instance shared by all solvers.
struct Scenario {
    UserLayout layout;
    ChannelParams channel;
    double v_max = 20.0;    // m/s
    double horizon = 100.0; // T [s]

    int K() const { return layout.size(); }
    // P h_k(x) / sigma^2
    double snr_gain(int k, double x) const;
    void validate(int min_users = 2) const;
};

// Grid sizes and tolerances for the dual-decomposition solvers.
struct SolverOptions {
    int endpoint_points = 41;      // per axis of the 2D endpoint search
    bool endpoint_refine = true;   // one local pass at a quarter step
    int hover_divisions = 400;     // hover search step = (x_F - x_I)/divisions
    int quad_panels = 256;         // Simpson subintervals over the leg
    double ellipsoid_tol = 1e-5;
    int ellipsoid_iter_factor = 500;  // max iterations = factor * K^2
    double near_tie_tol = 1e-6;       // hover maximizer window [bps/Hz]
    double tie_rel_tol = 1e-4;        // dual tie grouping, relative to max
    double hover_candidate_window = 1e-4;  // reconstruction candidate window
    double gap_tol = 1e-3;            // acceptable |dual - primal| [bps/Hz]
    double eta_tol = 1e-12;           // bandwidth bisection |sum b - 1| target
    double hover_duration_floor = 1e-6;  // [s], for reported hover counts
    bool full_permutations = false;   // enumerate every tied decoding order
    bool parallel = true;             // OpenMP over grid cells / profiles
};

struct OutputOptions {
    std::string dir = "out";
    double csv_step = 1.0;  // trajectory/schedule sampling step [s]
};

// Whole config file: scenario + knobs + scheme + sweep size.
struct ScenarioConfig {
    Scenario scenario;
    SolverOptions solver;
    OutputOptions output;
    std::optional<Scheme> scheme;
    int profile_count = 21;  // boundary sweep size for K = 2
};

// Parses the key/value config with [section] headers; dB/dBm values carry
// unit suffixes and are converted to linear/watts here. Unknown keys and
// invariant violations throw ConfigError with the field path.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

}  // namespace uavmac
