#pragma once

#include <vector>

namespace uavmac {

// Probabilistic-LoS air-to-ground channel. All gains/powers are linear scale;
// dB/dBm conversion happens at config ingestion.
struct ChannelParams {
    double beta0 = 1e-3;         // reference channel power gain at 1 m
    double epsilon = 2.0;        // path-loss exponent
    double xi = 0.2;             // NLoS attenuation factor, in (0,1)
    double c_env = 10.0;         // logistic parameter C
    double d_env = 0.6;          // logistic parameter D, 1/degree
    double noise_power = 1e-13;  // sigma^2 [W]
    double tx_power = 1.0;       // per-user transmit power P [W]

    void validate() const;  // throws ConfigError on invariant violation
};

struct UserLayout {
    std::vector<double> positions;  // w_k [m], nondecreasing
    double altitude = 250.0;        // H [m]

    int size() const { return static_cast<int>(positions.size()); }
    void validate(int min_users = 2) const;
};

// Elevation angle seen from the user toward the UAV, in degrees; exactly 90
// when the UAV is directly overhead.
double elevation_angle_deg(double uav_x, double user_w, double h);

// Logistic LoS probability, strictly increasing in the elevation angle.
double los_probability(double elev_deg, const ChannelParams& params);

// Average channel power gain (P_LoS + xi (1 - P_LoS)) beta0 d^-epsilon.
double channel_gain(double uav_x, double user_w, const UserLayout& layout,
                    const ChannelParams& params);

}  // namespace uavmac
