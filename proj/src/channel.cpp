#include "uavmac/channel.hpp"

#include <cmath>

#include "uavmac/errors.hpp"

namespace uavmac {

void ChannelParams::validate() const {
    if (!(beta0 > 0)) throw ConfigError("channel.beta0: must be > 0");
    if (!(epsilon > 0)) throw ConfigError("channel.epsilon: must be > 0");
    if (!(xi > 0 && xi < 1)) throw ConfigError("channel.xi: must be in (0,1)");
    if (!(noise_power > 0)) throw ConfigError("channel.noise: must be > 0");
    if (!(tx_power > 0)) throw ConfigError("channel.power: must be > 0");
}

void UserLayout::validate(int min_users) const {
    if (static_cast<int>(positions.size()) < min_users)
        throw ConfigError("positions: at least " + std::to_string(min_users) +
                          " user positions required");
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (positions[i] < positions[i - 1])
            throw ConfigError("positions: must be nondecreasing");
    if (!(altitude > 0)) throw ConfigError("altitude: must be > 0");
}

double elevation_angle_deg(double uav_x, double user_w, double h) {
    const double dx = uav_x - user_w;
    if (dx == 0.0) return 90.0;  // directly overhead, d = H
    const double d = std::hypot(dx, h);
    return std::asin(h / d) * 180.0 / M_PI;
}

double los_probability(double elev_deg, const ChannelParams& params) {
    return 1.0 / (1.0 + params.c_env *
                            std::exp(-params.d_env * (elev_deg - params.c_env)));
}

double channel_gain(double uav_x, double user_w, const UserLayout& layout,
                    const ChannelParams& params) {
    const double d = std::hypot(uav_x - user_w, layout.altitude);
    const double theta = elevation_angle_deg(uav_x, user_w, layout.altitude);
    const double p_los = los_probability(theta, params);
    // The two terms of the gain model collapse exactly to a convex combination.
    const double mix = p_los + params.xi * (1.0 - p_los);
    return mix * params.beta0 * std::pow(d, -params.epsilon);
}

}  // namespace uavmac
