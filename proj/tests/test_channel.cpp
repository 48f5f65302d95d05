#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uavmac/channel.hpp"
#include "uavmac/errors.hpp"

using namespace uavmac;

namespace {
ChannelParams sec_v_params() {
    ChannelParams p;
    p.beta0 = 1e-3;
    p.epsilon = 2.0;
    p.xi = 0.2;
    p.c_env = 10.0;
    p.d_env = 0.6;
    p.noise_power = 1e-13;
    p.tx_power = 1.0;
    return p;
}
}  // namespace

TEST_CASE("elevation angle") {
    CHECK(elevation_angle_deg(0, 0, 250) == 90.0);
    CHECK(elevation_angle_deg(250, 0, 250) == doctest::Approx(45.0).epsilon(1e-12));
    // frozen from the closed form asin(250/sqrt(100^2+250^2)) * 180/pi
    CHECK(elevation_angle_deg(100, 0, 250) ==
          doctest::Approx(68.19859051364818).epsilon(1e-12));
    CHECK(elevation_angle_deg(-100, 0, 250) ==
          doctest::Approx(elevation_angle_deg(100, 0, 250)).epsilon(1e-14));
}

TEST_CASE("los probability") {
    const ChannelParams p = sec_v_params();
    // elevation C gives zero exponent
    CHECK(los_probability(10.0, p) == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
    CHECK(los_probability(90.0, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(los_probability(60.0, p) > los_probability(30.0, p));
    // increasing on a sweep; strictly so until the double saturates at 1
    double prev = 0.0;
    for (int d = 1; d <= 90; ++d) {
        const double v = los_probability(d, p);
        if (prev < 1.0 - 1e-12) CHECK(v > prev);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("channel gain special cases") {
    UserLayout layout{{0.0, 800.0}, 250.0};
    ChannelParams p = sec_v_params();

    // forced LoS via extreme logistic parameters: free-space special case
    ChannelParams plos1 = p;
    plos1.c_env = 1e-9;  // P_LoS -> 1 for any elevation
    plos1.d_env = 100.0;
    const double overhead = channel_gain(0.0, 0.0, layout, plos1);
    CHECK(overhead == doctest::Approx(1e-3 / (250.0 * 250.0)).epsilon(1e-9));

    // full model at x=0 toward the user at 800 m, frozen one-line oracle
    CHECK(channel_gain(0.0, 800.0, layout, p) ==
          doctest::Approx(1.3003329911586282e-09).epsilon(1e-12));
}

TEST_CASE("channel gain bounds and symmetry") {
    UserLayout layout{{0.0, 800.0}, 250.0};
    const ChannelParams p = sec_v_params();
    for (double dx : {5.0, 50.0, 333.0, 790.0}) {
        const double g_left = channel_gain(800.0 - dx, 800.0, layout, p);
        const double g_right = channel_gain(800.0 + dx, 800.0, layout, p);
        CHECK(g_left == doctest::Approx(g_right).epsilon(1e-12));
        const double d = std::hypot(dx, 250.0);
        const double fs = p.beta0 * std::pow(d, -p.epsilon);
        CHECK(g_left <= fs * (1 + 1e-12));
        CHECK(g_left >= p.xi * fs * (1 - 1e-12));
    }
    // overhead position maximizes the gain
    const double peak = channel_gain(800.0, 800.0, layout, p);
    for (double x : {700.0, 750.0, 820.0, 900.0})
        CHECK(channel_gain(x, 800.0, layout, p) < peak);
}

TEST_CASE("validation") {
    ChannelParams p = sec_v_params();
    p.xi = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    UserLayout bad{{10.0, 0.0}, 250.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    UserLayout neg{{0.0, 10.0}, -1.0};
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    UserLayout single{{0.0}, 250.0};
    CHECK_THROWS_AS(single.validate(), ConfigError);
    CHECK_NOTHROW(single.validate(1));
}
