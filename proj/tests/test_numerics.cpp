#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uavmac/numerics.hpp"

using namespace uavmac;

TEST_CASE("lambert w0 pinned points") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lambert_w0(-std::exp(-1.0)) == -1.0);
    CHECK_THROWS_AS(lambert_w0(-0.5), std::domain_error);
}

TEST_CASE("lambert w0 round trip on a log sweep") {
    // x from -1/e + 1e-9 up to 1e6
    const double x0 = -std::exp(-1.0) + 1e-9;
    const double w0 = lambert_w0(x0);
    CHECK(std::abs(w0 * std::exp(w0) - x0) <= 1e-12 * std::abs(x0));
    for (int i = 0; i <= 600; ++i) {
        const double x = std::pow(10.0, -8.0 + 14.0 * i / 600.0);
        const double w = lambert_w0(x);
        CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(std::abs(x), 1e-30));
    }
    // negative branch segment used by the bandwidth allocator
    for (int i = 1; i <= 500; ++i) {
        const double x = -std::exp(-1.0) * i / 501.0;
        const double w = lambert_w0(x);
        CHECK(w >= -1.0);
        CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::abs(x));
    }
}

TEST_CASE("bisect") {
    CHECK(bisect([](double x) { return x - 3; }, 0, 10, 1e-12) ==
          doctest::Approx(3.0).epsilon(1e-10));
    CHECK(bisect([](double x) { return x * x - 2; }, 0, 2, 1e-12) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1; }, 0, 1, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("simpson") {
    CHECK(simpson([](double) { return 1.0; }, 0, 1, 4) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(simpson([](double t) { return t * t; }, 0, 1, 2) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(simpson([](double t) { return t * t * t; }, 0, 2, 2) ==
          doctest::Approx(4.0).epsilon(1e-14));  // exact on cubics
    // doubling panels barely moves a smooth integral
    const auto f = [](double t) { return std::log2(1.0 + 1e5 / (1.0 + t * t)); };
    const double a = simpson(f, 0, 40, 256), b = simpson(f, 0, 40, 512);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
}

TEST_CASE("grid search clustering") {
    // constant: one cluster spanning the plateau
    auto constant = grid_search_1d([](double) { return 2.0; }, 0, 10, 0.5, 1e-9);
    CHECK(constant.maximizers.size() == 1);
    CHECK(constant.value == 2.0);

    // two symmetric bumps
    auto bumps = grid_search_1d(
        [](double x) {
            return std::exp(-(x - 2) * (x - 2)) + std::exp(-(x - 8) * (x - 8));
        },
        0, 10, 0.01, 1e-9);
    CHECK(bumps.maximizers.size() == 2);
    CHECK(bumps.maximizers[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(bumps.maximizers[1] == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(std::abs(bumps.maximizer_values[0] - bumps.maximizer_values[1]) <= 1e-9);

    // single point domain
    auto pt = grid_search_1d([](double x) { return x; }, 5, 5, 1.0, 1e-9);
    CHECK(pt.maximizers.size() == 1);
    CHECK(pt.maximizers[0] == 5.0);
}

TEST_CASE("grid search near-tie values stay within the window") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const double a = u(rng), b = u(rng), c = 10 * u(rng);
        auto res = grid_search_1d(
            [&](double x) { return a * std::sin(b * x + c); }, 0, 20, 0.005, 1e-6);
        for (double v : res.maximizer_values)
            CHECK(res.value - v <= 1e-6 + 1e-15);
    }
}
