#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "uavmac/ellipsoid.hpp"

using namespace uavmac;

TEST_CASE("unconstrained quadratic") {
    const std::vector<double> c = {0.7, -0.3};
    auto oracle = [&](const std::vector<double>& x) {
        double v = 0;
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            v += (x[i] - c[i]) * (x[i] - c[i]);
            g[i] = 2 * (x[i] - c[i]);
        }
        return std::make_pair(v, g);
    };
    EllipsoidOptions opts;
    opts.tol = 1e-9;
    const EllipsoidResult res =
        ellipsoid_minimize(oracle, {}, {0.0, 0.0}, 10.0, opts);
    REQUIRE(res.found_feasible);
    CHECK(res.converged);
    CHECK(res.best.weights[0] == doctest::Approx(c[0]).epsilon(1e-3));
    CHECK(res.best.weights[1] == doctest::Approx(c[1]).epsilon(1e-3));
    CHECK(res.best_value <= 1e-6);
}

TEST_CASE("one dimensional with pinning equality") {
    // minimize f(x) = x with alpha x = 1 as two cuts, alpha = 0.4 -> x = 2.5
    const double alpha = 0.4;
    auto oracle = [](const std::vector<double>& x) {
        return std::make_pair(x[0], std::vector<double>{1.0});
    };
    std::vector<EllipsoidConstraint> cons;
    cons.push_back({[alpha](const std::vector<double>& x) { return alpha * x[0] - 1; },
                    [alpha](const std::vector<double>&) {
                        return std::vector<double>{alpha};
                    }});
    cons.push_back({[alpha](const std::vector<double>& x) { return 1 - alpha * x[0]; },
                    [alpha](const std::vector<double>&) {
                        return std::vector<double>{-alpha};
                    }});
    const EllipsoidResult res = ellipsoid_minimize(oracle, cons, {10.0}, 50.0, {});
    REQUIRE(res.found_feasible);
    CHECK(res.best.weights[0] == doctest::Approx(2.5).epsilon(1e-5));
}

TEST_CASE("volume shrinks monotonically at the guaranteed rate") {
    auto oracle = [](const std::vector<double>& x) {
        std::vector<double> g = {2 * x[0] + x[1], x[0] + 4 * x[1]};
        const double v = x[0] * x[0] + x[0] * x[1] + 2 * x[1] * x[1] - x[0];
        return std::make_pair(v, g);
    };
    std::vector<double> trace;
    EllipsoidOptions opts;
    opts.tol = 1e-10;
    opts.max_iters = 120;
    opts.log_det_trace = &trace;
    ellipsoid_minimize(oracle, {}, {3.0, -2.0}, 8.0, opts);
    REQUIRE(trace.size() > 20);
    // volume ratio per iteration is exp(log_det diff / 2) <= e^(-1/(2n))
    const double bound = std::exp(-1.0 / (2.0 * 2.0));
    for (std::size_t i = 1; i < trace.size(); ++i) {
        const double vol_ratio = std::exp(0.5 * (trace[i] - trace[i - 1]));
        CHECK(vol_ratio <= bound + 1e-9);
    }
}

TEST_CASE("feasibility cuts recover a feasible best point") {
    // minimize x1 + x2 subject to x >= 1 componentwise
    auto oracle = [](const std::vector<double>& x) {
        return std::make_pair(x[0] + x[1], std::vector<double>{1.0, 1.0});
    };
    std::vector<EllipsoidConstraint> cons;
    for (int i = 0; i < 2; ++i)
        cons.push_back({[i](const std::vector<double>& x) { return 1.0 - x[i]; },
                        [i](const std::vector<double>&) {
                            std::vector<double> g(2, 0.0);
                            g[i] = -1.0;
                            return g;
                        }});
    const EllipsoidResult res =
        ellipsoid_minimize(oracle, cons, {5.0, 5.0}, 20.0, {});
    REQUIRE(res.found_feasible);
    CHECK(res.best.weights[0] >= 1.0 - 1e-5);
    CHECK(res.best.weights[1] >= 1.0 - 1e-5);
    CHECK(res.best_value == doctest::Approx(2.0).epsilon(1e-4));
}
