// Timing comparison of the serial reference path versus the OpenMP-parallel
// endpoint sweep on a representative solve.

#include <chrono>
#include <cstdio>
#include <string>

#include "uavmac/exec.hpp"
#include "uavmac/experiments.hpp"

using namespace uavmac;

namespace {

Scenario four_user_scenario() {
    Scenario sc;
    sc.layout.positions = {0.0, 800.0 / 3.0, 1600.0 / 3.0, 800.0};
    sc.layout.altitude = 250.0;
    sc.v_max = 20.0;
    sc.horizon = 100.0;
    return sc;
}

template <class F>
double time_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();
    Scheme scheme = Scheme::noma;
    if (argc > 1) scheme = parse_scheme(argv[1]);

    const Scenario sc = four_user_scenario();
    const std::vector<double> alpha(4, 0.25);

    SolverOptions serial_opt;
    serial_opt.parallel = false;
    SolverOptions parallel_opt;
    parallel_opt.parallel = true;

    std::printf("benchmark scheme=%s threads=%d\n", scheme_name(scheme).c_str(),
                max_threads());

    SolveSummary s1, s2;
    const double ms_serial =
        time_ms([&] { s1 = solve_scheme(scheme, alpha, sc, serial_opt); });
    const double ms_parallel =
        time_ms([&] { s2 = solve_scheme(scheme, alpha, sc, parallel_opt); });

    std::printf("serial   : %10.1f ms  R = %.9f\n", ms_serial, s1.sum_rate);
    std::printf("parallel : %10.1f ms  R = %.9f\n", ms_parallel, s2.sum_rate);
    std::printf("speedup  : %.2fx  (results %s)\n", ms_serial / ms_parallel,
                s1.sum_rate == s2.sum_rate ? "identical" : "DIFFER");
    return s1.sum_rate == s2.sum_rate ? 0 : 1;
}
