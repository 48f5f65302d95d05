#include "uavmac/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavmac/errors.hpp"
#include "uavmac/exec.hpp"
#include "uavmac/experiments.hpp"
#include "uavmac/solution.hpp"

namespace uavmac::cli {

namespace {

std::vector<double> parse_alpha(const std::string& text, int K) {
    std::vector<double> alpha;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) alpha.push_back(std::stod(item));
    if (static_cast<int>(alpha.size()) != K)
        throw ConfigError("--alpha: expected " + std::to_string(K) + " entries");
    double sum = 0;
    for (double a : alpha) {
        if (a < 0) throw ConfigError("--alpha: entries must be >= 0");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("--alpha: entries must sum to 1");
    // remove the sub-1e-9 ingestion slack so downstream invariants hold exactly
    for (double& a : alpha) a /= sum;
    return alpha;
}

std::vector<double> equal_alpha(int K) {
    return std::vector<double>(K, 1.0 / K);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << content;
}

std::vector<RateProfile> profiles_for(const ScenarioConfig& cfg, int count) {
    const int K = cfg.scenario.K();
    if (K == 2) return boundary_profiles_k2(count);
    // K > 2: equal profile plus the axis profiles
    std::vector<RateProfile> out;
    out.push_back(RateProfile{equal_alpha(K)});
    for (int k = 0; k < K; ++k) {
        std::vector<double> a(K, 0.0);
        a[k] = 1.0;
        out.push_back(RateProfile{a});
    }
    return out;
}

Scheme required_scheme(const std::string& flag, const ScenarioConfig& cfg) {
    if (!flag.empty()) return parse_scheme(flag);
    if (cfg.scheme) return *cfg.scheme;
    throw ConfigError("scheme: pass --scheme or set it in the config");
}

int run_impl(const std::vector<std::string>& args) {
    CLI::App app{"UAV-enabled multiple access channel rate-region solver"};
    app.require_subcommand(1);

    std::string config_path, scheme_flag, alpha_flag, out_dir, benchmark_kind;
    int profile_override = 0;

    auto add_common = [&](CLI::App* cmd, bool with_alpha) {
        cmd->add_option("--config", config_path, "scenario config file")->required();
        cmd->add_option("--scheme", scheme_flag, "noma|fdma|tdma");
        cmd->add_option("--out", out_dir, "output directory override");
        if (with_alpha)
            cmd->add_option("--alpha", alpha_flag, "rate profile, comma separated");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one rate-profile point");
    add_common(solve, true);
    CLI::App* sweep = app.add_subcommand("sweep", "trace the region boundary");
    add_common(sweep, false);
    sweep->add_option("--profiles", profile_override, "boundary profile count");
    CLI::App* bench = app.add_subcommand("benchmark", "run a benchmark scheme");
    add_common(bench, true);
    bench->add_option("--kind", benchmark_kind, "successive|static")->required();
    CLI::App* oracle = app.add_subcommand("oracle", "two-user HFH brute force");
    add_common(oracle, true);
    CLI::App* report = app.add_subcommand("report", "region nesting report");
    add_common(report, false);
    report->add_option("--profiles", profile_override, "boundary profile count");

    std::vector<const char*> argv;
    argv.push_back("uavmac");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    apply_thread_env();
    const ScenarioConfig cfg = load_config(config_path);
    const Scenario& sc = cfg.scenario;
    const SolverOptions& opt = cfg.solver;
    const std::string dir = out_dir.empty() ? cfg.output.dir : out_dir;
    std::filesystem::create_directories(dir);
    const double step = cfg.output.csv_step;

    if (*solve) {
        const Scheme scheme = required_scheme(scheme_flag, cfg);
        const std::vector<double> alpha =
            alpha_flag.empty() ? equal_alpha(sc.K()) : parse_alpha(alpha_flag, sc.K());
        double sum_rate = 0, gap = 0, verr = 0;
        switch (scheme) {
            case Scheme::noma: {
                const NomaSolution s = solve_p1(alpha, sc, opt);
                write_file(dir + "/solution.json", solution_json(s, alpha, sc));
                write_trajectory_csv(s.shf.to_piecewise(), dir + "/trajectory.csv", step);
                write_schedule_csv(s, sc, dir + "/schedule.csv", step);
                sum_rate = s.sum_rate;
                gap = s.duality_gap;
                verr = validate_solution(s, alpha, sc, opt);
                break;
            }
            case Scheme::fdma: {
                const FdmaSolution s = solve_p2(alpha, sc, opt);
                write_file(dir + "/solution.json", solution_json(s, alpha, sc));
                write_trajectory_csv(s.shf.to_piecewise(), dir + "/trajectory.csv", step);
                write_schedule_csv(s, sc, dir + "/schedule.csv", step);
                sum_rate = s.sum_rate;
                gap = s.duality_gap;
                verr = validate_solution(s, alpha, sc, opt);
                break;
            }
            case Scheme::tdma: {
                const TdmaSolution s = solve_p3(alpha, sc, opt);
                write_file(dir + "/solution.json", solution_json(s, alpha, sc));
                write_trajectory_csv(s.shf.to_piecewise(), dir + "/trajectory.csv", step);
                write_schedule_csv(s, sc, dir + "/schedule.csv", step);
                sum_rate = s.sum_rate;
                gap = s.duality_gap;
                verr = validate_solution(s, alpha, sc, opt);
                break;
            }
        }
        if (verr > 1e-6)
            throw SolverError("solution self-validation failed: residual " +
                              std::to_string(verr));
        std::printf("scheme=%s R=%.12g gap=%.3g files=%s/{solution.json,trajectory.csv,schedule.csv}\n",
                    scheme_name(scheme).c_str(), sum_rate, gap, dir.c_str());
        return 0;
    }

    if (*sweep) {
        const Scheme scheme = required_scheme(scheme_flag, cfg);
        const int count = profile_override > 0 ? profile_override : cfg.profile_count;
        const RegionBoundary rb =
            pareto_sweep(scheme, profiles_for(cfg, count), sc, opt);
        const std::string path = dir + "/region_" + scheme_name(scheme) + ".csv";
        write_region_csv(rb, path);
        for (const auto& err : rb.errors)
            std::fprintf(stderr, "profile failed: %s\n", err.c_str());
        std::printf("scheme=%s points=%zu file=%s\n", scheme_name(scheme).c_str(),
                    rb.points.size(), path.c_str());
        return rb.errors.empty() ? 0 : 3;
    }

    if (*bench) {
        const Scheme scheme = required_scheme(scheme_flag, cfg);
        const std::vector<double> alpha =
            alpha_flag.empty() ? equal_alpha(sc.K()) : parse_alpha(alpha_flag, sc.K());
        BenchmarkResult res;
        if (benchmark_kind == "successive")
            res = benchmark_successive_hover(scheme, alpha, sc, opt);
        else if (benchmark_kind == "static")
            res = benchmark_static_hover(scheme, alpha, sc, opt);
        else
            throw ConfigError("--kind: expected successive|static");
        nlohmann::ordered_json j;
        j["scheme"] = scheme_name(scheme);
        j["benchmark"] = benchmark_kind;
        j["alpha"] = alpha;
        j["rates"] = res.rates;
        j["sum_rate"] = res.sum_rate;
        if (benchmark_kind == "static") j["x_hover"] = res.x_hover;
        const std::string path =
            dir + "/benchmark_" + scheme_name(scheme) + "_" + benchmark_kind + ".json";
        write_file(path, j.dump(2) + "\n");
        std::printf("scheme=%s benchmark=%s R=%.12g file=%s\n",
                    scheme_name(scheme).c_str(), benchmark_kind.c_str(),
                    res.sum_rate, path.c_str());
        return 0;
    }

    if (*oracle) {
        const Scheme scheme = required_scheme(scheme_flag, cfg);
        const std::vector<double> alpha =
            alpha_flag.empty() ? equal_alpha(sc.K()) : parse_alpha(alpha_flag, sc.K());
        const double r = oracle_two_user_hfh(scheme, alpha, sc);
        nlohmann::ordered_json j;
        j["scheme"] = scheme_name(scheme);
        j["alpha"] = alpha;
        j["oracle_sum_rate"] = r;
        write_file(dir + "/oracle_" + scheme_name(scheme) + ".json", j.dump(2) + "\n");
        std::printf("%.12g\n", r);
        return 0;
    }

    if (*report) {
        const int count = profile_override > 0 ? profile_override : cfg.profile_count;
        const NestingReport rep =
            region_nesting_report(profiles_for(cfg, count), sc, opt);
        write_file(dir + "/nesting.json", nesting_report_json(rep));
        std::printf("nesting %s file=%s/nesting.json\n",
                    rep.all_ordered ? "ordered" : "VIOLATED", dir.c_str());
        return rep.all_ordered ? 0 : 4;
    }
    return 2;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_impl(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace uavmac::cli
