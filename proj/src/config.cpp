#include "uavmac/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "uavmac/errors.hpp"

namespace uavmac {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::noma: return "noma";
        case Scheme::fdma: return "fdma";
        case Scheme::tdma: return "tdma";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "noma") return Scheme::noma;
    if (name == "fdma") return Scheme::fdma;
    if (name == "tdma") return Scheme::tdma;
    throw ConfigError("scheme: expected noma|fdma|tdma, got '" + name + "'");
}

double Scenario::snr_gain(int k, double x) const {
    return channel.tx_power *
           channel_gain(x, layout.positions[k], layout, channel) /
           channel.noise_power;
}

void Scenario::validate(int min_users) const {
    layout.validate(min_users);
    channel.validate();
    if (v_max < 0) throw ConfigError("v_max: must be >= 0");
    if (!(horizon > 0)) throw ConfigError("horizon: must be > 0");
}

namespace {

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// number with optional unit suffix: dB -> linear ratio, dBm -> watts
double parse_value(const std::string& key, const std::string& raw) {
    std::istringstream in(trim(raw));
    double v;
    if (!(in >> v)) throw ConfigError(key + ": not a number: '" + raw + "'");
    std::string unit;
    in >> unit;
    std::string rest;
    if (in >> rest) throw ConfigError(key + ": trailing content: '" + raw + "'");
    if (unit.empty() || unit == "m" || unit == "s" || unit == "m/s" ||
        unit == "W")
        return v;
    if (unit == "mW") return v * 1e-3;
    if (unit == "dB") return std::pow(10.0, v / 10.0);
    if (unit == "dBm") return std::pow(10.0, (v - 30.0) / 10.0);
    throw ConfigError(key + ": unknown unit '" + unit + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(key + ": empty list item");
        out.push_back(parse_value(key, item));
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

int parse_int(const std::string& key, const std::string& raw) {
    const double v = parse_value(key, raw);
    const int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 1e-9) throw ConfigError(key + ": expected an integer");
    return i;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected a boolean");
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    std::map<std::string, Entry> entries;
    {
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) +
                                      ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            if (!section.empty()) key = section + "." + key;
            if (entries.count(key))
                throw ConfigError(key + ": duplicate key (line " +
                                  std::to_string(lineno) + ")");
            entries[key] = Entry{trim(line.substr(eq + 1)), lineno};
        }
    }

    auto take = [&](const std::string& key) -> const std::string* {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second.value;
    };

    ScenarioConfig cfg;
    Scenario& sc = cfg.scenario;

    if (const auto* v = take("positions"))
        sc.layout.positions = parse_list("positions", *v);
    else
        throw ConfigError("positions required");
    if (const auto* v = take("altitude")) sc.layout.altitude = parse_value("altitude", *v);
    if (const auto* v = take("v_max")) sc.v_max = parse_value("v_max", *v);
    if (const auto* v = take("horizon")) sc.horizon = parse_value("horizon", *v);
    if (const auto* v = take("scheme")) cfg.scheme = parse_scheme(trim(*v));

    ChannelParams& ch = sc.channel;
    if (const auto* v = take("channel.beta0")) ch.beta0 = parse_value("channel.beta0", *v);
    if (const auto* v = take("channel.epsilon")) ch.epsilon = parse_value("channel.epsilon", *v);
    if (const auto* v = take("channel.xi")) ch.xi = parse_value("channel.xi", *v);
    if (const auto* v = take("channel.c")) ch.c_env = parse_value("channel.c", *v);
    if (const auto* v = take("channel.d")) ch.d_env = parse_value("channel.d", *v);
    if (const auto* v = take("channel.noise")) ch.noise_power = parse_value("channel.noise", *v);
    if (const auto* v = take("channel.power")) ch.tx_power = parse_value("channel.power", *v);

    SolverOptions& so = cfg.solver;
    if (const auto* v = take("grids.endpoint_points")) so.endpoint_points = parse_int("grids.endpoint_points", *v);
    if (const auto* v = take("grids.endpoint_refine")) so.endpoint_refine = parse_bool("grids.endpoint_refine", *v);
    if (const auto* v = take("grids.hover_divisions")) so.hover_divisions = parse_int("grids.hover_divisions", *v);
    if (const auto* v = take("grids.quad_panels")) so.quad_panels = parse_int("grids.quad_panels", *v);
    if (const auto* v = take("grids.profiles")) cfg.profile_count = parse_int("grids.profiles", *v);
    if (const auto* v = take("tolerances.ellipsoid")) so.ellipsoid_tol = parse_value("tolerances.ellipsoid", *v);
    if (const auto* v = take("tolerances.ellipsoid_iter_factor")) so.ellipsoid_iter_factor = parse_int("tolerances.ellipsoid_iter_factor", *v);
    if (const auto* v = take("tolerances.near_tie")) so.near_tie_tol = parse_value("tolerances.near_tie", *v);
    if (const auto* v = take("tolerances.tie_rel")) so.tie_rel_tol = parse_value("tolerances.tie_rel", *v);
    if (const auto* v = take("tolerances.candidate_window")) so.hover_candidate_window = parse_value("tolerances.candidate_window", *v);
    if (const auto* v = take("tolerances.gap")) so.gap_tol = parse_value("tolerances.gap", *v);
    if (const auto* v = take("tolerances.eta")) so.eta_tol = parse_value("tolerances.eta", *v);
    if (const auto* v = take("solver.full_permutations")) so.full_permutations = parse_bool("solver.full_permutations", *v);
    if (const auto* v = take("solver.parallel")) so.parallel = parse_bool("solver.parallel", *v);
    if (const auto* v = take("output.dir")) cfg.output.dir = trim(*v);
    if (const auto* v = take("output.csv_step")) cfg.output.csv_step = parse_value("output.csv_step", *v);

    for (const auto& [key, e] : entries)
        if (!e.used)
            throw ConfigError(key + ": unknown key (line " +
                              std::to_string(e.line) + ")");

    sc.validate();
    if (so.endpoint_points < 2) throw ConfigError("grids.endpoint_points: must be >= 2");
    if (so.hover_divisions < 1) throw ConfigError("grids.hover_divisions: must be >= 1");
    if (so.quad_panels < 2) throw ConfigError("grids.quad_panels: must be >= 2");
    if (!(so.ellipsoid_tol > 0)) throw ConfigError("tolerances.ellipsoid: must be > 0");
    if (!(so.near_tie_tol > 0)) throw ConfigError("tolerances.near_tie: must be > 0");
    if (!(so.gap_tol > 0)) throw ConfigError("tolerances.gap: must be > 0");
    if (!(so.eta_tol > 0)) throw ConfigError("tolerances.eta: must be > 0");
    if (!(cfg.output.csv_step > 0)) throw ConfigError("output.csv_step: must be > 0");
    if (cfg.profile_count < 2) throw ConfigError("grids.profiles: must be >= 2");
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace uavmac
