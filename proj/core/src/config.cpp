#include "hardy/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hardy {

namespace {

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': malformed number '" + v + "'");
    return out;
}

long to_long(const std::string& key, const std::string& v) {
    long out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': malformed integer '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

void Config::apply_line(const std::string& raw) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') return;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));

    if (key == "quad.rel_tol")
        quad.rel_tol = to_double(key, val);
    else if (key == "quad.panel_budget")
        quad.panel_budget = to_long(key, val);
    else if (key == "quad.divergence_factor")
        quad.divergence_factor = to_double(key, val);
    else if (key == "quad.divergence_doublings")
        quad.divergence_doublings = static_cast<int>(to_long(key, val));
    else if (key == "probe.lo")
        probe.lo = to_double(key, val);
    else if (key == "probe.hi")
        probe.hi = to_double(key, val);
    else if (key == "probe.points")
        probe.points = static_cast<int>(to_long(key, val));
    else if (key == "certify.tol_pos")
        certify.tol_pos = to_double(key, val);
    else if (key == "bk.eps_grid")
        bk.eps_grid = to_list(key, val);
    else if (key == "bk.y_grid")
        bk.y_grid = to_list(key, val);
    else if (key == "bk.B_lo")
        bk.B_lo = to_double(key, val);
    else if (key == "bk.B_hi")
        bk.B_hi = to_double(key, val);
    else if (key == "verify.compare_slack")
        compare_slack = to_double(key, val);
    else if (key == "jobs")
        jobs = static_cast<int>(to_long(key, val));
    else
        throw ConfigError("unknown config key '" + key + "'");
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Config cfg;
    std::string line;
    while (std::getline(in, line)) cfg.apply_line(line);
    return cfg;
}

}  // namespace hardy
