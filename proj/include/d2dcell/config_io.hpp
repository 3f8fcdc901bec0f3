#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "d2dcell/config.hpp"

namespace d2dcell {

enum class Quantity {
    outage_bs,
    outage_drx_at_d,
    m_bar,
    m_bar_d2d,
    tau,
    tau_per_realization,
    p_d2d,
    mgf_single_bs,
    mgf_single_drx,
    mgf_cue_drx,
};

inline const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::outage_bs: return "outage_bs";
        case Quantity::outage_drx_at_d: return "outage_drx_at_d";
        case Quantity::m_bar: return "m_bar";
        case Quantity::m_bar_d2d: return "m_bar_d2d";
        case Quantity::tau: return "tau";
        case Quantity::tau_per_realization: return "tau_per_realization";
        case Quantity::p_d2d: return "p_d2d";
        case Quantity::mgf_single_bs: return "mgf_single_bs";
        case Quantity::mgf_single_drx: return "mgf_single_drx";
        case Quantity::mgf_cue_drx: return "mgf_cue_drx";
    }
    return "?";
}

inline Quantity quantity_from_name(const std::string& s) {
    for (Quantity q : {Quantity::outage_bs, Quantity::outage_drx_at_d, Quantity::m_bar,
                       Quantity::m_bar_d2d, Quantity::tau, Quantity::tau_per_realization,
                       Quantity::p_d2d, Quantity::mgf_single_bs, Quantity::mgf_single_drx,
                       Quantity::mgf_cue_drx})
        if (s == quantity_name(q)) return q;
    throw config_error("unknown quantity: " + s);
}

enum class SweepParameter { xi_db, d, lambda, rho_d_dbm };

inline const char* sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::xi_db: return "xi_db";
        case SweepParameter::d: return "d";
        case SweepParameter::lambda: return "lambda";
        case SweepParameter::rho_d_dbm: return "rho_d_dbm";
    }
    return "?";
}

struct McSettings {
    std::uint64_t runs = 0;  // 0: analytic only
    std::uint64_t seed = 1;
    int threads = 0;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::xi_db;
    std::vector<double> grid;
    std::vector<Quantity> quantities;
    std::optional<double> qos_target_outage_bs;

    void validate() const {
        if (grid.empty()) throw config_error("sweep grid must be non-empty");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw config_error("sweep grid must be strictly increasing");
        if (quantities.empty()) throw config_error("sweep quantities must be non-empty");
    }
};

// Full experiment description: network scenario plus CLI-facing settings.
// xi is normally specified in dB relative to rho_d and re-materialized when
// rho_d changes along a sweep.
struct RunConfig {
    NetworkConfig net;
    std::optional<double> xi_rel_db = 0.0;  // cleared when mode.xi_linear is set
    std::vector<Quantity> quantities{Quantity::outage_bs};
    double probe_d = 250.0;
    double mgf_s = 0.0;  // 0: defaults to 1/rho_d
    SweepSpec sweep;
    McSettings mc;

    void materialize_xi() {
        if (xi_rel_db) net.xi = net.rho_d * db_to_linear(*xi_rel_db);
    }
    double mgf_s_value() const { return mgf_s > 0 ? mgf_s : 1.0 / net.rho_d; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw config_error("");
        return x;
    } catch (...) {
        throw config_error("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x != std::floor(x)) throw config_error("config key '" + key + "': expected an integer");
    return static_cast<int>(x);
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x < 0 || x != std::floor(x))
        throw config_error("config key '" + key + "': expected a non-negative integer");
    return static_cast<std::uint64_t>(x);
}

// grid value: "a,b,c" or linspace(lo,hi,n) / logspace(lo_exp,hi_exp,n)
inline std::vector<double> parse_grid(const std::string& key, const std::string& v) {
    auto call = [&](const std::string& fn) -> std::optional<std::vector<double>> {
        if (v.rfind(fn + "(", 0) != 0 || v.back() != ')') return std::nullopt;
        auto args = split(v.substr(fn.size() + 1, v.size() - fn.size() - 2), ',');
        if (args.size() != 3) throw config_error("config key '" + key + "': " + fn + " needs 3 arguments");
        const double lo = parse_double(key, args[0]);
        const double hi = parse_double(key, args[1]);
        const int n = parse_int(key, args[2]);
        if (n < 2) throw config_error("config key '" + key + "': grid needs at least 2 points");
        std::vector<double> g(n);
        for (int i = 0; i < n; ++i) {
            const double t = lo + (hi - lo) * i / (n - 1);
            g[i] = fn == "logspace" ? std::pow(10.0, t) : t;
        }
        return g;
    };
    if (auto g = call("linspace")) return *g;
    if (auto g = call("logspace")) return *g;
    std::vector<double> g;
    for (const auto& item : split(v, ',')) g.push_back(parse_double(key, item));
    return g;
}

}  // namespace detail

// Apply one dotted key. Unknown keys are hard errors: a typo must not become a
// silently-defaulted parameter.
inline void apply_config_entry(RunConfig& rc, const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_u64;
    auto& net = rc.net;
    if (key == "cell.radius") net.geom.cell_radius = parse_double(key, value);
    else if (key == "cell.d2d_range") net.geom.d2d_range = parse_double(key, value);
    else if (key == "net.density") net.density = parse_double(key, value);
    else if (key == "radio.rho_bs_dbm") net.rho_bs = dbm_to_watts(parse_double(key, value));
    else if (key == "radio.rho_d_dbm") net.rho_d = dbm_to_watts(parse_double(key, value));
    else if (key == "radio.alpha_c") net.alpha_c = parse_double(key, value);
    else if (key == "radio.alpha_d") net.alpha_d = parse_double(key, value);
    else if (key == "mode.xi_rel_db") rc.xi_rel_db = parse_double(key, value);
    else if (key == "mode.xi_linear") {
        net.xi = parse_double(key, value);
        rc.xi_rel_db.reset();
    } else if (key == "mode.gamma_approx_n") net.gamma_approx_n = parse_int(key, value);
    else if (key == "sir.gamma_db") net.gamma = db_to_linear(parse_double(key, value));
    else if (key == "fading.m_cellular") net.fading.m_cellular = parse_int(key, value);
    else if (key == "fading.m_d2d") net.fading.m_d2d = parse_int(key, value);
    else if (key == "quad.rel_tol") net.quad.rel_tol = parse_double(key, value);
    else if (key == "quad.abs_tol") net.quad.abs_tol = parse_double(key, value);
    else if (key == "quad.max_subdivisions") net.quad.max_subdivisions = parse_int(key, value);
    else if (key == "quantities") {
        rc.quantities.clear();
        for (const auto& q : detail::split(value, ',')) rc.quantities.push_back(quantity_from_name(q));
    } else if (key == "probe.d") rc.probe_d = parse_double(key, value);
    else if (key == "mgf.s") rc.mgf_s = parse_double(key, value);
    else if (key == "sweep.parameter") {
        if (value == "xi_db") rc.sweep.parameter = SweepParameter::xi_db;
        else if (value == "d") rc.sweep.parameter = SweepParameter::d;
        else if (value == "lambda") rc.sweep.parameter = SweepParameter::lambda;
        else if (value == "rho_d_dbm") rc.sweep.parameter = SweepParameter::rho_d_dbm;
        else throw config_error("unknown sweep.parameter: " + value);
    } else if (key == "sweep.grid") rc.sweep.grid = detail::parse_grid(key, value);
    else if (key == "sweep.quantities") {
        rc.sweep.quantities.clear();
        for (const auto& q : detail::split(value, ','))
            rc.sweep.quantities.push_back(quantity_from_name(q));
    } else if (key == "sweep.qos_target_outage_bs") {
        if (value.empty()) rc.sweep.qos_target_outage_bs.reset();
        else rc.sweep.qos_target_outage_bs = parse_double(key, value);
    } else if (key == "mc.runs") rc.mc.runs = parse_u64(key, value);
    else if (key == "mc.seed") rc.mc.seed = parse_u64(key, value);
    else if (key == "mc.threads") rc.mc.threads = parse_int(key, value);
    else throw config_error("unknown config key: " + key);
}

// key = value lines, '#' comments, blank lines ignored.
inline RunConfig parse_config_text(std::istream& in, RunConfig base = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(base, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
    base.materialize_xi();
    return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file: " + path);
    return parse_config_text(f, std::move(base));
}

// --set key=value override
inline void apply_override(RunConfig& rc, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw config_error("--set expects key=value, got: " + kv);
    apply_config_entry(rc, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
    rc.materialize_xi();
}

}  // namespace d2dcell
