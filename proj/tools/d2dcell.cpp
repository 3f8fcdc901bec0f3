// Command-line front end: single-point evaluation, parameter sweeps, the
// QoS-constrained threshold solver, Monte Carlo runs, and analytic-vs-MC
// validation. Exit codes: 0 ok, 1 usage/config, 2 numerical failure,
// 3 validation tolerance failure.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "d2dcell/config_io.hpp"
#include "d2dcell/outage.hpp"
#include "d2dcell/sweep.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string format = "csv";
    std::string out_path;
    std::uint64_t seed = 0;  // 0: keep config value
    std::uint64_t mc_runs = 0;
    bool seed_given = false;
    bool mc_given = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "config file (key = value lines)");
    cmd->add_option("--set", o.sets, "override config entries, key=value (repeatable)");
    cmd->add_option("--format", o.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--seed", o.seed, "Monte Carlo master seed")
        ->each([&](const std::string&) { o.seed_given = true; });
    cmd->add_option("--mc-runs", o.mc_runs, "Monte Carlo realization count")
        ->each([&](const std::string&) { o.mc_given = true; });
}

d2dcell::RunConfig build_config(const CommonOpts& o) {
    d2dcell::RunConfig rc;
    if (!o.config_path.empty()) rc = d2dcell::load_config_file(o.config_path);
    rc.materialize_xi();
    for (const auto& kv : o.sets) d2dcell::apply_override(rc, kv);
    if (o.seed_given) rc.mc.seed = o.seed;
    if (o.mc_given) rc.mc.runs = o.mc_runs;
    rc.net.validate();
    return rc;
}

void write_records(const std::vector<d2dcell::MetricRecord>& records, const CommonOpts& o) {
    auto emit = [&](std::ostream& os) {
        if (o.format == "json")
            d2dcell::emit_json(records, os);
        else
            d2dcell::emit_csv(records, os);
    };
    if (o.out_path.empty()) {
        emit(std::cout);
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw d2dcell::config_error("cannot open output file: " + o.out_path);
    emit(f);
}

// |analytic - mc| within max(abs_tol, rel_tol*|analytic|, 3 ci)
bool validate_records(const std::vector<d2dcell::MetricRecord>& records, double tol_abs,
                      double tol_rel) {
    bool ok = true;
    for (const auto& r : records) {
        if (!r.mc_mean) continue;
        double reference = r.analytic;
        if (std::isnan(reference)) continue;  // MC-only diagnostics have no analytic side
        const double diff = std::abs(reference - *r.mc_mean);
        const double allow =
            std::max({tol_abs, tol_rel * std::abs(reference), r.mc_ci ? 3.0 * *r.mc_ci : 0.0});
        const bool pass = diff <= allow;
        ok = ok && pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << r.quantity << "(" << r.parameter << "="
                  << r.parameter_value << ")  analytic=" << reference << " mc=" << *r.mc_mean
                  << " |diff|=" << diff << " allowed=" << allow << "\n";
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-geometry analysis of underlay D2D in a finite cell"};
    app.require_subcommand(1);

    CommonOpts eval_o, sweep_o, solve_o, sim_o, val_o;
    double solve_target = 1e-2;
    double val_tol_abs = 0.005, val_tol_rel = 0.03;
    std::string dump_path;
    std::uint64_t dump_count = 0;

    auto* cmd_eval = app.add_subcommand("eval", "evaluate quantities at a single point");
    add_common(cmd_eval, eval_o);

    auto* cmd_sweep = app.add_subcommand("sweep", "run the configured parameter sweep");
    add_common(cmd_sweep, sweep_o);

    auto* cmd_solve = app.add_subcommand("solve-xi", "solve xi for a BS outage QoS target");
    add_common(cmd_solve, solve_o);
    cmd_solve->add_option("--target", solve_target, "target BS outage probability");

    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo estimates only");
    add_common(cmd_sim, sim_o);
    cmd_sim->add_option("--dump-realizations", dump_path,
                        "write sampled realizations as JSON lines to this path");
    cmd_sim->add_option("--dump-count", dump_count, "realizations to dump (default mc runs)");

    auto* cmd_val = app.add_subcommand("validate", "analytic vs Monte Carlo with tolerances");
    add_common(cmd_val, val_o);
    cmd_val->add_option("--tol-abs", val_tol_abs, "absolute tolerance");
    cmd_val->add_option("--tol-rel", val_tol_rel, "relative tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage errors map to exit code 1
    }

    try {
        if (cmd_eval->parsed()) {
            auto rc = build_config(eval_o);
            write_records(d2dcell::evaluate_point(rc), eval_o);
        } else if (cmd_sweep->parsed()) {
            auto rc = build_config(sweep_o);
            write_records(d2dcell::run_sweep(rc), sweep_o);
        } else if (cmd_solve->parsed()) {
            auto rc = build_config(solve_o);
            auto sol = d2dcell::solve_xi_for_qos(solve_target, rc.net);
            if (sol.saturated) {
                std::cout << "saturated: outage at full admission = " << sol.achieved_outage
                          << " < target " << solve_target << "; xi = +inf\n";
            } else {
                std::cout << "xi = " << sol.xi
                          << " (xi/rho_d = " << sol.xi / rc.net.rho_d << ", "
                          << d2dcell::linear_to_db(sol.xi / rc.net.rho_d)
                          << " dB rel), achieved outage = " << sol.achieved_outage << "\n";
            }
        } else if (cmd_sim->parsed()) {
            auto rc = build_config(sim_o);
            if (!dump_path.empty()) {
                std::ofstream f(dump_path, std::ios::binary);
                if (!f) throw d2dcell::config_error("cannot open dump file: " + dump_path);
                const std::uint64_t n = dump_count ? dump_count : std::max<std::uint64_t>(rc.mc.runs, 1);
                d2dcell::dump_realizations(f, rc.net, n, rc.mc.seed);
            }
            if (rc.mc.runs == 0 && dump_path.empty())
                throw d2dcell::config_error("simulate: set --mc-runs (or mc.runs) > 0");
            if (rc.mc.runs > 0) {
                std::vector<d2dcell::MetricRecord> records;
                for (auto& rec : d2dcell::evaluate_point(rc)) {
                    rec.analytic = std::numeric_limits<double>::quiet_NaN();  // MC-only view
                    records.push_back(rec);
                }
                write_records(records, sim_o);
            }
        } else if (cmd_val->parsed()) {
            auto rc = build_config(val_o);
            if (rc.mc.runs == 0) throw d2dcell::config_error("validate: set --mc-runs > 0");
            auto records = d2dcell::evaluate_point(rc);
            if (!validate_records(records, val_tol_abs, val_tol_rel)) return 3;
        }
    } catch (const d2dcell::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
