#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "d2dcell/config_io.hpp"
#include "d2dcell/outage.hpp"
#include "d2dcell/simulator.hpp"

namespace d2dcell {

// One (parameter point, quantity) result row with provenance.
struct MetricRecord {
    std::string parameter;  // swept parameter name ("-" for single-point eval)
    double parameter_value = 0;
    std::string quantity;
    double analytic = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> mc_mean;
    std::optional<double> mc_ci;
    std::optional<std::uint64_t> seed;
    std::string note;
};

namespace detail {

inline bool needs_probe(Quantity q) {
    return q == Quantity::outage_drx_at_d || q == Quantity::p_d2d ||
           q == Quantity::mgf_single_drx || q == Quantity::mgf_cue_drx;
}

inline double analytic_quantity(Quantity q, const RunConfig& rc) {
    const NetworkConfig& cfg = rc.net;
    switch (q) {
        case Quantity::outage_bs: return outage_bs(cfg);
        case Quantity::outage_drx_at_d: return outage_drx(rc.probe_d, cfg);
        case Quantity::m_bar: return avg_successful_transmissions(cfg);
        case Quantity::m_bar_d2d: return avg_dues(cfg);
        case Quantity::tau: return spectrum_reuse_ratio(cfg);
        case Quantity::tau_per_realization:
            return std::numeric_limits<double>::quiet_NaN();  // Monte Carlo diagnostic only
        case Quantity::p_d2d: return p_d2d(rc.probe_d, cfg);
        case Quantity::mgf_single_bs: return mgf_single_bs(rc.mgf_s_value(), cfg).value;
        case Quantity::mgf_single_drx:
            return mgf_single_drx(rc.mgf_s_value(), rc.probe_d, cfg).value;
        case Quantity::mgf_cue_drx: return mgf_cue_drx(rc.mgf_s_value(), rc.probe_d, cfg).value;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline EstimatorResult mc_quantity(Quantity q, const RunConfig& rc) {
    McOptions opt;
    opt.n_realizations = rc.mc.runs;
    opt.seed = rc.mc.seed;
    opt.threads = rc.mc.threads;
    opt.probe_d = rc.probe_d;
    opt.s = rc.mgf_s_value();
    auto map = [&](Quantity qq) {
        switch (qq) {
            case Quantity::outage_bs: return McQuantity::outage_bs;
            case Quantity::outage_drx_at_d: return McQuantity::outage_drx_at_d;
            case Quantity::m_bar: return McQuantity::m_bar;
            case Quantity::m_bar_d2d: return McQuantity::m_bar_d2d;
            case Quantity::tau: return McQuantity::tau;
            case Quantity::tau_per_realization: return McQuantity::tau_per_realization;
            case Quantity::p_d2d: return McQuantity::p_d2d;
            case Quantity::mgf_single_bs: return McQuantity::mgf_single_bs;
            case Quantity::mgf_single_drx: return McQuantity::mgf_single_drx;
            case Quantity::mgf_cue_drx: return McQuantity::mgf_cue_drx;
        }
        throw config_error("unmapped quantity");
    };
    return estimate_metric(map(q), rc.net, opt);
}

inline void apply_sweep_value(RunConfig& rc, SweepParameter p, double v) {
    switch (p) {
        case SweepParameter::xi_db:
            rc.xi_rel_db = v;
            break;
        case SweepParameter::d:
            rc.probe_d = v;
            break;
        case SweepParameter::lambda:
            rc.net.density = v;
            break;
        case SweepParameter::rho_d_dbm:
            rc.net.rho_d = dbm_to_watts(v);
            break;
    }
    rc.materialize_xi();
}

}  // namespace detail

// Evaluate the configured quantities at the current single parameter point.
inline std::vector<MetricRecord> evaluate_point(const RunConfig& rc, const std::string& pname = "-",
                                                double pvalue = 0) {
    std::vector<MetricRecord> out;
    for (Quantity q : rc.quantities) {
        MetricRecord rec;
        rec.parameter = pname;
        rec.parameter_value = pvalue;
        rec.quantity = quantity_name(q);
        try {
            rec.analytic = detail::analytic_quantity(q, rc);
        } catch (const std::exception& e) {
            rec.note = e.what();
        }
        if (rc.mc.runs > 0) {
            EstimatorResult est = detail::mc_quantity(q, rc);
            rec.mc_mean = est.mean;
            rec.mc_ci = est.ci_halfwidth;
            rec.seed = rc.mc.seed;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

// Run the declared sweep: one record per (grid point x quantity); analytic is
// always attempted, Monte Carlo attached when mc.runs > 0. Per-point failures
// land in the row note rather than aborting the sweep. With a QoS constraint,
// xi is solved per grid point first; saturation marks the rows.
inline std::vector<MetricRecord> run_sweep(const RunConfig& base) {
    base.sweep.validate();
    std::vector<MetricRecord> out;
    const std::string pname = sweep_parameter_name(base.sweep.parameter);
    for (double v : base.sweep.grid) {
        RunConfig rc = base;
        rc.quantities = base.sweep.quantities;
        detail::apply_sweep_value(rc, base.sweep.parameter, v);
        std::string point_note;
        if (base.sweep.qos_target_outage_bs) {
            try {
                XiSolution sol = solve_xi_for_qos(*base.sweep.qos_target_outage_bs, rc.net);
                if (sol.saturated) {
                    point_note = "saturated";
                } else {
                    rc.net.xi = sol.xi;
                    rc.xi_rel_db.reset();
                }
            } catch (const std::exception& e) {
                point_note = e.what();
            }
        }
        if (point_note.empty()) {
            auto rows = evaluate_point(rc, pname, v);
            out.insert(out.end(), rows.begin(), rows.end());
        } else {
            for (Quantity q : rc.quantities) {
                MetricRecord rec;
                rec.parameter = pname;
                rec.parameter_value = v;
                rec.quantity = quantity_name(q);
                rec.note = point_note;
                out.push_back(std::move(rec));
            }
        }
    }
    return out;
}

namespace detail {

inline std::string fmt9(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

inline void emit_csv(const std::vector<MetricRecord>& records, std::ostream& os) {
    os << "parameter,quantity,analytic,mc_mean,mc_ci,seed\n";
    for (const auto& r : records) {
        os << detail::fmt9(r.parameter_value) << ',' << r.quantity << ','
           << detail::fmt9(r.analytic) << ','
           << (r.mc_mean ? detail::fmt9(*r.mc_mean) : "") << ','
           << (r.mc_ci ? detail::fmt9(*r.mc_ci) : "") << ','
           << (r.seed ? std::to_string(*r.seed) : "") << '\n';
    }
}

inline void emit_json(const std::vector<MetricRecord>& records, std::ostream& os) {
    os << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        os << "  {\"parameter\":\"" << detail::json_escape(r.parameter) << "\","
           << "\"value\":" << (detail::fmt9(r.parameter_value).empty()
                                   ? "null"
                                   : detail::fmt9(r.parameter_value))
           << ",\"quantity\":\"" << r.quantity << "\"";
        os << ",\"analytic\":" << (std::isnan(r.analytic) ? "null" : detail::fmt9(r.analytic));
        if (r.mc_mean) os << ",\"mc_mean\":" << detail::fmt9(*r.mc_mean);
        if (r.mc_ci) os << ",\"mc_ci\":" << detail::fmt9(*r.mc_ci);
        if (r.seed) os << ",\"seed\":" << *r.seed;
        if (!r.note.empty()) os << ",\"note\":\"" << detail::json_escape(r.note) << "\"";
        os << "}" << (i + 1 < records.size() ? "," : "") << "\n";
    }
    os << "]\n";
}

// line-delimited realization dump consumed by the CLI debug mode
inline void dump_realizations(std::ostream& os, const NetworkConfig& cfg, std::uint64_t n,
                              std::uint64_t master_seed) {
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t seed = substream_seed(master_seed, i);
        RngStream rng(seed);
        Realization r = sample_realization(cfg, rng, seed);
        os << "{\"seed\":" << r.seed << ",\"cue\":[" << detail::fmt9(r.cue.x) << ','
           << detail::fmt9(r.cue.y) << "],\"pdues\":[";
        for (std::size_t k = 0; k < r.pdues.size(); ++k) {
            const auto& p = r.pdues[k];
            os << (k ? "," : "") << "{\"pos\":[" << detail::fmt9(p.pos.x) << ','
               << detail::fmt9(p.pos.y) << "],\"drx\":[" << detail::fmt9(p.drx.x) << ','
               << detail::fmt9(p.drx.y) << "],\"r_d\":" << detail::fmt9(p.r_d)
               << ",\"r_c\":" << detail::fmt9(p.r_c)
               << ",\"underlay\":" << (p.underlay ? "true" : "false") << "}";
        }
        os << "]}\n";
    }
}

}  // namespace d2dcell
