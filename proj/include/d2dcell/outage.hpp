#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "d2dcell/config.hpp"
#include "d2dcell/geometry.hpp"
#include "d2dcell/mgf.hpp"
#include "d2dcell/mode_selection.hpp"

namespace d2dcell {

namespace detail {

// P_out = 1 - sum_{t=0}^{m-1} (-s)^t/t! M^(t)(s) evaluated at s = m*gamma/rho.
inline double outage_from_mgf(const MgfValue& mgf, int m) {
    double sum = mgf.value;
    double factor = 1.0;
    for (int t = 1; t < m; ++t) {
        factor *= -mgf.s / t;
        sum += factor * mgf.derivatives[t - 1];
    }
    return 1.0 - sum;
}

// tolerances for the network-level metric integral over d (the integrand costs
// two MGF evaluations per point, so it runs looser than the inner quadratures)
inline QuadratureSettings metric_integral_settings(const NetworkConfig& cfg) {
    QuadratureSettings q;
    q.rel_tol = std::max(cfg.quad.rel_tol, 1e-7);
    q.abs_tol = std::max(cfg.quad.abs_tol, 1e-10);
    q.max_subdivisions = 400;
    return q;
}

}  // namespace detail

// Outage probability at the BS (desired link Nakagami m_cellular), clamped to
// [0,1]; raw pre-clamp value available for diagnostics.
inline double outage_bs(const NetworkConfig& cfg, MgfMethod method = MgfMethod::automatic,
                        double* raw = nullptr) {
    const int m = cfg.fading.m_cellular;
    if (cfg.density == 0.0) {
        if (raw) *raw = 0.0;
        return 0.0;  // interference-limited: no interferers, no outage
    }
    const double s = m * cfg.gamma / cfg.rho_bs;
    MgfValue mgf = mgf_agg_bs(s, cfg, m - 1, method);
    const double p = detail::outage_from_mgf(mgf, m);
    if (raw) *raw = p;
    return std::clamp(p, 0.0, 1.0);
}

// Conditional outage probability at an underlay DRx a distance d from the BS.
inline double outage_drx(double d, const NetworkConfig& cfg,
                         MgfMethod method = MgfMethod::automatic, double* raw = nullptr) {
    if (d < 0 || d > cfg.cell_radius() + cfg.geom.d2d_range)
        throw std::invalid_argument("outage_drx: d outside [0, R + R_D]");
    const int m = cfg.fading.m_d2d;
    const double s = m * cfg.gamma / cfg.rho_d;
    MgfValue mgf = mgf_agg_drx(s, d, cfg, m - 1, method);
    const double p = detail::outage_from_mgf(mgf, m);
    if (raw) *raw = p;
    return std::clamp(p, 0.0, 1.0);
}

// Average number of DUEs admitted to underlay mode (closed form).
inline double avg_dues(const NetworkConfig& cfg) {
    const double trd = cfg.tilde_r_d();
    const double R = cfg.cell_radius(), RD = cfg.geom.d2d_range;
    const double aC = cfg.alpha_c, aD = cfg.alpha_d;
    const double frac = trd * trd / (RD * RD) -
                        aC / (aC + aD) * std::pow(cfg.rho_d / cfg.xi, 2.0 / aC) *
                            std::pow(trd, 2.0 * aD / aC + 2.0) / (R * R * RD * RD);
    return cfg.density * cfg.cell_area() * frac;
}

// Average number of successful D2D transmissions:
// integral over d of (1 - P_out^DRx) p_d2d(d) lambda_drx(d) 2 pi d.
inline double avg_successful_transmissions(const NetworkConfig& cfg,
                                           MgfMethod method = MgfMethod::automatic) {
    if (cfg.density == 0.0) return 0.0;
    const double R = cfg.cell_radius(), RD = cfg.geom.d2d_range;
    auto integrand = [&](double d) {
        const double dens = drx_density(d, cfg.density, cfg.geom);
        if (dens == 0.0) return 0.0;
        const double p_mode = p_d2d(d, cfg);
        if (p_mode == 0.0) return 0.0;
        const double succ = 1.0 - outage_drx(d, cfg, method);
        return succ * p_mode * dens * 2.0 * M_PI * d;
    };
    // integrand kinks: admission-disk tangency radii and the cell-edge band
    std::vector<double> breaks{R - RD, R};
    if (cfg.equal_exponents()) {
        breaks.push_back(p_d2d_inner_radius(cfg));
        breaks.push_back(p_d2d_outer_radius(cfg));
    }
    return integrate_segmented(integrand, 0.0, R + RD, breaks,
                               detail::metric_integral_settings(cfg));
}

// tau = M_bar / M_bar_D2D in [0,1].
inline double spectrum_reuse_ratio(const NetworkConfig& cfg,
                                   MgfMethod method = MgfMethod::automatic) {
    const double dues = avg_dues(cfg);
    if (!(dues > 0.0))
        throw std::domain_error("spectrum_reuse_ratio undefined: no DUEs on average");
    return std::clamp(avg_successful_transmissions(cfg, method) / dues, 0.0, 1.0);
}

struct XiSolution {
    double xi = 0;               // linear threshold; +inf when saturated
    double achieved_outage = 0;  // P_out^BS at the returned xi (or at the cap)
    bool saturated = false;      // QoS met even with every p-DUE admitted
    int iterations = 0;
};

class bracket_error : public std::runtime_error {
   public:
    bracket_error(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), outage_low(lo), outage_high(hi) {}
    double outage_low, outage_high;
};

// Find xi with P_out^BS(xi) = target by bisection on log(xi/rho_d) over
// [1e-6, 1e6]; outage at the BS is non-decreasing in xi. When even the cap
// fails to reach the target the QoS never binds and a saturation report is
// returned (xi = +inf).
inline XiSolution solve_xi_for_qos(double target_outage_bs, const NetworkConfig& base,
                                   MgfMethod method = MgfMethod::automatic) {
    if (!(target_outage_bs > 0.0 && target_outage_bs < 1.0))
        throw std::invalid_argument("solve_xi_for_qos: target must be in (0,1)");
    NetworkConfig cfg = base;
    auto outage_at = [&](double xi) {
        cfg.xi = xi;
        return outage_bs(cfg, method);
    };
    const double lo0 = 1e-6 * base.rho_d, hi0 = 1e6 * base.rho_d;
    const double p_hi = outage_at(hi0);
    if (p_hi < target_outage_bs)
        return {std::numeric_limits<double>::infinity(), p_hi, true, 0};
    const double p_lo = outage_at(lo0);
    if (p_lo > target_outage_bs)
        throw bracket_error("solve_xi_for_qos: target below outage at the lower cap", p_lo, p_hi);

    double lo = std::log(lo0), hi = std::log(hi0);
    XiSolution sol;
    for (sol.iterations = 1; sol.iterations <= 200; ++sol.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double p = outage_at(std::exp(mid));
        if (std::abs(p - target_outage_bs) <= 1e-4) {
            sol.xi = std::exp(mid);
            sol.achieved_outage = p;
            return sol;
        }
        (p > target_outage_bs ? hi : lo) = mid;
    }
    throw bracket_error("solve_xi_for_qos: bisection did not converge", p_lo, p_hi);
}

}  // namespace d2dcell
