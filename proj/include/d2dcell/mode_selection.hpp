#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d2dcell/config.hpp"
#include "d2dcell/geometry.hpp"
#include "d2dcell/special.hpp"

namespace d2dcell {

// BS admission rule: strictly below the average-interference threshold.
// Equality is not underlay.
inline bool is_underlay(double r_d, double r_c, const NetworkConfig& cfg) {
    if (r_d < 0) throw std::invalid_argument("is_underlay: r_d must be >= 0");
    if (r_c <= 0) throw std::domain_error("is_underlay: p-DUE collocated with BS (r_c = 0)");
    return cfg.rho_d * std::pow(r_d, cfg.alpha_d) < cfg.xi * std::pow(r_c, cfg.alpha_c);
}

namespace detail {

// Half-plane case xi == rho_d: the non-admitted region around a receiver at
// distance d from the BS is the circular segment beyond the perpendicular
// bisector of the receiver-BS segment.
inline double p_d2d_equal_threshold(double d, double rd_range) {
    if (d >= 2.0 * rd_range) return 1.0;
    if (d == 0.0) return 0.5;
    const double seg = rd_range * rd_range * std::acos(d / (2.0 * rd_range)) -
                       0.5 * d * std::sqrt(rd_range * rd_range - 0.25 * d * d);
    return 1.0 - seg / (M_PI * rd_range * rd_range);
}

}  // namespace detail

// Probability that a transmitter is admitted to underlay mode given its
// receiver sits a distance d from the BS, equal path-loss exponents.
//
// Geometric form: the admission boundary (rho_d r_d^a vs xi r_c^a) is a circle
// with center k d / |k-1| from the receiver and radius sqrt(k) d / |k-1|,
// k = (xi/rho_d)^{2/a}; for xi > rho_d its interior is the excluded region,
// for xi < rho_d the admitted one. Overlap with the transmitter disk gives p.
inline double p_d2d_equal_alpha(double d, const NetworkConfig& cfg) {
    if (d < 0) throw std::invalid_argument("p_d2d_equal_alpha: d must be >= 0");
    if (!cfg.equal_exponents())
        throw std::invalid_argument("p_d2d_equal_alpha requires alpha_c == alpha_d");
    const double alpha = cfg.alpha_d;
    const double RD = cfg.geom.d2d_range;
    const double ratio = cfg.xi / cfg.rho_d;
    if (std::abs(ratio - 1.0) <= 1e-12) return detail::p_d2d_equal_threshold(d, RD);
    if (d == 0.0) return ratio > 1.0 ? 1.0 : 0.0;

    const double k = std::pow(ratio, 2.0 / alpha);
    const double denom = std::abs(k - 1.0);
    const double center = k * d / denom;
    const double radius = std::sqrt(k) * d / denom;
    const double overlap = lens_area(center, RD, radius);
    const double frac = overlap / (M_PI * RD * RD);
    return ratio > 1.0 ? 1.0 - frac : frac;
}

// Gamma-approximation for unequal exponents (alternating binomial sum over
// upper incomplete gammas), clamped to [0,1]. Parameter n controls the
// approximating Gamma order; the default 6 comes from the config.
inline double p_d2d_general(double d, const NetworkConfig& cfg) {
    if (!(d > 0)) throw std::invalid_argument("p_d2d_general: d must be > 0");
    const int N = cfg.gamma_approx_n;
    const double aC = cfg.alpha_c, aD = cfg.alpha_d;
    const double RD = cfg.geom.d2d_range;
    const double fac = std::pow(std::tgamma(N + 1.0), 1.0 / N);
    double sum = 1.0;
    double binom = 1.0;  // C(N, n), updated incrementally
    for (int n = 1; n <= N; ++n) {
        binom *= (N - n + 1.0) / n;
        const double nNxi = n * N * cfg.xi;
        const double x = std::pow(d, aC) * nNxi / (fac * cfg.rho_d * std::pow(RD, aD));
        const double term = 2.0 * std::pow(d, 2.0 * aC / aD) * std::pow(nNxi, 2.0 / aD) *
                            upper_incomplete_gamma(-2.0 / aD, x) /
                            (RD * RD * aD * std::pow(fac * cfg.rho_d, 2.0 / aD));
        sum += (n % 2 == 0 ? binom : -binom) * term;
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Dispatch used by the network metrics: exact branch at equal exponents.
inline double p_d2d(double d, const NetworkConfig& cfg) {
    if (cfg.equal_exponents()) return p_d2d_equal_alpha(d, cfg);
    if (d == 0.0) return p_d2d_general(1e-9 * cfg.geom.d2d_range, cfg);
    return p_d2d_general(d, cfg);
}

// Branch radii of the equal-exponent form (lens fully inside / tangent).
inline double p_d2d_inner_radius(const NetworkConfig& cfg) {
    return std::abs(1.0 - std::pow(cfg.rho_d / cfg.xi, 1.0 / cfg.alpha_d)) * cfg.geom.d2d_range;
}
inline double p_d2d_outer_radius(const NetworkConfig& cfg) {
    return (1.0 + std::pow(cfg.rho_d / cfg.xi, 1.0 / cfg.alpha_d)) * cfg.geom.d2d_range;
}

}  // namespace d2dcell
