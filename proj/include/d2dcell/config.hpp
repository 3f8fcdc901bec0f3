#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "d2dcell/geometry.hpp"
#include "d2dcell/quadrature.hpp"

namespace d2dcell {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

struct FadingSpec {
    int m_cellular = 1;  // Nakagami m, desired CUE->BS link
    int m_d2d = 1;       // Nakagami m, desired DUE->DRx link

    void validate() const {
        if (m_cellular < 1 || m_d2d < 1)
            throw std::invalid_argument("Nakagami m must be a positive integer");
        if (m_cellular > 5 || m_d2d > 5)
            throw std::invalid_argument("Nakagami m > 5 unsupported (derivative order cap)");
    }
};

// Full scenario parameterization. All internal values are linear SI units
// (watts, meters, users/m^2); dB/dBm conversion happens at the config boundary.
struct NetworkConfig {
    CellGeometry geom{};
    double density = 5e-5;                 // lambda, users/m^2
    double rho_bs = dbm_to_watts(-80.0);   // BS receiver sensitivity, watts
    double rho_d = dbm_to_watts(-70.0);    // DRx receiver sensitivity, watts
    double alpha_c = 4.0;                  // cellular-link path-loss exponent
    double alpha_d = 4.0;                  // D2D-link path-loss exponent
    double xi = dbm_to_watts(-70.0);       // mode selection threshold, linear
    double gamma = 1.0;                    // SIR threshold, linear
    FadingSpec fading{};
    int gamma_approx_n = 6;                // N in the unequal-exponent approximation
    QuadratureSettings quad{};

    void validate() const {
        geom.validate();
        fading.validate();
        quad.validate();
        if (!(density >= 0)) throw std::invalid_argument("density must be >= 0");
        if (!(rho_bs > 0 && rho_d > 0)) throw std::invalid_argument("sensitivities must be > 0");
        if (!(xi > 0)) throw std::invalid_argument("xi must be > 0");
        if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
        if (!(alpha_c >= 2.0 && alpha_c <= alpha_d && alpha_d <= 6.0))
            throw std::invalid_argument("path-loss exponents must satisfy 2 <= alpha_c <= alpha_d <= 6");
        if (gamma_approx_n < 1) throw std::invalid_argument("gamma_approx_n must be >= 1");
    }

    // Effective D2D-link distance cap for admissible underlay users,
    // min(R_D, R^{aC/aD} (xi/rho_d)^{1/aD}).
    double tilde_r_d() const {
        return std::min(geom.d2d_range,
                        std::pow(geom.cell_radius, alpha_c / alpha_d) *
                            std::pow(xi / rho_d, 1.0 / alpha_d));
    }

    double cell_radius() const { return geom.cell_radius; }
    double cell_area() const { return M_PI * geom.cell_radius * geom.cell_radius; }
    double mean_pdue_count() const { return density * cell_area(); }
    bool equal_exponents() const {
        return std::abs(alpha_c - alpha_d) <= 1e-12 * alpha_d;
    }
};

class config_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace d2dcell
