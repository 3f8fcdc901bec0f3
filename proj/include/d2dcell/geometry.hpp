#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2dcell {

struct CellGeometry {
    double cell_radius = 500.0;  // R, meters
    double d2d_range = 35.0;     // R_D, meters

    void validate() const {
        if (!(cell_radius > 0)) throw std::invalid_argument("cell_radius must be > 0");
        if (!(d2d_range > 0 && d2d_range < cell_radius))
            throw std::invalid_argument("d2d_range must satisfy 0 < R_D < R");
    }
};

// Intersection area of two disks with radii r1, r2 and center separation d.
// Containment and disjoint cases short-circuit before the acos form is touched.
inline double lens_area(double d, double r1, double r2) {
    if (d < 0 || r1 <= 0 || r2 <= 0) throw std::invalid_argument("lens_area: bad arguments");
    if (r2 > r1) std::swap(r1, r2);  // canonical order: symmetry holds bit-exactly
    const double rmin = r2;
    if (d >= r1 + r2) return 0.0;
    if (d <= r1 - r2) return M_PI * rmin * rmin;
    auto clamped_acos = [](double v) { return std::acos(std::clamp(v, -1.0, 1.0)); };
    const double t1 = r1 * r1 * clamped_acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
    const double t2 = r2 * r2 * clamped_acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
    const double q = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    return t1 + t2 - 0.5 * std::sqrt(std::max(q, 0.0));
}

// Receiver density induced by uniform displacement within d2d_range of a
// uniform-in-cell transmitter PPP of density lambda: lambda inside, a lens
// fraction across the edge band, zero beyond R + R_D.
inline double drx_density(double d, double lambda, const CellGeometry& geom) {
    if (d < 0) throw std::invalid_argument("drx_density: d must be >= 0");
    const double R = geom.cell_radius, RD = geom.d2d_range;
    if (d < R - RD) return lambda;
    if (d > R + RD) return 0.0;
    return lambda * lens_area(d, R, RD) / (M_PI * RD * RD);
}

// f_{R_d}(r) = 2 r / R_D^2 on [0, R_D].
inline double d2d_distance_pdf(double r_d, const CellGeometry& geom) {
    if (r_d < 0 || r_d > geom.d2d_range)
        throw std::domain_error("d2d_distance_pdf: r_d outside [0, R_D]");
    return 2.0 * r_d / (geom.d2d_range * geom.d2d_range);
}

}  // namespace d2dcell
