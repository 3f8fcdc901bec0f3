#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "d2dcell/geometry.hpp"
#include "d2dcell/quadrature.hpp"

using namespace d2dcell;

namespace {

// dense-grid area oracle over the bounding box of the smaller disk
double lens_grid_oracle(double d, double r1, double r2, int n = 2000) {
    const double rmin = std::min(r1, r2);
    const double cx = (r2 <= r1) ? d : 0.0;  // center of the smaller disk
    std::uint64_t inside = 0;
    const double h = 2 * rmin / n;
    for (int i = 0; i < n; ++i) {
        const double x = cx - rmin + (i + 0.5) * h;
        for (int j = 0; j < n; ++j) {
            const double y = -rmin + (j + 0.5) * h;
            const bool in1 = x * x + y * y <= r1 * r1;
            const bool in2 = (x - d) * (x - d) + y * y <= r2 * r2;
            if (in1 && in2) ++inside;
        }
    }
    return inside * h * h;
}

}  // namespace

TEST(LensArea, DisjointAndContainment) {
    EXPECT_DOUBLE_EQ(lens_area(3.0, 1.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(lens_area(0.1, 5.0, 1.0), M_PI);
    EXPECT_DOUBLE_EQ(lens_area(0.0, 2.0, 3.0), M_PI * 4.0);
}

TEST(LensArea, UnitCircleOverlap) {
    // d=1, r1=r2=1: 2 pi/3 - sqrt(3)/2
    const double expect = 2.0 * M_PI / 3.0 - std::sqrt(3.0) / 2.0;
    EXPECT_NEAR(lens_area(1.0, 1.0, 1.0), expect, 1e-14);
    EXPECT_NEAR(lens_area(1.0, 1.0, 1.0), lens_grid_oracle(1.0, 1.0, 1.0), 1e-3);
}

TEST(LensArea, GridOracleRandomCases) {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int i = 0; i < 6; ++i) {
        const double r1 = u(eng), r2 = u(eng);
        const double d = std::uniform_real_distribution<double>(0.0, r1 + r2 + 0.5)(eng);
        const double exact = lens_area(d, r1, r2);
        const double oracle = lens_grid_oracle(d, r1, r2);
        EXPECT_NEAR(exact, oracle, 1e-4 * M_PI * std::min(r1, r2) * std::min(r1, r2) + 2e-3)
            << "d=" << d << " r1=" << r1 << " r2=" << r2;
    }
}

TEST(LensArea, SymmetryAndContinuity) {
    std::mt19937_64 eng(9);
    std::uniform_real_distribution<double> u(0.3, 4.0);
    for (int i = 0; i < 40; ++i) {
        const double r1 = u(eng), r2 = u(eng), d = u(eng);
        EXPECT_DOUBLE_EQ(lens_area(d, r1, r2), lens_area(d, r2, r1));
    }
    // epsilon-bracketing across containment and tangency boundaries
    const double r1 = 5.0, r2 = 1.0, eps = 1e-9;
    for (double boundary : {r1 - r2, r1 + r2}) {
        const double below = lens_area(boundary - eps, r1, r2);
        const double above = lens_area(boundary + eps, r1, r2);
        EXPECT_LE(std::abs(below - above), 1e-6 * M_PI * r2 * r2) << "boundary " << boundary;
    }
}

TEST(DrxDensity, Branches) {
    CellGeometry geom{500.0, 35.0};
    const double lambda = 5e-5;
    EXPECT_DOUBLE_EQ(drx_density(0.0, lambda, geom), lambda);
    EXPECT_DOUBLE_EQ(drx_density(464.999, lambda, geom), lambda);
    EXPECT_NEAR(drx_density(535.0, lambda, geom), 0.0, 1e-20);
    EXPECT_DOUBLE_EQ(drx_density(536.0, lambda, geom), 0.0);
    // halfway across the edge band the density is strictly between 0 and lambda
    const double mid = drx_density(500.0, lambda, geom);
    EXPECT_GT(mid, 0.0);
    EXPECT_LT(mid, lambda);
}

TEST(DrxDensity, PlaneIntegralConservesCount) {
    CellGeometry geom{500.0, 35.0};
    const double lambda = 5e-5;
    QuadratureSettings q;
    auto f = [&](double d) { return drx_density(d, lambda, geom) * 2.0 * M_PI * d; };
    const double total = integrate_segmented(f, 0.0, geom.cell_radius + geom.d2d_range,
                                             {geom.cell_radius - geom.d2d_range,
                                              geom.cell_radius},
                                             q);
    const double expect = lambda * M_PI * geom.cell_radius * geom.cell_radius;
    EXPECT_NEAR(total, expect, 1e-6 * expect);
}

TEST(D2dDistancePdf, EndpointNormalizationMean) {
    CellGeometry geom{500.0, 35.0};
    EXPECT_DOUBLE_EQ(d2d_distance_pdf(35.0, geom), 2.0 / 35.0);
    EXPECT_THROW(d2d_distance_pdf(35.1, geom), std::domain_error);
    EXPECT_THROW(d2d_distance_pdf(-0.1, geom), std::domain_error);
    QuadratureSettings q;
    auto norm = integrate_or_throw([&](double r) { return d2d_distance_pdf(r, geom); }, 0.0,
                                   35.0, q);
    EXPECT_NEAR(norm, 1.0, 1e-12);
    auto mean = integrate_or_throw(
        [&](double r) { return r * d2d_distance_pdf(r, geom); }, 0.0, 35.0, q);
    EXPECT_NEAR(mean, 2.0 * 35.0 / 3.0, 1e-10);
}
