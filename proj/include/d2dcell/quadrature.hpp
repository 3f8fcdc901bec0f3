#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcell/jet.hpp"

namespace d2dcell {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(rel_tol > 0)) throw std::invalid_argument("quadrature rel_tol must be > 0");
        if (!(abs_tol >= 0)) throw std::invalid_argument("quadrature abs_tol must be >= 0");
        if (max_subdivisions < 1)
            throw std::invalid_argument("quadrature max_subdivisions must be >= 1");
    }
};

template <class V>
struct IntegrationResult {
    V value{};
    double error_estimate = 0;
    bool converged = true;
    int subdivisions = 0;
};

class quadrature_error : public std::runtime_error {
   public:
    quadrature_error(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), achieved_error(err) {}
    double best_estimate;
    double achieved_error;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
inline constexpr double kGkNode[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
inline constexpr double kGkWeight[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
inline constexpr double kGaussWeight[4] = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
    0.129484966168869693};

template <class F>
auto gk15(F&& f, double a, double b, double* err) {
    using V = decltype(f(a));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    V fc = f(mid);
    V k15 = fc * kGkWeight[0];
    V g7 = fc * kGaussWeight[0];
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGkNode[i];
        V fsum = f(mid - dx) + f(mid + dx);
        k15 += fsum * kGkWeight[i];
        if (i % 2 == 0) g7 += fsum * kGaussWeight[i / 2];
    }
    k15 = k15 * half;
    g7 = g7 * half;
    // conservative: the G7/K15 difference bounds the K15 error from above
    *err = jet_norm(k15 - g7);
    return k15;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over [lo, hi]. Works for any value type with
// +,-,*double and jet_norm (double, complex, jets of either).
template <class F>
auto integrate_1d(F&& f, double lo, double hi, const QuadratureSettings& settings)
    -> IntegrationResult<decltype(f(lo))> {
    using V = decltype(f(lo));
    settings.validate();
    IntegrationResult<V> out;
    if (lo == hi) return out;

    struct Interval {
        double a, b, err;
        V val;
        bool operator<(const Interval& o) const { return err < o.err; }
    };

    std::priority_queue<Interval> heap;
    double err0;
    V val0 = detail::gk15(f, lo, hi, &err0);
    heap.push({lo, hi, err0, val0});
    V total = val0;
    double total_err = err0;
    int used = 1;

    auto tolerance = [&](const V& v) {
        return std::max(settings.abs_tol, settings.rel_tol * jet_norm(v));
    };

    while (total_err > tolerance(total) && used < settings.max_subdivisions) {
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        double e1, e2;
        V v1 = detail::gk15(f, worst.a, mid, &e1);
        V v2 = detail::gk15(f, mid, worst.b, &e2);
        total += v1 + v2 - worst.val;
        total_err += e1 + e2 - worst.err;
        heap.push({worst.a, mid, e1, v1});
        heap.push({mid, worst.b, e2, v2});
        ++used;
    }

    out.value = total;
    out.error_estimate = total_err;
    out.subdivisions = used;
    out.converged = total_err <= tolerance(total);
    return out;
}

template <class F>
auto integrate_or_throw(F&& f, double lo, double hi, const QuadratureSettings& settings) {
    auto r = integrate_1d(f, lo, hi, settings);
    if (!r.converged)
        throw quadrature_error("integrate_1d failed to reach tolerance", jet_norm(r.value),
                               r.error_estimate);
    return r.value;
}

// Integrate with interior breakpoints (integrand kinks); points outside (lo,hi)
// are ignored, duplicates collapse.
template <class F>
auto integrate_segmented(F&& f, double lo, double hi, std::vector<double> breaks,
                         const QuadratureSettings& settings) {
    std::sort(breaks.begin(), breaks.end());
    using V = decltype(f(lo));
    V total{};
    double prev = lo;
    for (double b : breaks) {
        if (b <= prev || b >= hi) continue;
        total += integrate_or_throw(f, prev, b, settings);
        prev = b;
    }
    if (prev < hi) total += integrate_or_throw(f, prev, hi, settings);
    return total;
}

}  // namespace d2dcell
