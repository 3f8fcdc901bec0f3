#pragma once

#include <cmath>
#include <stdexcept>

#include "d2dcell/jet.hpp"

namespace d2dcell {

class convergence_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double value_of(double x) { return x; }
template <class T, int N>
T value_of(const Jet<T, N>& x) {
    return x.value();
}

// Gauss series sum_k (a)_k (b)_k / ((c)_k k!) x^k; |x| < 1.
template <class S>
S gauss_series(double a, double b, double c, const S& x) {
    S term(1.0), sum(1.0);
    int quiet = 0;
    for (int k = 0; k < 20000; ++k) {
        term = term * x * ((a + k) * (b + k) / ((c + k) * (k + 1.0)));
        sum += term;
        if (jet_norm(term) <= 1e-17 * jet_norm(sum)) {
            if (++quiet >= 2) return sum;
        } else {
            quiet = 0;
        }
    }
    throw convergence_error("2F1 series did not converge");
}

inline bool near_nonpositive_integer(double v) {
    return v <= 1e-12 && std::abs(v - std::round(v)) < 1e-12;
}

}  // namespace detail

// Gauss hypergeometric 2F1(a,b;c;x) on x <= 0 (primary domain) and 0 <= x < 1.
// Negative arguments go through the Pfaff transform; far-negative arguments
// through the z -> -inf connection formula, whose two inner series run in 1/x.
// Works on plain doubles or real jets (derivatives w.r.t. x's seed variable).
template <class S>
S hyp2f1(double a, double b, double c, const S& x) {
    if (detail::near_nonpositive_integer(c))
        throw std::domain_error("2F1: c must not be a non-positive integer");
    const double xv = detail::value_of(x);
    if (xv > 1.0) throw std::domain_error("2F1: x > 1 unsupported");
    if (a == 0.0 || b == 0.0) return S(1.0);

    if (xv >= 0.0) return detail::gauss_series(a, b, c, x);

    // Pfaff: (1-x)^(-a) 2F1(a, c-b; c; x/(x-1)), maps x<0 into [0,1)
    const double yv = xv / (xv - 1.0);
    if (yv <= 0.95) {
        S y = x / (x - S(1.0));
        return pow(S(1.0) - x, -a) * detail::gauss_series(a, c - b, c, y);
    }

    // x << -1: special closed case first, then the general connection formula
    if (a == 1.0 && b == 1.0 && c == 2.0) return -log(S(1.0) - x) / x;
    if (std::abs(a - b - std::round(a - b)) < 1e-10)
        throw convergence_error("2F1: integer a-b at large |x| unsupported");
    const double g1 = std::tgamma(c) * std::tgamma(b - a) / (std::tgamma(b) * std::tgamma(c - a));
    const double g2 = std::tgamma(c) * std::tgamma(a - b) / (std::tgamma(a) * std::tgamma(c - b));
    S inv = S(1.0) / x;
    S t1 = pow(-x, -a) * detail::gauss_series(a, 1.0 - c + a, 1.0 - b + a, inv) * g1;
    S t2 = pow(-x, -b) * detail::gauss_series(b, 1.0 - c + b, 1.0 - a + b, inv) * g2;
    return t1 + t2;
}

inline double gauss_hypergeometric_2f1(double a, double b, double c, double x) {
    return hyp2f1(a, b, c, Jet<double, 0>(x)).value();
}

namespace detail {

// Q(p,x)*Gamma(p) = Gamma(p,x) for p > 0 via series / continued fraction.
inline double upper_gamma_positive(double p, double x) {
    if (x == 0.0) return std::tgamma(p);
    if (x > 700.0) return 0.0;  // e^{-x} underflow; the tail is genuinely 0 at double
    if (x < p + 1.0) {
        // lower series: P(p,x) = x^p e^-x sum x^n / (p(p+1)...(p+n))
        double term = 1.0 / p;
        double sum = term;
        for (int n = 1; n < 5000; ++n) {
            term *= x / (p + n);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum))
                return std::tgamma(p) - sum * std::exp(p * std::log(x) - x);
        }
        throw convergence_error("incomplete gamma series did not converge");
    }
    // Lentz continued fraction for Gamma(p,x)
    const double tiny = 1e-300;
    double bb = x + 1.0 - p;
    double cc = 1.0 / tiny;
    double dd = 1.0 / bb;
    double h = dd;
    for (int i = 1; i < 5000; ++i) {
        const double an = -i * (i - p);
        bb += 2.0;
        dd = an * dd + bb;
        if (std::abs(dd) < tiny) dd = tiny;
        cc = bb + an / cc;
        if (std::abs(cc) < tiny) cc = tiny;
        dd = 1.0 / dd;
        const double delta = dd * cc;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return std::exp(p * std::log(x) - x) * h;
    }
    throw convergence_error("incomplete gamma continued fraction did not converge");
}

}  // namespace detail

// Upper incomplete gamma Gamma(a,x) = int_x^inf t^{a-1} e^-t dt for real a
// (negative non-integer a supported via the recurrence
// Gamma(a,x) = (Gamma(a+1,x) - x^a e^-x)/a), x > 0 required when a <= 0.
inline double upper_incomplete_gamma(double a, double x) {
    if (x < 0.0) throw std::domain_error("upper_incomplete_gamma: x must be >= 0");
    if (x == 0.0) {
        if (a <= 0.0) throw std::domain_error("upper_incomplete_gamma: diverges at x=0 for a<=0");
        return std::tgamma(a);
    }
    int shift = 0;
    double ah = a;
    while (ah <= 0.0) {
        ah += 1.0;
        ++shift;
    }
    double g = detail::upper_gamma_positive(ah, x);
    for (int j = 1; j <= shift; ++j) {
        ah -= 1.0;
        const double power = (x > 700.0) ? 0.0 : std::exp(ah * std::log(x) - x);
        g = (g - power) / ah;
    }
    return g;
}

}  // namespace d2dcell
