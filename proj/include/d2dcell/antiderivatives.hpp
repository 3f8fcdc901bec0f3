#pragma once

#include <complex>
#include <stdexcept>

#include "d2dcell/jet.hpp"

namespace d2dcell {

// beta1(x,a,b,c) = ax + b + sqrt((ax+b)^2 + cx), principal branch.
template <class S>
S beta1(double x, const S& a, const S& b, const S& c) {
    using std::sqrt;
    S axb = a * S(x) + b;
    return axb + sqrt(axb * axb + c * S(x));
}

// beta2(x,a,b,c) = sqrt((ax+b)^2 + c) - b ln(ax + b + sqrt((ax+b)^2 + c)).
template <class S>
S beta2(double x, const S& a, const S& b, const S& c) {
    using std::log;
    using std::sqrt;
    if (x == 0.0 && jet_norm(b) == 0.0 && jet_norm(c) == 0.0) return S(0.0);
    S axb = a * S(x) + b;
    S rad = sqrt(axb * axb + c);
    return rad - b * log(axb + rad);
}

// Antiderivative of x ln(beta1(x,a,b,c)) in x, principal branches.
//
// Psi1(x,a,b,c) = -x^2/8 + (10ab + 3c - 2a^2 x) sqrt((ax+b)^2 + cx) / (16 a^3)
//                 + x^2/2 ln(beta1) - (16a^2b^2 + 16abc + 3c^2)
//                   ln(c + 2a^2 x + 2a(b + sqrt((ax+b)^2 + cx))) / (32 a^4)
//
// At x = 0 the x^2 ln(beta1) term vanishes even when beta1(0) = 0 (b real
// negative), and a zero final-log coefficient drops that term (b = c = 0).
template <class S>
S psi1(double x, const S& a, const S& b, const S& c) {
    using std::log;
    using std::sqrt;
    if (jet_norm(a) == 0.0) throw std::domain_error("psi1: singular at a = 0");
    if (x == 0.0 && jet_norm(b) == 0.0 && jet_norm(c) == 0.0) return S(0.0);
    const S xx(x);
    S axb = a * xx + b;
    S rad = sqrt(axb * axb + c * xx);
    S a2 = a * a;
    S out = S(-x * x / 8.0) + (S(10.0) * a * b + S(3.0) * c - S(2.0) * a2 * xx) * rad /
                                  (S(16.0) * a2 * a);
    if (x != 0.0) out += S(x * x / 2.0) * log(axb + rad);
    S coef = S(16.0) * a2 * b * b + S(16.0) * a * b * c + S(3.0) * c * c;
    if (jet_norm(coef) != 0.0)
        out -= coef * log(c + S(2.0) * a2 * xx + S(2.0) * a * (b + rad)) /
               (S(32.0) * a2 * a2);
    return out;
}

}  // namespace d2dcell
