#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace d2dcell {

// Truncated Taylor series in one variable: value plus derivative coefficients
// f^(k)/k! for k = 1..Order. Arithmetic follows the standard power-series
// recurrences, so composing jets through any smooth expression yields exact
// derivatives of that expression (no finite differencing anywhere).
template <class T, int Order>
struct Jet {
    static_assert(Order >= 0);
    std::array<T, Order + 1> c{};

    Jet() = default;
    Jet(const T& value) { c[0] = value; }  // NOLINT: implicit constant lift
    Jet(double value)
        requires(!std::is_same_v<T, double>)
    {
        c[0] = T(value);
    }

    static Jet variable(const T& value) {
        Jet j;
        j.c[0] = value;
        if constexpr (Order >= 1) j.c[1] = T(1);
        return j;
    }

    const T& value() const { return c[0]; }

    // k-th derivative (k! * coefficient)
    T derivative(int k) const {
        T f = T(1);
        for (int i = 2; i <= k; ++i) f *= T(i);
        return c[static_cast<std::size_t>(k)] * f;
    }

    Jet operator-() const {
        Jet r;
        for (int k = 0; k <= Order; ++k) r.c[k] = -c[k];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (int k = 0; k <= Order; ++k) c[k] += o.c[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int k = 0; k <= Order; ++k) c[k] -= o.c[k];
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        std::array<T, Order + 1> r{};
        for (int k = 0; k <= Order; ++k)
            for (int i = 0; i <= k; ++i) r[k] += c[i] * o.c[k - i];
        c = r;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }

    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= Order; ++k) {
            T acc = a.c[k];
            for (int i = 1; i <= k; ++i) acc -= b.c[i] * r.c[k - i];
            r.c[k] = acc / b.c[0];
        }
        return r;
    }
};

template <class T, int N>
Jet<T, N> exp(const Jet<T, N>& f) {
    using std::exp;
    Jet<T, N> g;
    g.c[0] = exp(f.c[0]);
    for (int k = 1; k <= N; ++k) {
        T acc{};
        for (int i = 1; i <= k; ++i) acc += T(i) * f.c[i] * g.c[k - i];
        g.c[k] = acc / T(k);
    }
    return g;
}

template <class T, int N>
Jet<T, N> log(const Jet<T, N>& f) {
    using std::log;
    Jet<T, N> g;
    g.c[0] = log(f.c[0]);
    for (int k = 1; k <= N; ++k) {
        T acc = T(k) * f.c[k];
        for (int i = 1; i < k; ++i) acc -= T(i) * g.c[i] * f.c[k - i];
        g.c[k] = acc / (T(k) * f.c[0]);
    }
    return g;
}

template <class T, int N>
Jet<T, N> sqrt(const Jet<T, N>& f) {
    using std::sqrt;
    Jet<T, N> g;
    g.c[0] = sqrt(f.c[0]);
    for (int k = 1; k <= N; ++k) {
        T acc = f.c[k];
        for (int i = 1; i < k; ++i) acc -= g.c[i] * g.c[k - i];
        g.c[k] = acc / (T(2) * g.c[0]);
    }
    return g;
}

// f^p for constant real exponent; f must avoid the branch cut of log.
template <class T, int N>
Jet<T, N> pow(const Jet<T, N>& f, double p) {
    return exp(log(f) * Jet<T, N>(T(p)));
}

template <class T, int N>
Jet<std::complex<T>, N> to_complex(const Jet<T, N>& f) {
    Jet<std::complex<T>, N> g;
    for (int k = 0; k <= N; ++k) g.c[k] = std::complex<T>(f.c[k]);
    return g;
}

template <class T, int N>
Jet<T, N> real(const Jet<std::complex<T>, N>& f) {
    Jet<T, N> g;
    for (int k = 0; k <= N; ++k) g.c[k] = f.c[k].real();
    return g;
}

template <class T, int N>
Jet<T, N> imag(const Jet<std::complex<T>, N>& f) {
    Jet<T, N> g;
    for (int k = 0; k <= N; ++k) g.c[k] = f.c[k].imag();
    return g;
}

// Magnitude used for quadrature error control: worst coefficient.
inline double jet_norm(double x) { return std::abs(x); }
inline double jet_norm(const std::complex<double>& x) { return std::abs(x); }
template <class T, int N>
double jet_norm(const Jet<T, N>& f) {
    double m = 0;
    for (int k = 0; k <= N; ++k) m = std::max(m, jet_norm(f.c[k]));
    return m;
}

}  // namespace d2dcell
