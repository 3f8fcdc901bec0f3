#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "d2dcell/antiderivatives.hpp"
#include "d2dcell/config.hpp"
#include "d2dcell/quadrature.hpp"
#include "d2dcell/special.hpp"

namespace d2dcell {

// Value of an interference MGF at s together with derivatives 1..order in s.
struct MgfValue {
    double s = 0;
    double value = 1;
    std::vector<double> derivatives;  // d^k/ds^k for k = 1..order
};

enum class MgfMethod {
    automatic,    // fastest well-conditioned route
    closed_form,  // printed closed/semi-closed forms (throws if unavailable)
    quadrature,   // nested numeric integration of the defining kernels
};

namespace detail {

using Cx = std::complex<double>;

template <int N>
using JetD = Jet<double, N>;
template <int N>
using JetC = Jet<Cx, N>;

// 1/pi int_0^pi dtheta / (u - v cos theta) = 1/(sqrt(u-v) sqrt(u+v)); the split
// product keeps the principal branch correct for complex u with Im(u) < 0.
template <class S>
S angular_inverse(const S& u, double v) {
    using std::sqrt;
    return S(1.0) / (sqrt(u - S(v)) * sqrt(u + S(v)));
}

constexpr double kClosedFormConditioningFloor = 1e-2;  // s*rho_d below this: use quadrature

inline bool is_two_or_four(double a) { return a == 2.0 || a == 4.0; }

// ---------------------------------------------------------------------------
// Single-interferer MGF at the BS
// ---------------------------------------------------------------------------

// x^2 [aC 2F1(1,2/aC;1+2/aC;u) + aD 2F1(1,-2/aD;1-2/aD;u)] / (RD^2 (aC+aD)),
// u = -R^aC/(s rho_d x^aD); at x = 0 the second term tends to a nonzero
// constant obtained from the z -> -inf expansion of 2F1.
template <int N>
JetD<N> bs_bracket(double x, const JetD<N>& s, const NetworkConfig& cfg) {
    const double aC = cfg.alpha_c, aD = cfg.alpha_d;
    const double RD = cfg.geom.d2d_range, R = cfg.cell_radius();
    if (x == 0.0) {
        const double gg = std::tgamma(1.0 - 2.0 / aD) * std::tgamma(1.0 + 2.0 / aD);
        JetD<N> scale = pow(JetD<N>(std::pow(R, aC) / cfg.rho_d) / s, 2.0 / aD);
        return scale * (aD * gg / (RD * RD * (aC + aD)));
    }
    JetD<N> u = JetD<N>(-std::pow(R, aC) / (cfg.rho_d * std::pow(x, aD))) / s;
    JetD<N> f1 = hyp2f1(1.0, 2.0 / aC, 1.0 + 2.0 / aC, u);
    JetD<N> f2 = hyp2f1(1.0, -2.0 / aD, 1.0 - 2.0 / aD, u);
    return (f1 * aC + f2 * aD) * (x * x / (RD * RD * (aC + aD)));
}

template <int N>
JetD<N> mgf_single_bs_closed(const JetD<N>& s, const NetworkConfig& cfg) {
    const double aC = cfg.alpha_c, aD = cfg.alpha_d;
    const double RD = cfg.geom.d2d_range, R = cfg.cell_radius();
    const double trd = cfg.tilde_r_d();
    JetD<N> fxi = hyp2f1(1.0, 2.0 / aC, 1.0 + 2.0 / aC, JetD<N>(-1.0 / cfg.xi) / s);
    JetD<N> term = fxi * (std::pow(trd, 2.0 + 2.0 * aD / aC) *
                          std::pow(cfg.rho_d / cfg.xi, 2.0 / aC) * aC /
                          (RD * RD * R * R * (aD + aC)));
    return JetD<N>(1.0) + term - (bs_bracket(trd, s, cfg) - bs_bracket(0.0, s, cfg));
}

// admission cut: minimal BS distance for an admissible interferer at link
// length r_d
inline double admission_radius(double r_d, const NetworkConfig& cfg) {
    return std::pow(r_d, cfg.alpha_d / cfg.alpha_c) *
           std::pow(cfg.rho_d / cfg.xi, 1.0 / cfg.alpha_c);
}

template <int N>
JetD<N> mgf_single_bs_quadrature(const JetD<N>& s, const NetworkConfig& cfg) {
    const double R = cfg.cell_radius(), RD = cfg.geom.d2d_range;
    const double trd = cfg.tilde_r_d();
    auto outer = [&](double rd) -> JetD<N> {
        const double cut = std::min(admission_radius(rd, cfg), R);
        JetD<N> c = s * (cfg.rho_d * std::pow(rd, cfg.alpha_d));
        auto inner = [&](double rc) -> JetD<N> {
            return c / (c + JetD<N>(std::pow(rc, cfg.alpha_c))) * (2.0 * rc / (R * R));
        };
        JetD<N> in = integrate_or_throw(inner, cut, R, cfg.quad);
        return in * (2.0 * rd / (RD * RD));
    };
    return JetD<N>(1.0) - integrate_or_throw(outer, 0.0, trd, cfg.quad);
}

// ---------------------------------------------------------------------------
// Single-interferer MGF at a DRx located distance d from the BS
// ---------------------------------------------------------------------------

template <int N>
JetD<N> mgf_single_drx_closed(const JetD<N>& s, double d, const NetworkConfig& cfg) {
    const double R = cfg.cell_radius(), RD = cfg.geom.d2d_range;
    const double X = cfg.tilde_r_d() * cfg.tilde_r_d();
    const double norm = 1.0 / (RD * RD * R * R);
    if (cfg.alpha_d == 2.0) {
        JetD<N> a1 = s * cfg.rho_d;
        JetD<N> b1(R * R - d * d);
        JetD<N> c1 = s * (4.0 * d * d * cfg.rho_d);
        JetD<N> a2 = a1 + JetD<N>(cfg.rho_d / cfg.xi);
        JetD<N> b2(-d * d);
        JetD<N> diff = (psi1(X, a1, b1, c1) - psi1(0.0, a1, b1, c1)) -
                       (psi1(X, a2, b2, c1) - psi1(0.0, a2, b2, c1));
        return JetD<N>(1.0) - a1 * diff * norm;
    }
    // alpha = 4: complex parameters, imaginary part extracted last
    JetC<N> B = to_complex(sqrt(s * cfg.rho_d));
    JetC<N> iB = B * Cx(0.0, 1.0);
    JetC<N> a1 = -iB;
    JetC<N> b1(Cx(R * R - d * d));
    JetC<N> c1 = iB * (-4.0 * d * d);
    JetC<N> a2 = JetC<N>(Cx(std::sqrt(cfg.rho_d / cfg.xi))) - iB;
    JetC<N> b2(Cx(-d * d));
    JetC<N> diff = (psi1(X, a1, b1, c1) - psi1(0.0, a1, b1, c1)) -
                   (psi1(X, a2, b2, c1) - psi1(0.0, a2, b2, c1));
    return JetD<N>(1.0) - imag(to_complex(sqrt(s * cfg.rho_d)) * diff) * norm;
}

// semi-closed: the radial and angular inner integrals in closed (log) form,
// one adaptive integral over the link distance remains
template <int N>
JetD<N> mgf_single_drx_semi(const JetD<N>& s, double d, const NetworkConfig& cfg) {
    const double R = cfg.cell_radius(), RD = cfg.geom.d2d_range;
    const double aC = cfg.alpha_c;
    const double trd = cfg.tilde_r_d();
    if (cfg.alpha_d == 2.0) {
        auto f = [&](double rd) -> JetD<N> {
            const double rdp2 = std::pow(rd * rd * cfg.rho_d / cfg.xi, 2.0 / aC);
            JetD<N> c = s * (cfg.rho_d * rd * rd);
            JetD<N> upper = beta1(rd * rd, s * cfg.rho_d, JetD<N>(R * R - d * d),
                                  s * (4.0 * d * d * cfg.rho_d));
            JetD<N> t = JetD<N>(rdp2 - d * d) + c;
            JetD<N> lower = t + sqrt(t * t + c * (4.0 * d * d));
            return c * (log(upper) - log(lower)) * (2.0 * rd / (R * R * RD * RD));
        };
        return JetD<N>(1.0) - integrate_or_throw(f, 0.0, trd, cfg.quad);
    }
    auto f = [&](double rd) -> JetD<N> {
        const double rdp2 = std::pow(std::pow(rd, 4) * cfg.rho_d / cfg.xi, 2.0 / aC);
        JetD<N> B = sqrt(s * cfg.rho_d) * (rd * rd);
        JetC<N> iB = to_complex(B) * Cx(0.0, 1.0);
        JetC<N> upper = beta1(rd * rd, -to_complex(sqrt(s * cfg.rho_d)) * Cx(0.0, 1.0),
                              JetC<N>(Cx(R * R - d * d)),
                              to_complex(sqrt(s * cfg.rho_d)) * Cx(0.0, -4.0 * d * d));
        JetC<N> t = JetC<N>(Cx(rdp2 - d * d)) - iB;
        JetC<N> lower = t + sqrt(t * t - iB * (4.0 * d * d));
        return B * imag(log(upper) - log(lower)) * (2.0 * rd / (R * R * RD * RD));
    };
    return JetD<N>(1.0) - integrate_or_throw(f, 0.0, trd, cfg.quad);
}

// independent reference: nested integration over (r_d, r_c) with the angular
// average in closed form for alpha_d in {2,4} and numeric otherwise
template <int N>
JetD<N> mgf_single_drx_quadrature(const JetD<N>& s, double d, const NetworkConfig& cfg) {
    const double R = cfg.cell_radius(), RD = cfg.geom.d2d_range;
    const double trd = cfg.tilde_r_d();
    auto outer = [&](double rd) -> JetD<N> {
        const double cut = std::min(admission_radius(rd, cfg), R);
        JetD<N> c = s * (cfg.rho_d * std::pow(rd, cfg.alpha_d));
        auto inner = [&](double rc) -> JetD<N> {
            const double v = 2.0 * rc * d;
            if (cfg.alpha_d == 2.0) {
                JetD<N> u = c + JetD<N>(rc * rc + d * d);
                return c * angular_inverse(u, v) * (2.0 * rc / (R * R));
            }
            if (cfg.alpha_d == 4.0) {
                JetC<N> B = to_complex(sqrt(c));
                JetC<N> u = JetC<N>(Cx(rc * rc + d * d)) - B * Cx(0.0, 1.0);
                return imag(B * angular_inverse(u, v)) * (2.0 * rc / (R * R));
            }
            auto ang = [&](double th) -> JetD<N> {
                const double ell2 = rc * rc + d * d - v * std::cos(th);
                JetD<N> den = c + JetD<N>(std::pow(ell2, cfg.alpha_d / 2.0));
                return c / den * (1.0 / M_PI);
            };
            return integrate_or_throw(ang, 0.0, M_PI, cfg.quad) * (2.0 * rc / (R * R));
        };
        JetD<N> in = integrate_or_throw(inner, cut, R, cfg.quad);
        return in * (2.0 * rd / (RD * RD));
    };
    return JetD<N>(1.0) - integrate_or_throw(outer, 0.0, trd, cfg.quad);
}

// ---------------------------------------------------------------------------
// CUE interference MGF at a DRx located distance d from the BS
// ---------------------------------------------------------------------------

template <int N>
JetD<N> mgf_cue_closed(const JetD<N>& s, double d, const NetworkConfig& cfg) {
    const double R = cfg.cell_radius();
    if (cfg.alpha_d == 2.0) {
        JetD<N> sb = s * cfg.rho_bs;
        JetD<N> one(1.0);
        JetD<N> a = (sb + one) * (sb + one);
        JetD<N> b = (sb - one) * (d * d);
        JetD<N> c = sb * (4.0 * std::pow(d, 4));
        JetD<N> diff = beta2(R * R, a, b, c) - beta2(0.0, a, b, c);
        JetD<N> cube = (sb + one) * (sb + one) * (sb + one);
        return one - sb * diff / (cube * (R * R));
    }
    JetC<N> q = to_complex(sqrt(s * cfg.rho_bs));
    JetC<N> iq = q * Cx(0.0, 1.0);
    JetC<N> one(Cx(1.0));
    JetC<N> am = one - iq;  // 1 - i sqrt(s rho_bs)
    JetC<N> b = (one + iq) / am * Cx(-d * d);
    JetC<N> c = iq / (am * am) * Cx(-4.0 * std::pow(d, 4));
    JetC<N> diff = beta2(R * R, am, b, c) - beta2(0.0, am, b, c);
    return JetD<N>(1.0) - imag(q * diff / (am * am)) * (1.0 / (R * R));
}

// one-dimensional radial forms (angular integral already closed)
template <int N>
JetD<N> mgf_cue_quadrature(const JetD<N>& s, double d, const NetworkConfig& cfg) {
    const double R = cfg.cell_radius();
    const double aC = cfg.alpha_c;
    if (cfg.alpha_d == 2.0) {
        auto f = [&](double rz) -> JetD<N> {
            JetD<N> c = s * (cfg.rho_bs * std::pow(rz, aC));
            JetD<N> u = c + JetD<N>(rz * rz + d * d);
            return c * angular_inverse(u, 2.0 * rz * d) * (2.0 * rz / (R * R));
        };
        return JetD<N>(1.0) - integrate_or_throw(f, 0.0, R, cfg.quad);
    }
    if (cfg.alpha_d == 4.0) {
        auto f = [&](double rz) -> JetD<N> {
            JetC<N> B = to_complex(sqrt(s * (cfg.rho_bs * std::pow(rz, aC))));
            JetC<N> u = JetC<N>(Cx(rz * rz + d * d)) - B * Cx(0.0, 1.0);
            return imag(B * angular_inverse(u, 2.0 * rz * d)) * (2.0 * rz / (R * R));
        };
        return JetD<N>(1.0) - integrate_or_throw(f, 0.0, R, cfg.quad);
    }
    auto f = [&](double rz) -> JetD<N> {
        JetD<N> c = s * (cfg.rho_bs * std::pow(rz, aC));
        auto ang = [&](double th) -> JetD<N> {
            const double ell2 = rz * rz + d * d - 2.0 * rz * d * std::cos(th);
            JetD<N> den = c + JetD<N>(std::pow(ell2, cfg.alpha_d / 2.0));
            return c / den * (1.0 / M_PI);
        };
        return integrate_or_throw(ang, 0.0, M_PI, cfg.quad) * (2.0 * rz / (R * R));
    };
    return JetD<N>(1.0) - integrate_or_throw(f, 0.0, R, cfg.quad);
}

// ---------------------------------------------------------------------------
// path selection
// ---------------------------------------------------------------------------

template <int N>
JetD<N> single_bs_jet(const JetD<N>& s, const NetworkConfig& cfg, MgfMethod method) {
    if (s.value() == 0.0 && N == 0) return JetD<N>(1.0);
    switch (method) {
        case MgfMethod::closed_form:
            if (cfg.alpha_d == 2.0)
                throw std::invalid_argument("mgf_single_bs: no closed form for alpha_d = 2");
            if (s.value() == 0.0)
                throw std::domain_error("mgf_single_bs: closed form singular at s = 0");
            return mgf_single_bs_closed(s, cfg);
        case MgfMethod::quadrature:
            return mgf_single_bs_quadrature(s, cfg);
        case MgfMethod::automatic:
        default:
            if (cfg.alpha_d != 2.0 && s.value() > 0.0) return mgf_single_bs_closed(s, cfg);
            return mgf_single_bs_quadrature(s, cfg);
    }
}

template <int N>
JetD<N> single_drx_jet(const JetD<N>& s, double d, const NetworkConfig& cfg, MgfMethod method) {
    if (s.value() == 0.0 && N == 0) return JetD<N>(1.0);
    // the antiderivative form degenerates at d = 0 (zero lens offset) and loses
    // precision to cancellation at small s*rho_d; the semi-closed integral does not
    const bool closed_ok = cfg.equal_exponents() && is_two_or_four(cfg.alpha_d) && d > 0.0 &&
                           s.value() * cfg.rho_d >= kClosedFormConditioningFloor;
    switch (method) {
        case MgfMethod::closed_form:
            if (!(cfg.equal_exponents() && is_two_or_four(cfg.alpha_d)))
                throw std::invalid_argument(
                    "mgf_single_drx: closed form needs alpha_c = alpha_d in {2,4}");
            if (s.value() == 0.0)
                throw std::domain_error("mgf_single_drx: closed form singular at s = 0");
            if (d == 0.0) return mgf_single_drx_semi(s, d, cfg);
            return mgf_single_drx_closed(s, d, cfg);
        case MgfMethod::quadrature:
            return mgf_single_drx_quadrature(s, d, cfg);
        case MgfMethod::automatic:
        default:
            if (closed_ok) return mgf_single_drx_closed(s, d, cfg);
            if (is_two_or_four(cfg.alpha_d)) return mgf_single_drx_semi(s, d, cfg);
            return mgf_single_drx_quadrature(s, d, cfg);
    }
}

template <int N>
JetD<N> cue_drx_jet(const JetD<N>& s, double d, const NetworkConfig& cfg, MgfMethod method) {
    if (s.value() == 0.0 && N == 0) return JetD<N>(1.0);
    switch (method) {
        case MgfMethod::closed_form:
            if (!(cfg.equal_exponents() && is_two_or_four(cfg.alpha_d)))
                throw std::invalid_argument(
                    "mgf_cue_drx: closed form needs alpha_c = alpha_d in {2,4}");
            if (s.value() == 0.0)
                throw std::domain_error("mgf_cue_drx: closed form singular at s = 0");
            return mgf_cue_closed(s, d, cfg);
        case MgfMethod::quadrature:
            return mgf_cue_quadrature(s, d, cfg);
        case MgfMethod::automatic:
        default:
            if (cfg.equal_exponents() && is_two_or_four(cfg.alpha_d) && s.value() > 0.0)
                return mgf_cue_closed(s, d, cfg);
            return mgf_cue_quadrature(s, d, cfg);
    }
}

// aggregates: exponential of the PPP functional, times the CUE factor at a DRx
template <int N>
JetD<N> agg_bs_jet(const JetD<N>& s, const NetworkConfig& cfg, MgfMethod method) {
    if (cfg.density == 0.0) return JetD<N>(1.0);
    JetD<N> single = single_bs_jet(s, cfg, method);
    return exp((single - JetD<N>(1.0)) * cfg.mean_pdue_count());
}

template <int N>
JetD<N> agg_drx_jet(const JetD<N>& s, double d, const NetworkConfig& cfg, MgfMethod method) {
    JetD<N> cue = cue_drx_jet(s, d, cfg, method);
    if (cfg.density == 0.0) return cue;
    JetD<N> single = single_drx_jet(s, d, cfg, method);
    return cue * exp((single - JetD<N>(1.0)) * cfg.mean_pdue_count());
}

template <int N>
MgfValue pack(double s, const JetD<N>& jet) {
    MgfValue out;
    out.s = s;
    out.value = jet.value();
    for (int k = 1; k <= N; ++k) out.derivatives.push_back(jet.derivative(k));
    return out;
}

// Runtime derivative order -> compile-time jet order (max 4: Nakagami m <= 5).
template <class F>
MgfValue eval_orders(double s, int order, F&& f) {
    if (s < 0) throw std::invalid_argument("mgf: s must be >= 0");
    switch (order) {
        case 0: return pack(s, f(JetD<0>::variable(s)));
        case 1: return pack(s, f(JetD<1>::variable(s)));
        case 2: return pack(s, f(JetD<2>::variable(s)));
        case 3: return pack(s, f(JetD<3>::variable(s)));
        case 4: return pack(s, f(JetD<4>::variable(s)));
        default:
            throw std::invalid_argument("mgf derivatives above order 4 unsupported");
    }
}

}  // namespace detail

inline MgfValue mgf_single_bs(double s, const NetworkConfig& cfg, int order = 0,
                              MgfMethod method = MgfMethod::automatic) {
    return detail::eval_orders(
        s, order, [&](auto js) { return detail::single_bs_jet(js, cfg, method); });
}

inline MgfValue mgf_single_drx(double s, double d, const NetworkConfig& cfg, int order = 0,
                               MgfMethod method = MgfMethod::automatic) {
    return detail::eval_orders(
        s, order, [&](auto js) { return detail::single_drx_jet(js, d, cfg, method); });
}

inline MgfValue mgf_cue_drx(double s, double d, const NetworkConfig& cfg, int order = 0,
                            MgfMethod method = MgfMethod::automatic) {
    return detail::eval_orders(
        s, order, [&](auto js) { return detail::cue_drx_jet(js, d, cfg, method); });
}

inline MgfValue mgf_agg_bs(double s, const NetworkConfig& cfg, int order = 0,
                           MgfMethod method = MgfMethod::automatic) {
    return detail::eval_orders(s, order,
                               [&](auto js) { return detail::agg_bs_jet(js, cfg, method); });
}

inline MgfValue mgf_agg_drx(double s, double d, const NetworkConfig& cfg, int order = 0,
                            MgfMethod method = MgfMethod::automatic) {
    return detail::eval_orders(
        s, order, [&](auto js) { return detail::agg_drx_jet(js, d, cfg, method); });
}

}  // namespace d2dcell
