#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "d2dcell/config.hpp"
#include "d2dcell/mode_selection.hpp"
#include "d2dcell/rng.hpp"

namespace d2dcell {

struct PDuePoint {
    Vec2 pos;        // transmitter, inside the cell
    Vec2 drx;        // its receiver, confined to the cell by resampling
    double r_d;      // link distance
    double r_c;      // transmitter-BS distance
    bool underlay;   // admission flag
    double bs_gain;  // Rayleigh power gain on the interfering link to the BS
};

struct Realization {
    Vec2 cue;
    std::vector<PDuePoint> pdues;
    std::uint64_t seed = 0;
};

// System-model sampler: Poisson number of p-DUEs uniform in the cell, each
// receiver uniform in the d2d_range disk and rejection-resampled into the
// cell, CUE uniform over the cell area.
inline Realization sample_realization(const NetworkConfig& cfg, RngStream& rng,
                                      std::uint64_t seed = 0) {
    const double R = cfg.cell_radius();
    Realization out;
    out.seed = seed;
    const std::uint64_t count = rng.poisson(cfg.mean_pdue_count());
    out.pdues.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        PDuePoint p;
        do {
            p.pos = rng.disk_point(R);
            p.r_c = norm(p.pos);
        } while (p.r_c == 0.0);
        do {
            const Vec2 off = rng.disk_point(cfg.geom.d2d_range);
            p.drx = {p.pos.x + off.x, p.pos.y + off.y};
            p.r_d = norm(off);
        } while (norm(p.drx) > R);
        p.underlay = is_underlay(p.r_d, p.r_c, cfg);
        p.bs_gain = rng.exponential();
        out.pdues.push_back(p);
    }
    out.cue = rng.disk_point(R);
    return out;
}

inline double interference_at_bs(const Realization& r, const NetworkConfig& cfg) {
    double sum = 0;
    for (const auto& p : r.pdues)
        if (p.underlay)
            sum += p.bs_gain * cfg.rho_d * std::pow(p.r_d, cfg.alpha_d) *
                   std::pow(p.r_c, -cfg.alpha_c);
    return sum;
}

// SIR at the BS given the desired-link gain; zero interference counts as an
// infinite-SIR (non-outage) event.
inline double sir_at_bs(const Realization& r, const NetworkConfig& cfg, double g0) {
    const double interference = interference_at_bs(r, cfg);
    if (interference == 0.0) return std::numeric_limits<double>::infinity();
    return g0 * cfg.rho_bs / interference;
}

inline double sir_at_bs(const Realization& r, const NetworkConfig& cfg, RngStream& rng) {
    return sir_at_bs(r, cfg, rng.nakagami_power(cfg.fading.m_cellular));
}

namespace detail {

inline double interference_at_point(const Realization& r, const Vec2& at,
                                    const NetworkConfig& cfg, RngStream& rng) {
    double sum = rng.exponential() * cfg.rho_bs * std::pow(norm(r.cue), cfg.alpha_c) /
                 std::pow(distance(r.cue, at), cfg.alpha_d);
    for (const auto& p : r.pdues)
        if (p.underlay)
            sum += rng.exponential() * cfg.rho_d * std::pow(p.r_d, cfg.alpha_d) /
                   std::pow(distance(p.pos, at), cfg.alpha_d);
    return sum;
}

}  // namespace detail

struct ProbeOutcome {
    bool admitted = false;
    double sir = 0;
};

// Palm-conditioned probe: a DRx pinned at distance d from the BS whose own
// transmitter is displaced uniformly in the d2d_range disk (the analysis
// model), tested for admission; interference comes from the CUE and every
// other underlay DUE in the realization.
inline ProbeOutcome sir_at_probe_drx(const Realization& r, double d, const NetworkConfig& cfg,
                                     RngStream& rng) {
    const Vec2 probe{d, 0.0};
    const Vec2 own = rng.disk_point(cfg.geom.d2d_range);
    const double own_rd = norm(own);
    const double own_rc = std::max(norm(Vec2{probe.x + own.x, probe.y + own.y}),
                                   std::numeric_limits<double>::min());
    ProbeOutcome out;
    out.admitted = is_underlay(own_rd, own_rc, cfg);
    if (!out.admitted) return out;
    const double interference = detail::interference_at_point(r, probe, cfg, rng);
    const double g0 = rng.nakagami_power(cfg.fading.m_d2d);
    out.sir = interference == 0.0 ? std::numeric_limits<double>::infinity()
                                  : g0 * cfg.rho_d / interference;
    return out;
}

// Successful transmissions in one realization: every admitted pair whose DRx
// clears the SIR threshold against CUE plus all other underlay DUEs.
inline int count_successful_transmissions(const Realization& r, const NetworkConfig& cfg,
                                          RngStream& rng) {
    int successes = 0;
    for (std::size_t k = 0; k < r.pdues.size(); ++k) {
        const auto& pair = r.pdues[k];
        if (!pair.underlay) continue;
        double interference = rng.exponential() * cfg.rho_bs *
                              std::pow(norm(r.cue), cfg.alpha_c) /
                              std::pow(distance(r.cue, pair.drx), cfg.alpha_d);
        for (std::size_t j = 0; j < r.pdues.size(); ++j) {
            if (j == k || !r.pdues[j].underlay) continue;
            interference += rng.exponential() * cfg.rho_d *
                            std::pow(r.pdues[j].r_d, cfg.alpha_d) /
                            std::pow(distance(r.pdues[j].pos, pair.drx), cfg.alpha_d);
        }
        const double g0 = rng.nakagami_power(cfg.fading.m_d2d);
        if (interference == 0.0 || g0 * cfg.rho_d / interference > cfg.gamma) ++successes;
    }
    return successes;
}

enum class McQuantity {
    outage_bs,
    outage_drx_at_d,
    m_bar,
    m_bar_d2d,
    tau,
    tau_per_realization,  // mean-of-ratios diagnostic
    p_d2d,
    mgf_single_bs,
    mgf_single_drx,
    mgf_cue_drx,
};

struct EstimatorResult {
    double mean = 0;
    double ci_halfwidth = 0;  // 95% normal approximation
    std::uint64_t n_samples = 0;
};

struct McOptions {
    std::uint64_t n_realizations = 10000;
    std::uint64_t seed = 1;
    double probe_d = 0;  // for DRx-located quantities
    double s = 0;        // Laplace variable for the MGF estimators
    int threads = 0;     // 0: hardware concurrency
};

namespace detail {

// per-realization sample: primary statistic x, optional denominator statistic y
struct McSample {
    double x = 0;
    double y = 1;
    bool counted = true;
};

struct McAccumulator {
    double sx = 0, sxx = 0, sy = 0, syy = 0, sxy = 0;
    std::uint64_t n = 0;
    void add(const McSample& s) {
        if (!s.counted) return;
        sx += s.x;
        sxx += s.x * s.x;
        sy += s.y;
        syy += s.y * s.y;
        sxy += s.x * s.y;
        ++n;
    }
    void merge(const McAccumulator& o) {
        sx += o.sx;
        sxx += o.sxx;
        sy += o.sy;
        syy += o.syy;
        sxy += o.sxy;
        n += o.n;
    }
};

template <class SampleFn>
McAccumulator run_chunked(std::uint64_t n_total, std::uint64_t seed, int threads,
                          const SampleFn& sample) {
    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t n_chunks = (n_total + kChunk - 1) / kChunk;
    int hw = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    hw = std::max(1, std::min<int>(hw, 64));

    std::vector<McAccumulator> partials(n_chunks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= n_chunks) return;
            McAccumulator acc;
            const std::uint64_t begin = chunk * kChunk;
            const std::uint64_t end = std::min(begin + kChunk, n_total);
            for (std::uint64_t i = begin; i < end; ++i) {
                RngStream rng(substream_seed(seed, i));
                acc.add(sample(rng, i));
            }
            partials[chunk] = acc;
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < hw; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    McAccumulator total;  // fixed chunk-order combination: thread-count independent
    for (const auto& p : partials) total.merge(p);
    return total;
}

inline EstimatorResult mean_result(const McAccumulator& a) {
    EstimatorResult r;
    r.n_samples = a.n;
    if (a.n == 0) return r;
    r.mean = a.sx / a.n;
    const double var = std::max(0.0, a.sxx / a.n - r.mean * r.mean);
    r.ci_halfwidth = 1.96 * std::sqrt(var / a.n);
    return r;
}

// ratio of means with a delta-method interval
inline EstimatorResult ratio_result(const McAccumulator& a) {
    EstimatorResult r;
    r.n_samples = a.n;
    if (a.n == 0 || a.sy == 0) return r;
    const double mx = a.sx / a.n, my = a.sy / a.n;
    const double ratio = mx / my;
    const double vx = std::max(0.0, a.sxx / a.n - mx * mx);
    const double vy = std::max(0.0, a.syy / a.n - my * my);
    const double cxy = a.sxy / a.n - mx * my;
    const double var = (vx - 2.0 * ratio * cxy + ratio * ratio * vy) / (my * my);
    r.mean = ratio;
    r.ci_halfwidth = 1.96 * std::sqrt(std::max(0.0, var) / a.n);
    return r;
}

}  // namespace detail

// Empirical estimator for every analytic output. Deterministic given
// (seed, n_realizations): per-index substreams and fixed-order aggregation.
inline EstimatorResult estimate_metric(McQuantity quantity, const NetworkConfig& cfg,
                                       const McOptions& opt) {
    if (opt.n_realizations < 100)
        throw std::invalid_argument("estimate_metric: need at least 100 realizations");
    cfg.validate();

    using detail::McSample;
    auto run = [&](auto&& fn) {
        return detail::run_chunked(opt.n_realizations, opt.seed, opt.threads, fn);
    };

    switch (quantity) {
        case McQuantity::outage_bs: {
            auto acc = run([&](RngStream& rng, std::uint64_t i) {
                Realization r = sample_realization(cfg, rng, substream_seed(opt.seed, i));
                return McSample{sir_at_bs(r, cfg, rng) < cfg.gamma ? 1.0 : 0.0};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::outage_drx_at_d: {
            auto acc = run([&](RngStream& rng, std::uint64_t i) {
                Realization r = sample_realization(cfg, rng, substream_seed(opt.seed, i));
                ProbeOutcome p = sir_at_probe_drx(r, opt.probe_d, cfg, rng);
                return McSample{p.sir < cfg.gamma ? 1.0 : 0.0, 1.0, p.admitted};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::m_bar: {
            auto acc = run([&](RngStream& rng, std::uint64_t i) {
                Realization r = sample_realization(cfg, rng, substream_seed(opt.seed, i));
                return McSample{static_cast<double>(count_successful_transmissions(r, cfg, rng))};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::m_bar_d2d: {
            auto acc = run([&](RngStream& rng, std::uint64_t i) {
                Realization r = sample_realization(cfg, rng, substream_seed(opt.seed, i));
                double dues = 0;
                for (const auto& p : r.pdues) dues += p.underlay ? 1.0 : 0.0;
                return McSample{dues};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::tau: {
            auto acc = run([&](RngStream& rng, std::uint64_t i) {
                Realization r = sample_realization(cfg, rng, substream_seed(opt.seed, i));
                double dues = 0;
                for (const auto& p : r.pdues) dues += p.underlay ? 1.0 : 0.0;
                const double succ = count_successful_transmissions(r, cfg, rng);
                return McSample{succ, dues};
            });
            return detail::ratio_result(acc);
        }
        case McQuantity::tau_per_realization: {
            auto acc = run([&](RngStream& rng, std::uint64_t i) {
                Realization r = sample_realization(cfg, rng, substream_seed(opt.seed, i));
                double dues = 0;
                for (const auto& p : r.pdues) dues += p.underlay ? 1.0 : 0.0;
                if (dues == 0) return McSample{0, 1, false};
                const double succ = count_successful_transmissions(r, cfg, rng);
                return McSample{succ / dues};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::p_d2d: {
            auto acc = run([&](RngStream& rng, std::uint64_t) {
                const Vec2 own = rng.disk_point(cfg.geom.d2d_range);
                const double rc = std::max(norm(Vec2{opt.probe_d + own.x, own.y}),
                                           std::numeric_limits<double>::min());
                return McSample{is_underlay(norm(own), rc, cfg) ? 1.0 : 0.0};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::mgf_single_bs: {
            auto acc = run([&](RngStream& rng, std::uint64_t) {
                Vec2 pos;
                double rc;
                do {
                    pos = rng.disk_point(cfg.cell_radius());
                    rc = norm(pos);
                } while (rc == 0.0);
                const double rd = cfg.geom.d2d_range * std::sqrt(rng.uniform());
                double interference = 0;
                if (is_underlay(rd, rc, cfg))
                    interference = rng.exponential() * cfg.rho_d * std::pow(rd, cfg.alpha_d) *
                                   std::pow(rc, -cfg.alpha_c);
                return McSample{std::exp(-opt.s * interference)};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::mgf_single_drx: {
            auto acc = run([&](RngStream& rng, std::uint64_t) {
                Vec2 pos;
                double rc;
                do {
                    pos = rng.disk_point(cfg.cell_radius());
                    rc = norm(pos);
                } while (rc == 0.0);
                const double rd = cfg.geom.d2d_range * std::sqrt(rng.uniform());
                double interference = 0;
                if (is_underlay(rd, rc, cfg)) {
                    const double ell = distance(pos, Vec2{opt.probe_d, 0.0});
                    interference = rng.exponential() * cfg.rho_d * std::pow(rd, cfg.alpha_d) /
                                   std::pow(ell, cfg.alpha_d);
                }
                return McSample{std::exp(-opt.s * interference)};
            });
            return detail::mean_result(acc);
        }
        case McQuantity::mgf_cue_drx: {
            auto acc = run([&](RngStream& rng, std::uint64_t) {
                const Vec2 z = rng.disk_point(cfg.cell_radius());
                const double ell = distance(z, Vec2{opt.probe_d, 0.0});
                const double interference = rng.exponential() * cfg.rho_bs *
                                            std::pow(norm(z), cfg.alpha_c) /
                                            std::pow(ell, cfg.alpha_d);
                return McSample{std::exp(-opt.s * interference)};
            });
            return detail::mean_result(acc);
        }
    }
    throw std::invalid_argument("estimate_metric: unknown quantity");
}

}  // namespace d2dcell
