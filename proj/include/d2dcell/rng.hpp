#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace d2dcell {

struct Vec2 {
    double x = 0, y = 0;
};

inline double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

// splitmix64 finalizer; decorrelates consecutive substream indices
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// one independent stream per realization index; replayable from (master, index)
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// mt19937_64 (bit-stream fixed by the standard) with hand-rolled transforms so
// estimates replay bit-identically across platforms and thread counts.
class RngStream {
   public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double exponential() { return -std::log1p(-uniform()); }

    // unit-mean Nakagami-m power gain: Gamma(shape m, scale 1/m), integer m
    double nakagami_power(int m) {
        double sum = 0;
        for (int i = 0; i < m; ++i) sum += exponential();
        return sum / m;
    }

    Vec2 disk_point(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double th = 2.0 * M_PI * uniform();
        return {r * std::cos(th), r * std::sin(th)};
    }

    // Knuth product-of-uniforms; large means split exactly (Poisson additivity)
    std::uint64_t poisson(double mean) {
        std::uint64_t n = 0;
        while (mean > 60.0) {
            const double half = mean * 0.5;
            n += poisson(half);
            mean -= half;
        }
        const double limit = std::exp(-mean);
        double prod = uniform();
        while (prod > limit) {
            ++n;
            prod *= uniform();
        }
        return n;
    }

   private:
    std::mt19937_64 eng_;
};

}  // namespace d2dcell
