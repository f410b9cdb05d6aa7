#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fbdiv {

/// Deterministic random stream on top of mt19937_64 with explicitly coded
/// variate transforms, so results do not depend on the standard library's
/// distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(mix(seed)) {}

    /// Stream for batch `index` of a run rooted at `seed`. Distinct indices
    /// give decorrelated streams; the mapping is pure, so work can be
    /// scheduled in any order.
    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (cosine branch).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        constexpr double two_pi = 6.28318530717958647692;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    /// Gamma(shape, scale) via Marsaglia-Tsang; shape in [0.5, 1) handled by
    /// boosting a shape+1 draw.
    double gamma(double shape, double scale);

private:
    static std::uint64_t mix(std::uint64_t s) {
        s += 0x9E3779B97F4A7C15ULL;
        s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ULL;
        s = (s ^ (s >> 27)) * 0x94D049BB133111EBULL;
        return s ^ (s >> 31);
    }

    std::mt19937_64 eng_;
};

} // namespace fbdiv
