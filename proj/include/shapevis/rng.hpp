#pragma once

#include <cmath>
#include <cstdint>

namespace shapevis {

// SplitMix64 generator. Small enough to seed one instance per work item
// (per point, per walk), which makes parallel results independent of the
// thread count: every item draws from its own stream.
struct SplitMix64 {
    std::uint64_t state = 0;

    constexpr SplitMix64() = default;
    explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n). Multiply-shift with rejection; n >= 1.
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller, spare value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = real01();
        } while (u1 <= 0.0);
        const double u2 = real01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives an independent stream seed from a base seed and up to three
// stream coordinates (stage tag, item id, sub-item id).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    SplitMix64 g(seed);
    g.state ^= a * 0xA24BAED4963EE407ULL;
    g.next();
    g.state ^= b * 0x9FB21C651E98DF25ULL;
    g.next();
    g.state ^= c * 0xD6E8FEB86659FD93ULL;
    return g.next();
}

} // namespace shapevis
