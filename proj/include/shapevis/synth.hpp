#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "shapevis/rng.hpp"
#include "shapevis/types.hpp"

namespace shapevis {

/// n points uniform on the unit (d-1)-sphere, by normalizing Gaussian draws.
inline PointCloud gen_sphere(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1 || d < 2) throw std::invalid_argument("gen_sphere needs n >= 1 and d >= 2");
    PointCloud pc;
    pc.count = n;
    pc.dim = d;
    pc.data.resize(n * d);
    SplitMix64 rng(mix_seed(seed, 0x737068657265 /*"sphere"*/));
    for (std::size_t i = 0; i < n; ++i) {
        double* r = pc.row(i);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                r[j] = rng.normal();
                norm2 += r[j] * r[j];
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t j = 0; j < d; ++j) r[j] *= inv;
    }
    return pc;
}

/// Equal-sized isotropic Gaussian blobs, labeled by blob index. Centers sit
/// at multiples of `separation` along the first axis, so all pairwise center
/// distances are at least `separation`.
inline PointCloud gen_blobs(std::size_t n, std::size_t d, std::size_t centers, double sigma,
                            double separation, std::uint64_t seed) {
    if (n < 1 || d < 1 || centers < 1)
        throw std::invalid_argument("gen_blobs needs n, d, centers >= 1");
    PointCloud pc;
    pc.count = n;
    pc.dim = d;
    pc.data.resize(n * d);
    pc.labels.resize(n);
    SplitMix64 rng(mix_seed(seed, 0x626c6f6273 /*"blobs"*/));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t blob = i % centers;   // round-robin keeps sizes equal
        double* r = pc.row(i);
        for (std::size_t j = 0; j < d; ++j) r[j] = sigma * rng.normal();
        r[0] += separation * double(blob);
        pc.labels[i] = static_cast<int>(blob);
    }
    return pc;
}

/// Noisy circle in the plane: radius 1 +- noise (uniform), uniform angle.
inline PointCloud gen_annulus(std::size_t n, double noise, std::uint64_t seed) {
    if (n < 10) throw std::invalid_argument("gen_annulus needs n >= 10");
    PointCloud pc;
    pc.count = n;
    pc.dim = 2;
    pc.data.resize(n * 2);
    SplitMix64 rng(mix_seed(seed, 0x616e6e756c7573 /*"annulus"*/));
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = two_pi * rng.real01();
        const double radius = 1.0 + noise * (2.0 * rng.real01() - 1.0);
        pc.row(i)[0] = radius * std::cos(angle);
        pc.row(i)[1] = radius * std::sin(angle);
    }
    return pc;
}

} // namespace shapevis
