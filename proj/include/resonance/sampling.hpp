#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "resonance/spectral.hpp"

namespace resonance {

/// Deterministic random source.  Wraps mt19937_64 but derives uniforms and
/// normals itself so that streams are bit-stable across standard library
/// implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller (no state carried between calls).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Van der Corput radical inverse; Halton sequences are built from these
/// with coprime bases.  Used for quasi-random start points.
[[nodiscard]] inline double radical_inverse(std::uint64_t n, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double scale = inv;
    double x = 0.0;
    while (n > 0) {
        x += static_cast<double>(n % base) * scale;
        n /= base;
        scale *= inv;
    }
    return x;
}

/// Random direction on the unit sphere of the span of `idx`, measured in
/// the weighted norm with per-mode weights w_i (pass 1s for the L2 sphere).
/// Coefficients outside idx stay zero.
[[nodiscard]] inline SpectralState random_direction(Rng& rng, std::size_t n_modes,
                                                    const std::vector<int>& idx,
                                                    const std::vector<double>& weights) {
    SpectralState dir(n_modes);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const double g = rng.normal();
        const auto i = static_cast<std::size_t>(idx[j]);
        dir.c[i] = g / weights[j];
        norm2 += g * g;
    }
    const double norm = std::sqrt(norm2);
    if (norm > 0.0) {
        for (int i : idx) dir.c[static_cast<std::size_t>(i)] /= norm;
    } else if (!idx.empty()) {
        dir.c[static_cast<std::size_t>(idx.front())] = 1.0 / weights.front();
    }
    return dir;
}

/// Uniform draw from the ball of given radius (in the weighted norm) of
/// the span of `idx`.
[[nodiscard]] inline SpectralState random_ball_point(Rng& rng, std::size_t n_modes,
                                                     const std::vector<int>& idx,
                                                     const std::vector<double>& weights,
                                                     double radius) {
    SpectralState p = random_direction(rng, n_modes, idx, weights);
    const double dim = static_cast<double>(idx.empty() ? 1 : idx.size());
    const double r = radius * std::pow(rng.uniform(), 1.0 / dim);
    for (int i : idx) p.c[static_cast<std::size_t>(i)] *= r;
    return p;
}

}  // namespace resonance
