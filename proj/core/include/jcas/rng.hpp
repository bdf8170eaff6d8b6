// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_RNG_HPP
#define JCAS_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace jcas {

/// SplitMix64 generator. Fully specified by its 64-bit state transition, so
/// streams reproduce bit-exactly on any platform, unlike the distributions in
/// <random>. Used for every stochastic draw in the library (channel
/// realizations, Monte-Carlo oracles, property-test generators).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_open() { return 1.0 - next_double(); }

    /// Standard normal pair via Box-Muller on two uniforms.
    void next_normal_pair(double& n1, double& n2) {
        const double u1 = next_double_open();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        n1 = r * std::cos(2.0 * M_PI * u2);
        n2 = r * std::sin(2.0 * M_PI * u2);
    }

    /// Circularly symmetric complex normal CN(0,1): Re and Im are independent
    /// N(0, 1/2) draws.
    std::complex<double> next_complex_normal() {
        double n1 = 0.0, n2 = 0.0;
        next_normal_pair(n1, n2);
        return {n1 * M_SQRT1_2, n2 * M_SQRT1_2};
    }

  private:
    std::uint64_t state_;
};

/// Avalanche mix of a single 64-bit word (the SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derives an independent substream for (seed, a, b). Stream discipline:
/// channel generation uses one substream per (user, path), so adding users or
/// paths never perturbs the draws of existing ones.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = mix64(seed);
    s = mix64(s ^ (a + 0x9E3779B97F4A7C15ull));
    s = mix64(s ^ (b + 0xC2B2AE3D27D4EB4Full));
    return SplitMix64(s);
}

} // namespace jcas

#endif
