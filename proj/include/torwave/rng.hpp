#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace torwave {

// SplitMix64 (Steele-Lea-Flood). One 64-bit word of state, one finalizer per
// draw. Substreams are derived by running the stream index through the same
// finalizer, so a sample indexed by its stream number draws identical values
// no matter how a run is scheduled or partitioned.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    SplitMix64(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed + 0x9E3779B97F4A7C15ull) ^
                 mix(stream * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform on [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Normalized complex Gaussian, E|g|^2 = 1: Re g and Im g are independent
    // N(0, 1/2). Sampled in polar form, |g|^2 ~ Exp(1) and uniform phase.
    std::complex<double> next_complex_gaussian() {
        const double u = 1.0 - next_double(); // (0, 1], keeps log finite
        const double r = std::sqrt(-std::log(u));
        const double phi = 2.0 * std::numbers::pi * next_double();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace torwave
