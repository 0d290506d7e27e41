#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gsgd {

/// Deterministic random stream. All value derivation (uniforms, indices,
/// normals) is implemented on top of the raw 64-bit output so that sequences
/// are reproducible bit-for-bit across standard libraries; the C++ engine is
/// fully specified, the distribution adapters are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform index in [0, n). Multiply-shift reduction; bias is below 2^-53.
    std::size_t uniform_index(std::size_t n) {
        const unsigned __int128 wide = static_cast<unsigned __int128>(next_u64()) *
                                       static_cast<unsigned __int128>(n);
        return static_cast<std::size_t>(wide >> 64);
    }

    /// Standard normal via Box-Muller; consumes exactly two raw draws.
    double normal() {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Independent stream for run `stream` of a sweep seeded with `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 finalizer over the combined state
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gsgd
