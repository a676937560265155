#pragma once

#include <cstdint>
#include <random>

namespace fkde {

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seedable, portable generator: mt19937_64 (bit-exact by the standard)
/// with hand-rolled uniform and Box-Muller normal draws, so sequences are
/// identical across platforms and standard libraries.
///
/// Stream splitting: Rng(seed, stream) seeds the engine with
/// mix64(seed ^ mix64(stream + 1)), giving decorrelated streams for
/// (cell, purpose) pairs in sweeps.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : gen_(mix64(seed ^ mix64(stream + 1))) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n); n >= 1. Rejection-free modulo is fine for
    // the small n used here (component picks, shuffles).
    std::uint64_t uniform_below(std::uint64_t n) { return gen_() % n; }

    // Standard normal via Box-Muller; caches the second deviate.
    double normal();

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fkde
