#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dltune {

/// Seeded random source with platform-independent draws.
///
/// std::uniform_*_distribution and std::shuffle are implementation-defined,
/// so every draw that influences results goes through this class instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    /// Fisher-Yates shuffle driven by below().
    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stable 64-bit FNV-1a hash of a string.
std::uint64_t hash_string(std::string_view text);

/// Combines a seed with further keys; order matters.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

}  // namespace dltune
