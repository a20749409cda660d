#pragma once

#include <cstdint>
#include <random>

namespace neurise {

/// Seeded random stream. Wraps mt19937_64 but derives doubles and bounded
/// integers itself so that streams are reproducible across standard library
/// implementations, not just across runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        // Rejection sampling on the top bits; unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double prob) { return uniform() < prob; }

private:
    std::mt19937_64 eng_;
};

}  // namespace neurise
