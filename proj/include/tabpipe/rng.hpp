#pragma once

#include <cstdint>
#include <random>

namespace tabpipe {

/// mt19937_64 with a pinned bits-to-double mapping so sampled subsets and
/// cluster seeds are identical across platforms (std::uniform_real_distribution
/// is implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // Rejection sampling to avoid modulo bias.
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace tabpipe
