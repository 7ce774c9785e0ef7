#pragma once

#include <cstdint>

namespace hypdet {

// Seeded PRNG (splitmix64 core) for deterministic, platform-independent
// simulation.  Same seed -> same stream everywhere; std:: distributions are
// deliberately avoided because their output is implementation-defined.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed = 0) : state_(seed + 0x9E3779B97F4A7C15ULL) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) without modulo bias (Lemire rejection).
    uint64_t next_below(uint64_t n) {
        if (n == 0) return 0;
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Derive an independent stream for a sub-task; deterministic in
    // (seed, index), so per-sample work can run in any order.
    static SeededRng sub_stream(uint64_t master_seed, uint64_t index) {
        SeededRng mix(master_seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        mix.next_u64();
        return mix;
    }

private:
    uint64_t state_;
};

} // namespace hypdet
