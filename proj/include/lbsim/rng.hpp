#pragma once

#include <cmath>
#include <cstdint>

namespace lbsim {

// Deterministic pseudo-random stream: xoshiro256** seeded through splitmix64.
// Self-contained on purpose: standard-library distributions are not specified
// bit-for-bit across implementations, and replayable runs need the exact same
// draw sequence everywhere. One independent stream per (seed, stream id) pair.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
        for (auto& s : state_) s = splitmix64(x);
        // A zero state would lock the generator; splitmix64 output makes this
        // practically impossible, but keep the guard explicit.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 bits of entropy.
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }

    // Exponential with the given mean (> 0).
    double exponential(double mean) { return -mean * std::log1p(-next_u01()); }

    // Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) {
        // Multiply-shift; bias is negligible for the small bounds used here.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace lbsim
