#pragma once

#include <cstdint>

namespace mrds {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: the stream of draws is a pure function of
/// (seed, stream, step, draw index), so parallel ensembles reproduce
/// bit-for-bit regardless of scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t step = 0)
        : seed_(seed), stream_(stream) {
        set_step(step);
    }

    void set_step(std::uint64_t step) {
        key_ = splitmix64(splitmix64(splitmix64(seed_) ^ stream_) ^ (step * 0xD1B54A32D192ED03ULL));
        draw_ = 0;
    }

    std::uint64_t next_u64() { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++draw_); }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : next_u64() % n; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_ = 0;
    std::uint64_t draw_ = 0;
};

}  // namespace mrds
