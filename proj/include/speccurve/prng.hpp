#ifndef SPECCURVE_PRNG_HPP
#define SPECCURVE_PRNG_HPP

#include <cstdint>

namespace speccurve {

// splitmix64: tiny deterministic generator. Used for randomized tests and
// sweep sampling; identical output on every platform for a given seed.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Modulo bias is irrelevant at the sample counts used.
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    // Uniform in [lo, hi] inclusive.
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

} // namespace speccurve

#endif
