#ifndef SNLCM_RNG_HPP
#define SNLCM_RNG_HPP

#include <cstdint>

namespace snlcm {

namespace detail {

inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Splittable counter-based generator. Every (seed, stream) pair yields an
/// independent, fully reproducible sequence, so per-sample streams can be
/// consumed in parallel and still match a serial run bit for bit.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream)
        : key_(detail::mix64(detail::mix64(seed) ^ detail::mix64(~stream))) {}

    uint64_t next() { return detail::mix64(key_ ^ detail::mix64(++ctr_)); }

    /// Unbiased draw from [0, n), n >= 1.
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t lim = (0 - n) % n; // 2^64 mod n
        uint64_t x;
        do {
            x = next();
        } while (x < lim);
        return x % n;
    }

    /// Uniform integer in the closed interval [lo, hi].
    int64_t uniform_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
    }

private:
    uint64_t key_;
    uint64_t ctr_ = 0;
};

} // namespace snlcm

#endif
