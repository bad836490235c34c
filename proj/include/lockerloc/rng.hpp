#ifndef LOCKERLOC_RNG_HPP
#define LOCKERLOC_RNG_HPP

#include <cstdint>

namespace lockerloc {

// Deterministic 64-bit generator used for all synthetic data.
//
// The stream is pinned so that any implementation, in any language, can
// reproduce instances bit for bit from the seed alone:
//
//   seeding (splitmix64, applied 4 times to fill the state):
//     z  = (s += 0x9E3779B97F4A7C15)
//     z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
//     z ^= z >> 27;  z *= 0x94D049BB133111EB
//     return z ^ (z >> 31)
//
//   stream (xoshiro256++):
//     out = rotl(s0 + s3, 23) + s0
//     t = s1 << 17
//     s2 ^= s0;  s3 ^= s1;  s1 ^= s2;  s0 ^= s3;  s2 ^= t
//     s3 = rotl(s3, 45)
//
//   uniform double in [0, 1): (out >> 11) * 2^-53
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1); 53 random mantissa bits, exact in binary64.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double next_double(double lo, double hi) {
        return lo + next_double() * (hi - lo);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& s) {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

} // namespace lockerloc

#endif
