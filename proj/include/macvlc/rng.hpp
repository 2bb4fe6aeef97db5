#pragma once

#include <cstdint>
#include <vector>

namespace macvlc {

// splitmix64 finalizer; full-avalanche 64-bit mixer
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Key-derivation for splittable streams: acts as a small PRF of up to three
// counters. Used for per-trial seeds and lazy codebook symbols so results do
// not depend on evaluation order or worker count.
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n); multiply-shift, bias < 2^-64
    uint64_t below(uint64_t n) {
        return (uint64_t)(((__uint128_t)next() * n) >> 64);
    }
};

inline double u01_from_bits(uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }

// inverse-CDF draw from a pmf given a uniform variate
inline int sample_pmf(const std::vector<double>& pmf, double u) {
    double acc = 0.0;
    int last = 0;
    for (size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i] <= 0.0) continue;
        acc += pmf[i];
        last = (int)i;
        if (u < acc) return (int)i;
    }
    return last; // u landed in rounding slack at the top
}

} // namespace macvlc
