#ifndef DGS_RNG_HPP
#define DGS_RNG_HPP

#include <cstdint>

namespace dgs {

// splitmix64: used for all seed derivation so that every random quantity is a
// pure function of the explicit seeds it is derived from.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_seeds(uint64_t a, uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

inline uint64_t mix_seeds(uint64_t a, uint64_t b, uint64_t c) {
    return mix_seeds(mix_seeds(a, b), c);
}

// Small deterministic PRNG for workload generation and tests.
class SplitMix {
public:
    explicit SplitMix(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // uniform in [0, bound)
    uint64_t below(uint64_t bound) { return bound ? next() % bound : 0; }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

// Pairwise-independent hash over the prime field p = 2^61 - 1,
// h(x) = (a*x + b) mod p with a in [1, p), b in [0, p).
class PairwiseHash {
public:
    static constexpr uint64_t kPrime = (1ULL << 61) - 1;

    PairwiseHash() : a_(1), b_(0) {}
    explicit PairwiseHash(uint64_t seed) {
        a_ = splitmix64(seed) % (kPrime - 1) + 1;
        b_ = splitmix64(seed ^ 0x5bf03635aebb5bcaULL) % kPrime;
    }

    uint64_t operator()(uint64_t x) const {
        unsigned __int128 t = (unsigned __int128)a_ * (x % kPrime) + b_;
        uint64_t lo = (uint64_t)(t & kPrime);
        uint64_t hi = (uint64_t)(t >> 61);
        uint64_t r = lo + hi;
        if (r >= kPrime) r -= kPrime;
        return r;
    }

    // maps into [0, m)
    uint64_t bucket(uint64_t x, uint64_t m) const { return (*this)(x) % m; }

private:
    uint64_t a_, b_;
};

} // namespace dgs

#endif // DGS_RNG_HPP
