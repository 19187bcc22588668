#pragma once

#include <cstdint>
#include <initializer_list>

namespace qpm {

// SplitMix64 finalizer; also used as the generic 64-bit mixer for hashing.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seedable, splittable generator. fork() derives an independent stream from
// the parent key and a tag, so any (seed, path-of-tags) names one stream.
// Every randomized component draws from a stream derived this way, which is
// what makes runs bit-reproducible regardless of execution order.
class Rng {
  public:
    Rng() : key_(0), ctr_(0) {}
    explicit Rng(std::uint64_t seed) : key_(mix64(seed ^ 0x4cf5ad432745937fULL)), ctr_(0) {}

    Rng fork(std::uint64_t tag) const {
        Rng child;
        child.key_ = mix64(key_ ^ mix64(tag ^ 0x9e3779b97f4a7c15ULL));
        child.ctr_ = 0;
        return child;
    }
    Rng fork(std::initializer_list<std::uint64_t> tags) const {
        Rng child = *this;
        for (auto t : tags) child = child.fork(t);
        return child;
    }

    std::uint64_t next_u64() { return mix64(key_ ^ ++ctr_); }

    // Unbiased uniform draw in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound < 2) return 0;
        std::uint64_t mask = ~0ULL >> __builtin_clzll((bound - 1) | 1);
        for (;;) {
            std::uint64_t x = next_u64() & mask;
            if (x < bound) return x;
        }
    }

    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool coin() { return next_u64() & 1; }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

}  // namespace qpm
