#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nmc {

// All library errors derive from Error so callers can catch one type.
// The concrete classes below mirror the failure modes of the individual
// modules; each carries a human-readable reason naming the violated
// precondition or inequality.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error { using Error::Error; };
struct NotFullRank : Error { using Error::Error; };
struct TooManyConstraints : Error { using Error::Error; };
struct RegimeTooLarge : Error { using Error::Error; };
struct ThresholdViolation : Error { using Error::Error; };
struct StreamExhausted : Error { using Error::Error; };
struct NotFound : Error { using Error::Error; };
struct SelectorViolation : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InfeasibleParams : Error { using Error::Error; };
struct NonIntegralLog : Error { using Error::Error; };
struct SpaceMismatch : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// Counter-based deterministic random stream (splitmix64 core). Streams are
// cheap to fork: fork(master, i) yields an independent stream per index, so
// experiment trial t always sees the same bits regardless of what other
// trials consumed. That property is what makes replay tests exact.
class RandomStream {
  public:
    RandomStream() : key_(0xdeadbeefcafef00dULL), ctr_(0) {}
    explicit RandomStream(uint64_t key) : key_(key), ctr_(0) {}

    static RandomStream fork(uint64_t master, uint64_t index) {
        // mix the pair (master, index) into a fresh key
        uint64_t k = mix(master ^ 0x9e3779b97f4a7c15ULL);
        k = mix(k ^ mix(index + 0x632be59bd9b4e019ULL));
        return RandomStream(k);
    }

    uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++ctr_); }

    // b uniform bits in the low positions, 0 <= b <= 64
    uint64_t bits(unsigned b) {
        if (b == 0) return 0;
        return next_u64() >> (64 - b);
    }

    bool bit() { return (next_u64() >> 63) != 0; }

    // uniform integer in [0, bound), bound > 0, by rejection
    uint64_t below(uint64_t bound) {
        if (bound == 0) throw Error("RandomStream::below: bound must be positive");
        if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            uint64_t v = next_u64();
            if (v < limit) return v % bound;
        }
    }

    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30; z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27; z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }
    uint64_t key_;
    uint64_t ctr_;
};

} // namespace nmc
