#pragma once

#include <optional>
#include <vector>

#include "nmc/bitvec.hpp"
#include "nmc/common.hpp"
#include "nmc/prg.hpp"

namespace nmc {

// A restriction over n positions: mask bit = 1 means the position is live
// (star), 0 means it is fixed to the corresponding fill bit. fill is kept at
// full length; fill bits at live positions are unused by function
// restriction but are what embed() places at live positions outside the
// embedding window.
struct Restriction {
    size_t n = 0;
    BitVec mask;   // n bits, 1 = live
    BitVec fill;   // n bits
};

// Survivor-mask encoding L(s): position i survives iff its block
// s_{(i-1)b+1..ib} is all ones, b = p_log_inv. With uniform s each position
// survives with probability exactly 2^-b.
BitVec subset_from_string(const BitVec& s, size_t n, size_t p_log_inv);

// Positions of the last k ones of rho1, ascending, padded at the tail with
// the sentinel n+1 when fewer exist.
std::vector<size_t> ext_indices(const BitVec& rho1, size_t k);

// c_i = x_j when i is the j-th entry of ext_indices(mask, |x|), otherwise
// fill_i. Total: x bits mapped to the n+1 sentinel are dropped; encoders
// guarantee enough survivors before calling (fallback seed).
BitVec embed(const BitVec& x, const Restriction& rho);

// The k bits of c at ext_indices(rho1, k), or nullopt when rho1 has fewer
// than k ones.
std::optional<BitVec> extract(const BitVec& c, const BitVec& rho1, size_t k);

struct RestrictionDistribution {
    size_t n = 0;
    size_t p_log_inv = 1;  // p = 2^-p_log_inv

    size_t bits_needed() const { return n * p_log_inv + n; }
};

// Consumes n*p_log_inv mask-string bits then n fill bits from the front of
// `bits`. Throws StreamExhausted when too few are supplied.
Restriction sample_restriction(const RestrictionDistribution& dist, const BitVec& bits);

// Same layout, bits drawn from a uniform stream.
Restriction sample_restriction(const RestrictionDistribution& dist, RandomStream& rs);

// Fallback seed: some zeta* whose mask L(G(zeta*)) has at least k ones among
// positions m+1..n. Strategy: interpolation (force the last k blocks of the
// mask string to all-ones by pinning those polynomial values to 0), then the
// zero seed, then an exhaustive scan capped at `scan_budget` seeds. Throws
// NotFound when everything fails. g.out_len must be a multiple of n.
BitVec find_fallback_seed(const CwGenerator& g, size_t n, size_t m, size_t k,
                          uint64_t scan_budget = uint64_t(1) << 22);

} // namespace nmc
