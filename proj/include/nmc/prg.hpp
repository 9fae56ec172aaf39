#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nmc/codes.hpp"

namespace nmc {

// GF(2^m) with a fixed primitive polynomial per m (table covers m = 1..20).
// Log/antilog tables are built for m <= 18; larger fields fall back to
// shift-and-reduce multiplication.
class Gf2Field {
  public:
    explicit Gf2Field(unsigned m);

    unsigned m() const { return m_; }
    uint32_t size() const { return uint32_t(1) << m_; }
    uint32_t order() const { return size() - 1; }
    uint32_t poly() const { return poly_; }

    uint32_t mul(uint32_t a, uint32_t b) const;
    uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t inv(uint32_t a) const;

    static const Gf2Field& get(unsigned m);  // cached per m

  private:
    uint32_t slow_mul(uint32_t a, uint32_t b) const;
    unsigned m_;
    uint32_t poly_;
    std::vector<uint32_t> log_, alog_;
};

// sigma-wise independent bit generator: the seed is sigma+1 field elements,
// read as the coefficients of a degree-sigma polynomial; output bit i is
// [poly(i) < q] under the integer reading of field elements. q/d is the
// marginal bias (q = d/2 gives unbiased bits).
struct CwGenerator {
    size_t sigma = 0;
    unsigned field_log = 0;  // m; field size d = 2^m
    size_t out_len = 0;
    uint32_t bias_num = 0;   // q

    size_t seed_len() const { return (sigma + 1) * field_log; }
    uint32_t d() const { return uint32_t(1) << field_log; }
    double bias() const { return double(bias_num) / double(d()); }
};

// Validating constructors. make_cw_unbiased picks the smallest field that
// fits out_len distinct points and q = d/2; make_cw checks n <= d and q <= d.
CwGenerator make_cw(size_t sigma, unsigned field_log, size_t out_len, uint32_t bias_num);
CwGenerator make_cw_unbiased(size_t sigma, size_t out_len);

BitVec cw_eval(const CwGenerator& g, const BitVec& seed);

// Seed whose output agrees with the given (point, value) pairs, found by
// Lagrange interpolation; at most sigma+1 pairs with distinct points.
BitVec cw_interpolate_seed(const CwGenerator& g,
                           const std::vector<std::pair<uint32_t, uint32_t>>& pts);

// --- independence audits -----------------------------------------------------

// A finite bit source: out = eval(e) for e in [0, 2^entropy_bits), with a
// declared exact marginal bias num/den per position.
struct BitSourceSpec {
    size_t out_len = 0;
    size_t entropy_bits = 0;
    std::function<BitVec(uint64_t)> eval;
    std::function<std::pair<uint64_t, uint64_t>(size_t)> bias;  // 1-based position
};

struct IndependenceViolation {
    std::vector<size_t> T;   // positions, 1-based
    std::string pattern;
    uint64_t count = 0;
    uint64_t expected = 0;   // exact expected multiplicity
};

struct IndependenceReport {
    bool ok = false;
    size_t order = 0;
    uint64_t subsets_checked = 0;
    std::vector<IndependenceViolation> violations;
};

// Exhaustive check that every nonempty subset of at most `order` positions
// has exactly the product distribution. entropy_bits <= 24 required.
IndependenceReport verify_independence(const BitSourceSpec& src, size_t order);
IndependenceReport verify_independence(const CwGenerator& g, size_t order);

// Audit subsets of exactly the given size (tightness witness search).
IndependenceReport audit_independence_at_order(const BitSourceSpec& src, size_t order);
IndependenceReport audit_independence_at_order(const CwGenerator& g, size_t order);

BitSourceSpec as_bit_source(const CwGenerator& g);

// --- composite restriction source --------------------------------------------
//
// The joint stream Z = G(zeta) || E(zeta; r) || U used to sample
// restrictions: the mask bits come from the generator, the first part of the
// fill re-encodes the seed, the tail is fresh uniform. Jointly sigma-wise
// independent provided the seed encoding hides zeta on any sigma coordinates
// (ThresholdViolation otherwise).
struct IndepSource {
    CwGenerator gen;
    RpeScheme seed_rpe;
    size_t uniform_len = 0;

    size_t mask_len() const { return gen.out_len; }
    size_t fill_len() const { return seed_rpe.n() + uniform_len; }
    size_t total_len() const { return mask_len() + fill_len(); }
    size_t entropy_bits() const {
        return gen.seed_len() + seed_rpe.randomness_len() + uniform_len;
    }

    BitVec draw(RandomStream& rs) const;
    BitVec draw_explicit(const BitVec& zeta, const BitVec& r, const BitVec& u) const;
};

IndepSource concat_independent(const CwGenerator& gen, const RpeScheme& seed_rpe,
                               size_t uniform_len);

BitSourceSpec as_bit_source(const IndepSource& src);

} // namespace nmc
