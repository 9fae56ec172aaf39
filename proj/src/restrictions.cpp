#include "nmc/restrictions.hpp"

#include <algorithm>

namespace nmc {

BitVec subset_from_string(const BitVec& s, size_t n, size_t p_log_inv) {
    if (p_log_inv == 0) throw DimensionMismatch("subset_from_string: p_log_inv must be positive");
    if (s.size() != n * p_log_inv)
        throw DimensionMismatch("subset_from_string: string length " + std::to_string(s.size()) +
                                " != n*log(1/p) = " + std::to_string(n * p_log_inv));
    BitVec mask(n);
    for (size_t i = 1; i <= n; ++i) {
        bool live = true;
        for (size_t j = (i - 1) * p_log_inv + 1; j <= i * p_log_inv; ++j)
            if (!s.get(j)) { live = false; break; }
        if (live) mask.set(i, true);
    }
    return mask;
}

std::vector<size_t> ext_indices(const BitVec& rho1, size_t k) {
    std::vector<size_t> ones = rho1.ones();
    std::vector<size_t> out;
    out.reserve(k);
    size_t take = std::min(k, ones.size());
    for (size_t j = ones.size() - take; j < ones.size(); ++j) out.push_back(ones[j]);
    while (out.size() < k) out.push_back(rho1.size() + 1);  // explicit sentinel
    return out;
}

BitVec embed(const BitVec& x, const Restriction& rho) {
    if (rho.mask.size() != rho.n || rho.fill.size() != rho.n)
        throw DimensionMismatch("embed: restriction fields disagree on n");
    BitVec c = rho.fill;
    std::vector<size_t> idx = ext_indices(rho.mask, x.size());
    for (size_t j = 0; j < x.size(); ++j)
        if (idx[j] <= rho.n) c.set(idx[j], x.get(j + 1));
    return c;
}

std::optional<BitVec> extract(const BitVec& c, const BitVec& rho1, size_t k) {
    if (c.size() != rho1.size()) throw DimensionMismatch("extract: length mismatch");
    if (rho1.weight() < k) return std::nullopt;
    std::vector<size_t> idx = ext_indices(rho1, k);
    BitVec x(k);
    for (size_t j = 0; j < k; ++j)
        if (c.get(idx[j])) x.set(j + 1, true);
    return x;
}

Restriction sample_restriction(const RestrictionDistribution& dist, const BitVec& bits) {
    if (bits.size() < dist.bits_needed())
        throw StreamExhausted("sample_restriction: need " + std::to_string(dist.bits_needed()) +
                              " bits, stream has " + std::to_string(bits.size()));
    size_t sl = dist.n * dist.p_log_inv;
    Restriction rho;
    rho.n = dist.n;
    rho.mask = subset_from_string(bits.slice(1, sl), dist.n, dist.p_log_inv);
    rho.fill = bits.slice(sl + 1, sl + dist.n);
    return rho;
}

Restriction sample_restriction(const RestrictionDistribution& dist, RandomStream& rs) {
    BitVec bits(dist.bits_needed());
    for (size_t i = 1; i <= bits.size(); ++i) bits.set(i, rs.bit());
    return sample_restriction(dist, bits);
}

namespace {
bool fallback_ok(const CwGenerator& g, const BitVec& seed, size_t n, size_t b, size_t m, size_t k) {
    BitVec mask = subset_from_string(cw_eval(g, seed), n, b);
    return mask.weight_range(m + 1, n) >= k;
}
} // namespace

BitVec find_fallback_seed(const CwGenerator& g, size_t n, size_t m, size_t k,
                          uint64_t scan_budget) {
    if (n == 0 || g.out_len % n != 0)
        throw DimensionMismatch("find_fallback_seed: out_len must be n*log(1/p)");
    size_t b = g.out_len / n;

    // interpolation: pin the mask-string bits of the last k blocks to 1 by
    // forcing the polynomial to 0 (0 < q) at their evaluation points
    if (k * b <= g.sigma + 1 && g.bias_num >= 1 && k <= n - m) {
        std::vector<std::pair<uint32_t, uint32_t>> pts;
        for (size_t pos = (n - k) * b; pos < n * b; ++pos)
            pts.emplace_back(uint32_t(pos), 0);
        BitVec seed = cw_interpolate_seed(g, pts);
        if (fallback_ok(g, seed, n, b, m, k)) return seed;
    }

    // zero polynomial evaluates to 0 everywhere: all-ones mask when q >= 1
    BitVec zero(g.seed_len());
    if (fallback_ok(g, zero, n, b, m, k)) return zero;

    uint64_t limit = g.seed_len() >= 64 ? scan_budget
                                        : std::min(scan_budget, uint64_t(1) << g.seed_len());
    for (uint64_t v = 0; v < limit; ++v) {
        BitVec seed(g.seed_len());
        for (unsigned b2 = 0; b2 < 64 && b2 < g.seed_len(); ++b2)
            if (v >> b2 & 1) seed.set(b2 + 1, true);
        if (fallback_ok(g, seed, n, b, m, k)) return seed;
    }
    throw NotFound("find_fallback_seed: no seed with " + std::to_string(k) +
                   " survivors after position " + std::to_string(m) + " within budget");
}

} // namespace nmc
