#include "nmc/prg.hpp"

#include <map>

namespace nmc {

namespace {

// primitive polynomials over GF(2), x^m term included (Stahnke's table)
const uint32_t kPoly[21] = {
    0,
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x89,     // x^7 + x^3 + 1
    0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
    0x20009,  // x^17 + x^3 + 1
    0x40081,  // x^18 + x^7 + 1
    0x80027,  // x^19 + x^5 + x^2 + x + 1
    0x100009, // x^20 + x^3 + 1
};

} // namespace

Gf2Field::Gf2Field(unsigned m) : m_(m) {
    if (m < 1 || m > 20) throw RegimeTooLarge("Gf2Field: field table covers m = 1..20");
    poly_ = kPoly[m];
    if (m <= 18) {
        uint32_t n = size();
        log_.assign(n, 0);
        alog_.assign(n - 1, 0);
        uint32_t v = 1;
        for (uint32_t i = 0; i < n - 1; ++i) {
            alog_[i] = v;
            if (log_[v] != 0 && v != 1)
                throw Error("Gf2Field: polynomial is not primitive");
            log_[v] = i;
            v <<= 1;
            if (v & n) v ^= poly_;
        }
        if (v != 1) throw Error("Gf2Field: multiplicative order check failed");
    }
}

uint32_t Gf2Field::slow_mul(uint32_t a, uint32_t b) const {
    uint64_t acc = 0, aa = a;
    while (b) {
        if (b & 1) acc ^= aa;
        b >>= 1;
        aa <<= 1;
        if (aa >> m_ & 1) aa ^= poly_;
    }
    return uint32_t(acc);
}

uint32_t Gf2Field::mul(uint32_t a, uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    if (!log_.empty()) {
        uint32_t s = log_[a] + log_[b];
        if (s >= order()) s -= order();
        return alog_[s];
    }
    return slow_mul(a, b);
}

uint32_t Gf2Field::pow(uint32_t a, uint64_t e) const {
    uint32_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

uint32_t Gf2Field::inv(uint32_t a) const {
    if (a == 0) throw Error("Gf2Field::inv: zero has no inverse");
    if (!log_.empty()) return alog_[(order() - log_[a]) % order()];
    return pow(a, uint64_t(order()) - 1);  // a^(2^m - 2)
}

const Gf2Field& Gf2Field::get(unsigned m) {
    static std::map<unsigned, std::unique_ptr<Gf2Field>> cache;
    auto it = cache.find(m);
    if (it == cache.end())
        it = cache.emplace(m, std::make_unique<Gf2Field>(m)).first;
    return *it->second;
}

CwGenerator make_cw(size_t sigma, unsigned field_log, size_t out_len, uint32_t bias_num) {
    CwGenerator g;
    g.sigma = sigma;
    g.field_log = field_log;
    g.out_len = out_len;
    g.bias_num = bias_num;
    if (out_len == 0) throw DimensionMismatch("make_cw: empty output");
    if (out_len > g.d())
        throw InfeasibleParams("make_cw: out_len > 2^m, evaluation points would repeat");
    if (bias_num > g.d())
        throw InfeasibleParams("make_cw: bias numerator exceeds field size");
    Gf2Field::get(field_log);  // validates m and builds tables eagerly
    return g;
}

CwGenerator make_cw_unbiased(size_t sigma, size_t out_len) {
    unsigned m = 1;
    while ((size_t(1) << m) < out_len) ++m;
    return make_cw(sigma, m, out_len, uint32_t(1) << (m - 1));
}

BitVec cw_eval(const CwGenerator& g, const BitVec& seed) {
    if (seed.size() != g.seed_len())
        throw DimensionMismatch("cw_eval: seed length mismatch");
    const Gf2Field& f = Gf2Field::get(g.field_log);
    size_t nc = g.sigma + 1;
    std::vector<uint32_t> a(nc, 0);
    for (size_t j = 0; j < nc; ++j)
        for (unsigned b = 0; b < g.field_log; ++b)
            if (seed.get(j * g.field_log + b + 1)) a[j] |= uint32_t(1) << b;
    BitVec out(g.out_len);
    for (size_t i = 0; i < g.out_len; ++i) {
        uint32_t pt = uint32_t(i);
        uint32_t v = a[nc - 1];
        for (size_t j = nc - 1; j-- > 0;) v = f.mul(v, pt) ^ a[j];
        if (v < g.bias_num) out.set(i + 1, true);
    }
    return out;
}

BitVec cw_interpolate_seed(const CwGenerator& g,
                           const std::vector<std::pair<uint32_t, uint32_t>>& pts) {
    size_t nc = g.sigma + 1;
    if (pts.size() > nc)
        throw TooManyConstraints("cw_interpolate_seed: more points than coefficients");
    const Gf2Field& f = Gf2Field::get(g.field_log);
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i].first == pts[j].first)
                throw DimensionMismatch("cw_interpolate_seed: repeated point");

    // Lagrange: sum_i y_i * prod_{j != i} (X - x_j) / (x_i - x_j),
    // accumulated in coefficient form. Unconstrained high coefficients
    // stay zero.
    std::vector<uint32_t> coeffs(nc, 0);
    for (size_t i = 0; i < pts.size(); ++i) {
        std::vector<uint32_t> term = {1};  // running product polynomial
        uint32_t denom = 1;
        for (size_t j = 0; j < pts.size(); ++j) {
            if (j == i) continue;
            // term *= (X + x_j)   (minus is xor in characteristic 2)
            term.push_back(0);
            for (size_t t = term.size(); t-- > 1;)
                term[t] = term[t - 1] ^ f.mul(term[t], pts[j].first);
            term[0] = f.mul(term[0], pts[j].first);
            denom = f.mul(denom, pts[i].first ^ pts[j].first);
        }
        uint32_t scale = f.mul(pts[i].second, f.inv(denom));
        for (size_t t = 0; t < term.size(); ++t)
            coeffs[t] ^= f.mul(term[t], scale);
    }

    BitVec seed(g.seed_len());
    for (size_t j = 0; j < nc; ++j)
        for (unsigned b = 0; b < g.field_log; ++b)
            if (coeffs[j] >> b & 1) seed.set(j * g.field_log + b + 1, true);
    return seed;
}

namespace {

template <typename F>
void for_each_subset(size_t n, size_t m, F&& f) {
    if (m > n || m == 0) return;
    std::vector<size_t> S(m);
    for (size_t i = 0; i < m; ++i) S[i] = i + 1;
    for (;;) {
        f(S);
        size_t i = m;
        while (i > 0 && S[i - 1] == n - m + i) --i;
        if (i == 0) break;
        ++S[i - 1];
        for (size_t j = i; j < m; ++j) S[j] = S[j - 1] + 1;
    }
}

void audit_orders(const BitSourceSpec& src, size_t lo, size_t hi, IndependenceReport& rep) {
    if (src.entropy_bits > 24)
        throw RegimeTooLarge("verify_independence: exhaustive audit needs entropy <= 24 bits");
    uint64_t total = 1ULL << src.entropy_bits;
    long double work = 0;
    for (size_t o = lo; o <= hi; ++o) {
        long double c = 1;
        for (size_t i = 0; i < o; ++i) c = c * (src.out_len - i) / (i + 1);
        work += c * (long double)total;
    }
    if (work > 5e8L)
        throw RegimeTooLarge("verify_independence: enumeration budget exceeded");

    // materialize the output table once
    std::vector<BitVec> table(total);
    for (uint64_t e = 0; e < total; ++e) {
        table[e] = src.eval(e);
        if (table[e].size() != src.out_len)
            throw DimensionMismatch("verify_independence: eval output length mismatch");
    }

    for (size_t o = lo; o <= hi && o <= src.out_len; ++o) {
        for_each_subset(src.out_len, o, [&](const std::vector<size_t>& T) {
            ++rep.subsets_checked;
            std::vector<uint64_t> counts(1ULL << o, 0);
            for (uint64_t e = 0; e < total; ++e) {
                uint64_t pat = 0;
                for (size_t j = 0; j < o; ++j)
                    if (table[e].get(T[j])) pat |= 1ULL << j;
                ++counts[pat];
            }
            for (uint64_t pat = 0; pat < (1ULL << o); ++pat) {
                // exact expected multiplicity: total * prod marginals
                unsigned __int128 num = total;
                uint64_t den_bits_total = 0;
                bool exact = true;
                for (size_t j = 0; j < o; ++j) {
                    auto [bn, bd] = src.bias(T[j]);
                    uint64_t top = (pat >> j & 1) ? bn : (bd - bn);
                    num *= top;
                    // denominators are powers of two throughout this library
                    if (bd == 0 || (bd & (bd - 1)) != 0)
                        throw Error("verify_independence: bias denominator must be a power of two");
                    den_bits_total += std::countr_zero(bd);
                }
                unsigned __int128 denom = (unsigned __int128)1 << den_bits_total;
                uint64_t expected;
                if (num % denom != 0) { exact = false; expected = 0; }
                else expected = uint64_t(num / denom);
                if (!exact || counts[pat] != expected) {
                    rep.ok = false;
                    if (rep.violations.size() < 16) {
                        IndependenceViolation v;
                        v.T = T;
                        v.pattern = BitVec::from_uint(pat, o).to_string();
                        v.count = counts[pat];
                        v.expected = expected;
                        rep.violations.push_back(v);
                    }
                }
            }
        });
    }
}

} // namespace

IndependenceReport verify_independence(const BitSourceSpec& src, size_t order) {
    IndependenceReport rep;
    rep.ok = true;
    rep.order = order;
    audit_orders(src, 1, order, rep);
    return rep;
}

IndependenceReport audit_independence_at_order(const BitSourceSpec& src, size_t order) {
    IndependenceReport rep;
    rep.ok = true;
    rep.order = order;
    audit_orders(src, order, order, rep);
    return rep;
}

BitSourceSpec as_bit_source(const CwGenerator& g) {
    BitSourceSpec s;
    s.out_len = g.out_len;
    s.entropy_bits = g.seed_len();
    s.eval = [g](uint64_t e) { return cw_eval(g, BitVec::from_uint(e, g.seed_len())); };
    s.bias = [g](size_t) { return std::pair<uint64_t, uint64_t>(g.bias_num, g.d()); };
    return s;
}

IndependenceReport verify_independence(const CwGenerator& g, size_t order) {
    return verify_independence(as_bit_source(g), order);
}

IndependenceReport audit_independence_at_order(const CwGenerator& g, size_t order) {
    return audit_independence_at_order(as_bit_source(g), order);
}

BitVec IndepSource::draw(RandomStream& rs) const {
    BitVec zeta(gen.seed_len()), r(seed_rpe.randomness_len()), u(uniform_len);
    for (size_t i = 1; i <= zeta.size(); ++i) zeta.set(i, rs.bit());
    for (size_t i = 1; i <= r.size(); ++i) r.set(i, rs.bit());
    for (size_t i = 1; i <= u.size(); ++i) u.set(i, rs.bit());
    return draw_explicit(zeta, r, u);
}

BitVec IndepSource::draw_explicit(const BitVec& zeta, const BitVec& r, const BitVec& u) const {
    if (u.size() != uniform_len) throw DimensionMismatch("IndepSource: uniform tail length mismatch");
    return cw_eval(gen, zeta).concat(rpe_encode(seed_rpe, zeta, r)).concat(u);
}

IndepSource concat_independent(const CwGenerator& gen, const RpeScheme& seed_rpe,
                               size_t uniform_len) {
    if (seed_rpe.k() != gen.seed_len())
        throw DimensionMismatch("concat_independent: seed encoding must take the generator seed");
    if (seed_rpe.secrecy_budget() < gen.sigma)
        throw ThresholdViolation("concat_independent: seed encoding secrecy budget " +
                                 std::to_string(seed_rpe.secrecy_budget()) +
                                 " is below sigma = " + std::to_string(gen.sigma));
    IndepSource s;
    s.gen = gen;
    s.seed_rpe = seed_rpe;
    s.uniform_len = uniform_len;
    return s;
}

BitSourceSpec as_bit_source(const IndepSource& src) {
    // marginals: generator part q/d, encoded part and uniform tail exactly 1/2
    for (size_t i = 1; i <= src.seed_rpe.n(); ++i) {
        bool nonzero = false;
        for (size_t j = 1; j <= src.seed_rpe.k() && !nonzero; ++j)
            nonzero = src.seed_rpe.Bt.get(i, j);
        for (size_t j = 1; j <= src.seed_rpe.randomness_len() && !nonzero; ++j)
            nonzero = src.seed_rpe.Ht.get(i, j);
        if (!nonzero)
            throw Error("as_bit_source: seed encoding has a constant coordinate");
    }
    BitSourceSpec s;
    IndepSource c = src;
    s.out_len = src.total_len();
    s.entropy_bits = src.entropy_bits();
    s.eval = [c](uint64_t e) {
        size_t zl = c.gen.seed_len(), rl = c.seed_rpe.randomness_len();
        BitVec zeta = BitVec::from_uint(e & ((zl == 64) ? ~0ULL : ((1ULL << zl) - 1)), zl);
        BitVec r = BitVec::from_uint((e >> zl) & ((1ULL << rl) - 1), rl);
        BitVec u = BitVec::from_uint(e >> (zl + rl), c.uniform_len);
        return c.draw_explicit(zeta, r, u);
    };
    size_t mask_len = src.mask_len();
    uint64_t q = src.gen.bias_num, d = src.gen.d();
    s.bias = [mask_len, q, d](size_t pos) {
        if (pos <= mask_len) return std::pair<uint64_t, uint64_t>(q, d);
        return std::pair<uint64_t, uint64_t>(1, 2);
    };
    return s;
}

} // namespace nmc
