#include "nmc/codes.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace nmc {

size_t min_distance(const Gf2Matrix& a) {
    size_t n = a.rows(), k = a.cols();
    if (k == 0 || n == 0) throw DimensionMismatch("min_distance: empty matrix");
    if (k > 20) throw RegimeTooLarge("min_distance: brute force limited to k <= 20");
    // columns of A, so Gray-code stepping costs one xor per message
    std::vector<BitVec> cols(k);
    Gf2Matrix at = a.transpose();
    for (size_t j = 1; j <= k; ++j) cols[j - 1] = at.row(j);
    BitVec cw(n);
    size_t best = n + 1;
    uint64_t prev_gray = 0;
    for (uint64_t i = 1; i < (1ULL << k); ++i) {
        uint64_t g = i ^ (i >> 1);
        uint64_t diff = g ^ prev_gray;
        prev_gray = g;
        cw ^= cols[std::countr_zero(diff)];
        best = std::min(best, cw.weight());
    }
    return best;
}

LinearCode make_code(const std::string& name, const Gf2Matrix& a, size_t certified_d) {
    LinearCode c;
    c.name = name;
    c.n = a.rows();
    c.k = a.cols();
    c.A = a;
    if (c.k == 0 || c.n < c.k) throw DimensionMismatch("make_code: need n >= k >= 1");
    if (rank(a) != c.k) throw NotFullRank("make_code: encoding matrix is column-rank deficient");

    if (c.k <= 20) {
        size_t bd = min_distance(a);
        if (certified_d && certified_d != bd)
            throw Error("make_code: declared distance " + std::to_string(certified_d) +
                        " but brute force gives " + std::to_string(bd) + " for " + name);
        c.d = bd;
    } else {
        if (!certified_d)
            throw RegimeTooLarge("make_code: k > 20 requires a certified distance for " + name);
        c.d = certified_d;
    }

    // parity check = basis of the left kernel of A
    SolutionSet ker = solve_affine(a.transpose(), BitVec(c.k));
    c.H = Gf2Matrix(c.n - c.k, c.n);
    if (ker.basis.size() != c.n - c.k)
        throw Error("make_code: kernel dimension inconsistent");  // cannot happen after rank check
    for (size_t i = 0; i < ker.basis.size(); ++i) c.H.set_row(i + 1, ker.basis[i]);
    return c;
}

LinearCode repetition_code(size_t r) {
    if (r < 1) throw DimensionMismatch("repetition_code: r >= 1");
    Gf2Matrix a(r, 1);
    for (size_t i = 1; i <= r; ++i) a.set(i, 1, true);
    return make_code("rep" + std::to_string(r), a, r);
}

LinearCode bit_repetition_code(size_t k, size_t r) {
    if (k < 1 || r < 1) throw DimensionMismatch("bit_repetition_code: k, r >= 1");
    Gf2Matrix a(k * r, k);
    for (size_t i = 1; i <= k; ++i)
        for (size_t t = 0; t < r; ++t) a.set((i - 1) * r + t + 1, i, true);
    return make_code("bitrep" + std::to_string(k) + "x" + std::to_string(r), a,
                     k <= 20 ? 0 : r);
}

LinearCode parity_code(size_t k) {
    Gf2Matrix a(k + 1, k);
    for (size_t i = 1; i <= k; ++i) { a.set(i, i, true); a.set(k + 1, i, true); }
    return make_code("parity" + std::to_string(k), a, k <= 20 ? 0 : 2);
}

LinearCode hamming74() {
    Gf2Matrix g = Gf2Matrix::from_strings({
        "1000110",
        "0100101",
        "0010011",
        "0001111",
    });
    return make_code("hamming74", g.transpose());
}

LinearCode extended_hamming84() {
    Gf2Matrix g = Gf2Matrix::from_strings({
        "10001101",
        "01001011",
        "00100111",
        "00011110",
    });
    return make_code("exthamming84", g.transpose());
}

LinearCode shortened_hamming(size_t k) {
    if (k < 1) throw DimensionMismatch("shortened_hamming: k >= 1");
    // r parity bits suffice once 2^r - 1 - r >= k
    size_t r = 2;
    while (((1ULL << r) - 1 - r) < k) ++r;
    // G = [I_k | P], rows of P are distinct vectors of weight >= 2 in
    // (weight, value) order. All parity-check columns are then distinct and
    // nonzero (d >= 3) and the first row e1+e2 forms a weight-3 codeword
    // with the two unit columns (d <= 3).
    Gf2Matrix a(k + r, k);
    for (size_t i = 1; i <= k; ++i) a.set(i, i, true);
    size_t placed = 0;
    for (size_t w = 2; w <= r && placed < k; ++w) {
        for (uint64_t v = 0; v < (1ULL << r) && placed < k; ++v) {
            if (std::popcount(v) != int(w)) continue;
            ++placed;
            for (size_t j = 0; j < r; ++j)
                if (v >> j & 1) a.set(k + j + 1, placed, true);
        }
    }
    return make_code("shamming" + std::to_string(k), a, k <= 20 ? 0 : 3);
}

LinearCode simplex_code(size_t k) {
    if (k < 1 || k > 16) throw DimensionMismatch("simplex_code: 1 <= k <= 16");
    size_t n = (1ULL << k) - 1;
    // columns: the k unit vectors first (systematic), then the remaining
    // nonzero vectors in increasing value order
    Gf2Matrix a(n, k);
    size_t col = 0;
    auto put = [&](uint64_t v) {
        ++col;
        for (size_t j = 0; j < k; ++j) if (v >> j & 1) a.set(col, j + 1, true);
    };
    for (size_t j = 0; j < k; ++j) put(1ULL << j);
    for (uint64_t v = 1; v < (1ULL << k); ++v)
        if (std::popcount(v) > 1) put(v);
    return make_code("simplex" + std::to_string(k), a);
}

LinearCode repeat_code(const LinearCode& base, size_t times, const std::string& name) {
    if (times < 1) throw DimensionMismatch("repeat_code: times >= 1");
    Gf2Matrix a(base.n * times, base.k);
    for (size_t t = 0; t < times; ++t)
        for (size_t i = 1; i <= base.n; ++i) a.set_row(t * base.n + i, base.A.row(i));
    return make_code(name, a, base.k <= 20 ? 0 : base.d * times);
}

LinearCode random_systematic_code(size_t k, size_t n, RandomStream& rs, size_t min_d) {
    if (n < k) throw DimensionMismatch("random_systematic_code: n >= k");
    if (k > 20) throw RegimeTooLarge("random_systematic_code: k <= 20");
    for (int attempt = 0; attempt < 4096; ++attempt) {
        Gf2Matrix a(n, k);
        for (size_t i = 1; i <= k; ++i) a.set(i, i, true);
        for (size_t i = k + 1; i <= n; ++i)
            for (size_t j = 1; j <= k; ++j) a.set(i, j, rs.bit());
        if (min_distance(a) >= min_d)
            return make_code("rand" + std::to_string(k) + "_" + std::to_string(n), a);
    }
    throw NotFound("random_systematic_code: no code of distance >= " +
                   std::to_string(min_d) + " found");
}

RpeScheme make_rpe(const LinearCode& code) {
    RpeScheme s;
    s.code = code;
    s.B = left_inverse(code.A);
    s.Bt = s.B.transpose();
    s.Ht = code.H.transpose();
    s.At = code.A.transpose();
    return s;
}

BitVec rpe_encode(const RpeScheme& s, const BitVec& x, const BitVec& r) {
    if (x.size() != s.k()) throw DimensionMismatch("rpe_encode: message length mismatch");
    if (r.size() != s.randomness_len()) throw DimensionMismatch("rpe_encode: randomness length mismatch");
    return matmul(s.Bt, x) ^ matmul(s.Ht, r);
}

BitVec rpe_encode_random(const RpeScheme& s, const BitVec& x, RandomStream& rs) {
    BitVec r(s.randomness_len());
    for (size_t i = 1; i <= r.size(); ++i) r.set(i, rs.bit());
    return rpe_encode(s, x, r);
}

BitVec rpe_decode(const RpeScheme& s, const BitVec& c) {
    if (c.size() != s.n()) throw DimensionMismatch("rpe_decode: codeword length mismatch");
    return matmul(s.At, c);
}

BitVec rpe_reconstruct(const RpeScheme& s, const std::vector<size_t>& S,
                       const BitVec& chat, const BitVec& x, RandomStream& rs) {
    if (S.size() > s.secrecy_budget())
        throw TooManyConstraints("rpe_reconstruct: |S| = " + std::to_string(S.size()) +
                                 " exceeds budget d-1 = " + std::to_string(s.secrecy_budget()));
    if (chat.size() != s.n()) throw DimensionMismatch("rpe_reconstruct: partial codeword length mismatch");
    BitVec base = matmul(s.Bt, x);
    // solve (H^T r)_S = (chat - B^T x)_S
    Gf2Matrix m(S.size(), s.randomness_len());
    BitVec b(S.size());
    for (size_t i = 0; i < S.size(); ++i) {
        if (S[i] < 1 || S[i] > s.n() || (i > 0 && S[i] <= S[i - 1]))
            throw DimensionMismatch("rpe_reconstruct: S must be strictly increasing in [1, n]");
        m.set_row(i + 1, s.Ht.row(S[i]));
        b.set(i + 1, chat.get(S[i]) ^ base.get(S[i]));
    }
    SolutionSet sol = solve_affine(m, b);
    // within the secrecy budget the projection is surjective, so this is
    // a genuine invariant, not an input error
    if (sol.empty)
        throw Error("rpe_reconstruct: infeasible constraint system inside secrecy budget");
    return rpe_encode(s, x, sol.sample(rs));
}

BitVec rpe_reconstruct_with_oracle(const RpeScheme& s,
                                   const std::vector<std::pair<size_t, bool>>& constraints,
                                   const BitVec& x,
                                   const std::function<bool(size_t)>& coord_oracle) {
    if (constraints.size() > s.secrecy_budget())
        throw TooManyConstraints("rpe_reconstruct_with_oracle: " + std::to_string(constraints.size()) +
                                 " constraints exceed budget d-1 = " + std::to_string(s.secrecy_budget()));
    BitVec base = matmul(s.Bt, x);
    size_t rl = s.randomness_len();

    // incremental elimination state over the randomness r; rows carry an
    // rhs bit appended at position rl+1
    std::vector<BitVec> rows;          // echelon rows
    std::vector<size_t> pivots;        // pivot column per row
    auto reduce = [&](BitVec v) {
        for (size_t i = 0; i < rows.size(); ++i)
            if (v.get(pivots[i])) v ^= rows[i];
        return v;
    };
    // returns {determined, value}; if not determined, fixes the row with rhs
    auto query_or_fix = [&](const BitVec& hrow, bool rhs_if_free) -> std::pair<bool, bool> {
        BitVec v = hrow.concat(BitVec(1));
        v = reduce(v);
        size_t piv = 0;
        for (size_t j = 1; j <= rl; ++j) if (v.get(j)) { piv = j; break; }
        if (piv == 0) return {true, v.get(rl + 1)};
        v.set(rl + 1, v.get(rl + 1) ^ rhs_if_free);
        rows.push_back(v);
        pivots.push_back(piv);
        return {false, rhs_if_free};
    };

    std::vector<char> constrained(s.n() + 1, 0);
    BitVec c(s.n());
    for (auto& [pos, val] : constraints) {
        if (pos < 1 || pos > s.n() || constrained[pos])
            throw DimensionMismatch("rpe_reconstruct_with_oracle: bad or duplicate position");
        constrained[pos] = 1;
        c.set(pos, val);
        auto [det, v] = query_or_fix(s.Ht.row(pos), val ^ base.get(pos));
        if (det && v != (val ^ base.get(pos)))
            throw Error("rpe_reconstruct_with_oracle: inconsistent constraints inside budget");
    }
    // fill remaining coordinates left to right; free ones consume the
    // oracle at their own index, determined ones consume nothing
    for (size_t pos = 1; pos <= s.n(); ++pos) {
        if (constrained[pos]) continue;
        BitVec v = reduce(s.Ht.row(pos).concat(BitVec(1)));
        size_t piv = 0;
        for (size_t j = 1; j <= rl; ++j) if (v.get(j)) { piv = j; break; }
        if (piv == 0) {
            c.set(pos, base.get(pos) ^ v.get(rl + 1));
        } else {
            bool bit = coord_oracle(pos);
            c.set(pos, bit);
            v.set(rl + 1, v.get(rl + 1) ^ (bit ^ base.get(pos)));
            rows.push_back(v);
            pivots.push_back(piv);
        }
    }
    return c;
}

namespace {

// visit all size-m subsets of [1, n] in lexicographic order
template <typename F>
void for_each_subset(size_t n, size_t m, F&& f) {
    std::vector<size_t> S(m);
    for (size_t i = 0; i < m; ++i) S[i] = i + 1;
    if (m > n) return;
    for (;;) {
        f(S);
        size_t i = m;
        while (i > 0 && S[i - 1] == n - m + i) --i;
        if (i == 0) break;
        ++S[i - 1];
        for (size_t j = i; j < m; ++j) S[j] = S[j - 1] + 1;
    }
}

void audit_sizes(const RpeScheme& s, size_t lo, size_t hi, SecrecyReport& rep) {
    size_t k = s.k(), n = s.n(), rl = s.randomness_len();
    if (k > 12 || rl > 16)
        throw RegimeTooLarge("verify_secrecy: requires k <= 12 and n-k <= 16");
    // total work estimate; refuse absurd enumerations rather than hang
    long double work = 0;
    for (size_t m = lo; m <= hi; ++m) {
        long double c = 1;
        for (size_t i = 0; i < m; ++i) c = c * (n - i) / (i + 1);
        work += c * (long double)(1ULL << rl) * (long double)(1ULL << k);
    }
    if (work > 5e8L)
        throw RegimeTooLarge("verify_secrecy: enumeration budget exceeded");

    // precompute H^T r projections lazily per subset
    std::vector<BitVec> hrows(n);
    for (size_t i = 1; i <= n; ++i) hrows[i - 1] = s.Ht.row(i);

    for (size_t m = lo; m <= hi; ++m) {
        uint64_t expected = (1ULL << rl) >> m;  // 2^(n-k-m); zero means guaranteed violation
        for_each_subset(n, m, [&](const std::vector<size_t>& S) {
            ++rep.sets_checked;
            // (H^T r)_S patterns over all r, independent of the message
            std::vector<uint64_t> counts(1ULL << m, 0);
            for (uint64_t r = 0; r < (1ULL << rl); ++r) {
                BitVec rv = BitVec::from_uint(r, rl);
                uint64_t pat = 0;
                for (size_t j = 0; j < m; ++j)
                    if (hrows[S[j] - 1].dot(rv)) pat |= 1ULL << j;
                ++counts[pat];
            }
            // the message only shifts the pattern (xor with (B^T x)_S), so
            // audit every message by applying the shift to the counts
            for (uint64_t xm = 0; xm < (1ULL << k); ++xm) {
                BitVec x = BitVec::from_uint(xm, k);
                BitVec bx = matmul(s.Bt, x);
                uint64_t shift = 0;
                for (size_t j = 0; j < m; ++j)
                    if (bx.get(S[j])) shift |= 1ULL << j;
                for (uint64_t pat = 0; pat < (1ULL << m); ++pat) {
                    ++rep.patterns_checked;
                    uint64_t cnt = counts[pat ^ shift];
                    if (cnt != expected && rep.violations.size() < 16) {
                        SecrecyViolation v;
                        v.S = S;
                        v.pattern = BitVec::from_uint(pat, m).to_string();
                        v.count = cnt;
                        v.expected = expected;
                        rep.violations.push_back(v);
                    }
                    if (cnt != expected) rep.ok = false;
                }
            }
        });
    }
}

} // namespace

SecrecyReport verify_secrecy(const RpeScheme& s) {
    SecrecyReport rep;
    rep.ok = true;
    rep.max_set_size = s.secrecy_budget();
    audit_sizes(s, 1, rep.max_set_size, rep);
    return rep;
}

SecrecyReport audit_secrecy_at_size(const RpeScheme& s, size_t set_size) {
    SecrecyReport rep;
    rep.ok = true;
    rep.max_set_size = set_size;
    audit_sizes(s, set_size, set_size, rep);
    return rep;
}

std::vector<LinearCode> load_code_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_code_registry: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("load_code_registry: " + std::string(e.what()));
    }
    if (!j.contains("codes") || !j["codes"].is_array())
        throw ParseError("load_code_registry: top-level \"codes\" array missing");
    std::vector<LinearCode> out;
    size_t idx = 0;
    for (auto& e : j["codes"]) {
        ++idx;
        auto where = "load_code_registry: codes[" + std::to_string(idx - 1) + "]: ";
        if (!e.contains("name") || !e.contains("k") || !e.contains("n") ||
            !e.contains("d") || !e.contains("generator_rows"))
            throw ParseError(where + "need name, k, n, d, generator_rows");
        size_t k = e["k"], n = e["n"], d = e["d"];
        auto& rows = e["generator_rows"];
        if (!rows.is_array() || rows.size() != k)
            throw ParseError(where + "generator_rows must hold exactly k rows");
        if (k > 20)
            throw RegimeTooLarge(where + "registry codes need k <= 20 for distance recomputation");
        Gf2Matrix g(k, n);
        for (size_t i = 0; i < k; ++i)
            g.set_row(i + 1, BitVec::from_hex(rows[i].get<std::string>(), n));
        LinearCode c = make_code(e["name"].get<std::string>(), g.transpose());
        if (c.d != d)
            throw ParseError(where + "declared distance " + std::to_string(d) +
                             " but recomputed " + std::to_string(c.d));
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace nmc
