#include "nmc/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace nmc {

namespace {

BitVec draw_bits(RandomStream& rs, size_t len) {
    BitVec v(len);
    for (size_t i = 1; i <= len; ++i) v.set(i, rs.bit());
    return v;
}

void check_selection(const std::vector<size_t>& S, size_t want, size_t N, const char* what) {
    if (S.size() != want)
        throw SelectorViolation(std::string(what) + ": selected " + std::to_string(S.size()) +
                                " indices, expected " + std::to_string(want));
    for (size_t i = 0; i < S.size(); ++i) {
        if (S[i] < 1 || S[i] > N)
            throw SelectorViolation(std::string(what) + ": index " + std::to_string(S[i]) +
                                    " outside [1, " + std::to_string(N) + "]");
        if (i > 0 && S[i] <= S[i - 1])
            throw SelectorViolation(std::string(what) + ": indices must be strictly increasing");
    }
}

size_t total_leak(const std::vector<size_t>& sizes) {
    size_t s = 0;
    for (size_t v : sizes) s += v;
    return s;
}

// coordinate-keyed bit oracle; the same (key, coord) pair always yields the
// same bit, which is what lets different hybrids share one conditional sample
std::function<bool(size_t)> coord_oracle(uint64_t key) {
    return [key](size_t coord) { return RandomStream::fork(key, coord).bit(); };
}

} // namespace

// --- leaky game ------------------------------------------------------------------

void validate_adversary(const LeakyLocalAdversary& adv) {
    if (adv.family.count < 1 || adv.family.n_inputs < 1)
        throw SelectorViolation("adversary: empty function family");
    if (adv.out_count < 1) throw SelectorViolation("adversary: output selection must be nonempty");
    if (adv.round_tables.size() != adv.leak_sizes.size())
        throw SelectorViolation("adversary: need one selector table per round");
    size_t prefix = 0;
    for (size_t r = 0; r < adv.round_tables.size(); ++r) {
        if (adv.leak_sizes[r] < 1) throw SelectorViolation("adversary: round leaks zero bits");
        if (prefix > 24) throw RegimeTooLarge("adversary: transcript space too large for tables");
        if (adv.round_tables[r].size() != size_t(1) << prefix)
            throw SelectorViolation("adversary: round " + std::to_string(r + 1) + " table has " +
                                    std::to_string(adv.round_tables[r].size()) + " entries, want 2^" +
                                    std::to_string(prefix));
        for (const auto& e : adv.round_tables[r])
            check_selection(e, adv.leak_sizes[r], adv.family.count, "round selector");
        prefix += adv.leak_sizes[r];
    }
    if (prefix > 24) throw RegimeTooLarge("adversary: transcript space too large for tables");
    if (adv.final_table.size() != size_t(1) << prefix)
        throw SelectorViolation("adversary: final table has " + std::to_string(adv.final_table.size()) +
                                " entries, want 2^" + std::to_string(prefix));
    for (const auto& e : adv.final_table)
        if (!e.empty())  // empty entry encodes a refusal
            check_selection(e, adv.out_count, adv.family.count, "final selector");
}

GameAdversary as_game(const LeakyLocalAdversary& adv) {
    validate_adversary(adv);
    auto a = std::make_shared<LeakyLocalAdversary>(adv);
    GameAdversary g;
    g.n_in = adv.family.n_inputs;
    g.N = adv.family.count;
    g.leak_sizes = adv.leak_sizes;
    g.out_count = adv.out_count;
    g.locality = family_locality(adv.family);
    g.name = adv.name;
    g.eval_fn = [a](size_t j, const BitVec& x) { return family_eval_one(a->family, j, x); };
    g.select = [a](size_t round, const BitVec& tr) -> std::optional<std::vector<size_t>> {
        return a->round_tables[round - 1][tr.to_uint()];
    };
    g.select_final = [a](const BitVec& tr) -> std::optional<std::vector<size_t>> {
        const auto& e = a->final_table[tr.to_uint()];
        if (e.empty()) return std::nullopt;
        return e;
    };
    g.materialize = [a](size_t j) -> Fn {
        auto it = a->family.explicit_fns.find(j);
        if (it != a->family.explicit_fns.end()) return it->second;
        LocalFunction wire;
        wire.n_inputs = a->family.n_inputs;
        wire.deps = {j};
        wire.table = BitVec::from_string("01");
        return wire;
    };
    g.influence = [a](size_t j) { return family_influence(a->family, j); };
    g.nontrivial = [a]() {
        std::vector<size_t> idx;
        idx.reserve(a->family.explicit_fns.size());
        for (const auto& [j, fn] : a->family.explicit_fns) idx.push_back(j);
        return idx;
    };
    return g;
}

GameResult play_game(const GameAdversary& adv, const BitVec& x) {
    if (x.size() != adv.n_in) throw DimensionMismatch("play_game: input length mismatch");
    GameResult res;
    res.transcript = BitVec(0);
    for (size_t r = 1; r <= adv.rounds(); ++r) {
        auto S = adv.select(r, res.transcript);
        if (!S) return res;  // refusal: output stays bottom
        check_selection(*S, adv.leak_sizes[r - 1], adv.N, "round selector");
        BitVec y(S->size());
        for (size_t i = 0; i < S->size(); ++i) y.set(i + 1, adv.eval_fn((*S)[i], x));
        res.leak_sets.push_back(*S);
        res.transcript = res.transcript.concat(y);
    }
    auto T = adv.select_final(res.transcript);
    if (!T) return res;
    check_selection(*T, adv.out_count, adv.N, "final selector");
    res.final_set = *T;
    BitVec out(adv.out_count);
    for (size_t i = 0; i < T->size(); ++i) out.set(i + 1, adv.eval_fn((*T)[i], x));
    res.output = out;
    return res;
}

std::optional<BitVec> eval_leaky(const LeakyLocalAdversary& adv, const BitVec& x) {
    return play_game(as_game(adv), x).output;
}

// --- restriction-embedding reduction ----------------------------------------------

BitVec star_mask(const StarParams& pp, const BitVec& zeta) {
    return subset_from_string(cw_eval(pp.gen, zeta), pp.n, pp.p_log_inv);
}

bool star_mask_ok(const StarParams& pp, const BitVec& mask) {
    if (mask.weight_range(pp.m() + 1, pp.n) < pp.k) return false;
    if (pp.strict_decode && mask.weight_range(1, pp.m()) != 0) return false;
    return true;
}

StarParams make_star_params(size_t k, size_t n, size_t p_log_inv, size_t sigma,
                            const LinearCode& seed_code, bool relax_chernoff,
                            bool strict_decode) {
    if (k < 1 || n < 2 || p_log_inv < 1 || sigma < 1)
        throw InfeasibleParams("make_star_params: k, sigma, log(1/p) must be positive, n >= 2");
    StarParams pp;
    pp.k = k;
    pp.n = n;
    pp.p_log_inv = p_log_inv;
    pp.sigma = sigma;
    pp.strict_decode = strict_decode;
    pp.gen = make_cw_unbiased(sigma, n * p_log_inv);
    if (seed_code.k != pp.gen.seed_len())
        throw InfeasibleParams("make_star_params: seed code encodes " + std::to_string(seed_code.k) +
                               " bits, generator seed needs " + std::to_string(pp.gen.seed_len()));
    pp.seed_rpe = make_rpe(seed_code);
    const size_t m = pp.m();
    const double p = pp.p();

    auto req = [&](std::string name, double lhs, double rhs, bool ok, bool required) {
        pp.verdicts.push_back({name, lhs, rhs, ok, required, true});
        if (required && !ok)
            throw InfeasibleParams("make_star_params: " + name + " violated (" +
                                   std::to_string(lhs) + " vs " + std::to_string(rhs) + ")");
    };
    req("seed-block-short", double(m), double(n), m < n, true);
    req("k-fits-tail", double(k), double(n - m), k <= n - m, true);
    req("seed-secrecy", double(sigma), double(pp.seed_rpe.secrecy_budget()),
        sigma <= pp.seed_rpe.secrecy_budget(), true);
    req("chernoff-lower", 4.0 * double(sigma) / double(p_log_inv), double(k),
        4.0 * double(sigma) / double(p_log_inv) <= double(k), !relax_chernoff);
    req("chernoff-upper", double(k), double(n - m) * p / 2.0,
        double(k) <= double(n - m) * p / 2.0, !relax_chernoff);

    pp.zeta_star = find_fallback_seed(pp.gen, n, m, k);
    if (strict_decode && !star_mask_ok(pp, star_mask(pp, pp.zeta_star))) {
        // the strict predicate also bans survivors inside the seed block;
        // rescan for one (tiny parameter sets only)
        bool found = false;
        if (pp.s() < 63) {
            uint64_t lim = std::min<uint64_t>(uint64_t(1) << pp.s(), uint64_t(1) << 22);
            for (uint64_t v = 0; v < lim && !found; ++v) {
                BitVec z = BitVec::from_uint(v, pp.s());
                if (star_mask_ok(pp, star_mask(pp, z))) {
                    pp.zeta_star = z;
                    found = true;
                }
            }
        }
        if (!found) throw NotFound("make_star_params: no strict-mode fallback seed");
    }
    return pp;
}

BitVec star_encode_explicit(const StarParams& pp, const BitVec& x, const BitVec& rnd) {
    if (x.size() != pp.k) throw DimensionMismatch("star_encode: message length mismatch");
    if (rnd.size() != pp.randomness_len())
        throw DimensionMismatch("star_encode: randomness length mismatch");
    const size_t s = pp.s(), m = pp.m();
    BitVec zeta = rnd.slice(1, s);
    BitVec rseed = rnd.slice(s + 1, s + pp.seed_rpe.randomness_len());
    BitVec u = rnd.slice(s + pp.seed_rpe.randomness_len() + 1, rnd.size());
    BitVec mask = star_mask(pp, zeta);
    if (!star_mask_ok(pp, mask)) {
        zeta = pp.zeta_star;
        mask = star_mask(pp, zeta);
    }
    BitVec fill = rpe_encode(pp.seed_rpe, zeta, rseed).concat(u);
    (void)m;
    return embed(x, Restriction{pp.n, mask, fill});
}

BitVec star_encode(const StarParams& pp, const BitVec& x, RandomStream& rs) {
    return star_encode_explicit(pp, x, draw_bits(rs, pp.randomness_len()));
}

std::optional<BitVec> star_decode(const StarParams& pp, const BitVec& ct) {
    if (ct.size() != pp.n) throw DimensionMismatch("star_decode: codeword length mismatch");
    BitVec zt = rpe_decode(pp.seed_rpe, ct.slice(1, pp.m()));
    BitVec mask = star_mask(pp, zt);
    if (!star_mask_ok(pp, mask)) return std::nullopt;
    return extract(ct, mask, pp.k);
}

namespace {

// shared state behind a simulated adversary's closures
struct StarWrap {
    StarParams pp;
    GameAdversary base;
    Restriction rho;                  // full mask + fill, over the n coordinates
    BitVec ext_mask;                  // indicator of the k embedding positions
    std::vector<size_t> ext;          // the positions themselves, ascending
    std::vector<std::pair<size_t, size_t>> var_map;   // ext[i] -> i+1
    size_t base_len = 0;              // base transcript length
    // last embedded input, so a game's many point evaluations share one embed
    mutable std::optional<std::pair<BitVec, BitVec>> cache;

    const BitVec& embedded(const BitVec& z) const {
        if (!cache || cache->first != z) cache = {z, embed(z, rho)};
        return cache->second;
    }
    Fn restricted(size_t j) const {
        Fn inner = base.materialize(j);
        Fn fixed = fn_restrict(inner, Restriction{pp.n, ext_mask, rho.fill});
        return fn_rename(fixed, var_map, pp.k);
    }
};

GameAdversary wrap_adversary(std::shared_ptr<StarWrap> st) {
    GameAdversary g;
    g.n_in = st->pp.k;
    g.N = st->base.N;
    g.leak_sizes = st->base.leak_sizes;
    g.leak_sizes.push_back(st->pp.m());
    g.out_count = st->pp.k;
    g.locality = std::min(st->base.locality, st->pp.k);
    g.name = st->base.name + "+sim";
    g.eval_fn = [st](size_t j, const BitVec& z) { return st->base.eval_fn(j, st->embedded(z)); };
    g.select = [st](size_t round, const BitVec& tr) -> std::optional<std::vector<size_t>> {
        if (round <= st->base.rounds()) return st->base.select(round, tr);
        // the appended round leaks the seed block of the tampered codeword
        auto T = st->base.select_final(tr);
        if (!T) return std::nullopt;
        return std::vector<size_t>(T->begin(), T->begin() + st->pp.m());
    };
    g.select_final = [st](const BitVec& tr) -> std::optional<std::vector<size_t>> {
        BitVec base_tr = st->base_len ? tr.slice(1, st->base_len) : BitVec(0);
        BitVec y = tr.slice(st->base_len + 1, st->base_len + st->pp.m());
        auto T = st->base.select_final(base_tr);
        if (!T) return std::nullopt;
        BitVec mask = star_mask(st->pp, rpe_decode(st->pp.seed_rpe, y));
        // same validity test the decoder applies; refusing here is what makes
        // the simulated game output bottom exactly when the real one does
        if (!star_mask_ok(st->pp, mask)) return std::nullopt;
        std::vector<size_t> idx = ext_indices(mask, st->pp.k);
        std::vector<size_t> out(st->pp.k);
        for (size_t j = 0; j < out.size(); ++j) out[j] = (*T)[idx[j] - 1];
        return out;
    };
    g.materialize = [st](size_t j) { return st->restricted(j); };
    g.influence = [st](size_t j) {
        std::vector<size_t> out;
        for (size_t v : st->base.influence(j)) {
            auto it = std::lower_bound(st->ext.begin(), st->ext.end(), v);
            if (it != st->ext.end() && *it == v) out.push_back(size_t(it - st->ext.begin()) + 1);
        }
        return out;
    };
    g.nontrivial = [st]() { return st->base.nontrivial(); };
    return g;
}

} // namespace

StarSimResult star_simulator(const StarParams& pp, const GameAdversary& tau,
                             const TamperClass& cls, const BitVec& rnd) {
    if (tau.n_in != pp.n || tau.out_count != pp.n)
        throw DimensionMismatch("star_simulator: adversary must tamper full codewords");
    if (rnd.size() != pp.randomness_len())
        throw DimensionMismatch("star_simulator: randomness length mismatch");
    const size_t s = pp.s();
    StarSimResult res;
    res.randomness = rnd;
    BitVec zeta = rnd.slice(1, s);
    BitVec rseed = rnd.slice(s + 1, s + pp.seed_rpe.randomness_len());
    BitVec u = rnd.slice(s + pp.seed_rpe.randomness_len() + 1, rnd.size());
    BitVec mask = star_mask(pp, zeta);
    if (!star_mask_ok(pp, mask)) {
        zeta = pp.zeta_star;
        mask = star_mask(pp, zeta);
        res.fallback_used = true;
    }
    auto st = std::make_shared<StarWrap>();
    st->pp = pp;
    st->base = tau;
    st->rho = Restriction{pp.n, mask, rpe_encode(pp.seed_rpe, zeta, rseed).concat(u)};
    st->ext = ext_indices(mask, pp.k);
    st->ext_mask = BitVec(pp.n);
    for (size_t i = 0; i < st->ext.size(); ++i) {
        st->ext_mask.set(st->ext[i], true);
        st->var_map.emplace_back(st->ext[i], i + 1);
    }
    st->base_len = total_leak(tau.leak_sizes);

    // identity wires restrict to wires or constants, which every class in use
    // admits, so only the explicitly committed functions need checking
    for (size_t j : tau.nontrivial())
        if (!fn_in_class(st->restricted(j), cls)) {
            res.constant_bottom = true;
            return res;
        }
    res.tau_prime = wrap_adversary(st);
    return res;
}

StarSimResult star_simulator(const StarParams& pp, const GameAdversary& tau,
                             const TamperClass& cls, RandomStream& rs) {
    return star_simulator(pp, tau, cls, draw_bits(rs, pp.randomness_len()));
}

// --- split-state reduction ---------------------------------------------------------

SplitStateParams make_ss_params(size_t k, size_t ell, size_t q_rounds, size_t leak_m,
                                size_t sigma, const LinearCode& codeL,
                                const LinearCode& codeZ, const LinearCode& codeR,
                                size_t tau, unsigned field_log, bool strict) {
    if (k < 1 || ell < 1 || sigma < 1 || tau < 1)
        throw InfeasibleParams("make_ss_params: k, ell, sigma, tau must be positive");
    if (codeL.k != k || codeR.k != k)
        throw InfeasibleParams("make_ss_params: side codes must encode k bits");
    const uint64_t d = uint64_t(1) << field_log;
    const uint64_t num = 3 * uint64_t(codeL.n) * d;
    const uint64_t den = 2 * uint64_t(tau);
    if (num % den != 0)
        throw InfeasibleParams("make_ss_params: bias 3*n_L/(2*tau) not representable over the field");
    const uint64_t q = num / den;
    if (q < 1 || q > d) throw InfeasibleParams("make_ss_params: bias outside (0, 1]");

    SplitStateParams pp;
    pp.k = k;
    pp.ell = ell;
    pp.q_rounds = q_rounds;
    pp.leak_m = leak_m;
    pp.sigma = sigma;
    pp.gen = make_cw(sigma, field_log, tau, uint32_t(q));
    if (codeZ.k != pp.gen.seed_len())
        throw InfeasibleParams("make_ss_params: seed code encodes " + std::to_string(codeZ.k) +
                               " bits, generator seed needs " + std::to_string(pp.gen.seed_len()));
    pp.L = make_rpe(codeL);
    pp.Z = make_rpe(codeZ);
    pp.R = make_rpe(codeR);
    pp.zeta_star = find_fallback_seed(pp.gen, tau, 0, codeL.n);

    SsInstance inst;
    inst.k = k;
    inst.ell = ell;
    inst.q_rounds = q_rounds;
    inst.leak_m = leak_m;
    inst.sigma = sigma;
    inst.tau = tau;
    inst.L = {codeL.k, codeL.n, codeL.d};
    inst.Z = {codeZ.k, codeZ.n, codeZ.d};
    inst.R = {codeR.k, codeR.n, codeR.d};
    inst.gen_d = size_t(d);
    BoundReport rep = ss_feasibility(inst, strict);
    pp.verdicts = rep.inequalities;
    for (const auto& row : pp.verdicts)
        if (row.required && !row.ok)
            throw InfeasibleParams("make_ss_params: " + row.name + " violated (" +
                                   std::to_string(row.lhs) + " vs " + std::to_string(row.rhs) + ")");
    return pp;
}

SsCodeword ss_encode(const SplitStateParams& pp, const BitVec& xL, const BitVec& xR,
                     RandomStream& rs) {
    if (xL.size() != pp.k || xR.size() != pp.k)
        throw DimensionMismatch("ss_encode: message halves must be k bits each");
    BitVec sL = rpe_encode_random(pp.L, xL, rs);
    BitVec SR = rpe_encode_random(pp.R, xR, rs);
    BitVec zeta = draw_bits(rs, pp.s());
    BitVec rho1 = cw_eval(pp.gen, zeta);
    BitVec rho2 = draw_bits(rs, pp.tau());
    if (rho1.weight() < pp.n_L()) {
        zeta = pp.zeta_star;
        rho1 = cw_eval(pp.gen, zeta);
    }
    SsCodeword c;
    c.XL = embed(sL, Restriction{pp.tau(), rho1, rho2});
    c.Z = rpe_encode_random(pp.Z, zeta, rs);
    c.SR = SR;
    return c;
}

std::optional<std::pair<BitVec, BitVec>> ss_decode(const SplitStateParams& pp,
                                                   const SsCodeword& ct) {
    if (ct.Z.size() != pp.n_Z() || ct.XL.size() != pp.tau() || ct.SR.size() != pp.n_R())
        throw DimensionMismatch("ss_decode: region length mismatch");
    BitVec rho1 = cw_eval(pp.gen, rpe_decode(pp.Z, ct.Z));
    if (rho1.weight() < pp.n_L()) return std::nullopt;
    std::optional<BitVec> sL = extract(ct.XL, rho1, pp.n_L());
    return std::make_pair(rpe_decode(pp.L, *sL), rpe_decode(pp.R, ct.SR));
}

namespace {

// everything steps 1..10 of the simulation produce, shared by the simulator
// closures and by the hybrid experiments
struct SsCore {
    SplitStateParams pp;
    GameAdversary t;
    uint64_t wL = 0, wR = 0, wZ = 0;

    BitVec r;                          // the uniform placeholder codeword
    bool refused = false;              // a selector refused on the r-transcript
    BitVec transcript;
    std::vector<size_t> Th, T_Z, T_X, T_R;
    std::vector<char> inVp, inV;       // V' and V indicators over [1, n]
    BitVec zeta, rho1;
    bool fallback_used = false;
    bool starstar = false;
    std::vector<size_t> extL;          // embedding positions, local to the middle region
    std::vector<std::pair<size_t, bool>> B;     // constraints on s_L coordinates
    BitVec Zvec;
    BitVec zeta_t, rho1_t;
    bool bottom9 = false;
    std::vector<size_t> J, T_L;
    std::vector<std::pair<size_t, bool>> A_R;   // constraints on S_R coordinates

    bool bottom() const { return refused || starstar || bottom9; }

    size_t nZ() const { return pp.n_Z(); }
    size_t nL() const { return pp.n_L(); }
    size_t nR() const { return pp.n_R(); }
    size_t tl() const { return pp.tau(); }
    size_t n() const { return pp.n(); }

    BitVec rho2() const { return r.slice(nZ() + 1, nZ() + tl()); }

    // left closure input vector: X_L on the middle region, Z on the seed
    // region, mu (= r) on the pinned right positions
    BitVec left_vec(const BitVec& XL) const {
        BitVec v(n());
        for (size_t i = 1; i <= nZ(); ++i) v.set(i, Zvec.get(i));
        for (size_t i = 1; i <= tl(); ++i) v.set(nZ() + i, XL.get(i));
        for (size_t i = nZ() + tl() + 1; i <= n(); ++i)
            if (inV[i]) v.set(i, r.get(i));
        return v;
    }
    // right closure input vector
    BitVec right_vec(const BitVec& SR) const {
        BitVec v(n());
        for (size_t i = 1; i <= nZ(); ++i) v.set(i, Zvec.get(i));
        for (size_t i = nZ() + 1; i <= nZ() + tl(); ++i)
            if (inVp[i]) v.set(i, r.get(i));
        for (size_t i = 1; i <= nR(); ++i) v.set(nZ() + tl() + i, SR.get(i));
        return v;
    }

    BitVec sample_sL(const BitVec& xL) const {
        return rpe_reconstruct_with_oracle(pp.L, B, xL, coord_oracle(wL));
    }
    BitVec sample_SR(const BitVec& xR) const {
        return rpe_reconstruct_with_oracle(pp.R, A_R, xR, coord_oracle(wR));
    }
    BitVec embed_left(const BitVec& sL) const {
        return embed(sL, Restriction{tl(), rho1, rho2()});
    }
    BitVec tamper(const std::vector<size_t>& T, const BitVec& input) const {
        BitVec out(T.size());
        for (size_t i = 0; i < T.size(); ++i) out.set(i + 1, t.eval_fn(T[i], input));
        return out;
    }
};

std::shared_ptr<SsCore> ss_core(const SplitStateParams& pp, const GameAdversary& t,
                                const BitVec& r, const BitVec& zeta0,
                                uint64_t wL, uint64_t wR, uint64_t wZ) {
    if (t.n_in != pp.n() || t.out_count != pp.n())
        throw DimensionMismatch("ss simulator: adversary must tamper full codewords");
    if (t.locality > pp.ell)
        throw ThresholdViolation("ss simulator: adversary locality " + std::to_string(t.locality) +
                                 " exceeds the declared budget " + std::to_string(pp.ell));
    if (total_leak(t.leak_sizes) > pp.leak_m * pp.q_rounds)
        throw ThresholdViolation("ss simulator: adversary leaks " +
                                 std::to_string(total_leak(t.leak_sizes)) +
                                 " bits, budget is " + std::to_string(pp.leak_m * pp.q_rounds));

    auto c = std::make_shared<SsCore>();
    c->pp = pp;
    c->t = t;
    c->wL = wL;
    c->wR = wR;
    c->wZ = wZ;
    c->r = r;
    const size_t n = pp.n(), nZ = pp.n_Z(), nL = pp.n_L(), tl = pp.tau();

    // leakage rounds, played against the placeholder
    c->inVp.assign(n + 1, 0);
    c->transcript = BitVec(0);
    for (size_t round = 1; round <= t.rounds() && !c->refused; ++round) {
        auto S = t.select(round, c->transcript);
        if (!S) { c->refused = true; break; }
        check_selection(*S, t.leak_sizes[round - 1], t.N, "round selector");
        BitVec y(S->size());
        for (size_t i = 0; i < S->size(); ++i) {
            for (size_t v : t.influence((*S)[i])) c->inVp[v] = 1;   // U
            y.set(i + 1, t.eval_fn((*S)[i], r));
        }
        c->transcript = c->transcript.concat(y);
    }
    if (!c->refused) {
        auto T = t.select_final(c->transcript);
        if (!T) c->refused = true;
        else {
            check_selection(*T, n, t.N, "final selector");
            c->Th = *T;
            c->T_Z.assign(c->Th.begin(), c->Th.begin() + nZ);
            c->T_X.assign(c->Th.begin() + nZ, c->Th.begin() + nZ + tl);
            c->T_R.assign(c->Th.begin() + nZ + tl, c->Th.end());
        }
    }

    // the mask is sampled either way (the real experiment shares it)
    c->zeta = zeta0;
    c->rho1 = cw_eval(pp.gen, c->zeta);
    if (c->rho1.weight() < nL) {
        c->zeta = pp.zeta_star;
        c->rho1 = cw_eval(pp.gen, c->zeta);
        c->fallback_used = true;
    }
    if (c->refused) return c;

    // V' = U + everything feeding the tampered seed region from outside it
    // + everything feeding the tampered right region from the middle
    for (size_t j : c->T_Z)
        for (size_t v : t.influence(j))
            if (v > nZ) c->inVp[v] = 1;
    for (size_t j : c->T_R)
        for (size_t v : t.influence(j))
            if (v > nZ && v <= nZ + tl) c->inVp[v] = 1;

    // pinned embedding positions must stay under the left secrecy budget
    size_t pinned = 0;
    for (size_t i = nZ + 1; i <= nZ + tl; ++i)
        if (c->inVp[i] && c->rho1.get(i - nZ)) ++pinned;
    if (pinned > pp.L.secrecy_budget()) {
        c->starstar = true;
        return c;
    }
    c->extL = ext_indices(c->rho1, nL);
    for (size_t j = 1; j <= nL; ++j) {
        size_t abs = nZ + c->extL[j - 1];
        if (c->inVp[abs]) c->B.emplace_back(j, r.get(abs));
    }

    // the seed encoding, conditioned on the leaked positions
    std::vector<std::pair<size_t, bool>> C;
    for (size_t i = 1; i <= nZ; ++i)
        if (c->inVp[i]) C.emplace_back(i, r.get(i));
    c->Zvec = rpe_reconstruct_with_oracle(pp.Z, C, c->zeta, coord_oracle(wZ));

    // tampered seed from the pinned positions alone
    BitVec w(n);
    for (size_t i = 1; i <= nZ; ++i) w.set(i, c->Zvec.get(i));
    for (size_t i = nZ + 1; i <= n; ++i)
        if (c->inVp[i]) w.set(i, r.get(i));
    c->zeta_t = rpe_decode(pp.Z, c->tamper(c->T_Z, w));
    c->rho1_t = cw_eval(pp.gen, c->zeta_t);
    if (c->rho1_t.weight() < nL) {
        c->bottom9 = true;
        return c;
    }
    c->J = ext_indices(c->rho1_t, nL);
    c->T_L.resize(nL);
    for (size_t j = 0; j < nL; ++j) c->T_L[j] = c->T_X[c->J[j] - 1];

    // V adds what the extracted positions read outside the middle region
    c->inV = c->inVp;
    for (size_t j : c->T_L)
        for (size_t v : t.influence(j))
            if (v <= nZ || v > nZ + tl) c->inV[v] = 1;
    for (size_t i = nZ + tl + 1; i <= n; ++i)
        if (c->inV[i]) c->A_R.emplace_back(i - nZ - tl, r.get(i));
    return c;
}

} // namespace

SsSimResult ss_simulator(const SplitStateParams& pp, const GameAdversary& t, RandomStream& rs) {
    BitVec r = draw_bits(rs, pp.n());
    BitVec zeta0 = draw_bits(rs, pp.s());
    uint64_t wL = rs.next_u64(), wR = rs.next_u64(), wZ = rs.next_u64();
    auto core = ss_core(pp, t, r, zeta0, wL, wR, wZ);
    SsSimResult res;
    res.fallback_used = core->fallback_used;
    if (core->bottom()) {
        res.constant_bottom = true;
        res.bottom_reason = core->refused ? "selector-refusal"
                          : core->starstar ? "embedding-overlap"
                                           : "tampered-mask-short";
        return res;
    }
    res.f_L = [core](const BitVec& xL) {
        BitVec XL = core->embed_left(core->sample_sL(xL));
        return rpe_decode(core->pp.L, core->tamper(core->T_L, core->left_vec(XL)));
    };
    res.f_R = [core](const BitVec& xR) {
        BitVec SR = core->sample_SR(xR);
        return rpe_decode(core->pp.R, core->tamper(core->T_R, core->right_vec(SR)));
    };
    return res;
}

HybridTrial run_hybrid_trial(const SplitStateParams& pp, const GameAdversary& t,
                             const BitVec& xL, const BitVec& xR, uint64_t master_seed,
                             uint64_t trial_index) {
    if (xL.size() != pp.k || xR.size() != pp.k)
        throw DimensionMismatch("run_hybrid_trial: message halves must be k bits each");
    RandomStream rs = RandomStream::fork(master_seed, trial_index);
    BitVec r = draw_bits(rs, pp.n());
    BitVec zeta0 = draw_bits(rs, pp.s());
    uint64_t wL = rs.next_u64(), wR = rs.next_u64(), wZ = rs.next_u64();
    auto core = ss_core(pp, t, r, zeta0, wL, wR, wZ);

    HybridTrial out;
    out.fallback_used = core->fallback_used;
    out.starstar = core->starstar;
    const size_t nZ = pp.n_Z(), nL = pp.n_L(), tl = pp.tau();

    // the real experiment, sharing the mask seed and the middle-region fill
    {
        BitVec sL0 = rpe_encode_random(pp.L, xL, rs);
        BitVec SR0 = rpe_encode_random(pp.R, xR, rs);
        BitVec XL0 = embed(sL0, Restriction{tl, core->rho1, core->rho2()});
        BitVec Z0 = rpe_encode_random(pp.Z, core->zeta, rs);
        BitVec c0 = Z0.concat(XL0).concat(SR0);
        GameResult g0 = play_game(t, c0);
        if (g0.output) {
            SsCodeword ct;
            ct.Z = g0.output->slice(1, nZ);
            ct.XL = g0.output->slice(nZ + 1, nZ + tl);
            ct.SR = g0.output->slice(nZ + tl + 1, pp.n());
            out.out[0] = ss_decode(pp, ct);
        }
    }
    if (core->bottom()) return out;   // rewritten experiments all output bottom

    // shared rewritten encoding
    BitVec sL1 = core->sample_sL(xL);
    BitVec XL1 = core->embed_left(sL1);
    BitVec SR1 = core->sample_SR(xR);
    BitVec c1 = core->Zvec.concat(XL1).concat(SR1);

    // tamper once with the committed selection from the placeholder transcript
    BitVec Zt = core->tamper(core->T_Z, c1);
    BitVec Xt = core->tamper(core->T_X, c1);
    BitVec St = core->tamper(core->T_R, c1);
    BitVec xRt = rpe_decode(pp.R, St);

    // rewritten encode + the true decoder
    {
        BitVec rho1t = cw_eval(pp.gen, rpe_decode(pp.Z, Zt));
        if (rho1t.weight() >= nL) {
            std::optional<BitVec> sLt = extract(Xt, rho1t, nL);
            out.out[1] = std::make_pair(rpe_decode(pp.L, *sLt), xRt);
        }
    }
    // decode through the simulated tampered mask instead
    if (!core->bottom9) {
        BitVec sLt(nL);
        for (size_t j = 0; j < nL; ++j) sLt.set(j + 1, Xt.get(core->J[j]));
        out.out[2] = std::make_pair(rpe_decode(pp.L, sLt), xRt);
    }
    // re-derived encoding (same constraints, same oracles) + extracted-set tampering
    if (!core->bottom9) {
        BitVec c3 = core->Zvec.concat(core->embed_left(core->sample_sL(xL)))
                        .concat(core->sample_SR(xR));
        out.out[3] = std::make_pair(rpe_decode(pp.L, core->tamper(core->T_L, c3)),
                                    rpe_decode(pp.R, core->tamper(core->T_R, c3)));
    }
    // the split closures
    if (!core->bottom9) {
        BitVec XL4 = core->embed_left(core->sample_sL(xL));
        BitVec l = rpe_decode(pp.L, core->tamper(core->T_L, core->left_vec(XL4)));
        BitVec rr = rpe_decode(pp.R, core->tamper(core->T_R, core->right_vec(core->sample_SR(xR))));
        out.out[4] = std::make_pair(l, rr);
    }
    return out;
}

} // namespace nmc
