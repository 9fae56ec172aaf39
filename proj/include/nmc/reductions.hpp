#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nmc/bitvec.hpp"
#include "nmc/circuits.hpp"
#include "nmc/codes.hpp"
#include "nmc/common.hpp"
#include "nmc/params.hpp"
#include "nmc/prg.hpp"
#include "nmc/restrictions.hpp"

namespace nmc {

// --- adversaries and the leaky game --------------------------------------------
//
// An adversary commits N functions over the n_in-bit codeword, gets adaptive
// rounds of leakage (round r leaks the outputs selected by that round's
// selector, fed the transcript so far), then the final selector picks the
// output indices. A final selector may refuse (nullopt), which makes the game
// output bottom; simulated adversaries use that to mirror decode-side bottoms.

struct LeakyLocalAdversary {
    FunctionFamily family;
    std::vector<size_t> leak_sizes;                       // bits leaked per round
    size_t out_count = 0;
    // table per round, indexed by the integer value of the transcript so far
    std::vector<std::vector<std::vector<size_t>>> round_tables;
    std::vector<std::vector<size_t>> final_table;         // empty entry = refuse
    std::string name;

    size_t rounds() const { return leak_sizes.size(); }
};

void validate_adversary(const LeakyLocalAdversary& adv);

// Playable form. Wrapping (star_simulator) composes these without
// materializing the restricted family; eval caches the last embedded input.
struct GameAdversary {
    size_t n_in = 0;
    size_t N = 0;
    std::vector<size_t> leak_sizes;
    size_t out_count = 0;
    size_t locality = 0;          // declared bound on |influence(j)|
    std::string name;

    std::function<bool(size_t j, const BitVec& x)> eval_fn;
    // a round selector may refuse (only simulated adversaries do, mirroring an
    // inner refusal); the game then outputs bottom immediately
    std::function<std::optional<std::vector<size_t>>(size_t round, const BitVec& transcript)> select;
    std::function<std::optional<std::vector<size_t>>(const BitVec& transcript)> select_final;
    std::function<Fn(size_t j)> materialize;               // F_j as a standalone function
    std::function<std::vector<size_t>(size_t j)> influence; // syntactic dependency set
    std::function<std::vector<size_t>()> nontrivial;        // indices that are not plain wires

    size_t rounds() const { return leak_sizes.size(); }
};

GameAdversary as_game(const LeakyLocalAdversary& adv);

struct GameResult {
    std::optional<BitVec> output;   // out_count bits, or bottom
    BitVec transcript;              // all leaked bits, concatenated
    std::vector<std::vector<size_t>> leak_sets;
    std::optional<std::vector<size_t>> final_set;
};

// Plays the game against a fixed input; throws SelectorViolation on
// wrong-sized, non-increasing, or out-of-range selections.
GameResult play_game(const GameAdversary& adv, const BitVec& x);

// Convenience wrapper mirroring the plain evaluator's signature.
std::optional<BitVec> eval_leaky(const LeakyLocalAdversary& adv, const BitVec& x);

// --- the restriction-embedding reduction ----------------------------------------

struct StarParams {
    size_t k = 0, n = 0;
    size_t p_log_inv = 1;   // p = 2^-p_log_inv
    size_t sigma = 1;
    RpeScheme seed_rpe;     // message length s = gen.seed_len(), codeword length m
    CwGenerator gen;        // unbiased, n*p_log_inv outputs
    BitVec zeta_star;
    bool strict_decode = false;  // appendix variant: also reject masks with stars in [m]
    std::vector<Inequality> verdicts;

    size_t m() const { return seed_rpe.n(); }
    size_t s() const { return gen.seed_len(); }
    double p() const { return 1.0 / double(uint64_t(1) << p_log_inv); }
    // zeta, seed-RPE randomness, U; n bits in total
    size_t randomness_len() const { return s() + seed_rpe.randomness_len() + (n - m()); }
};

// Validates the parameter relations. The two Chernoff-side range bounds
// (4*sigma/log(1/p) <= k <= (n-m)p/2) are enforced unless relax_chernoff;
// correctness-side conditions (k <= n-m, seed-RPE shape, fallback existence,
// secrecy threshold >= sigma) are always enforced.
StarParams make_star_params(size_t k, size_t n, size_t p_log_inv, size_t sigma,
                            const LinearCode& seed_code, bool relax_chernoff = false,
                            bool strict_decode = false);

// mask = L(G(zeta)) and the decode-side validity test (survivor count on
// positions m+1..n, plus the strict variant's no-stars-in-[m] test)
BitVec star_mask(const StarParams& pp, const BitVec& zeta);
bool star_mask_ok(const StarParams& pp, const BitVec& mask);

BitVec star_encode_explicit(const StarParams& pp, const BitVec& x, const BitVec& rnd);
BitVec star_encode(const StarParams& pp, const BitVec& x, RandomStream& rs);
std::optional<BitVec> star_decode(const StarParams& pp, const BitVec& ct);

struct StarSimResult {
    bool constant_bottom = false;  // restricted family left the target class
    GameAdversary tau_prime;       // meaningful when !constant_bottom
    BitVec randomness;             // the (zeta, seed-RPE, U) bits used
    bool fallback_used = false;
};

// Builds tau' from tau for one sampled restriction. cls is the target class
// the restricted functions must land in; failures yield the constant-bottom
// result (its probability is what the error bound controls).
StarSimResult star_simulator(const StarParams& pp, const GameAdversary& tau,
                             const TamperClass& cls, const BitVec& rnd);
StarSimResult star_simulator(const StarParams& pp, const GameAdversary& tau,
                             const TamperClass& cls, RandomStream& rs);

// --- the leaky-local to split-state reduction ------------------------------------

struct SplitStateParams {
    size_t k = 0;                   // message length per side
    size_t ell = 0;                 // locality budget for adversaries
    size_t q_rounds = 0, leak_m = 0;
    size_t sigma = 1;
    RpeScheme L, Z, R;              // (k, n_L), (s, n_Z), (k, n_R)
    CwGenerator gen;                // biased, tau outputs, bias p = 3 n_L / (2 tau)
    BitVec zeta_star;
    std::vector<Inequality> verdicts;

    size_t n_L() const { return L.n(); }
    size_t n_Z() const { return Z.n(); }
    size_t n_R() const { return R.n(); }
    size_t tau() const { return gen.out_len; }
    size_t n() const { return n_Z() + tau() + n_R(); }
    size_t s() const { return gen.seed_len(); }
    double p() const { return gen.bias(); }
};

// strict=true enforces the full worst-case feasible set; strict=false
// enforces only structure, correctness, and the leakage budgets that the
// runtime reconstructions rely on, and reports the rest.
SplitStateParams make_ss_params(size_t k, size_t ell, size_t q_rounds, size_t leak_m,
                                size_t sigma, const LinearCode& codeL,
                                const LinearCode& codeZ, const LinearCode& codeR,
                                size_t tau, unsigned field_log, bool strict);

struct SsCodeword {
    BitVec Z, XL, SR;
    BitVec concat() const { return Z.concat(XL).concat(SR); }
};

SsCodeword ss_encode(const SplitStateParams& pp, const BitVec& xL, const BitVec& xR,
                     RandomStream& rs);
std::optional<std::pair<BitVec, BitVec>> ss_decode(const SplitStateParams& pp,
                                                   const SsCodeword& ct);

struct SsSimResult {
    bool constant_bottom = false;            // (**) fired, or too few tampered survivors
    std::string bottom_reason;
    bool fallback_used = false;
    std::function<BitVec(const BitVec&)> f_L, f_R;   // independent per-side closures
    std::optional<std::pair<BitVec, BitVec>> apply(const BitVec& xL, const BitVec& xR) const {
        if (constant_bottom) return std::nullopt;
        return std::make_pair(f_L(xL), f_R(xR));
    }
};

SsSimResult ss_simulator(const SplitStateParams& pp, const GameAdversary& t, RandomStream& rs);

// One shared-randomness trial of the five experiments in the equivalence
// chain: index 0 is the real experiment, 1..4 the rewritten ones, 4 being
// the split-state simulation. 1..4 must agree bit-exactly on every trial.
struct HybridTrial {
    std::optional<std::pair<BitVec, BitVec>> out[5];
    bool fallback_used = false;   // (*) in the shared branch
    bool starstar = false;        // (**) in the shared branch
};

HybridTrial run_hybrid_trial(const SplitStateParams& pp, const GameAdversary& t,
                             const BitVec& xL, const BitVec& xR, uint64_t master_seed,
                             uint64_t trial_index);

} // namespace nmc
