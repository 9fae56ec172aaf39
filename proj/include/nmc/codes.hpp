#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nmc/gf2mat.hpp"

namespace nmc {

// Binary linear [n, k, d] code. A is the n x k encoding matrix (codewords
// are A x, message bits in columns), H the (n-k) x n parity check with
// H A = 0. d is the exact minimum distance: brute-forced on construction
// when k <= 20, otherwise it must come certified from a construction that
// guarantees it (the builders below document theirs).
struct LinearCode {
    std::string name;
    size_t k = 0, n = 0, d = 0;
    Gf2Matrix A;  // n x k
    Gf2Matrix H;  // (n-k) x n

    size_t redundancy() const { return n - k; }
};

// Exact minimum distance by enumeration of all nonzero messages.
// Requires k <= 20 (RegimeTooLarge otherwise).
size_t min_distance(const Gf2Matrix& a);

// Build a LinearCode from its encoding matrix. If certified_d is zero the
// distance is brute-forced (k <= 20 required); if nonzero it is trusted,
// except that small codes are cross-checked against brute force anyway.
LinearCode make_code(const std::string& name, const Gf2Matrix& a, size_t certified_d = 0);

// --- stock constructions ---------------------------------------------------

LinearCode repetition_code(size_t r);                    // [r, 1, r]
LinearCode bit_repetition_code(size_t k, size_t r);      // [kr, k, r], each bit r times
LinearCode parity_code(size_t k);                        // [k+1, k, 2]
LinearCode hamming74();                                  // [7, 4, 3]
LinearCode extended_hamming84();                         // [8, 4, 4]
LinearCode shortened_hamming(size_t k);                  // [k+r, k, 3], r minimal
LinearCode simplex_code(size_t k);                       // [2^k-1, k, 2^(k-1)]
LinearCode repeat_code(const LinearCode& base, size_t times, const std::string& name);
LinearCode random_systematic_code(size_t k, size_t n, RandomStream& rs, size_t min_d = 1);

// --- randomness-preserving encoding scheme ----------------------------------
//
// E(x; r) = B^T x xor H^T r,  D(c) = A^T c,  with B a left inverse of A.
// Any projection of E(x; .) onto at most d-1 coordinates is exactly uniform,
// and a partial codeword on at most d-1 coordinates can always be completed.
struct RpeScheme {
    LinearCode code;
    Gf2Matrix B;    // k x n, B A = I
    Gf2Matrix Bt;   // n x k
    Gf2Matrix Ht;   // n x (n-k)
    Gf2Matrix At;   // k x n

    size_t k() const { return code.k; }
    size_t n() const { return code.n; }
    size_t secrecy_budget() const { return code.d - 1; }   // max constrained coords
    double c_sec() const { return double(code.d - 1) / double(code.n); }
    size_t randomness_len() const { return code.n - code.k; }
};

RpeScheme make_rpe(const LinearCode& code);

BitVec rpe_encode(const RpeScheme& s, const BitVec& x, const BitVec& r);
BitVec rpe_encode_random(const RpeScheme& s, const BitVec& x, RandomStream& rs);
BitVec rpe_decode(const RpeScheme& s, const BitVec& c);

// Uniform sample of E(x; r) over all r consistent with the partial codeword
// chat on coordinates S (1-based, strictly increasing). |S| > d-1 throws
// TooManyConstraints; inside that budget the system is always solvable.
BitVec rpe_reconstruct(const RpeScheme& s, const std::vector<size_t>& S,
                       const BitVec& chat, const BitVec& x, RandomStream& rs);

// Same distribution as rpe_reconstruct, but free codeword coordinates are
// filled left to right from a per-coordinate oracle. Keying randomness by
// coordinate identity (instead of draw order) is what lets two runs with
// nested constraint sets produce the same codeword; the hybrid replay
// harness relies on that coupling.
BitVec rpe_reconstruct_with_oracle(const RpeScheme& s,
                                   const std::vector<std::pair<size_t, bool>>& constraints,
                                   const BitVec& x,
                                   const std::function<bool(size_t)>& coord_oracle);

// --- exhaustive secrecy audit ------------------------------------------------

struct SecrecyViolation {
    std::vector<size_t> S;
    std::string pattern;     // the offending projection pattern
    uint64_t count = 0;      // observed multiplicity over all r
    uint64_t expected = 0;
};

struct SecrecyReport {
    bool ok = false;
    size_t max_set_size = 0;       // audited sizes 1..max_set_size
    uint64_t sets_checked = 0;
    uint64_t patterns_checked = 0;
    std::vector<SecrecyViolation> violations;
};

// Checks, for every message x and every nonempty S with |S| <= d-1, that
// each of the 2^|S| patterns of E(x;.)_S appears exactly 2^(n-k-|S|) times.
// Requires k <= 12 and n-k <= 16 (RegimeTooLarge otherwise).
SecrecyReport verify_secrecy(const RpeScheme& s);

// Audit a single set size (may exceed d-1; used to exhibit tightness
// witnesses). Same regime bounds as verify_secrecy.
SecrecyReport audit_secrecy_at_size(const RpeScheme& s, size_t set_size);

// --- registry ----------------------------------------------------------------

// JSON registry format:
//   {"codes": [{"name": "...", "k": 4, "n": 7, "d": 3,
//               "generator_rows": ["<hex>", ...]}]}
// generator_rows holds k hex strings, one per generator row of length n
// (row convention, low nibble first; A is the transpose). The declared d is
// recomputed by brute force and must match, so registry codes need k <= 20.
std::vector<LinearCode> load_code_registry(const std::string& path);

} // namespace nmc
