#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nmc/bitvec.hpp"
#include "nmc/common.hpp"
#include "nmc/params.hpp"
#include "nmc/reductions.hpp"

namespace nmc {

// A coding scheme: randomized encode, decode to message-or-bottom, with
// perfect correctness (decode(encode(x)) = x for every randomness).
struct Coder {
    size_t k = 0, n = 0;
    std::string name;
    std::function<BitVec(const BitVec&, RandomStream&)> encode;
    std::function<std::optional<BitVec>(const BitVec&)> decode;
};

Coder identity_coder(size_t k);

// encode = outer.encode of inner.encode; decode runs outer first and
// propagates bottom. Requires outer.k == inner.n.
Coder compose(const Coder& outer, const Coder& inner);

// The split-state inner code is a plugin boundary: the construction consumes
// one as a black box. The toy plugin is runnable but makes no security
// claim, and its tag travels into every report that uses it.
struct SsNmcPlugin {
    Coder coder;                 // 2*half_k message bits -> left_n + right_n
    size_t half_k = 0;
    size_t left_n = 0, right_n = 0;
    std::string tag;             // "proven-external" or "toy-unproven"
};

// Each half of the message is RPE-encoded independently with a distance-3
// repetition-based code; decode decodes the halves independently.
SsNmcPlugin toy_ss_nmc(size_t half_k);

Coder star_coder(const StarParams& pp);
Coder ss_coder(const SplitStateParams& pp);   // message = xL || xR, 2k bits

// Star stages composed outermost-first; stars[i].k must equal stars[i+1].n.
Coder depth_reduce_chain(const std::vector<StarParams>& stars);

struct AcdParams {
    std::vector<StarParams> stars;   // outermost first
    SplitStateParams ss;
    size_t circuit_size = 1;         // S in the per-stage error formula
    double delta = 0.0;
    bool strict = false;             // require every stage verdict to hold
};

struct AcdPipeline {
    Coder coder;
    AcdParams params;
    SsNmcPlugin plugin;
    BoundReport composed;   // additive per-stage error bounds, vacuity flagged
};

// Assembles depth-reduction chain + split-state reduction + plugin into one
// coder. Structural chain mismatches and (in strict mode) any failed stage
// verdict throw InfeasibleParams naming the inequality.
AcdPipeline build_acd_nmc(const AcdParams& par, const SsNmcPlugin& plugin);

// Self-contained machine description of the pipeline (every stage parameter,
// plugin tag, composed report) for embedding into experiment reports.
std::string pipeline_json(const AcdPipeline& pl);

} // namespace nmc
