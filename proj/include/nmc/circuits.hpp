#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "nmc/bitvec.hpp"
#include "nmc/restrictions.hpp"

namespace nmc {

// --- layered circuits ---------------------------------------------------------
//
// Alternating layered form: layer 1 gates take signed input literals
// (+i / -i for x_i / not x_i), every later layer references gates of the
// layer directly below by 1-based index. Exactly one gate in the top layer
// (single output). An empty AND is 1, an empty OR is 0. A circuit whose
// `constant` field is set has no layers and computes that constant.
struct Circuit {
    enum class Op { And, Or };
    struct Layer {
        Op op;
        std::vector<std::vector<int32_t>> gates;
    };
    size_t n_inputs = 0;
    std::vector<Layer> layers;
    std::optional<bool> constant;

    size_t depth() const { return layers.size(); }
    size_t bottom_fanin() const;
    size_t gate_count() const;
};

void validate_circuit(const Circuit& c);  // throws ParseError with the offending position
bool circuit_eval(const Circuit& c, const BitVec& x);
Circuit circuit_restrict(const Circuit& c, const Restriction& rho);

// --- decision trees -----------------------------------------------------------

struct DecisionTree {
    struct Node {
        size_t var = 0;           // 0 = leaf
        int32_t lo = 0, hi = 0;   // children when internal; lo holds the leaf value
    };
    size_t n_inputs = 0;
    std::vector<Node> nodes;      // node 0 is the root

    bool is_leaf(size_t i) const { return nodes[i].var == 0; }
};

void validate_dt(const DecisionTree& t);
bool dt_eval(const DecisionTree& t, const BitVec& x);
size_t dt_tree_depth(const DecisionTree& t);  // longest root-leaf path
DecisionTree dt_restrict(const DecisionTree& t, const Restriction& rho);

// OR of ANDs along the 1-paths: a width-<=depth, size-<=2^depth DNF
Circuit dt_to_dnf(const DecisionTree& t);

// --- local functions ----------------------------------------------------------

// Truth table over an explicit dependency list. Index bit j (LSB first)
// carries the value of deps[j].
struct LocalFunction {
    size_t n_inputs = 0;
    std::vector<size_t> deps;  // ascending, 1-based input positions
    BitVec table;              // 2^|deps| bits

    size_t locality() const { return deps.size(); }
};

void validate_local(const LocalFunction& f);
bool local_eval(const LocalFunction& f, const BitVec& x);
LocalFunction dt_to_local(const DecisionTree& t);
LocalFunction local_restrict(const LocalFunction& f, const Restriction& rho);
// drop dependencies that never change the output
LocalFunction local_prune(const LocalFunction& f);

// --- generic single-output function -------------------------------------------

using Fn = std::variant<Circuit, DecisionTree, LocalFunction>;

bool fn_eval(const Fn& f, const BitVec& x);
Fn fn_restrict(const Fn& f, const Restriction& rho);

// Relabels inputs through a strictly increasing old->new variable map; every
// live variable must be mapped. Used when a restricted function is viewed
// over the surviving coordinates only.
Fn fn_rename(const Fn& f, const std::vector<std::pair<size_t, size_t>>& var_map,
             size_t new_n_inputs);
size_t fn_n_inputs(const Fn& f);

// Syntactic support for circuits and trees, semantic (pruned) for local
// functions: the positions whose value can affect the output.
std::vector<size_t> influence_set(const Fn& f);

// Collapse to a truth table over the semantic support. The support is first
// bounded syntactically; more than max_vars relevant variables throws
// RegimeTooLarge. (22 is the library-wide cap.)
LocalFunction fn_semantic_local(const Fn& f, size_t max_vars = 22);

// Exact minimal decision-tree depth of the function's semantic truth table,
// by memoized branch-and-bound. Same max_vars regime as fn_semantic_local.
size_t dt_depth(const Fn& f, size_t max_vars = 22);
bool dt_depth_at_most(const Fn& f, size_t t, size_t max_vars = 22);

// --- families -----------------------------------------------------------------

// N single-output functions over a shared input length. Large families used
// by the reductions are mostly the identity map, so the family stores only
// the exceptions: with identity_default set, function j (j <= n_inputs)
// defaults to the projection x_j.
struct FunctionFamily {
    size_t n_inputs = 0;
    size_t count = 0;                 // N
    bool identity_default = false;
    std::map<size_t, Fn> explicit_fns;  // 1-based index -> function

    bool has_fn(size_t j) const {
        return explicit_fns.count(j) || (identity_default && j >= 1 && j <= n_inputs);
    }
};

FunctionFamily make_dense_family(size_t n_inputs, std::vector<Fn> fns);
FunctionFamily make_identity_family(size_t n_inputs);

bool family_eval_one(const FunctionFamily& f, size_t j, const BitVec& x);
BitVec family_eval_all(const FunctionFamily& f, const BitVec& x);
// influence set of one member (identity members influence exactly {j})
std::vector<size_t> family_influence(const FunctionFamily& f, size_t j);
// max locality over members (the ell in ell-local)
size_t family_locality(const FunctionFamily& f);

// --- tampering classes ---------------------------------------------------------

// Membership test target for restricted functions. DtDepth is the exact
// test used at the last reduction level; Layered is the structural test
// (layer count and bottom fan-in after constant propagation) used at
// intermediate levels.
struct TamperClass {
    enum class Kind { DtDepth, Layered };
    Kind kind = Kind::DtDepth;
    size_t t = 1;              // DtDepth bound
    size_t depth = 1;          // Layered: max layers
    size_t bottom_fanin = 1;   // Layered: max layer-1 fan-in
};

bool fn_in_class(const Fn& f, const TamperClass& cls);

} // namespace nmc
