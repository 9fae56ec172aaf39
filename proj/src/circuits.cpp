#include "nmc/circuits.hpp"

#include <algorithm>

namespace nmc {

size_t Circuit::bottom_fanin() const {
    size_t w = 0;
    if (!layers.empty())
        for (auto& g : layers[0].gates) w = std::max(w, g.size());
    return w;
}

size_t Circuit::gate_count() const {
    size_t s = 0;
    for (auto& l : layers) s += l.gates.size();
    return s;
}

void validate_circuit(const Circuit& c) {
    if (c.constant) {
        if (!c.layers.empty()) throw ParseError("circuit: constant circuits have no layers");
        return;
    }
    if (c.layers.empty()) throw ParseError("circuit: needs at least one layer");
    for (size_t li = 0; li < c.layers.size(); ++li) {
        auto& layer = c.layers[li];
        if (layer.gates.empty())
            throw ParseError("circuit: layer " + std::to_string(li + 1) + " has no gates");
        for (size_t gi = 0; gi < layer.gates.size(); ++gi) {
            for (int32_t ref : layer.gates[gi]) {
                auto where = "circuit: layer " + std::to_string(li + 1) + " gate " +
                             std::to_string(gi + 1);
                if (li == 0) {
                    size_t v = size_t(ref < 0 ? -int64_t(ref) : int64_t(ref));
                    if (ref == 0 || v > c.n_inputs)
                        throw ParseError(where + ": literal " + std::to_string(ref) +
                                         " out of range (inputs: " + std::to_string(c.n_inputs) + ")");
                } else {
                    if (ref < 1 || size_t(ref) > c.layers[li - 1].gates.size())
                        throw ParseError(where + ": reference " + std::to_string(ref) +
                                         " does not name a gate of layer " + std::to_string(li));
                }
            }
        }
    }
    if (c.layers.back().gates.size() != 1)
        throw ParseError("circuit: top layer must contain exactly one gate (single output)");
}

bool circuit_eval(const Circuit& c, const BitVec& x) {
    if (x.size() != c.n_inputs) throw DimensionMismatch("circuit_eval: input length mismatch");
    if (c.constant) return *c.constant;
    std::vector<char> prev, cur;
    for (size_t li = 0; li < c.layers.size(); ++li) {
        auto& layer = c.layers[li];
        bool is_and = layer.op == Circuit::Op::And;
        cur.clear();
        for (auto& g : layer.gates) {
            bool acc = is_and;  // empty AND = 1, empty OR = 0
            for (int32_t ref : g) {
                bool v;
                if (li == 0) v = (ref > 0) ? x.get(size_t(ref)) : !x.get(size_t(-ref));
                else v = prev[size_t(ref) - 1];
                if (v != is_and) { acc = !is_and; break; }
            }
            cur.push_back(acc);
        }
        prev.swap(cur);
    }
    return prev[0];
}

Circuit circuit_restrict(const Circuit& c, const Restriction& rho) {
    if (rho.n != c.n_inputs) throw DimensionMismatch("circuit_restrict: restriction length mismatch");
    if (c.constant) return c;

    struct Val { int kind; size_t ref; };  // 0/1 = constant, 2 = gate `ref` (1-based) in rebuilt layer
    std::vector<std::vector<Val>> vals(c.layers.size());
    std::vector<Circuit::Layer> built(c.layers.size());

    for (size_t li = 0; li < c.layers.size(); ++li) {
        auto& layer = c.layers[li];
        bool is_and = layer.op == Circuit::Op::And;
        built[li].op = layer.op;
        for (auto& g : layer.gates) {
            bool forced = false;
            std::vector<int32_t> kept;
            for (int32_t ref : g) {
                if (li == 0) {
                    size_t v = size_t(ref < 0 ? -int64_t(ref) : int64_t(ref));
                    if (rho.mask.get(v)) { kept.push_back(ref); continue; }
                    bool val = rho.fill.get(v) ^ (ref < 0);
                    if (val != is_and) { forced = true; break; }  // absorbing value
                } else {
                    Val pv = vals[li - 1][size_t(ref) - 1];
                    if (pv.kind == 2) { kept.push_back(int32_t(pv.ref)); continue; }
                    if ((pv.kind == 1) != is_and) { forced = true; break; }
                }
            }
            if (forced) vals[li].push_back({is_and ? 0 : 1, 0});
            else if (kept.empty()) vals[li].push_back({is_and ? 1 : 0, 0});
            else {
                built[li].gates.push_back(std::move(kept));
                vals[li].push_back({2, built[li].gates.size()});
            }
        }
    }

    Circuit out;
    out.n_inputs = c.n_inputs;
    Val ov = vals.back()[0];
    if (ov.kind != 2) { out.constant = (ov.kind == 1); return out; }

    // keep only gates feeding the output
    std::vector<std::vector<char>> needed(built.size());
    for (size_t li = 0; li < built.size(); ++li) needed[li].assign(built[li].gates.size(), 0);
    needed.back()[ov.ref - 1] = 1;
    for (size_t li = built.size(); li-- > 1;)
        for (size_t gi = 0; gi < built[li].gates.size(); ++gi)
            if (needed[li][gi])
                for (int32_t ref : built[li].gates[gi]) needed[li - 1][size_t(ref) - 1] = 1;

    std::vector<std::vector<int32_t>> renum(built.size());
    for (size_t li = 0; li < built.size(); ++li) {
        renum[li].assign(built[li].gates.size(), 0);
        Circuit::Layer nl;
        nl.op = built[li].op;
        for (size_t gi = 0; gi < built[li].gates.size(); ++gi) {
            if (!needed[li][gi]) continue;
            std::vector<int32_t> g = built[li].gates[gi];
            if (li > 0)
                for (int32_t& ref : g) ref = renum[li - 1][size_t(ref) - 1];
            nl.gates.push_back(std::move(g));
            renum[li][gi] = int32_t(nl.gates.size());
        }
        out.layers.push_back(std::move(nl));
    }
    return out;
}

// --- decision trees ------------------------------------------------------------

void validate_dt(const DecisionTree& t) {
    if (t.nodes.empty()) throw ParseError("decision tree: no nodes");
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        auto& nd = t.nodes[i];
        auto where = "decision tree: node " + std::to_string(i);
        if (nd.var == 0) {
            if (nd.lo != 0 && nd.lo != 1)
                throw ParseError(where + ": leaf value must be 0 or 1");
        } else {
            if (nd.var > t.n_inputs)
                throw ParseError(where + ": variable " + std::to_string(nd.var) + " out of range");
            // children must point forward; this also rules out cycles
            if (nd.lo <= int32_t(i) || nd.hi <= int32_t(i) ||
                size_t(nd.lo) >= t.nodes.size() || size_t(nd.hi) >= t.nodes.size())
                throw ParseError(where + ": children must be later node indices");
        }
    }
}

bool dt_eval(const DecisionTree& t, const BitVec& x) {
    if (x.size() != t.n_inputs) throw DimensionMismatch("dt_eval: input length mismatch");
    size_t i = 0;
    while (!t.is_leaf(i)) i = x.get(t.nodes[i].var) ? size_t(t.nodes[i].hi) : size_t(t.nodes[i].lo);
    return t.nodes[i].lo != 0;
}

namespace {
size_t dt_depth_from(const DecisionTree& t, size_t i) {
    if (t.is_leaf(i)) return 0;
    return 1 + std::max(dt_depth_from(t, size_t(t.nodes[i].lo)),
                        dt_depth_from(t, size_t(t.nodes[i].hi)));
}

// rebuilds the subtree at i under rho; returns the new node index
int32_t dt_restrict_rec(const DecisionTree& t, size_t i, const Restriction& rho,
                        std::vector<DecisionTree::Node>& out) {
    auto& nd = t.nodes[i];
    if (t.is_leaf(i)) {
        out.push_back(nd);
        return int32_t(out.size() - 1);
    }
    if (!rho.mask.get(nd.var))
        return dt_restrict_rec(t, rho.fill.get(nd.var) ? size_t(nd.hi) : size_t(nd.lo), rho, out);
    size_t self = out.size();
    out.push_back({nd.var, 0, 0});
    int32_t lo = dt_restrict_rec(t, size_t(nd.lo), rho, out);
    int32_t hi = dt_restrict_rec(t, size_t(nd.hi), rho, out);
    // collapse when both branches reduce to the same leaf value
    if (out[lo].var == 0 && out[hi].var == 0 && out[lo].lo == out[hi].lo &&
        size_t(lo) == self + 1 && size_t(hi) == size_t(lo) + 1) {
        int32_t v = out[lo].lo;
        out.resize(self);
        out.push_back({0, v, 0});
        return int32_t(self);
    }
    out[self].lo = lo;
    out[self].hi = hi;
    return int32_t(self);
}
} // namespace

size_t dt_tree_depth(const DecisionTree& t) { return dt_depth_from(t, 0); }

DecisionTree dt_restrict(const DecisionTree& t, const Restriction& rho) {
    if (rho.n != t.n_inputs) throw DimensionMismatch("dt_restrict: restriction length mismatch");
    DecisionTree out;
    out.n_inputs = t.n_inputs;
    dt_restrict_rec(t, 0, rho, out.nodes);
    return out;
}

Circuit dt_to_dnf(const DecisionTree& t) {
    Circuit c;
    c.n_inputs = t.n_inputs;
    if (t.is_leaf(0)) { c.constant = t.nodes[0].lo != 0; return c; }
    std::vector<std::vector<int32_t>> terms;
    std::vector<int32_t> path;
    // collect literal paths that end in a 1-leaf
    auto walk = [&](auto&& self, size_t i) -> void {
        if (t.is_leaf(i)) {
            if (t.nodes[i].lo) terms.push_back(path);
            return;
        }
        path.push_back(-int32_t(t.nodes[i].var));
        self(self, size_t(t.nodes[i].lo));
        path.back() = int32_t(t.nodes[i].var);
        self(self, size_t(t.nodes[i].hi));
        path.pop_back();
    };
    walk(walk, 0);
    if (terms.empty()) { c.constant = false; return c; }
    c.layers.push_back({Circuit::Op::And, terms});
    std::vector<int32_t> all(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) all[i] = int32_t(i + 1);
    c.layers.push_back({Circuit::Op::Or, {all}});
    return c;
}

// --- local functions -----------------------------------------------------------

void validate_local(const LocalFunction& f) {
    if (f.deps.size() > 22) throw RegimeTooLarge("local function: more than 22 dependencies");
    for (size_t j = 0; j < f.deps.size(); ++j) {
        if (f.deps[j] < 1 || f.deps[j] > f.n_inputs)
            throw ParseError("local function: dep " + std::to_string(j) + " out of range");
        if (j > 0 && f.deps[j] <= f.deps[j - 1])
            throw ParseError("local function: deps must be strictly increasing");
    }
    if (f.table.size() != (size_t(1) << f.deps.size()))
        throw ParseError("local function: table size must be 2^|deps|");
}

bool local_eval(const LocalFunction& f, const BitVec& x) {
    if (x.size() != f.n_inputs) throw DimensionMismatch("local_eval: input length mismatch");
    size_t idx = 0;
    for (size_t j = 0; j < f.deps.size(); ++j)
        if (x.get(f.deps[j])) idx |= size_t(1) << j;
    return f.table.get(idx + 1);
}

LocalFunction dt_to_local(const DecisionTree& t) {
    std::vector<size_t> vars;
    auto collect = [&](auto&& self, size_t i) -> void {
        if (t.is_leaf(i)) return;
        vars.push_back(t.nodes[i].var);
        self(self, size_t(t.nodes[i].lo));
        self(self, size_t(t.nodes[i].hi));
    };
    collect(collect, 0);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.size() > 22) throw RegimeTooLarge("dt_to_local: more than 22 variables");
    LocalFunction f;
    f.n_inputs = t.n_inputs;
    f.deps = vars;
    f.table = BitVec(size_t(1) << vars.size());
    BitVec x(t.n_inputs);
    for (size_t idx = 0; idx < f.table.size(); ++idx) {
        for (size_t j = 0; j < vars.size(); ++j) x.set(vars[j], idx >> j & 1);
        if (dt_eval(t, x)) f.table.set(idx + 1, true);
    }
    return f;
}

LocalFunction local_restrict(const LocalFunction& f, const Restriction& rho) {
    if (rho.n != f.n_inputs) throw DimensionMismatch("local_restrict: restriction length mismatch");
    LocalFunction out;
    out.n_inputs = f.n_inputs;
    size_t fixed_bits = 0;
    std::vector<size_t> live_pos;  // positions within deps
    for (size_t j = 0; j < f.deps.size(); ++j) {
        if (rho.mask.get(f.deps[j])) { live_pos.push_back(j); out.deps.push_back(f.deps[j]); }
        else if (rho.fill.get(f.deps[j])) fixed_bits |= size_t(1) << j;
    }
    out.table = BitVec(size_t(1) << out.deps.size());
    for (size_t idx = 0; idx < out.table.size(); ++idx) {
        size_t full = fixed_bits;
        for (size_t j = 0; j < live_pos.size(); ++j)
            if (idx >> j & 1) full |= size_t(1) << live_pos[j];
        if (f.table.get(full + 1)) out.table.set(idx + 1, true);
    }
    return out;
}

LocalFunction local_prune(const LocalFunction& f) {
    LocalFunction cur = f;
    for (size_t j = cur.deps.size(); j-- > 0;) {
        size_t half = size_t(1) << j;
        bool matters = false;
        for (size_t idx = 0; idx < cur.table.size() && !matters; ++idx)
            if (!(idx & half) && cur.table.get(idx + 1) != cur.table.get((idx | half) + 1))
                matters = true;
        if (matters) continue;
        // drop dep j: keep entries with bit j = 0, squeeze the index
        LocalFunction next;
        next.n_inputs = cur.n_inputs;
        next.deps = cur.deps;
        next.deps.erase(next.deps.begin() + long(j));
        next.table = BitVec(cur.table.size() >> 1);
        for (size_t idx = 0; idx < next.table.size(); ++idx) {
            size_t lo = idx & (half - 1), hi = idx >> j;
            if (cur.table.get((lo | (hi << (j + 1))) + 1)) next.table.set(idx + 1, true);
        }
        cur = std::move(next);
    }
    return cur;
}

// --- generic dispatch ------------------------------------------------------------

bool fn_eval(const Fn& f, const BitVec& x) {
    return std::visit([&](auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Circuit>) return circuit_eval(g, x);
        else if constexpr (std::is_same_v<T, DecisionTree>) return dt_eval(g, x);
        else return local_eval(g, x);
    }, f);
}

Fn fn_restrict(const Fn& f, const Restriction& rho) {
    return std::visit([&](auto& g) -> Fn {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Circuit>) return circuit_restrict(g, rho);
        else if constexpr (std::is_same_v<T, DecisionTree>) return dt_restrict(g, rho);
        else return local_restrict(g, rho);
    }, f);
}

size_t fn_n_inputs(const Fn& f) {
    return std::visit([](auto& g) { return g.n_inputs; }, f);
}

Fn fn_rename(const Fn& f, const std::vector<std::pair<size_t, size_t>>& var_map,
             size_t new_n_inputs) {
    for (size_t i = 0; i + 1 < var_map.size(); ++i)
        if (var_map[i].first >= var_map[i + 1].first || var_map[i].second >= var_map[i + 1].second)
            throw DimensionMismatch("fn_rename: variable map must be strictly increasing");
    auto lookup = [&](size_t v) -> size_t {
        auto it = std::lower_bound(var_map.begin(), var_map.end(), std::make_pair(v, size_t(0)));
        if (it == var_map.end() || it->first != v)
            throw DimensionMismatch("fn_rename: live variable " + std::to_string(v) + " unmapped");
        if (it->second < 1 || it->second > new_n_inputs)
            throw DimensionMismatch("fn_rename: target variable out of range");
        return it->second;
    };
    return std::visit([&](auto& g) -> Fn {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Circuit>) {
            Circuit c = g;
            c.n_inputs = new_n_inputs;
            if (!c.constant && !c.layers.empty())
                for (auto& gate : c.layers[0].gates)
                    for (int32_t& lit : gate) {
                        size_t v = size_t(lit < 0 ? -int64_t(lit) : int64_t(lit));
                        int32_t nv = int32_t(lookup(v));
                        lit = lit < 0 ? -nv : nv;
                    }
            return c;
        } else if constexpr (std::is_same_v<T, DecisionTree>) {
            DecisionTree t = g;
            t.n_inputs = new_n_inputs;
            for (auto& node : t.nodes)
                if (node.var != 0) node.var = lookup(node.var);
            return t;
        } else {
            LocalFunction lf = g;
            lf.n_inputs = new_n_inputs;
            // a strictly increasing map keeps deps sorted, so the table stands
            for (size_t& d : lf.deps) d = lookup(d);
            return lf;
        }
    }, f);
}

namespace {
std::vector<size_t> circuit_support(const Circuit& c) {
    std::vector<size_t> vars;
    if (c.constant || c.layers.empty()) return vars;
    // gates feeding the output
    std::vector<std::vector<char>> needed(c.layers.size());
    for (size_t li = 0; li < c.layers.size(); ++li) needed[li].assign(c.layers[li].gates.size(), 0);
    needed.back().assign(needed.back().size(), 1);
    for (size_t li = c.layers.size(); li-- > 1;)
        for (size_t gi = 0; gi < c.layers[li].gates.size(); ++gi)
            if (needed[li][gi])
                for (int32_t ref : c.layers[li].gates[gi]) needed[li - 1][size_t(ref) - 1] = 1;
    for (size_t gi = 0; gi < c.layers[0].gates.size(); ++gi)
        if (needed[0][gi])
            for (int32_t lit : c.layers[0].gates[gi])
                vars.push_back(size_t(lit < 0 ? -int64_t(lit) : int64_t(lit)));
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}
} // namespace

std::vector<size_t> influence_set(const Fn& f) {
    return std::visit([](auto& g) -> std::vector<size_t> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Circuit>) return circuit_support(g);
        else if constexpr (std::is_same_v<T, DecisionTree>) return dt_to_local(g).deps;
        else return local_prune(g).deps;
    }, f);
}

LocalFunction fn_semantic_local(const Fn& f, size_t max_vars) {
    if (std::holds_alternative<LocalFunction>(f))
        return local_prune(std::get<LocalFunction>(f));
    std::vector<size_t> vars;
    if (std::holds_alternative<Circuit>(f)) vars = circuit_support(std::get<Circuit>(f));
    else return local_prune(dt_to_local(std::get<DecisionTree>(f)));
    if (vars.size() > max_vars)
        throw RegimeTooLarge("fn_semantic_local: " + std::to_string(vars.size()) +
                             " relevant variables exceed the cap of " + std::to_string(max_vars));
    const Circuit& c = std::get<Circuit>(f);
    LocalFunction lf;
    lf.n_inputs = c.n_inputs;
    lf.deps = vars;
    lf.table = BitVec(size_t(1) << vars.size());
    BitVec x(c.n_inputs);
    for (size_t idx = 0; idx < lf.table.size(); ++idx) {
        for (size_t j = 0; j < vars.size(); ++j) x.set(vars[j], idx >> j & 1);
        if (circuit_eval(c, x)) lf.table.set(idx + 1, true);
    }
    return local_prune(lf);
}

namespace {

struct Table {
    size_t nvars;
    BitVec bits;
    bool operator<(const Table& o) const {
        if (nvars != o.nvars) return nvars < o.nvars;
        return bits < o.bits;
    }
};

bool table_const(const Table& t) {
    bool v = t.bits.get(1);
    for (size_t i = 2; i <= t.bits.size(); ++i)
        if (t.bits.get(i) != v) return false;
    return true;
}

Table table_restrict(const Table& t, size_t j, bool b) {
    Table out;
    out.nvars = t.nvars - 1;
    out.bits = BitVec(t.bits.size() >> 1);
    size_t half = size_t(1) << j;
    for (size_t idx = 0; idx < out.bits.size(); ++idx) {
        size_t lo = idx & (half - 1), hi = idx >> j;
        size_t full = lo | (hi << (j + 1)) | (b ? half : 0);
        if (t.bits.get(full + 1)) out.bits.set(idx + 1, true);
    }
    return out;
}

bool table_var_matters(const Table& t, size_t j) {
    size_t half = size_t(1) << j;
    for (size_t idx = 0; idx < t.bits.size(); ++idx)
        if (!(idx & half) && t.bits.get(idx + 1) != t.bits.get((idx | half) + 1))
            return true;
    return false;
}

bool decide_depth(const Table& t, size_t budget, std::map<std::pair<Table, size_t>, bool>& memo) {
    if (table_const(t)) return true;
    if (budget == 0) return false;
    auto key = std::make_pair(t, budget);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = false;
    for (size_t j = 0; j < t.nvars && !ok; ++j) {
        if (!table_var_matters(t, j)) continue;
        ok = decide_depth(table_restrict(t, j, false), budget - 1, memo) &&
             decide_depth(table_restrict(t, j, true), budget - 1, memo);
    }
    memo.emplace(key, ok);
    return ok;
}

} // namespace

bool dt_depth_at_most(const Fn& f, size_t t, size_t max_vars) {
    LocalFunction lf = fn_semantic_local(f, max_vars);
    if (lf.deps.size() <= t) return true;  // depth never exceeds the variable count
    Table tab{lf.deps.size(), lf.table};
    std::map<std::pair<Table, size_t>, bool> memo;
    return decide_depth(tab, t, memo);
}

size_t dt_depth(const Fn& f, size_t max_vars) {
    LocalFunction lf = fn_semantic_local(f, max_vars);
    Table tab{lf.deps.size(), lf.table};
    std::map<std::pair<Table, size_t>, bool> memo;
    for (size_t t = 0; t <= lf.deps.size(); ++t)
        if (decide_depth(tab, t, memo)) return t;
    return lf.deps.size();  // unreachable
}

// --- families --------------------------------------------------------------------

FunctionFamily make_dense_family(size_t n_inputs, std::vector<Fn> fns) {
    FunctionFamily f;
    f.n_inputs = n_inputs;
    f.count = fns.size();
    for (size_t j = 0; j < fns.size(); ++j) {
        if (fn_n_inputs(fns[j]) != n_inputs)
            throw DimensionMismatch("make_dense_family: member " + std::to_string(j + 1) +
                                    " has wrong input length");
        f.explicit_fns.emplace(j + 1, std::move(fns[j]));
    }
    return f;
}

FunctionFamily make_identity_family(size_t n_inputs) {
    FunctionFamily f;
    f.n_inputs = n_inputs;
    f.count = n_inputs;
    f.identity_default = true;
    return f;
}

bool family_eval_one(const FunctionFamily& f, size_t j, const BitVec& x) {
    if (j < 1 || j > f.count) throw DimensionMismatch("family_eval_one: index out of range");
    auto it = f.explicit_fns.find(j);
    if (it != f.explicit_fns.end()) return fn_eval(it->second, x);
    if (f.identity_default && j <= f.n_inputs) return x.get(j);
    throw DimensionMismatch("family_eval_one: member " + std::to_string(j) + " is undefined");
}

BitVec family_eval_all(const FunctionFamily& f, const BitVec& x) {
    BitVec out(f.count);
    // fast path: start from the identity copy, then apply overrides
    if (f.identity_default && f.count == f.n_inputs) {
        out = x;
        for (auto& [j, fn] : f.explicit_fns) out.set(j, fn_eval(fn, x));
        return out;
    }
    for (size_t j = 1; j <= f.count; ++j) out.set(j, family_eval_one(f, j, x));
    return out;
}

std::vector<size_t> family_influence(const FunctionFamily& f, size_t j) {
    if (j < 1 || j > f.count) throw DimensionMismatch("family_influence: index out of range");
    auto it = f.explicit_fns.find(j);
    if (it != f.explicit_fns.end()) return influence_set(it->second);
    if (f.identity_default && j <= f.n_inputs) return {j};
    throw DimensionMismatch("family_influence: member " + std::to_string(j) + " is undefined");
}

size_t family_locality(const FunctionFamily& f) {
    size_t ell = 0;
    if (f.identity_default) ell = 1;
    for (auto& [j, fn] : f.explicit_fns)
        ell = std::max(ell, influence_set(fn).size());
    return ell;
}

bool fn_in_class(const Fn& f, const TamperClass& cls) {
    if (cls.kind == TamperClass::Kind::DtDepth) return dt_depth_at_most(f, cls.t);
    // structural layered check; trees and tables are viewed through their
    // canonical two-layer normal form
    if (std::holds_alternative<Circuit>(f)) {
        const Circuit& c = std::get<Circuit>(f);
        if (c.constant) return true;
        return c.depth() <= cls.depth && c.bottom_fanin() <= cls.bottom_fanin;
    }
    if (std::holds_alternative<DecisionTree>(f)) {
        const DecisionTree& t = std::get<DecisionTree>(f);
        size_t d = dt_tree_depth(t);
        if (d == 0) return true;
        return 2 <= cls.depth && d <= cls.bottom_fanin;
    }
    const LocalFunction& lf = std::get<LocalFunction>(f);
    if (lf.deps.empty()) return true;
    return 2 <= cls.depth && lf.deps.size() <= cls.bottom_fanin;
}

} // namespace nmc
