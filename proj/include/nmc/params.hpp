#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nmc/common.hpp"

namespace nmc {

// Closed-form error bounds and feasibility checks. Everything here is pure
// arithmetic; values above 1 are reported verbatim with a vacuous flag.

double switching_bound(size_t w, size_t t, double p, double delta, double M);

// Per-level restriction error for an (n, S)-circuit with locality target ell
// (a power of two), noise rate p, switching slack delta, generator order sigma.
double ac0_error(size_t n, size_t S, size_t ell, double p, double delta, size_t sigma);

double chernoff_bound(size_t sigma);
bool chernoff_precond(size_t sigma, double eps, double mu);

// Generator order sufficient for the derandomized switching step:
// ceil((log2(M/eps))^2) with M = S*2^(w(log(1/p)+1)), eps = delta*2^(-(t+1)(2w+log2 S)).
size_t tx_sigma(size_t t, size_t w, size_t S, double delta, double p);

struct Inequality {
    std::string name;
    double lhs = 0, rhs = 0;
    bool ok = true;
    bool required = true;    // informational rows are reported but never enforced
    bool certified = true;   // concentration rows: precondition of the tail bound
};

struct BoundReport {
    std::string kind;
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<std::pair<std::string, double>> values;
    std::vector<Inequality> inequalities;
    double bound = 0;        // headline error bound for the instance
    bool vacuous = false;    // bound >= 1

    bool feasible() const {
        for (const auto& q : inequalities)
            if (q.required && !q.ok) return false;
        return true;
    }
    std::string to_json() const;
};
BoundReport bound_report_from_json(const std::string& text);

// Shape-only view of a code, enough for the feasibility arithmetic.
struct CodeShape {
    size_t k = 0, n = 0, d = 0;
    double c_sec() const { return d > 0 ? double(d - 1) / double(n) : 0.0; }
};

struct SsInstance {
    size_t k = 0, ell = 0, q_rounds = 0, leak_m = 0, sigma = 0, tau = 0;
    CodeShape L, Z, R;
    size_t gen_d = 0;        // field size of the biased generator
};

// Evaluates the split-state feasible set: per-scheme secrecy-rate rows, the
// region budgets, the tau lower bound, the locality-versus-budget rows, the
// concentration preconditions for the two bad events, and the derived bias.
// strict decides which rows count as required.
BoundReport ss_feasibility(const SsInstance& inst, bool strict);

} // namespace nmc
