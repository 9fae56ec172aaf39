#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nmc/bitvec.hpp"
#include "nmc/circuits.hpp"
#include "nmc/codes.hpp"
#include "nmc/common.hpp"
#include "nmc/params.hpp"
#include "nmc/pipeline.hpp"
#include "nmc/prg.hpp"
#include "nmc/reductions.hpp"

namespace nmc {

// --- outcome distributions ---------------------------------------------------

// Counted outcomes over a named space. Exact mode fills it by enumeration
// (total = the full randomness space), MC mode by sampling; either way the
// probabilities are counts/total.
struct DistributionTable {
    std::string space;
    std::map<std::string, uint64_t> counts;
    uint64_t total = 0;

    void add(const std::string& outcome) { ++counts[outcome]; ++total; }
};

// "bottom" or length-prefixed hex of the value
std::string outcome_label(const std::optional<BitVec>& out);

// half L1 distance; SpaceMismatch when the space names differ
double stat_distance(const DistributionTable& a, const DistributionTable& b);

// sum of |count_a - count_b| over the union of outcomes; requires equal
// totals. Exhaustive verdicts compare integers, never rounded ratios.
uint64_t l1_diff(const DistributionTable& a, const DistributionTable& b);

// one-sided Hoeffding: with prob >= conf, true p <= phat + margin(trials)
double hoeffding_margin(uint64_t trials, double conf = 0.95);

std::vector<BitVec> all_messages(size_t k);   // RegimeTooLarge beyond 20 bits

// --- switching-lemma experiment ------------------------------------------------

struct SwitchingConfig {
    uint64_t master_seed = 1;
    uint64_t trials = 100000;
    size_t n = 0;             // restriction domain
    size_t p_log_inv = 1;     // survival probability 2^-p_log_inv
    size_t w = 1, t = 1;      // DNF width, depth threshold
    double delta = 0.0;
    size_t sigma = 0;         // 0 = use tx_sigma(t, w, M, delta, p)
    bool uniform_source = false;   // true: fully uniform restriction bits
    std::vector<Circuit> circuits;
    std::string name;
};

struct SwitchingReport {
    SwitchingConfig cfg;
    size_t sigma_formula = 0;   // tx_sigma value, reported even when overridden
    size_t sigma_used = 0;
    unsigned field_log = 0;
    uint64_t failures = 0;
    double phat = 0.0, upper95 = 0.0, bound = 0.0;
    bool vacuous = false, pass = false;
    std::string to_json() const;
};

SwitchingReport run_switching(const SwitchingConfig& cfg);

// --- star-reduction fidelity experiment -----------------------------------------

struct StarNmConfig {
    StarParams pp;
    LeakyLocalAdversary adv;
    TamperClass cls;
    bool exhaustive = true;        // randomness_len <= 24 enforced
    uint64_t trials = 100000;      // MC mode, per message
    uint64_t master_seed = 1;
    std::vector<BitVec> messages;  // empty = all 2^k
    std::string name;
};

struct StarNmReport {
    struct Row {
        std::string msg;
        double distance = 0.0;
        uint64_t l1 = 0;            // exhaustive only: integer L1 count gap
        uint64_t trials = 0;
        uint64_t cond_violations = 0;   // sim defined but != real
    };
    std::vector<Row> rows;
    uint64_t class_bottom = 0;     // per randomness: restricted family left cls
    uint64_t fallback = 0;
    uint64_t rand_total = 0;
    double bad_rate = 0.0;         // class_bottom / rand_total
    double max_distance = 0.0;
    bool exhaustive = false;
    bool conditional_exact = false;   // zero cond_violations anywhere
    bool distance_ok = false;         // per msg: distance <= bad_rate (+margin in MC)
    bool pass = false;
    std::string to_json() const;
};

StarNmReport run_star_nm(const StarNmConfig& cfg);

// --- pipeline composition experiment --------------------------------------------

struct PipelineNmConfig {
    AcdPipeline pl;
    TamperClass cls;                        // class for star-stage membership
    std::vector<LeakyLocalAdversary> suite; // over the outer codeword
    std::vector<BitVec> messages;           // empty = all 2^k
    uint64_t trials = 60;                   // per (adversary, message, experiment)
    uint64_t master_seed = 1;
    std::string name;
};

struct PipelineNmReport {
    struct Row {
        std::string adversary;
        std::string msg;
        // distances along the chain: real<->simA, simA<->simB, simB<->simSS,
        // and end-to-end real<->simSS
        double d_stage1 = 0.0, d_stage2 = 0.0, d_stage3 = 0.0, d_total = 0.0;
        bool triangle_ok = false;
        double real_bottom = 0.0, sim_bottom = 0.0;
    };
    std::vector<Row> rows;
    std::string plugin_tag;
    double composed_bound = 0.0;
    bool composed_vacuous = false;
    double max_total = 0.0;
    bool all_triangle_ok = false;
    bool pass = false;
    std::string to_json() const;
};

PipelineNmReport run_pipeline_nm(const PipelineNmConfig& cfg);

// --- split-state hybrid replay ---------------------------------------------------

struct HybridConfig {
    SplitStateParams pp;
    LeakyLocalAdversary adv;
    std::vector<std::pair<BitVec, BitVec>> message_pairs;
    uint64_t trials = 10000;    // per message pair
    uint64_t master_seed = 1;
    std::string name;
};

struct HybridReport {
    uint64_t trials_run = 0;
    uint64_t mismatch12 = 0, mismatch23 = 0, mismatch34 = 0;
    uint64_t fallback = 0, starstar = 0, bottom1 = 0;
    double max_dist01 = 0.0;
    double bound = 0.0;      // exp(-sigma/2 + 1)
    double margin = 0.0;
    bool pass = false;       // zero mismatches and dist01 <= bound + margin
    std::string to_json() const;
};

HybridReport run_hybrid_replay(const HybridConfig& cfg);

// --- JSON front doors (CLI) ------------------------------------------------------

struct ExperimentOutcome {
    bool pass = false;
    std::string report_json;
};

LinearCode code_from_json(const std::string& spec);
Fn fn_from_json(const std::string& spec);
LeakyLocalAdversary adversary_from_json(const std::string& spec);
TamperClass tamper_class_from_json(const std::string& spec);
StarParams star_params_from_json(const std::string& spec);
SplitStateParams ss_params_from_json(const std::string& spec);
AcdPipeline acd_pipeline_from_json(const std::string& spec);

ExperimentOutcome run_params_json(const std::string& config);
ExperimentOutcome run_switching_json(const std::string& config);
ExperimentOutcome run_nm_json(const std::string& config);     // target: star | pipeline
ExperimentOutcome run_hybrid_json(const std::string& config);

// flattens a report into key,value CSV rows (arrays indexed by position)
std::string report_csv(const std::string& report_json);

} // namespace nmc
