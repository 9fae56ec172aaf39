#include "nmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace nmc {

using nlohmann::json;

namespace {

BitVec draw_bits(RandomStream& rs, size_t len) {
    BitVec v(len);
    for (size_t i = 1; i <= len; ++i) v.set(i, rs.bit());
    return v;
}

// chunked worker pool; exceptions from workers are rethrown on the caller
void parallel_chunks(uint64_t total, size_t max_workers,
                     const std::function<void(uint64_t, uint64_t, size_t)>& work) {
    size_t hw = std::thread::hardware_concurrency();
    size_t workers = std::max<size_t>(1, std::min({hw ? hw : 1, max_workers, size_t(total ? total : 1)}));
    if (workers <= 1) {
        work(0, total, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    uint64_t chunk = (total + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        uint64_t b = w * chunk, e = std::min<uint64_t>(total, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e, w] {
            try {
                work(b, e, w);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

void merge_tables(DistributionTable& into, const DistributionTable& from) {
    for (const auto& [k, v] : from.counts) into.counts[k] += v;
    into.total += from.total;
}

json inequality_rows(const std::vector<Inequality>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs},
                       {"ok", r.ok}, {"required", r.required}, {"certified", r.certified}});
    return arr;
}

} // namespace

// --- distributions ----------------------------------------------------------------

std::string outcome_label(const std::optional<BitVec>& out) {
    if (!out) return "bottom";
    return std::to_string(out->size()) + ":" + out->to_hex();
}

double stat_distance(const DistributionTable& a, const DistributionTable& b) {
    if (a.space != b.space)
        throw SpaceMismatch("stat_distance: '" + a.space + "' vs '" + b.space + "'");
    if (a.total == 0 || b.total == 0) throw SpaceMismatch("stat_distance: empty table");
    double s = 0.0;
    for (const auto& [k, v] : a.counts) {
        auto it = b.counts.find(k);
        double q = it == b.counts.end() ? 0.0 : double(it->second) / double(b.total);
        s += std::abs(double(v) / double(a.total) - q);
    }
    for (const auto& [k, v] : b.counts)
        if (!a.counts.count(k)) s += double(v) / double(b.total);
    return s / 2.0;
}

uint64_t l1_diff(const DistributionTable& a, const DistributionTable& b) {
    if (a.space != b.space)
        throw SpaceMismatch("l1_diff: '" + a.space + "' vs '" + b.space + "'");
    if (a.total != b.total) throw SpaceMismatch("l1_diff: totals differ");
    uint64_t s = 0;
    for (const auto& [k, v] : a.counts) {
        auto it = b.counts.find(k);
        uint64_t q = it == b.counts.end() ? 0 : it->second;
        s += v > q ? v - q : q - v;
    }
    for (const auto& [k, v] : b.counts)
        if (!a.counts.count(k)) s += v;
    return s;
}

double hoeffding_margin(uint64_t trials, double conf) {
    if (trials == 0) return 1.0;
    return std::sqrt(std::log(1.0 / (1.0 - conf)) / (2.0 * double(trials)));
}

std::vector<BitVec> all_messages(size_t k) {
    if (k > 20) throw RegimeTooLarge("all_messages: 2^" + std::to_string(k) + " messages");
    std::vector<BitVec> out;
    out.reserve(size_t(1) << k);
    for (uint64_t v = 0; v < (uint64_t(1) << k); ++v) out.push_back(BitVec::from_uint(v, k));
    return out;
}

// --- switching experiment -----------------------------------------------------------

SwitchingReport run_switching(const SwitchingConfig& cfg) {
    if (cfg.circuits.empty()) throw InfeasibleParams("switching: no circuits given");
    if (cfg.n < 1 || cfg.trials < 1 || cfg.t < 1)
        throw InfeasibleParams("switching: n, trials, t must be positive");
    for (const auto& c : cfg.circuits) {
        validate_circuit(c);
        if (c.n_inputs != cfg.n) throw DimensionMismatch("switching: circuit input width mismatch");
    }
    SwitchingReport rep;
    rep.cfg = cfg;
    const double p = 1.0 / double(uint64_t(1) << cfg.p_log_inv);
    const size_t M = cfg.circuits.size();
    // the formula needs delta > 0; with delta = 0 an explicit sigma is required
    if (cfg.delta > 0.0) rep.sigma_formula = tx_sigma(cfg.t, cfg.w, M, cfg.delta, p);
    rep.sigma_used = cfg.sigma ? cfg.sigma : rep.sigma_formula;
    if (rep.sigma_used == 0)
        throw InfeasibleParams("switching: sigma not derivable (delta = 0) and not given");

    RestrictionDistribution dist{cfg.n, cfg.p_log_inv};
    CwGenerator gen;
    if (!cfg.uniform_source) {
        gen = make_cw_unbiased(rep.sigma_used, dist.bits_needed());
        rep.field_log = gen.field_log;
    }

    const uint64_t T = cfg.trials;
    std::vector<uint64_t> fails(16, 0);
    parallel_chunks(T, 8, [&](uint64_t b, uint64_t e, size_t slot) {
        uint64_t local = 0;
        for (uint64_t v = b; v < e; ++v) {
            RandomStream rs = RandomStream::fork(cfg.master_seed, v);
            Restriction rho;
            if (cfg.uniform_source) {
                rho = sample_restriction(dist, rs);
            } else {
                BitVec seed = draw_bits(rs, gen.seed_len());
                rho = sample_restriction(dist, cw_eval(gen, seed));
            }
            for (const auto& c : cfg.circuits) {
                Fn f = circuit_restrict(c, rho);
                if (!dt_depth_at_most(f, cfg.t - 1)) {
                    ++local;
                    break;
                }
            }
        }
        fails[slot] += local;
    });
    for (uint64_t f : fails) rep.failures += f;
    rep.phat = double(rep.failures) / double(T);
    rep.upper95 = rep.phat + hoeffding_margin(T);
    rep.bound = switching_bound(cfg.w, cfg.t, p, cfg.delta, M);
    rep.vacuous = rep.bound >= 1.0;
    rep.pass = rep.vacuous || rep.upper95 <= rep.bound;
    return rep;
}

// --- star fidelity experiment --------------------------------------------------------

StarNmReport run_star_nm(const StarNmConfig& cfg) {
    GameAdversary tau = as_game(cfg.adv);
    if (tau.n_in != cfg.pp.n || tau.out_count != cfg.pp.n)
        throw DimensionMismatch("star experiment: adversary must tamper full codewords");
    std::vector<BitVec> msgs = cfg.messages.empty() ? all_messages(cfg.pp.k) : cfg.messages;
    for (const auto& m : msgs)
        if (m.size() != cfg.pp.k) throw DimensionMismatch("star experiment: message length mismatch");

    StarNmReport rep;
    rep.exhaustive = cfg.exhaustive;
    const size_t rl = cfg.pp.randomness_len();
    uint64_t total;
    if (cfg.exhaustive) {
        if (rl > 24) throw RegimeTooLarge("star experiment: exhaustive needs randomness <= 24 bits");
        total = uint64_t(1) << rl;
    } else {
        total = cfg.trials;
    }
    rep.rand_total = total;
    const std::string space = "k" + std::to_string(cfg.pp.k) + "+bottom";

    struct Slot {
        std::vector<DistributionTable> real, sim;
        std::vector<uint64_t> cond;
        uint64_t class_bottom = 0, fallback = 0;
    };
    std::vector<Slot> slots(16);
    for (auto& s : slots) {
        s.real.resize(msgs.size());
        s.sim.resize(msgs.size());
        for (auto& t : s.real) t.space = space;
        for (auto& t : s.sim) t.space = space;
        s.cond.assign(msgs.size(), 0);
    }

    parallel_chunks(total, 8, [&](uint64_t b, uint64_t e, size_t slot_i) {
        Slot& slot = slots[slot_i];
        for (uint64_t v = b; v < e; ++v) {
            BitVec rnd;
            if (cfg.exhaustive) {
                rnd = BitVec::from_uint(v, rl);
            } else {
                RandomStream rs = RandomStream::fork(cfg.master_seed, v);
                rnd = draw_bits(rs, rl);
            }
            StarSimResult sim = star_simulator(cfg.pp, tau, cfg.cls, rnd);
            if (sim.constant_bottom) ++slot.class_bottom;
            if (sim.fallback_used) ++slot.fallback;
            for (size_t mi = 0; mi < msgs.size(); ++mi) {
                BitVec c = star_encode_explicit(cfg.pp, msgs[mi], rnd);
                GameResult g = play_game(tau, c);
                std::string real_label =
                    g.output ? outcome_label(star_decode(cfg.pp, *g.output)) : "bottom";
                std::string sim_label = "bottom";
                if (!sim.constant_bottom) {
                    GameResult gs = play_game(sim.tau_prime, msgs[mi]);
                    sim_label = outcome_label(gs.output);
                    if (real_label != sim_label) ++slot.cond[mi];
                }
                slot.real[mi].add(real_label);
                slot.sim[mi].add(sim_label);
            }
        }
    });

    std::vector<DistributionTable> real(msgs.size()), sim(msgs.size());
    for (size_t mi = 0; mi < msgs.size(); ++mi) {
        real[mi].space = sim[mi].space = space;
    }
    std::vector<uint64_t> cond(msgs.size(), 0);
    for (const auto& s : slots) {
        rep.class_bottom += s.class_bottom;
        rep.fallback += s.fallback;
        for (size_t mi = 0; mi < msgs.size(); ++mi) {
            merge_tables(real[mi], s.real[mi]);
            merge_tables(sim[mi], s.sim[mi]);
            cond[mi] += s.cond[mi];
        }
    }

    rep.bad_rate = double(rep.class_bottom) / double(total);
    rep.conditional_exact = true;
    rep.distance_ok = true;
    size_t max_labels = 1;
    for (size_t mi = 0; mi < msgs.size(); ++mi) {
        StarNmReport::Row row;
        row.msg = msgs[mi].to_string();
        row.trials = total;
        row.l1 = l1_diff(real[mi], sim[mi]);
        row.distance = double(row.l1) / (2.0 * double(total));
        row.cond_violations = cond[mi];
        if (cond[mi]) rep.conditional_exact = false;
        if (cfg.exhaustive) {
            // integer-exact check: distance <= bad-event probability
            if (row.l1 > 2 * rep.class_bottom) rep.distance_ok = false;
        }
        max_labels = std::max(max_labels, real[mi].counts.size() + sim[mi].counts.size());
        rep.max_distance = std::max(rep.max_distance, row.distance);
        rep.rows.push_back(row);
    }
    if (!cfg.exhaustive) {
        double margin = std::sqrt(double(max_labels) / double(total)) + hoeffding_margin(total);
        for (const auto& row : rep.rows)
            if (row.distance > rep.bad_rate + margin) rep.distance_ok = false;
    }
    rep.pass = rep.conditional_exact && rep.distance_ok;
    return rep;
}

// --- pipeline composition experiment ---------------------------------------------------

PipelineNmReport run_pipeline_nm(const PipelineNmConfig& cfg) {
    const AcdPipeline& pl = cfg.pl;
    if (pl.params.stars.size() != 2)
        throw InfeasibleParams("pipeline experiment: expects the depth-2 desk chain");
    std::vector<BitVec> msgs = cfg.messages.empty() ? all_messages(pl.coder.k) : cfg.messages;
    for (const auto& m : msgs)
        if (m.size() != pl.coder.k) throw DimensionMismatch("pipeline experiment: message length");
    std::vector<GameAdversary> taus;
    for (const auto& adv : cfg.suite) {
        GameAdversary t = as_game(adv);
        if (t.n_in != pl.coder.n || t.out_count != pl.coder.n)
            throw DimensionMismatch("pipeline experiment: adversary must cover the outer codeword");
        taus.push_back(std::move(t));
    }

    // payload coders below each simulated stage
    Coder below_ss = pl.plugin.coder;
    Coder below2 = compose(ss_coder(pl.params.ss), below_ss);         // below star 2
    Coder below1 = compose(star_coder(pl.params.stars[1]), below2);   // below star 1
    const std::string space = "k" + std::to_string(pl.coder.k) + "+bottom";
    const size_t kk = pl.params.ss.k;

    PipelineNmReport rep;
    rep.plugin_tag = pl.plugin.tag;
    rep.composed_bound = pl.composed.bound;
    rep.composed_vacuous = pl.composed.vacuous;

    struct Cell {
        size_t adv_i, msg_i;
        PipelineNmReport::Row row;
    };
    std::vector<Cell> cells;
    for (size_t a = 0; a < taus.size(); ++a)
        for (size_t m = 0; m < msgs.size(); ++m) cells.push_back({a, m, {}});

    const uint64_t T = cfg.trials;
    parallel_chunks(cells.size(), 8, [&](uint64_t b, uint64_t e, size_t) {
        for (uint64_t ci = b; ci < e; ++ci) {
            Cell& cell = cells[ci];
            const GameAdversary& tau0 = taus[cell.adv_i];
            const BitVec& msg = msgs[cell.msg_i];
            DistributionTable tab[4];
            for (auto& t : tab) t.space = space;
            for (uint64_t tr = 0; tr < T; ++tr) {
                for (size_t ex = 0; ex < 4; ++ex) {
                    uint64_t idx = ((cell.adv_i * msgs.size() + cell.msg_i) * 4 + ex) * T + tr;
                    RandomStream rs = RandomStream::fork(cfg.master_seed, idx);
                    std::optional<BitVec> out;
                    if (ex == 0) {
                        BitVec c = pl.coder.encode(msg, rs);
                        GameResult g = play_game(tau0, c);
                        if (g.output) out = pl.coder.decode(*g.output);
                    } else {
                        // wrap through the first `ex` star stages
                        GameAdversary cur = tau0;
                        bool dead = false;
                        size_t stages = std::min<size_t>(ex, 2);
                        for (size_t s = 0; s < stages && !dead; ++s) {
                            StarSimResult sim =
                                star_simulator(pl.params.stars[s], cur, cfg.cls, rs);
                            if (sim.constant_bottom) dead = true;
                            else cur = sim.tau_prime;
                        }
                        if (!dead && ex < 3) {
                            const Coder& inner = ex == 1 ? below1 : below2;
                            BitVec c = inner.encode(msg, rs);
                            GameResult g = play_game(cur, c);
                            if (g.output) out = inner.decode(*g.output);
                        } else if (!dead) {
                            SsSimResult sim3 = ss_simulator(pl.params.ss, cur, rs);
                            BitVec payload = below_ss.encode(msg, rs);
                            auto pair = sim3.apply(payload.slice(1, kk),
                                                   payload.slice(kk + 1, 2 * kk));
                            if (pair) out = below_ss.decode(pair->first.concat(pair->second));
                        }
                    }
                    tab[ex].add(outcome_label(out));
                }
            }
            PipelineNmReport::Row& row = cell.row;
            row.adversary = cfg.suite[cell.adv_i].name;
            row.msg = msg.to_string();
            row.d_stage1 = stat_distance(tab[0], tab[1]);
            row.d_stage2 = stat_distance(tab[1], tab[2]);
            row.d_stage3 = stat_distance(tab[2], tab[3]);
            row.d_total = stat_distance(tab[0], tab[3]);
            row.triangle_ok = row.d_total <= row.d_stage1 + row.d_stage2 + row.d_stage3 + 1e-9;
            row.real_bottom = double(tab[0].counts.count("bottom") ? tab[0].counts.at("bottom") : 0) / double(T);
            row.sim_bottom = double(tab[3].counts.count("bottom") ? tab[3].counts.at("bottom") : 0) / double(T);
        }
    });

    rep.all_triangle_ok = true;
    for (const auto& cell : cells) {
        rep.rows.push_back(cell.row);
        rep.max_total = std::max(rep.max_total, cell.row.d_total);
        if (!cell.row.triangle_ok) rep.all_triangle_ok = false;
    }
    rep.pass = rep.all_triangle_ok;
    return rep;
}

// --- hybrid replay ---------------------------------------------------------------------

namespace {
std::string pair_label(const std::optional<std::pair<BitVec, BitVec>>& out) {
    if (!out) return "bottom";
    return outcome_label(out->first) + "|" + outcome_label(out->second);
}
} // namespace

HybridReport run_hybrid_replay(const HybridConfig& cfg) {
    if (cfg.message_pairs.empty()) throw InfeasibleParams("hybrid replay: no message pairs");
    GameAdversary t = as_game(cfg.adv);
    HybridReport rep;
    rep.bound = std::exp(-(double(cfg.pp.sigma) / 2.0) + 1.0);
    const std::string space = "pair+bottom";
    size_t max_labels = 1;

    for (size_t pi = 0; pi < cfg.message_pairs.size(); ++pi) {
        const auto& [xL, xR] = cfg.message_pairs[pi];
        if (xL.size() != cfg.pp.k || xR.size() != cfg.pp.k)
            throw DimensionMismatch("hybrid replay: message halves must be k bits");
        struct Slot {
            DistributionTable h0, h1;
            uint64_t m12 = 0, m23 = 0, m34 = 0, fb = 0, ss = 0, b1 = 0;
        };
        std::vector<Slot> slots(16);
        for (auto& s : slots) s.h0.space = s.h1.space = space;
        parallel_chunks(cfg.trials, 8, [&](uint64_t b, uint64_t e, size_t si) {
            Slot& slot = slots[si];
            for (uint64_t v = b; v < e; ++v) {
                HybridTrial ht = run_hybrid_trial(cfg.pp, t, xL, xR, cfg.master_seed,
                                                  pi * cfg.trials + v);
                slot.h0.add(pair_label(ht.out[0]));
                slot.h1.add(pair_label(ht.out[1]));
                if (ht.out[1] != ht.out[2]) ++slot.m12;
                if (ht.out[2] != ht.out[3]) ++slot.m23;
                if (ht.out[3] != ht.out[4]) ++slot.m34;
                if (ht.fallback_used) ++slot.fb;
                if (ht.starstar) ++slot.ss;
                if (!ht.out[1]) ++slot.b1;
            }
        });
        DistributionTable h0, h1;
        h0.space = h1.space = space;
        for (const auto& s : slots) {
            merge_tables(h0, s.h0);
            merge_tables(h1, s.h1);
            rep.mismatch12 += s.m12;
            rep.mismatch23 += s.m23;
            rep.mismatch34 += s.m34;
            rep.fallback += s.fb;
            rep.starstar += s.ss;
            rep.bottom1 += s.b1;
        }
        rep.trials_run += cfg.trials;
        rep.max_dist01 = std::max(rep.max_dist01, stat_distance(h0, h1));
        max_labels = std::max(max_labels, h0.counts.size() + h1.counts.size());
    }
    rep.margin = std::sqrt(double(max_labels) / double(cfg.trials)) + hoeffding_margin(cfg.trials);
    rep.pass = rep.mismatch12 == 0 && rep.mismatch23 == 0 && rep.mismatch34 == 0 &&
               rep.max_dist01 <= rep.bound + rep.margin;
    return rep;
}

// --- report serialization -----------------------------------------------------------------

std::string SwitchingReport::to_json() const {
    json j;
    j["kind"] = "switching";
    j["config"] = {{"name", cfg.name},
                   {"master_seed", cfg.master_seed},
                   {"trials", cfg.trials},
                   {"n", cfg.n},
                   {"p_log_inv", cfg.p_log_inv},
                   {"w", cfg.w},
                   {"t", cfg.t},
                   {"delta", cfg.delta},
                   {"sigma_override", cfg.sigma},
                   {"source", cfg.uniform_source ? "uniform" : "cw"},
                   {"circuits", cfg.circuits.size()}};
    j["sigma_formula"] = sigma_formula;
    j["sigma_used"] = sigma_used;
    j["field_log"] = field_log;
    j["failures"] = failures;
    j["phat"] = phat;
    j["upper95"] = upper95;
    j["bound"] = bound;
    j["vacuous"] = vacuous;
    j["pass"] = pass;
    return j.dump(2);
}

std::string StarNmReport::to_json() const {
    json j;
    j["kind"] = "star-nm";
    j["exhaustive"] = exhaustive;
    j["rand_total"] = rand_total;
    j["class_bottom"] = class_bottom;
    j["fallback"] = fallback;
    j["bad_rate"] = bad_rate;
    j["max_distance"] = max_distance;
    j["conditional_exact"] = conditional_exact;
    j["distance_ok"] = distance_ok;
    j["pass"] = pass;
    json rows_j = json::array();
    for (const auto& r : rows)
        rows_j.push_back({{"msg", r.msg},
                          {"distance", r.distance},
                          {"l1", r.l1},
                          {"trials", r.trials},
                          {"cond_violations", r.cond_violations}});
    j["rows"] = rows_j;
    return j.dump(2);
}

std::string PipelineNmReport::to_json() const {
    json j;
    j["kind"] = "pipeline-nm";
    j["plugin_tag"] = plugin_tag;
    j["composed_bound"] = composed_bound;
    j["composed_vacuous"] = composed_vacuous;
    j["max_total"] = max_total;
    j["all_triangle_ok"] = all_triangle_ok;
    j["pass"] = pass;
    json rows_j = json::array();
    for (const auto& r : rows)
        rows_j.push_back({{"adversary", r.adversary},
                          {"msg", r.msg},
                          {"d_stage1", r.d_stage1},
                          {"d_stage2", r.d_stage2},
                          {"d_stage3", r.d_stage3},
                          {"d_total", r.d_total},
                          {"triangle_ok", r.triangle_ok},
                          {"real_bottom", r.real_bottom},
                          {"sim_bottom", r.sim_bottom}});
    j["rows"] = rows_j;
    return j.dump(2);
}

std::string HybridReport::to_json() const {
    json j;
    j["kind"] = "hybrid-replay";
    j["trials_run"] = trials_run;
    j["mismatch12"] = mismatch12;
    j["mismatch23"] = mismatch23;
    j["mismatch34"] = mismatch34;
    j["fallback"] = fallback;
    j["starstar"] = starstar;
    j["bottom1"] = bottom1;
    j["max_dist01"] = max_dist01;
    j["bound"] = bound;
    j["margin"] = margin;
    j["pass"] = pass;
    return j.dump(2);
}

// --- JSON construction --------------------------------------------------------------------

namespace {

LinearCode code_from(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "hamming74") return hamming74();
    if (type == "extended_hamming84") return extended_hamming84();
    if (type == "parity") return parity_code(j.at("k").get<size_t>());
    if (type == "repetition") return repetition_code(j.at("r").get<size_t>());
    if (type == "bit_rep")
        return bit_repetition_code(j.at("k").get<size_t>(), j.at("r").get<size_t>());
    if (type == "shortened_hamming") return shortened_hamming(j.at("k").get<size_t>());
    if (type == "simplex") return simplex_code(j.at("k").get<size_t>());
    throw ParseError("unknown code type '" + type + "'");
}

Fn fn_from(const json& j) {
    std::string type = j.at("type").get<std::string>();
    size_t n = j.at("n").get<size_t>();
    if (type == "dnf" || type == "cnf") {
        Circuit c;
        c.n_inputs = n;
        auto terms = j.at("terms").get<std::vector<std::vector<int32_t>>>();
        Circuit::Layer bottom{type == "dnf" ? Circuit::Op::And : Circuit::Op::Or, terms};
        std::vector<int32_t> all;
        for (size_t i = 1; i <= terms.size(); ++i) all.push_back(int32_t(i));
        Circuit::Layer top{type == "dnf" ? Circuit::Op::Or : Circuit::Op::And, {all}};
        c.layers = {bottom, top};
        validate_circuit(c);
        return c;
    }
    if (type == "circuit") {
        Circuit c;
        c.n_inputs = n;
        if (j.contains("constant")) {
            c.constant = j.at("constant").get<bool>();
        } else {
            for (const auto& lj : j.at("layers")) {
                Circuit::Layer layer;
                std::string op = lj.at("op").get<std::string>();
                if (op == "and") layer.op = Circuit::Op::And;
                else if (op == "or") layer.op = Circuit::Op::Or;
                else throw ParseError("unknown gate op '" + op + "'");
                layer.gates = lj.at("gates").get<std::vector<std::vector<int32_t>>>();
                c.layers.push_back(layer);
            }
        }
        validate_circuit(c);
        return c;
    }
    if (type == "local") {
        LocalFunction f;
        f.n_inputs = n;
        f.deps = j.at("deps").get<std::vector<size_t>>();
        f.table = BitVec::from_string(j.at("table").get<std::string>());
        validate_local(f);
        return f;
    }
    throw ParseError("unknown function type '" + type + "'");
}

std::vector<size_t> selection_from(const json& j, size_t N) {
    if (j.is_string()) {
        if (j.get<std::string>() == "identity") {
            std::vector<size_t> out(N);
            for (size_t i = 0; i < N; ++i) out[i] = i + 1;
            return out;
        }
        throw ParseError("unknown selection keyword");
    }
    if (j.is_object()) {
        auto r = j.at("range").get<std::vector<size_t>>();
        if (r.size() != 2 || r[0] > r[1]) throw ParseError("selection range must be [a, b]");
        std::vector<size_t> out;
        for (size_t i = r[0]; i <= r[1]; ++i) out.push_back(i);
        return out;
    }
    return j.get<std::vector<size_t>>();
}

LeakyLocalAdversary adversary_from(const json& j) {
    LeakyLocalAdversary adv;
    size_t n = j.at("n").get<size_t>();
    size_t count = j.value("count", n);
    bool identity = j.value("identity_default", true);
    if (identity) {
        adv.family = make_identity_family(n);
        adv.family.count = count;
    } else {
        adv.family.n_inputs = n;
        adv.family.count = count;
    }
    if (j.contains("fns"))
        for (const auto& [key, spec] : j.at("fns").items())
            adv.family.explicit_fns[std::stoul(key)] = fn_from(spec);
    adv.name = j.value("name", std::string("adversary"));
    adv.out_count = j.value("out_count", n);
    if (j.contains("leak_sizes")) adv.leak_sizes = j.at("leak_sizes").get<std::vector<size_t>>();

    size_t prefix = 0;
    if (j.contains("round_tables")) {
        for (const auto& tj : j.at("round_tables")) {
            std::vector<std::vector<size_t>> table;
            for (const auto& e : tj) table.push_back(selection_from(e, count));
            adv.round_tables.push_back(table);
        }
    } else if (j.contains("rounds_fixed")) {
        // one fixed selection per round, replicated over the transcript space
        size_t r = 0;
        for (const auto& e : j.at("rounds_fixed")) {
            std::vector<size_t> sel = selection_from(e, count);
            adv.round_tables.emplace_back(size_t(1) << prefix, sel);
            prefix += adv.leak_sizes.at(r++);
        }
    }
    prefix = 0;
    for (size_t s : adv.leak_sizes) prefix += s;
    if (prefix > 24) throw RegimeTooLarge("adversary: transcript too long");
    size_t entries = size_t(1) << prefix;
    if (j.contains("final_table")) {
        for (const auto& e : j.at("final_table"))
            adv.final_table.push_back(e.is_null() || (e.is_array() && e.empty())
                                          ? std::vector<size_t>{}
                                          : selection_from(e, count));
    } else if (j.contains("final_by_parity")) {
        const auto& fb = j.at("final_by_parity");
        std::vector<size_t> even = fb.at("even").is_null()
                                       ? std::vector<size_t>{}
                                       : selection_from(fb.at("even"), count);
        std::vector<size_t> odd = fb.at("odd").is_null() ? std::vector<size_t>{}
                                                         : selection_from(fb.at("odd"), count);
        for (size_t v = 0; v < entries; ++v)
            adv.final_table.push_back(__builtin_popcountll(v) % 2 ? odd : even);
    } else {
        std::vector<size_t> sel = selection_from(j.at("final"), count);
        adv.final_table.assign(entries, sel);
    }
    validate_adversary(adv);
    return adv;
}

TamperClass class_from(const json& j) {
    TamperClass cls;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "dt_depth") {
        cls.kind = TamperClass::Kind::DtDepth;
        cls.t = j.at("t").get<size_t>();
    } else if (kind == "layered") {
        cls.kind = TamperClass::Kind::Layered;
        cls.depth = j.at("depth").get<size_t>();
        cls.bottom_fanin = j.at("bottom_fanin").get<size_t>();
    } else {
        throw ParseError("unknown tamper class kind '" + kind + "'");
    }
    return cls;
}

StarParams star_from(const json& j) {
    return make_star_params(j.at("k").get<size_t>(), j.at("n").get<size_t>(),
                            j.at("p_log_inv").get<size_t>(), j.at("sigma").get<size_t>(),
                            code_from(j.at("seed_code")), j.value("relax_chernoff", false),
                            j.value("strict_decode", false));
}

SplitStateParams ss_from(const json& j) {
    return make_ss_params(j.at("k").get<size_t>(), j.at("ell").get<size_t>(),
                          j.at("q_rounds").get<size_t>(), j.at("leak_m").get<size_t>(),
                          j.at("sigma").get<size_t>(), code_from(j.at("codeL")),
                          code_from(j.at("codeZ")), code_from(j.at("codeR")),
                          j.at("tau").get<size_t>(), j.at("field_log").get<unsigned>(),
                          j.value("strict", false));
}

AcdPipeline acd_from(const json& j) {
    AcdParams par;
    for (const auto& sj : j.at("stars")) par.stars.push_back(star_from(sj));
    par.ss = ss_from(j.at("ss"));
    par.circuit_size = j.value("circuit_size", size_t(1));
    par.delta = j.value("delta", 0.0);
    par.strict = j.value("strict", false);
    return build_acd_nmc(par, toy_ss_nmc(j.at("plugin_half_k").get<size_t>()));
}

std::vector<BitVec> messages_from(const json& j, size_t k) {
    if (j.is_string() && j.get<std::string>() == "all") return all_messages(k);
    std::vector<BitVec> out;
    for (const auto& m : j) out.push_back(BitVec::from_string(m.get<std::string>()));
    return out;
}

} // namespace

LinearCode code_from_json(const std::string& spec) { return code_from(json::parse(spec)); }
Fn fn_from_json(const std::string& spec) { return fn_from(json::parse(spec)); }
LeakyLocalAdversary adversary_from_json(const std::string& spec) {
    return adversary_from(json::parse(spec));
}
TamperClass tamper_class_from_json(const std::string& spec) {
    return class_from(json::parse(spec));
}
StarParams star_params_from_json(const std::string& spec) { return star_from(json::parse(spec)); }
SplitStateParams ss_params_from_json(const std::string& spec) {
    return ss_from(json::parse(spec));
}
AcdPipeline acd_pipeline_from_json(const std::string& spec) { return acd_from(json::parse(spec)); }

// --- CLI front doors ------------------------------------------------------------------------

ExperimentOutcome run_params_json(const std::string& config) {
    json cfg = json::parse(config);
    std::string kind = cfg.at("kind").get<std::string>();
    ExperimentOutcome out;
    if (kind == "ss-feasibility") {
        SsInstance inst;
        inst.k = cfg.at("k").get<size_t>();
        inst.ell = cfg.at("ell").get<size_t>();
        inst.q_rounds = cfg.at("q_rounds").get<size_t>();
        inst.leak_m = cfg.at("leak_m").get<size_t>();
        inst.sigma = cfg.at("sigma").get<size_t>();
        inst.tau = cfg.at("tau").get<size_t>();
        auto shape = [&](const char* key) {
            const json& c = cfg.at(key);
            return CodeShape{c.at("k").get<size_t>(), c.at("n").get<size_t>(),
                             c.at("d").get<size_t>()};
        };
        inst.L = shape("L");
        inst.Z = shape("Z");
        inst.R = shape("R");
        inst.gen_d = cfg.at("gen_d").get<size_t>();
        BoundReport rep = ss_feasibility(inst, cfg.value("strict", false));
        out.pass = rep.feasible();
        json j = json::parse(rep.to_json());
        j["config"] = cfg;
        out.report_json = j.dump(2);
        return out;
    }
    if (kind == "formula") {
        std::string name = cfg.at("name").get<std::string>();
        const json& a = cfg.at("args");
        json j;
        j["kind"] = "formula";
        j["name"] = name;
        j["config"] = cfg;
        double value = 0.0;
        if (name == "switching_bound") {
            value = switching_bound(a.at("w").get<size_t>(), a.at("t").get<size_t>(),
                                    a.at("p").get<double>(), a.at("delta").get<double>(),
                                    a.at("M").get<size_t>());
        } else if (name == "ac0_error") {
            value = ac0_error(a.at("n").get<size_t>(), a.at("S").get<size_t>(),
                              a.at("ell").get<size_t>(), a.at("p").get<double>(),
                              a.at("delta").get<double>(), a.at("sigma").get<size_t>());
        } else if (name == "chernoff_bound") {
            value = chernoff_bound(a.at("sigma").get<size_t>());
        } else if (name == "chernoff_precond") {
            value = chernoff_precond(a.at("sigma").get<size_t>(), a.at("eps").get<double>(),
                                     a.at("mu").get<double>())
                        ? 1.0
                        : 0.0;
        } else if (name == "tx_sigma") {
            value = double(tx_sigma(a.at("t").get<size_t>(), a.at("w").get<size_t>(),
                                    a.at("S").get<size_t>(), a.at("delta").get<double>(),
                                    a.at("p").get<double>()));
        } else {
            throw ParseError("unknown formula '" + name + "'");
        }
        j["value"] = value;
        j["vacuous"] = value >= 1.0 && (name == "switching_bound" || name == "ac0_error" ||
                                        name == "chernoff_bound");
        out.pass = true;
        out.report_json = j.dump(2);
        return out;
    }
    throw ParseError("unknown params kind '" + kind + "'");
}

ExperimentOutcome run_switching_json(const std::string& config) {
    json cfg = json::parse(config);
    SwitchingConfig sc;
    sc.name = cfg.value("name", std::string());
    sc.master_seed = cfg.value("master_seed", uint64_t(1));
    sc.trials = cfg.value("trials", uint64_t(100000));
    sc.n = cfg.at("n").get<size_t>();
    sc.p_log_inv = cfg.at("p_log_inv").get<size_t>();
    sc.w = cfg.at("w").get<size_t>();
    sc.t = cfg.at("t").get<size_t>();
    sc.delta = cfg.value("delta", 0.0);
    sc.sigma = cfg.value("sigma", size_t(0));
    sc.uniform_source = cfg.value("source", std::string("cw")) == "uniform";
    for (const auto& cj : cfg.at("circuits")) {
        Fn f = fn_from(cj);
        if (!std::holds_alternative<Circuit>(f))
            throw ParseError("switching: circuits must be layered circuits");
        sc.circuits.push_back(std::get<Circuit>(f));
    }
    SwitchingReport rep = run_switching(sc);
    json j = json::parse(rep.to_json());
    j["config_echo"] = cfg;
    return {rep.pass, j.dump(2)};
}

ExperimentOutcome run_nm_json(const std::string& config) {
    json cfg = json::parse(config);
    std::string target = cfg.at("target").get<std::string>();
    if (target == "star") {
        StarNmConfig sc{star_from(cfg.at("star")), adversary_from(cfg.at("adversary")),
                        class_from(cfg.at("class")), cfg.value("mode", std::string("exhaustive")) ==
                                                         "exhaustive",
                        cfg.value("trials", uint64_t(100000)), cfg.value("master_seed", uint64_t(1)),
                        {}, cfg.value("name", std::string())};
        if (cfg.contains("messages")) sc.messages = messages_from(cfg.at("messages"), sc.pp.k);
        StarNmReport rep = run_star_nm(sc);
        json j = json::parse(rep.to_json());
        j["config_echo"] = cfg;
        return {rep.pass, j.dump(2)};
    }
    if (target == "pipeline") {
        PipelineNmConfig pc;
        pc.pl = acd_from(cfg.at("pipeline"));
        pc.cls = class_from(cfg.at("class"));
        for (const auto& aj : cfg.at("suite")) pc.suite.push_back(adversary_from(aj));
        if (cfg.contains("messages")) pc.messages = messages_from(cfg.at("messages"), pc.pl.coder.k);
        pc.trials = cfg.value("trials", uint64_t(60));
        pc.master_seed = cfg.value("master_seed", uint64_t(1));
        pc.name = cfg.value("name", std::string());
        PipelineNmReport rep = run_pipeline_nm(pc);
        json j = json::parse(rep.to_json());
        j["config_echo"] = cfg;
        j["pipeline_description"] = json::parse(pipeline_json(pc.pl));
        return {rep.pass, j.dump(2)};
    }
    throw ParseError("unknown nm target '" + target + "'");
}

ExperimentOutcome run_hybrid_json(const std::string& config) {
    json cfg = json::parse(config);
    HybridConfig hc;
    hc.pp = ss_from(cfg.at("ss"));
    hc.adv = adversary_from(cfg.at("adversary"));
    for (const auto& mj : cfg.at("messages"))
        hc.message_pairs.emplace_back(BitVec::from_string(mj.at(0).get<std::string>()),
                                      BitVec::from_string(mj.at(1).get<std::string>()));
    hc.trials = cfg.value("trials", uint64_t(10000));
    hc.master_seed = cfg.value("master_seed", uint64_t(1));
    hc.name = cfg.value("name", std::string());
    HybridReport rep = run_hybrid_replay(hc);
    json j = json::parse(rep.to_json());
    j["config_echo"] = cfg;
    json rows = json::array();
    for (const auto& row : inequality_rows(hc.pp.verdicts)) rows.push_back(row);
    j["feasibility"] = rows;
    return {rep.pass, j.dump(2)};
}

// --- CSV flattening ---------------------------------------------------------------------------

namespace {
void flatten(const json& j, const std::string& path, std::string& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        std::string v = j.is_string() ? j.get<std::string>() : j.dump();
        if (v.find(',') != std::string::npos || v.find('"') != std::string::npos) {
            std::string esc = "\"";
            for (char c : v) {
                if (c == '"') esc += "\"\"";
                else esc += c;
            }
            esc += "\"";
            v = esc;
        }
        out += path + "," + v + "\n";
    }
}
} // namespace

std::string report_csv(const std::string& report_json) {
    std::string out = "key,value\n";
    flatten(json::parse(report_json), "", out);
    return out;
}

} // namespace nmc
