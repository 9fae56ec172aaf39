#include "nmc/pipeline.hpp"

#include <cmath>
#include <memory>

#include "json.hpp"

#include "nmc/codes.hpp"

namespace nmc {

Coder identity_coder(size_t k) {
    Coder c;
    c.k = c.n = k;
    c.name = "identity";
    c.encode = [k](const BitVec& x, RandomStream&) {
        if (x.size() != k) throw DimensionMismatch("identity encode: message length mismatch");
        return x;
    };
    c.decode = [k](const BitVec& ct) -> std::optional<BitVec> {
        if (ct.size() != k) throw DimensionMismatch("identity decode: codeword length mismatch");
        return ct;
    };
    return c;
}

Coder compose(const Coder& outer, const Coder& inner) {
    if (outer.k != inner.n)
        throw LengthMismatch("compose: outer message length " + std::to_string(outer.k) +
                             " != inner codeword length " + std::to_string(inner.n));
    Coder c;
    c.k = inner.k;
    c.n = outer.n;
    c.name = outer.name + "." + inner.name;
    auto o = std::make_shared<Coder>(outer);
    auto i = std::make_shared<Coder>(inner);
    c.encode = [o, i](const BitVec& x, RandomStream& rs) { return o->encode(i->encode(x, rs), rs); };
    c.decode = [o, i](const BitVec& ct) -> std::optional<BitVec> {
        std::optional<BitVec> mid = o->decode(ct);
        if (!mid) return std::nullopt;
        return i->decode(*mid);
    };
    return c;
}

SsNmcPlugin toy_ss_nmc(size_t half_k) {
    if (half_k < 1) throw InfeasibleParams("toy_ss_nmc: half_k must be positive");
    auto rpe = std::make_shared<RpeScheme>(make_rpe(bit_repetition_code(half_k, 3)));
    SsNmcPlugin pl;
    pl.half_k = half_k;
    pl.left_n = pl.right_n = rpe->n();
    pl.tag = "toy-unproven";
    pl.coder.k = 2 * half_k;
    pl.coder.n = 2 * rpe->n();
    pl.coder.name = "toy-ss[k=" + std::to_string(half_k) + "]";
    pl.coder.encode = [rpe, half_k](const BitVec& x, RandomStream& rs) {
        if (x.size() != 2 * half_k) throw DimensionMismatch("toy ss encode: message length mismatch");
        BitVec left = rpe_encode_random(*rpe, x.slice(1, half_k), rs);
        BitVec right = rpe_encode_random(*rpe, x.slice(half_k + 1, 2 * half_k), rs);
        return left.concat(right);
    };
    pl.coder.decode = [rpe, half_k](const BitVec& ct) -> std::optional<BitVec> {
        if (ct.size() != 2 * rpe->n()) throw DimensionMismatch("toy ss decode: codeword length mismatch");
        BitVec left = rpe_decode(*rpe, ct.slice(1, rpe->n()));
        BitVec right = rpe_decode(*rpe, ct.slice(rpe->n() + 1, 2 * rpe->n()));
        (void)half_k;
        return left.concat(right);
    };
    return pl;
}

Coder star_coder(const StarParams& pp) {
    auto p = std::make_shared<StarParams>(pp);
    Coder c;
    c.k = pp.k;
    c.n = pp.n;
    c.name = "star[k=" + std::to_string(pp.k) + ",n=" + std::to_string(pp.n) + "]";
    c.encode = [p](const BitVec& x, RandomStream& rs) { return star_encode(*p, x, rs); };
    c.decode = [p](const BitVec& ct) { return star_decode(*p, ct); };
    return c;
}

Coder ss_coder(const SplitStateParams& pp) {
    auto p = std::make_shared<SplitStateParams>(pp);
    Coder c;
    c.k = 2 * pp.k;
    c.n = pp.n();
    c.name = "ss[k=" + std::to_string(pp.k) + ",n=" + std::to_string(pp.n()) + "]";
    c.encode = [p](const BitVec& x, RandomStream& rs) {
        if (x.size() != 2 * p->k) throw DimensionMismatch("ss encode: message length mismatch");
        return ss_encode(*p, x.slice(1, p->k), x.slice(p->k + 1, 2 * p->k), rs).concat();
    };
    c.decode = [p](const BitVec& ct) -> std::optional<BitVec> {
        if (ct.size() != p->n()) throw DimensionMismatch("ss decode: codeword length mismatch");
        SsCodeword cw;
        cw.Z = ct.slice(1, p->n_Z());
        cw.XL = ct.slice(p->n_Z() + 1, p->n_Z() + p->tau());
        cw.SR = ct.slice(p->n_Z() + p->tau() + 1, p->n());
        auto pair = ss_decode(*p, cw);
        if (!pair) return std::nullopt;
        return pair->first.concat(pair->second);
    };
    return c;
}

Coder depth_reduce_chain(const std::vector<StarParams>& stars) {
    if (stars.empty()) throw InfeasibleParams("depth_reduce_chain: need at least one stage");
    for (size_t i = 0; i + 1 < stars.size(); ++i)
        if (stars[i].k != stars[i + 1].n)
            throw InfeasibleParams("depth_reduce_chain: stage " + std::to_string(i + 1) +
                                   " carries k = " + std::to_string(stars[i].k) +
                                   " but stage " + std::to_string(i + 2) + " encodes to n = " +
                                   std::to_string(stars[i + 1].n));
    Coder acc = star_coder(stars.back());
    for (size_t i = stars.size() - 1; i-- > 0;) acc = compose(star_coder(stars[i]), acc);
    return acc;
}

AcdPipeline build_acd_nmc(const AcdParams& par, const SsNmcPlugin& plugin) {
    if (par.stars.empty()) throw InfeasibleParams("build_acd_nmc: need at least one star stage");
    for (size_t i = 0; i + 1 < par.stars.size(); ++i)
        if (par.stars[i].k != par.stars[i + 1].n)
            throw InfeasibleParams("build_acd_nmc: chain-length mismatch between star stages " +
                                   std::to_string(i + 1) + " and " + std::to_string(i + 2));
    if (par.stars.back().k != par.ss.n())
        throw InfeasibleParams("build_acd_nmc: chain-length mismatch, innermost star carries " +
                               std::to_string(par.stars.back().k) + " bits, split-state codewords are " +
                               std::to_string(par.ss.n()));
    if (plugin.left_n != par.ss.k || plugin.right_n != par.ss.k)
        throw InfeasibleParams("build_acd_nmc: plugin halves must be k = " + std::to_string(par.ss.k) +
                               " bits each");
    if (par.strict) {
        for (const auto& pp : par.stars)
            for (const auto& row : pp.verdicts)
                if (!row.ok) throw InfeasibleParams("build_acd_nmc: " + row.name + " violated");
        for (const auto& row : par.ss.verdicts)
            if (!row.ok) throw InfeasibleParams("build_acd_nmc: " + row.name + " violated");
    }

    AcdPipeline pl;
    pl.params = par;
    pl.plugin = plugin;
    pl.coder = compose(depth_reduce_chain(par.stars),
                       compose(ss_coder(par.ss), plugin.coder));

    BoundReport rep;
    rep.kind = "acd-chain";
    rep.inputs = {{"depth", double(par.stars.size())},
                  {"circuit_size", double(par.circuit_size)},
                  {"delta", par.delta},
                  {"ell", double(par.ss.ell)},
                  {"sigma_ss", double(par.ss.sigma)}};
    double total = 0.0;
    for (size_t i = 0; i < par.stars.size(); ++i) {
        const StarParams& sp = par.stars[i];
        double eps = ac0_error(sp.n, par.circuit_size, par.ss.ell, sp.p(), par.delta, sp.sigma);
        rep.values.emplace_back("star-" + std::to_string(i + 1) + "-eps", eps);
        total += eps;
    }
    double ss_eps = std::exp(-(double(par.ss.sigma) / 2.0) + 1.0);
    rep.values.emplace_back("ss-eps", ss_eps);
    total += ss_eps;
    rep.bound = total;
    rep.vacuous = total >= 1.0;

    const StarParams& outer = par.stars.front();
    double cushion = double(outer.n) * std::pow(outer.p() / 4.0, double(par.stars.size())) /
                     (double(par.ss.ell) * double(par.ss.ell));
    rep.inequalities.push_back({"chain-cushion", cushion, double(par.ss.n()),
                                cushion <= double(par.ss.n()), false, true});
    double ksig = double(par.ss.sigma) * std::log2(double(outer.n));
    rep.inequalities.push_back({"k-sigma-log", ksig, double(par.ss.n()),
                                ksig <= double(par.ss.n()), false, true});
    rep.inequalities.push_back({"plugin-proven", plugin.tag == "proven-external" ? 1.0 : 0.0, 1.0,
                                plugin.tag == "proven-external", false, true});
    pl.composed = rep;
    return pl;
}

std::string pipeline_json(const AcdPipeline& pl) {
    nlohmann::json j;
    j["k"] = pl.coder.k;
    j["n"] = pl.coder.n;
    j["plugin"] = {{"tag", pl.plugin.tag},
                   {"half_k", pl.plugin.half_k},
                   {"half_n", pl.plugin.left_n}};
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& sp : pl.params.stars) {
        stages.push_back({{"kind", "star"},
                          {"k", sp.k},
                          {"n", sp.n},
                          {"p_log_inv", sp.p_log_inv},
                          {"sigma", sp.sigma},
                          {"m", sp.m()},
                          {"seed_code", sp.seed_rpe.code.name},
                          {"strict_decode", sp.strict_decode}});
    }
    stages.push_back({{"kind", "ss"},
                      {"k", pl.params.ss.k},
                      {"ell", pl.params.ss.ell},
                      {"q_rounds", pl.params.ss.q_rounds},
                      {"leak_m", pl.params.ss.leak_m},
                      {"sigma", pl.params.ss.sigma},
                      {"n_Z", pl.params.ss.n_Z()},
                      {"tau", pl.params.ss.tau()},
                      {"n_R", pl.params.ss.n_R()},
                      {"codes", {pl.params.ss.L.code.name, pl.params.ss.Z.code.name,
                                 pl.params.ss.R.code.name}},
                      {"field_log", pl.params.ss.gen.field_log}});
    stages.push_back({{"kind", "plugin"}, {"tag", pl.plugin.tag}});
    j["stages"] = stages;
    j["composed"] = nlohmann::json::parse(pl.composed.to_json());
    return j.dump(2);
}

} // namespace nmc
