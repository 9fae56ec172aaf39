#include "nmc/params.hpp"

#include <cmath>

#include "json.hpp"

#include "nmc/common.hpp"

namespace nmc {

double switching_bound(size_t w, size_t t, double p, double delta, double M) {
    if (p <= 0.0 || p >= 1.0) throw InfeasibleParams("switching_bound: p must lie in (0,1)");
    if (w < 1 || t < 1 || M < 1) throw InfeasibleParams("switching_bound: counts must be >= 1");
    return M * (std::pow(2.0, double(w + t + 1)) * std::pow(5.0 * p * double(w), double(t)) + delta);
}

namespace {
size_t exact_log2(size_t v, const char* what) {
    if (v == 0 || (v & (v - 1)) != 0)
        throw NonIntegralLog(std::string(what) + " = " + std::to_string(v) +
                             " is not a power of two");
    size_t r = 0;
    while (v > 1) { v >>= 1; ++r; }
    return r;
}
} // namespace

double ac0_error(size_t n, size_t S, size_t ell, double p, double delta, size_t sigma) {
    if (p <= 0.0 || p >= 1.0) throw InfeasibleParams("ac0_error: p must lie in (0,1)");
    double lg = double(exact_log2(ell, "ell"));
    double level = double(n) * double(S) *
                   (std::pow(2.0, 2.0 * lg + 1.0) * std::pow(5.0 * p * lg, lg) + delta);
    double tail = std::exp(-double(sigma) / (2.0 * std::log2(1.0 / p)));
    return level + tail;
}

double chernoff_bound(size_t sigma) {
    return std::exp(-double(sigma / 2));
}

bool chernoff_precond(size_t sigma, double eps, double mu) {
    if (eps <= 0.0 || eps > 1.0) return false;
    return double(sigma) <= eps * eps * mu * std::exp(-1.0 / 3.0);
}

size_t tx_sigma(size_t t, size_t w, size_t S, double delta, double p) {
    if (t < 1 || w < 1 || S < 1 || delta <= 0.0 || p <= 0.0 || p >= 1.0)
        throw InfeasibleParams("tx_sigma: all inputs must be positive, p in (0,1)");
    double M = double(S) * std::pow(2.0, double(w) * (std::log2(1.0 / p) + 1.0));
    double eps = delta * std::pow(2.0, -double(t + 1) * (2.0 * double(w) + std::log2(double(S))));
    double x = std::log2(M / eps);
    size_t r = size_t(std::ceil(x * x));
    return r < 1 ? 1 : r;
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["bound"] = bound;
    j["vacuous"] = vacuous;
    j["feasible"] = feasible();
    nlohmann::json in = nlohmann::json::object();
    for (const auto& [k, v] : inputs) in[k] = v;
    j["inputs"] = in;
    nlohmann::json vals = nlohmann::json::object();
    for (const auto& [k, v] : values) vals[k] = v;
    j["values"] = vals;
    j["inequalities"] = nlohmann::json::array();
    for (const auto& q : inequalities)
        j["inequalities"].push_back({{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs},
                                     {"ok", q.ok}, {"required", q.required},
                                     {"certified", q.certified}});
    return j.dump(2);
}

BoundReport bound_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bound report: ") + e.what());
    }
    BoundReport r;
    r.kind = j.at("kind").get<std::string>();
    r.bound = j.at("bound").get<double>();
    r.vacuous = j.at("vacuous").get<bool>();
    for (auto& [k, v] : j.at("inputs").items()) r.inputs.emplace_back(k, v.get<double>());
    for (auto& [k, v] : j.at("values").items()) r.values.emplace_back(k, v.get<double>());
    for (auto& q : j.at("inequalities")) {
        Inequality iq;
        iq.name = q.at("name").get<std::string>();
        iq.lhs = q.at("lhs").get<double>();
        iq.rhs = q.at("rhs").get<double>();
        iq.ok = q.at("ok").get<bool>();
        iq.required = q.at("required").get<bool>();
        iq.certified = q.at("certified").get<bool>();
        r.inequalities.push_back(iq);
    }
    return r;
}

BoundReport ss_feasibility(const SsInstance& inst, bool strict) {
    const double nL = double(inst.L.n), nZ = double(inst.Z.n), nR = double(inst.R.n);
    const double tau = double(inst.tau);
    const double mq = double(inst.leak_m) * double(inst.q_rounds);
    const double ell = double(inst.ell);
    const double n = nZ + tau + nR;

    BoundReport rep;
    rep.kind = "ss-feasibility";
    rep.inputs = {{"k", double(inst.k)},       {"ell", ell},
                  {"q", double(inst.q_rounds)}, {"m", double(inst.leak_m)},
                  {"sigma", double(inst.sigma)}, {"tau", tau},
                  {"n_L", nL},                  {"n_Z", nZ},
                  {"n_R", nR},                  {"d_L", double(inst.L.d)},
                  {"d_Z", double(inst.Z.d)},    {"d_R", double(inst.R.d)},
                  {"gen_d", double(inst.gen_d)}};

    const double p = 3.0 * nL / (2.0 * tau);
    rep.values = {{"p", p},
                  {"q_num", p * double(inst.gen_d)},
                  {"n", n},
                  {"rate", double(inst.k) / n}};
    rep.bound = std::exp(-double(inst.sigma) / 2.0 + 1.0);
    rep.vacuous = rep.bound >= 1.0;

    auto row = [&](std::string name, double lhs, double rhs, bool ok, bool required,
                   bool certified = true) {
        rep.inequalities.push_back({std::move(name), lhs, rhs, ok, required, certified});
    };

    // the bias must be exactly representable as q_num / gen_d
    uint64_t num = 3 * uint64_t(inst.L.n) * uint64_t(inst.gen_d);
    uint64_t den = 2 * uint64_t(inst.tau);
    row("bias-exact", double(num % den), 0.0, num % den == 0, true);
    row("bias-nonzero", double(num / den), 1.0, num / den >= 1, true);

    size_t d_log = exact_log2(inst.gen_d, "gen_d");
    row("seed-fits-Z", double((inst.sigma + 1) * d_log), double(inst.Z.k),
        (inst.sigma + 1) * d_log == inst.Z.k, true);

    row("tau-capacity", nL, tau, nL <= tau, true);

    // budgets: constraints fed to each reconstruction must stay below d-1
    row("nZ-lower", mq * ell, double(inst.Z.d - 1), mq * ell <= double(inst.Z.d - 1), true);
    row("nR-lower", ell * (nL + nZ + mq), double(inst.R.d - 1),
        ell * (nL + nZ + mq) <= double(inst.R.d - 1), strict);

    const double cL = inst.L.c_sec();
    row("tau-lower", (9.0 * ell / (4.0 * cL)) * (nR + nZ + mq), tau,
        (9.0 * ell / (4.0 * cL)) * (nR + nZ + mq) <= tau, strict);

    row("ell-secrecy-L", nL / double(inst.L.d - 1), ell, ell > nL / double(inst.L.d - 1), strict);
    row("ell-secrecy-R", nR / double(inst.R.d - 1), ell, ell > nR / double(inst.R.d - 1), strict);
    // with a long seed the Z scheme cannot reach this ratio; nothing uses it
    row("ell-secrecy-Z", nZ / double(inst.Z.d - 1), ell, ell > nZ / double(inst.Z.d - 1), false);

    row("mql3-sublinear", mq * ell * ell * ell, n, mq * ell * ell * ell <= n, false);

    // concentration preconditions for the two bad events
    {
        double mu = 1.5 * nL;   // expected ones in the sampled mask
        bool cert = chernoff_precond(inst.sigma, 1.0 / 3.0, mu);
        row("star-precond", double(inst.sigma), (1.0 / 9.0) * mu * std::exp(-1.0 / 3.0), cert,
            false, cert);
    }
    {
        double v = ell * (nZ + nR + mq);   // pinned positions that may hit the mask
        double mu = v * p;
        double thr = double(inst.L.d - 1);
        double eps = mu > 0 ? thr / mu - 1.0 : 1.0;
        if (eps > 1.0) eps = 1.0;
        bool cert = mu < thr && chernoff_precond(inst.sigma, eps, mu);
        row("starstar-precond", double(inst.sigma), eps > 0 ? eps * eps * mu * std::exp(-1.0 / 3.0) : 0.0,
            cert, false, cert);
    }

    return rep;
}

} // namespace nmc
