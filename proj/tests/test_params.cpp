#include "doctest.h"

#include <cmath>

#include "nmc/params.hpp"

using namespace nmc;

TEST_CASE("switching bound golden values") {
    CHECK(switching_bound(2, 2, 1.0 / 256, 0.0, 1) == doctest::Approx(0.048828125).epsilon(1e-12));
    CHECK(switching_bound(2, 2, 1.0 / 256, 0.0, 8) == doctest::Approx(0.390625).epsilon(1e-12));
    CHECK(switching_bound(2, 2, 1e-12, 0.0, 1) < 1e-15);
    CHECK(switching_bound(2, 2, 0.25, 0.0, 1) == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("per-level error golden value") {
    double v = ac0_error(2, 2, 2, 1.0 / 64, 1.0 / 1024, 12);
    CHECK(v == doctest::Approx(2.8718).epsilon(1e-3 / 2.8718));
    CHECK(ac0_error(2, 2, 2, 1e-9, 0.0, 4000) < 1e-6);
    CHECK_THROWS_AS(ac0_error(2, 2, 3, 0.5, 0.0, 1), NonIntegralLog);
}

TEST_CASE("concentration bound and precondition") {
    CHECK(chernoff_bound(10) == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
    CHECK(chernoff_bound(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chernoff_bound(11) == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));  // floor(11/2)
    CHECK(chernoff_precond(4, 0.5, 32));
    CHECK_FALSE(chernoff_precond(64, 0.5, 32));
}

TEST_CASE("derived generator order") {
    CHECK(tx_sigma(1, 1, 1, 0.5, 0.5) == 49);
    // loosening delta can only lower the requirement
    CHECK(tx_sigma(1, 1, 1, 0.25, 0.5) >= tx_sigma(1, 1, 1, 0.5, 0.5));
    CHECK(tx_sigma(2, 2, 8, 0.5, 0.5) > tx_sigma(1, 1, 1, 0.5, 0.5));
}

TEST_CASE("bound report JSON roundtrip") {
    BoundReport rep;
    rep.kind = "demo";
    rep.inputs = {{"k", 4}, {"n", 7}};
    rep.values = {{"rate", 4.0 / 7.0}};
    rep.inequalities = {{"k-le-n", 4, 7, true, true, true},
                        {"advice", 9, 3, false, false, true}};
    rep.bound = 0.25;
    rep.vacuous = false;
    CHECK(rep.feasible());   // the failed row is informational
    BoundReport back = bound_report_from_json(rep.to_json());
    CHECK(back.kind == rep.kind);
    CHECK(back.inputs == rep.inputs);
    CHECK(back.values == rep.values);
    CHECK(back.bound == rep.bound);
    CHECK(back.vacuous == rep.vacuous);
    REQUIRE(back.inequalities.size() == 2);
    CHECK(back.inequalities[1].name == "advice");
    CHECK_FALSE(back.inequalities[1].ok);
    CHECK_FALSE(back.inequalities[1].required);
}

TEST_CASE("split-state feasibility on the reference instance") {
    SsInstance inst;
    inst.k = 1;
    inst.ell = 2;
    inst.q_rounds = 1;
    inst.leak_m = 1;
    inst.sigma = 4;
    inst.tau = 29568;
    inst.L = {1, 77, 77};
    inst.Z = {75, 82, 3};
    inst.R = {1, 322, 322};
    inst.gen_d = 1 << 15;
    BoundReport rep = ss_feasibility(inst, true);
    CHECK(rep.feasible());
    CHECK_FALSE(rep.inequalities.empty());

    // starving tau must trip a named required inequality in strict mode
    SsInstance bad = inst;
    bad.tau = 100;
    BoundReport rep2 = ss_feasibility(bad, true);
    CHECK_FALSE(rep2.feasible());
    bool found = false;
    for (const auto& q : rep2.inequalities)
        if (!q.ok && q.required) found = true;
    CHECK(found);
}
