#include "doctest.h"

#include "json.hpp"

#include "nmc/codes.hpp"
#include "nmc/pipeline.hpp"

using namespace nmc;

TEST_CASE("identity coder and composition") {
    Coder id3 = identity_coder(3);
    CHECK(id3.k == 3);
    CHECK(id3.n == 3);
    RandomStream rs = RandomStream::fork(1, 0);
    BitVec x = BitVec::from_string("101");
    CHECK(id3.encode(x, rs) == x);
    auto dec = id3.decode(x);
    REQUIRE(dec.has_value());
    CHECK(*dec == x);

    Coder comp = compose(id3, identity_coder(3));
    CHECK(comp.k == 3);
    CHECK(comp.n == 3);
    CHECK(comp.encode(x, rs) == x);

    CHECK_THROWS_AS(compose(identity_coder(4), identity_coder(3)), LengthMismatch);
}

TEST_CASE("composition propagates bottom from either stage") {
    Coder bottom_outer = identity_coder(3);
    bottom_outer.decode = [](const BitVec&) { return std::optional<BitVec>{}; };
    CHECK_FALSE(compose(bottom_outer, identity_coder(3)).decode(BitVec(3)).has_value());

    Coder bottom_inner = identity_coder(3);
    bottom_inner.decode = [](const BitVec&) { return std::optional<BitVec>{}; };
    CHECK_FALSE(compose(identity_coder(3), bottom_inner).decode(BitVec(3)).has_value());
}

TEST_CASE("toy split-state plugin roundtrip and independent halves") {
    SsNmcPlugin toy = toy_ss_nmc(2);
    CHECK(toy.tag == "toy-unproven");
    CHECK(toy.half_k == 2);
    CHECK(toy.coder.k == 4);
    CHECK(toy.coder.n == toy.left_n + toy.right_n);
    CHECK(toy.left_n == toy.right_n);

    for (uint64_t m = 0; m < 16; ++m) {
        BitVec x = BitVec::from_uint(m, 4);
        for (uint64_t t = 0; t < 4; ++t) {
            RandomStream rs = RandomStream::fork(3, m * 4 + t);
            BitVec c = toy.coder.encode(x, rs);
            REQUIRE(c.size() == toy.coder.n);
            auto dec = toy.coder.decode(c);
            REQUIRE(dec.has_value());
            CHECK(*dec == x);
        }
    }

    // halves are separate codewords: splicing left of one with right of
    // another decodes to the corresponding message halves
    RandomStream r1 = RandomStream::fork(4, 0), r2 = RandomStream::fork(4, 1);
    BitVec c1 = toy.coder.encode(BitVec::from_string("1001"), r1);
    BitVec c2 = toy.coder.encode(BitVec::from_string("0110"), r2);
    BitVec spliced = c1.slice(1, toy.left_n).concat(c2.slice(toy.left_n + 1, toy.coder.n));
    auto dec = toy.coder.decode(spliced);
    REQUIRE(dec.has_value());
    CHECK(dec->to_string() == "1010");  // left half of c1, right half of c2
}

TEST_CASE("star stage as a coder") {
    StarParams pp = make_star_params(2, 12, 1, 1, parity_code(8), true, false);
    Coder c = star_coder(pp);
    CHECK(c.k == 2);
    CHECK(c.n == 12);
    for (uint64_t t = 0; t < 100; ++t) {
        RandomStream rs = RandomStream::fork(9, t);
        BitVec x = BitVec::from_uint(t % 4, 2);
        auto dec = c.decode(c.encode(x, rs));
        REQUIRE(dec.has_value());
        CHECK(*dec == x);
    }
}

static AcdPipeline toy_pipeline() {
    AcdParams par;
    par.stars = {make_star_params(80, 200, 1, 1, parity_code(16), true, false)};
    par.ss = make_ss_params(3, 2, 1, 1, 2, bit_repetition_code(3, 3), shortened_hamming(18),
                            bit_repetition_code(3, 3), 48, 6, false);
    return build_acd_nmc(par, toy_ss_nmc(1));
}

TEST_CASE("assembled pipeline roundtrips and documents itself") {
    AcdPipeline pl = toy_pipeline();
    CHECK(pl.coder.k == 2);
    CHECK(pl.coder.n == 200);
    CHECK(pl.plugin.tag == "toy-unproven");
    CHECK_FALSE(pl.composed.inequalities.empty());

    for (uint64_t m = 0; m < 4; ++m) {
        BitVec x = BitVec::from_uint(m, 2);
        for (uint64_t t = 0; t < 25; ++t) {
            RandomStream rs = RandomStream::fork(31, m * 25 + t);
            auto dec = pl.coder.decode(pl.coder.encode(x, rs));
            REQUIRE(dec.has_value());
            CHECK(*dec == x);
        }
    }

    auto doc = nlohmann::json::parse(pipeline_json(pl));
    CHECK(doc.at("plugin").at("tag") == "toy-unproven");
    CHECK(doc.at("k") == 2);
    CHECK(doc.at("stages").size() == 3);  // one star stage + split-state + plugin
    CHECK(doc.at("stages")[0].at("kind") == "star");
    CHECK(doc.at("stages")[1].at("kind") == "ss");
    CHECK(doc.contains("composed"));
}

TEST_CASE("chain mismatches are rejected up front") {
    StarParams st = make_star_params(2, 12, 1, 1, parity_code(8), true, false);
    CHECK_THROWS_AS(depth_reduce_chain({st, st}), InfeasibleParams);

    AcdParams par;
    par.stars = {st};  // k=2 does not match the split-state codeword length
    par.ss = make_ss_params(3, 2, 1, 1, 2, bit_repetition_code(3, 3), shortened_hamming(18),
                            bit_repetition_code(3, 3), 48, 6, false);
    CHECK_THROWS_AS(build_acd_nmc(par, toy_ss_nmc(1)), InfeasibleParams);
}
