#include "doctest.h"

#include "nmc/restrictions.hpp"

using namespace nmc;

TEST_CASE("subset_from_string block rule") {
    CHECK(subset_from_string(BitVec::from_string("1110"), 2, 2).to_string() == "10");
    CHECK(subset_from_string(BitVec::from_string("111111"), 3, 2).to_string() == "111");
    // block size 1: mask equals the string
    BitVec s = BitVec::from_string("0110");
    CHECK(subset_from_string(s, 4, 1) == s);
    CHECK_THROWS_AS(subset_from_string(s, 3, 2), DimensionMismatch);
}

TEST_CASE("ext_indices takes the last k ones, sentinel-padded") {
    CHECK(ext_indices(BitVec::from_string("0110"), 2) == std::vector<size_t>{2, 3});
    CHECK(ext_indices(BitVec::from_string("0100"), 2) == std::vector<size_t>{2, 5});
    CHECK(ext_indices(BitVec::from_string("1111"), 2) == std::vector<size_t>{3, 4});
    CHECK(ext_indices(BitVec::from_string("0000"), 1) == std::vector<size_t>{5});
}

TEST_CASE("embed places message bits at the last survivors") {
    Restriction r1{2, BitVec::from_string("01"), BitVec::from_string("00")};
    CHECK(embed(BitVec::from_string("1"), r1).to_string() == "01");
    Restriction r2{4, BitVec::from_string("1111"), BitVec::from_string("0000")};
    CHECK(embed(BitVec::from_string("10"), r2).to_string() == "0010");
    // non-embedded positions carry the fill, even at live positions
    Restriction r3{4, BitVec::from_string("1101"), BitVec::from_string("0110")};
    CHECK(embed(BitVec::from_string("1"), r3).to_string() == "0111");
}

TEST_CASE("extract is the embed inverse when enough survivors exist") {
    CHECK_FALSE(extract(BitVec::from_string("0000"), BitVec::from_string("0000"), 1).has_value());
    auto got = extract(BitVec::from_string("1010"), BitVec::from_string("0101"), 2);
    REQUIRE(got.has_value());
    CHECK(got->to_string() == "00");
}

TEST_CASE("embed/extract roundtrip, exhaustive n = 6") {
    const size_t n = 6;
    for (size_t k = 1; k <= 4; ++k) {
        for (uint64_t mv = 0; mv < (uint64_t(1) << n); ++mv) {
            BitVec mask = BitVec::from_uint(mv, n);
            if (mask.weight() < k) {
                Restriction rho{n, mask, BitVec(n)};
                CHECK_FALSE(extract(embed(BitVec(k), rho), mask, k).has_value());
                continue;
            }
            for (uint64_t xv = 0; xv < (uint64_t(1) << k); ++xv) {
                BitVec x = BitVec::from_uint(xv, k);
                for (uint64_t f : {uint64_t(0), uint64_t(21), uint64_t(63)}) {
                    Restriction rho{n, mask, BitVec::from_uint(f, n)};
                    auto back = extract(embed(x, rho), mask, k);
                    REQUIRE(back.has_value());
                    CHECK(*back == x);
                }
            }
        }
    }
}

TEST_CASE("sample_restriction layout and exhaustion") {
    RestrictionDistribution dist{3, 2};
    CHECK(dist.bits_needed() == 9);
    BitVec bits = BitVec::from_string("111011" "101");
    Restriction rho = sample_restriction(dist, bits);
    CHECK(rho.mask.to_string() == "101");
    CHECK(rho.fill.to_string() == "101");
    CHECK_THROWS_AS(sample_restriction(dist, BitVec(8)), StreamExhausted);
    // all-ones mask string: everything live
    Restriction all = sample_restriction(dist, BitVec::from_string("111111000"));
    CHECK(all.mask.weight() == 3);
}

TEST_CASE("survivor marginal is exactly p over the uniform stream") {
    RestrictionDistribution dist{2, 2};
    std::vector<uint64_t> live(2, 0);
    for (uint64_t e = 0; e < (uint64_t(1) << dist.bits_needed()); ++e) {
        Restriction rho = sample_restriction(dist, BitVec::from_uint(e, dist.bits_needed()));
        for (size_t i = 1; i <= 2; ++i) live[i - 1] += rho.mask.get(i);
    }
    for (uint64_t c : live) CHECK(c == (uint64_t(1) << dist.bits_needed()) / 4);
}

TEST_CASE("fallback seed always yields enough tail survivors") {
    struct Case { size_t sigma, n, m, k, p_log_inv; };
    for (Case c : {Case{1, 8, 3, 2, 1}, Case{1, 12, 9, 2, 1}, Case{2, 8, 2, 3, 2}}) {
        CwGenerator g = make_cw_unbiased(c.sigma, c.n * c.p_log_inv);
        BitVec zeta = find_fallback_seed(g, c.n, c.m, c.k);
        BitVec mask = subset_from_string(cw_eval(g, zeta), c.n, c.p_log_inv);
        CHECK(mask.weight_range(c.m + 1, c.n) >= c.k);
        CHECK(find_fallback_seed(g, c.n, c.m, c.k) == zeta);   // deterministic
    }
}
