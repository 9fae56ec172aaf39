#include "doctest.h"

#include <algorithm>
#include <set>

#include "nmc/gf2mat.hpp"

using namespace nmc;

TEST_CASE("bitvec construction and indexing") {
    BitVec v = BitVec::from_string("0101");
    CHECK(v.size() == 4);
    CHECK_FALSE(v.get(1));
    CHECK(v.get(2));
    CHECK(v.to_string() == "0101");
    // LSB-first packing: bit 1 is the low bit of the integer reading
    CHECK(BitVec::from_uint(0b101, 3).to_string() == "101");
    CHECK(BitVec::from_string("101").to_uint() == 0b101);
    CHECK_THROWS_AS(v.get(0), DimensionMismatch);
    CHECK_THROWS_AS(v.get(5), DimensionMismatch);
    CHECK_THROWS_AS(BitVec::from_string("01x"), ParseError);
}

TEST_CASE("bitvec hex, low nibble first") {
    BitVec v = BitVec::from_string("1000110101");
    CHECK(BitVec::from_hex(v.to_hex(), v.size()) == v);
    CHECK(BitVec::from_hex("1", 4).to_string() == "1000");
    CHECK(BitVec::from_hex("8", 4).to_string() == "0001");
    // declared length must cover every set bit
    CHECK_THROWS_AS(BitVec::from_hex("8", 3), ParseError);
    CHECK_THROWS_AS(BitVec::from_hex("g", 4), ParseError);
}

TEST_CASE("bitvec slice, concat, ones, weight") {
    BitVec v = BitVec::from_string("0110101");
    CHECK(v.slice(2, 4).to_string() == "110");
    CHECK(v.slice(1, 7) == v);
    CHECK(v.weight() == 4);
    CHECK(v.weight_range(3, 5) == 2);
    CHECK(v.weight_range(5, 3) == 0);
    CHECK(v.ones() == std::vector<size_t>{2, 3, 5, 7});
    BitVec w = BitVec::from_string("01");
    CHECK(v.concat(w).to_string() == "011010101");
    CHECK(BitVec().concat(w) == w);
    // 70-bit vector crosses a word boundary
    BitVec big(70);
    big.set(1, true);
    big.set(65, true);
    big.set(70, true);
    CHECK(big.weight() == 3);
    CHECK(big.ones() == std::vector<size_t>{1, 65, 70});
    CHECK(big.slice(64, 66).to_string() == "010");
}

TEST_CASE("bitvec xor and dot") {
    BitVec a = BitVec::from_string("1100");
    BitVec b = BitVec::from_string("1010");
    CHECK((a ^ b).to_string() == "0110");
    CHECK(a.dot(b) == true);               // overlap {1}, odd
    CHECK(a.dot(BitVec::from_string("0011")) == false);
    CHECK_THROWS_AS(a.dot(BitVec(3)), DimensionMismatch);
}

TEST_CASE("matmul vector cases") {
    Gf2Matrix id3 = Gf2Matrix::identity(3);
    CHECK(matmul(id3, BitVec::from_string("101")).to_string() == "101");
    Gf2Matrix zero(2, 3);
    CHECK(matmul(zero, BitVec::from_string("111")).to_string() == "00");
    Gf2Matrix m = Gf2Matrix::from_strings({"11", "01"});
    CHECK(matmul(m, BitVec::from_string("11")).to_string() == "01");
    CHECK_THROWS_AS(matmul(m, BitVec(3)), DimensionMismatch);
}

TEST_CASE("matmul matrix and transpose") {
    Gf2Matrix a = Gf2Matrix::from_strings({"110", "011"});
    Gf2Matrix b = Gf2Matrix::from_strings({"10", "11", "01"});
    Gf2Matrix c = matmul(a, b);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 2);
    // row i of c = a_row_i combined: check against vector products
    for (size_t j = 1; j <= 2; ++j) {
        BitVec col(3);
        for (size_t i = 1; i <= 3; ++i) col.set(i, b.get(i, j));
        BitVec cj = matmul(a, col);
        for (size_t i = 1; i <= 2; ++i) CHECK(c.get(i, j) == cj.get(i));
    }
    CHECK(a.transpose().transpose() == a);
}

TEST_CASE("rank") {
    CHECK(rank(Gf2Matrix::identity(5)) == 5);
    CHECK(rank(Gf2Matrix(3, 4)) == 0);
    CHECK(rank(Gf2Matrix::from_strings({"11", "11"})) == 1);
}

TEST_CASE("solve_affine basic cases") {
    SolutionSet s = solve_affine(Gf2Matrix::identity(2), BitVec::from_string("10"));
    CHECK_FALSE(s.empty);
    CHECK(s.particular.to_string() == "10");
    CHECK(s.dim() == 0);

    SolutionSet bad = solve_affine(Gf2Matrix(1, 2), BitVec::from_string("1"));
    CHECK(bad.empty);

    SolutionSet pair = solve_affine(Gf2Matrix::from_strings({"11"}), BitVec(1));
    CHECK_FALSE(pair.empty);
    CHECK(pair.dim() == 1);
    std::set<std::string> sols;
    for (uint64_t c = 0; c < 2; ++c) sols.insert(pair.element(BitVec::from_uint(c, 1)).to_string());
    CHECK(sols == std::set<std::string>{"00", "11"});
}

TEST_CASE("solve_affine enumerates exactly the solution set") {
    RandomStream rs(7);
    for (int rep = 0; rep < 20; ++rep) {
        size_t rows = 1 + rs.below(4), cols = 1 + rs.below(6);
        Gf2Matrix m(rows, cols);
        for (size_t i = 1; i <= rows; ++i)
            for (size_t j = 1; j <= cols; ++j) m.set(i, j, rs.bit());
        BitVec b(rows);
        for (size_t i = 1; i <= rows; ++i) b.set(i, rs.bit());

        std::set<std::string> brute;
        for (uint64_t x = 0; x < (uint64_t(1) << cols); ++x) {
            BitVec xv = BitVec::from_uint(x, cols);
            if (matmul(m, xv) == b) brute.insert(xv.to_string());
        }
        SolutionSet s = solve_affine(m, b);
        if (brute.empty()) {
            CHECK(s.empty);
            continue;
        }
        REQUIRE_FALSE(s.empty);
        std::set<std::string> found;
        for (uint64_t c = 0; c < (uint64_t(1) << s.dim()); ++c) {
            BitVec x = s.element(BitVec::from_uint(c, s.dim()));
            CHECK(matmul(m, x) == b);
            found.insert(x.to_string());
        }
        CHECK(found == brute);
        CHECK(matmul(m, s.sample(rs)) == b);
    }
}

TEST_CASE("left_inverse") {
    CHECK(left_inverse(Gf2Matrix::identity(4)) == Gf2Matrix::identity(4));
    // systematic [I; P]: any left inverse must reproduce identity on product
    Gf2Matrix a = Gf2Matrix::from_strings({"100", "010", "001", "110", "011"});
    Gf2Matrix b = left_inverse(a);
    CHECK(matmul(b, a) == Gf2Matrix::identity(3));
    CHECK_THROWS_AS(left_inverse(Gf2Matrix::from_strings({"11", "11"})), NotFullRank);
}

TEST_CASE("from_strings validates") {
    CHECK_THROWS_AS(Gf2Matrix::from_strings({"10", "1"}), DimensionMismatch);
}
