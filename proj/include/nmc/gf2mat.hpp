#pragma once

#include <optional>
#include <vector>

#include "nmc/bitvec.hpp"

namespace nmc {

// Dense matrix over GF(2), stored as a vector of packed rows.
class Gf2Matrix {
  public:
    Gf2Matrix() : rows_(0), cols_(0) {}
    Gf2Matrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), r_(rows, BitVec(cols)) {}

    static Gf2Matrix identity(size_t n) {
        Gf2Matrix m(n, n);
        for (size_t i = 1; i <= n; ++i) m.set(i, i, true);
        return m;
    }

    // rows given as "0101..." strings, all the same length
    static Gf2Matrix from_strings(const std::vector<std::string>& rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    bool get(size_t i, size_t j) const { return row(i).get(j); }
    void set(size_t i, size_t j, bool b) { row_mut(i).set(j, b); }

    const BitVec& row(size_t i) const {
        if (i < 1 || i > rows_) throw DimensionMismatch("Gf2Matrix: row index out of range");
        return r_[i - 1];
    }
    BitVec& row_mut(size_t i) {
        if (i < 1 || i > rows_) throw DimensionMismatch("Gf2Matrix: row index out of range");
        return r_[i - 1];
    }
    void set_row(size_t i, const BitVec& v) {
        if (v.size() != cols_) throw DimensionMismatch("Gf2Matrix::set_row: width mismatch");
        row_mut(i) = v;
    }

    Gf2Matrix transpose() const {
        Gf2Matrix t(cols_, rows_);
        for (size_t i = 1; i <= rows_; ++i)
            for (size_t j : r_[i - 1].ones()) t.set(j, i, true);
        return t;
    }

    bool operator==(const Gf2Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && r_ == o.r_;
    }

  private:
    size_t rows_, cols_;
    std::vector<BitVec> r_;
};

// y = M x  (M is rows x cols, x has cols bits, y has rows bits)
BitVec matmul(const Gf2Matrix& m, const BitVec& x);

// C = A B
Gf2Matrix matmul(const Gf2Matrix& a, const Gf2Matrix& b);

size_t rank(const Gf2Matrix& m);

// Solution set of M x = b as an affine subspace: x = particular + span(basis).
// empty == true means the system is inconsistent.
struct SolutionSet {
    bool empty = true;
    BitVec particular;
    std::vector<BitVec> basis;  // basis of the kernel of M

    size_t dim() const { return basis.size(); }

    // particular ^ sum of basis vectors selected by coeffs (dim() bits)
    BitVec element(const BitVec& coeffs) const;
    // uniform element, drawing dim() coefficient bits from rs
    BitVec sample(RandomStream& rs) const;
};

SolutionSet solve_affine(const Gf2Matrix& m, const BitVec& b);

// Left inverse: B with B A = I (A must have full column rank).
Gf2Matrix left_inverse(const Gf2Matrix& a);

} // namespace nmc
