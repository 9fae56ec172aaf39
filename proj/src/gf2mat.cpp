#include "nmc/gf2mat.hpp"

namespace nmc {

Gf2Matrix Gf2Matrix::from_strings(const std::vector<std::string>& rows) {
    if (rows.empty()) return Gf2Matrix();
    Gf2Matrix m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw DimensionMismatch("Gf2Matrix::from_strings: ragged rows");
        m.set_row(i + 1, BitVec::from_string(rows[i]));
    }
    return m;
}

BitVec matmul(const Gf2Matrix& m, const BitVec& x) {
    if (x.size() != m.cols())
        throw DimensionMismatch("matmul: vector length does not match matrix width");
    BitVec y(m.rows());
    for (size_t i = 1; i <= m.rows(); ++i)
        if (m.row(i).dot(x)) y.set(i, true);
    return y;
}

Gf2Matrix matmul(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("matmul: inner dimensions disagree");
    // compute row_i(C) = sum of rows of B selected by row_i(A)
    Gf2Matrix c(a.rows(), b.cols());
    for (size_t i = 1; i <= a.rows(); ++i) {
        BitVec acc(b.cols());
        for (size_t j : a.row(i).ones()) acc ^= b.row(j);
        c.set_row(i, acc);
    }
    return c;
}

namespace {

// Gaussian elimination to row echelon form, in place. Pivot rule is
// deterministic: for each column left to right, take the first remaining
// row with a one there. Returns the pivot column of every eliminated row.
std::vector<size_t> eliminate(std::vector<BitVec>& rows, size_t cols) {
    std::vector<size_t> pivot_cols;
    size_t top = 0;
    for (size_t col = 1; col <= cols && top < rows.size(); ++col) {
        size_t sel = top;
        while (sel < rows.size() && !rows[sel].get(col)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[top], rows[sel]);
        for (size_t i = 0; i < rows.size(); ++i)
            if (i != top && rows[i].get(col)) rows[i] ^= rows[top];
        pivot_cols.push_back(col);
        ++top;
    }
    return pivot_cols;
}

} // namespace

size_t rank(const Gf2Matrix& m) {
    std::vector<BitVec> rows;
    rows.reserve(m.rows());
    for (size_t i = 1; i <= m.rows(); ++i) rows.push_back(m.row(i));
    return eliminate(rows, m.cols()).size();
}

BitVec SolutionSet::element(const BitVec& coeffs) const {
    if (empty) throw Error("SolutionSet::element: system is inconsistent");
    if (coeffs.size() != basis.size())
        throw DimensionMismatch("SolutionSet::element: coefficient count mismatch");
    BitVec x = particular;
    for (size_t j = 1; j <= coeffs.size(); ++j)
        if (coeffs.get(j)) x ^= basis[j - 1];
    return x;
}

BitVec SolutionSet::sample(RandomStream& rs) const {
    if (empty) throw Error("SolutionSet::sample: system is inconsistent");
    BitVec coeffs(basis.size());
    for (size_t j = 1; j <= coeffs.size(); ++j) coeffs.set(j, rs.bit());
    return element(coeffs);
}

SolutionSet solve_affine(const Gf2Matrix& m, const BitVec& b) {
    if (b.size() != m.rows())
        throw DimensionMismatch("solve_affine: rhs length does not match row count");
    size_t n = m.cols();
    // augmented rows [M | b]
    std::vector<BitVec> rows;
    rows.reserve(m.rows());
    for (size_t i = 1; i <= m.rows(); ++i) {
        BitVec r = m.row(i).concat(BitVec::from_uint(b.get(i) ? 1 : 0, 1));
        rows.push_back(r);
    }
    std::vector<size_t> pivots = eliminate(rows, n);  // never pivots on the rhs column

    SolutionSet s;
    // inconsistent iff some reduced row is 0 ... 0 | 1
    for (size_t i = pivots.size(); i < rows.size(); ++i)
        if (rows[i].get(n + 1)) return s;
    s.empty = false;

    std::vector<char> is_pivot(n + 1, 0);
    for (size_t c : pivots) is_pivot[c] = 1;

    s.particular = BitVec(n);
    for (size_t i = 0; i < pivots.size(); ++i)
        s.particular.set(pivots[i], rows[i].get(n + 1));

    // one kernel basis vector per free column
    for (size_t c = 1; c <= n; ++c) {
        if (is_pivot[c]) continue;
        BitVec v(n);
        v.set(c, true);
        for (size_t i = 0; i < pivots.size(); ++i)
            if (rows[i].get(c)) v.set(pivots[i], true);
        s.basis.push_back(v);
    }
    return s;
}

Gf2Matrix left_inverse(const Gf2Matrix& a) {
    size_t n = a.rows(), k = a.cols();
    if (rank(a) != k)
        throw NotFullRank("left_inverse: matrix does not have full column rank");
    // Row i of B solves A^T y = e_i; then (B A)_{ij} = y . col_j(A) = [i==j].
    Gf2Matrix at = a.transpose();
    Gf2Matrix b(k, n);
    for (size_t i = 1; i <= k; ++i) {
        BitVec e(k);
        e.set(i, true);
        SolutionSet s = solve_affine(at, e);
        if (s.empty) throw NotFullRank("left_inverse: unsolvable column system");
        b.set_row(i, s.particular);
    }
    return b;
}

} // namespace nmc
