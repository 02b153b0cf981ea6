#pragma once

#include "nonloc/core.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace nonloc {

/// Sparse integer row: strictly ascending columns, no stored zeros.
struct SparseRow {
    std::vector<std::pair<std::size_t, Integer>> entries;

    /// Sorts, merges repeated columns and drops zeros.
    static SparseRow from_terms(std::vector<std::pair<std::size_t, Integer>> terms);

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

class SparseMatrix {
public:
    explicit SparseMatrix(std::size_t ncols) : ncols_(ncols) {}

    /// Throws ShapeError on a column index >= ncols or a malformed row.
    void add_row(SparseRow row);

    std::size_t ncols() const { return ncols_; }
    std::size_t row_count() const { return rows_.size(); }
    const std::vector<SparseRow>& rows() const { return rows_; }

private:
    std::size_t ncols_;
    std::vector<SparseRow> rows_;
};

struct DenseIntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Integer> data;

    DenseIntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
    Integer& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Integer& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

DenseIntMatrix to_dense(const SparseMatrix& m);

using RationalVector = std::vector<Rational>;

struct Elimination {
    /// Right nullspace basis, one vector per free column (ascending); the
    /// free coordinate is 1 and the other free coordinates are 0.
    std::vector<RationalVector> basis;
    std::vector<std::size_t> pivot_columns; // in pivot order
    std::size_t rank = 0;
    std::size_t rows_in = 0;
    std::size_t rows_after_dedup = 0;
};

/// Fraction-free sparse Gauss-Jordan elimination over the integers.
///
/// Rows are reduced to primitive form (content divided out, leading
/// coefficient positive) and exact duplicates dropped before elimination.
/// Pivots minimise the Markowitz count (r-1)(c-1) over the active rows, ties
/// going to the lowest column and then the lowest row, so the result is a
/// deterministic function of the input.
Elimination eliminate(const SparseMatrix& m);

std::vector<RationalVector> nullspace(const SparseMatrix& m);
std::size_t rank(const SparseMatrix& m);

/// Largest column count the dense oracle accepts.
inline constexpr std::size_t kDenseOracleMaxCols = 2000;

/// Textbook Gauss-Jordan over the rationals (leftmost nonzero pivot), for tests.
/// Throws ShapeError above kDenseOracleMaxCols columns.
std::vector<RationalVector> nullspace_dense_oracle(const DenseIntMatrix& m);

/// Rank over the rationals of a dense rational matrix given as rows.
std::size_t rank_dense(std::vector<RationalVector> rows);

/// m * v, exactly.
RationalVector multiply(const SparseMatrix& m, const RationalVector& v);

} // namespace nonloc
