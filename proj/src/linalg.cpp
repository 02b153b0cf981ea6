#include "nonloc/linalg.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace nonloc {

SparseRow SparseRow::from_terms(std::vector<std::pair<std::size_t, Integer>> terms)
{
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseRow row;
    for (auto& [col, coeff] : terms) {
        if (!row.entries.empty() && row.entries.back().first == col)
            row.entries.back().second += coeff;
        else
            row.entries.emplace_back(col, std::move(coeff));
        if (row.entries.back().second == 0) row.entries.pop_back();
    }
    return row;
}

void SparseMatrix::add_row(SparseRow row)
{
    for (std::size_t i = 0; i < row.entries.size(); ++i) {
        if (row.entries[i].first >= ncols_) throw ShapeError("column index out of range");
        if (row.entries[i].second == 0) throw ShapeError("stored zero coefficient");
        if (i > 0 && row.entries[i - 1].first >= row.entries[i].first) throw ShapeError("columns not ascending");
    }
    rows_.push_back(std::move(row));
}

DenseIntMatrix to_dense(const SparseMatrix& m)
{
    DenseIntMatrix d(m.row_count(), m.ncols());
    for (std::size_t r = 0; r < m.row_count(); ++r)
        for (const auto& [c, v] : m.rows()[r].entries) d.at(r, c) = v;
    return d;
}

namespace {

using Row = std::vector<std::pair<std::size_t, Integer>>;

void make_primitive(Row& row)
{
    if (row.empty()) return;
    Integer g = 0;
    for (const auto& e : row) {
        g = gcd(g, e.second);
        if (g == 1) break;
    }
    if (row.front().second < 0) g = -g;
    if (g != 1)
        for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

const Integer* coeff_at(const Row& row, std::size_t col)
{
    auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
    return it != row.end() && it->first == col ? &it->second : nullptr;
}

// a*target - b*pivot, made primitive.
Row combine(const Row& target, const Integer& a, const Row& pivot, const Integer& b)
{
    Row out;
    out.reserve(target.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < pivot.size()) {
        if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
            out.emplace_back(target[i].first, a * target[i].second);
            ++i;
        } else if (i == target.size() || pivot[j].first < target[i].first) {
            out.emplace_back(pivot[j].first, -b * pivot[j].second);
            ++j;
        } else {
            Integer v = a * target[i].second - b * pivot[j].second;
            if (v != 0) out.emplace_back(target[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    make_primitive(out);
    return out;
}

enum class RowState : unsigned char { Active, Pivot, Dead };

} // namespace

Elimination eliminate(const SparseMatrix& m)
{
    Elimination result;
    result.rows_in = m.row_count();
    const std::size_t ncols = m.ncols();

    std::vector<Row> rows;
    {
        std::set<Row> seen;
        for (const auto& r : m.rows()) {
            if (r.empty()) continue;
            Row row = r.entries;
            make_primitive(row);
            if (seen.insert(row).second) rows.push_back(std::move(row));
        }
    }
    result.rows_after_dedup = rows.size();

    std::vector<RowState> state(rows.size(), RowState::Active);
    std::vector<std::set<std::size_t>> col_rows(ncols);
    std::vector<std::size_t> active_count(ncols, 0);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& e : rows[r]) {
            col_rows[e.first].insert(r);
            ++active_count[e.first];
        }

    std::vector<std::size_t> pivot_row(ncols, std::numeric_limits<std::size_t>::max());
    std::vector<Row> scratch;

    for (;;) {
        // Markowitz search; columns ascending, rows ascending, first strict improvement wins.
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        std::size_t best_row = 0, best_col = 0;
        for (std::size_t c = 0; c < ncols && best_cost > 0; ++c) {
            if (active_count[c] == 0) continue;
            for (auto r : col_rows[c]) {
                if (state[r] != RowState::Active) continue;
                const std::size_t cost = (rows[r].size() - 1) * (active_count[c] - 1);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_row = r;
                    best_col = c;
                    if (cost == 0) break;
                }
            }
        }
        if (best_cost == std::numeric_limits<std::size_t>::max()) break;

        const std::size_t p = best_row, c = best_col;
        state[p] = RowState::Pivot;
        for (const auto& e : rows[p]) --active_count[e.first];
        pivot_row[c] = p;
        result.pivot_columns.push_back(c);

        const Integer pivot_coeff = *coeff_at(rows[p], c);
        std::vector<std::size_t> targets;
        for (auto t : col_rows[c])
            if (t != p) targets.push_back(t);

        for (auto t : targets) {
            const Integer target_coeff = *coeff_at(rows[t], c);
            Integer g = gcd(pivot_coeff, target_coeff);
            Row next = combine(rows[t], pivot_coeff / g, rows[p], target_coeff / g);

            const bool active = state[t] == RowState::Active;
            // Column membership diff between old and new row.
            std::size_t i = 0, j = 0;
            const Row& old = rows[t];
            while (i < old.size() || j < next.size()) {
                if (j == next.size() || (i < old.size() && old[i].first < next[j].first)) {
                    col_rows[old[i].first].erase(t);
                    if (active) --active_count[old[i].first];
                    ++i;
                } else if (i == old.size() || next[j].first < old[i].first) {
                    col_rows[next[j].first].insert(t);
                    if (active) ++active_count[next[j].first];
                    ++j;
                } else {
                    ++i;
                    ++j;
                }
            }
            rows[t] = std::move(next);
            if (rows[t].empty()) state[t] = RowState::Dead;
        }
    }

    result.rank = result.pivot_columns.size();
    for (std::size_t f = 0; f < ncols; ++f) {
        if (pivot_row[f] != std::numeric_limits<std::size_t>::max()) continue;
        RationalVector v(ncols);
        v[f] = 1;
        for (auto t : col_rows[f]) {
            const Row& row = rows[t];
            // Every surviving row is a pivot row; find its pivot column.
            std::size_t pc = ncols;
            for (const auto& e : row)
                if (pivot_row[e.first] == t) {
                    pc = e.first;
                    break;
                }
            Rational val(-*coeff_at(row, f), *coeff_at(row, pc));
            val.canonicalize();
            v[pc] = val;
        }
        result.basis.push_back(std::move(v));
    }
    return result;
}

std::vector<RationalVector> nullspace(const SparseMatrix& m) { return eliminate(m).basis; }

std::size_t rank(const SparseMatrix& m) { return eliminate(m).rank; }

namespace {

// Gauss-Jordan in place; returns pivot column per reduced row.
std::vector<std::size_t> gauss_jordan(std::vector<RationalVector>& a, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t sel = r;
        while (sel < a.size() && a[sel][c] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[r], a[sel]);
        const Rational inv = 1 / a[r][c];
        for (auto& x : a[r]) x *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            const Rational f = a[i][c];
            for (std::size_t k = c; k < cols; ++k)
                if (a[r][k] != 0) a[i][k] -= f * a[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::vector<RationalVector> nullspace_dense_oracle(const DenseIntMatrix& m)
{
    if (m.cols > kDenseOracleMaxCols) throw ShapeError("dense oracle limited to " + std::to_string(kDenseOracleMaxCols) + " columns");
    std::vector<RationalVector> a(m.rows, RationalVector(m.cols));
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) a[r][c] = m.at(r, c);
    auto pivots = gauss_jordan(a, m.cols);

    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<RationalVector> basis;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(m.cols);
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank_dense(std::vector<RationalVector> rows)
{
    if (rows.empty()) return 0;
    return gauss_jordan(rows, rows.front().size()).size();
}

RationalVector multiply(const SparseMatrix& m, const RationalVector& v)
{
    if (v.size() != m.ncols()) throw ShapeError("vector length does not match column count");
    RationalVector out(m.row_count());
    for (std::size_t r = 0; r < m.row_count(); ++r)
        for (const auto& [c, coeff] : m.rows()[r].entries) out[r] += coeff * v[c];
    return out;
}

} // namespace nonloc
