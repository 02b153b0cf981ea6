#pragma once

// Test-side reference computations. Nothing here calls build_constraints,
// group_state or the library's elimination routines.

#include "nonloc/states.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace oracle {

using nonloc::Integer;
using nonloc::Rational;

// Kronecker product of the listed parties' kets, written out digit by digit.
inline std::vector<Integer> kron(const nonloc::ProductState& s, const std::vector<std::size_t>& group)
{
    std::vector<Integer> out{1};
    for (auto k : group) {
        const auto& a = s.parties[k].amps;
        std::vector<Integer> next;
        next.reserve(out.size() * a.size());
        for (const auto& x : out)
            for (const auto& y : a) next.push_back(x * y);
        out = std::move(next);
    }
    return out;
}

inline Integer flat_dot(const std::vector<Integer>& a, const std::vector<Integer>& b)
{
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::vector<std::size_t> complement_of(std::size_t n, const std::vector<std::size_t>& side)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k)
        if (std::find(side.begin(), side.end(), k) == side.end()) out.push_back(k);
    return out;
}

// Every ordered pair i != j with nonzero complement overlap, as a dense row over D*D unknowns.
inline std::vector<std::vector<Integer>> constraint_rows(const nonloc::StateSet& set, const std::vector<std::size_t>& side)
{
    const auto comp = complement_of(set.party_count(), side);
    std::vector<std::vector<Integer>> x, y;
    for (const auto& s : set.states()) {
        x.push_back(kron(s, side));
        y.push_back(kron(s, comp));
    }
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = 0; j < set.size(); ++j) {
            if (i == j || flat_dot(y[i], y[j]) == 0) continue;
            const std::size_t d = x[i].size();
            std::vector<Integer> r(d * d);
            for (std::size_t p = 0; p < d; ++p)
                for (std::size_t q = 0; q < d; ++q) r[p * d + q] = x[i][p] * x[j][q];
            rows.push_back(std::move(r));
        }
    return rows;
}

// Plain rational row reduction.
inline std::size_t rank(const std::vector<std::vector<Integer>>& in)
{
    std::vector<std::vector<Rational>> m;
    for (const auto& r : in) {
        std::vector<Rational> row(r.begin(), r.end());
        m.push_back(std::move(row));
    }
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols && rk < m.size(); ++c) {
        std::size_t piv = rk;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rk]);
        for (std::size_t r = rk + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            const Rational f = m[r][c] / m[rk][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rk][k];
        }
        ++rk;
    }
    return rk;
}

inline std::size_t side_dimension(const nonloc::StateSet& set, const std::vector<std::size_t>& side)
{
    std::size_t d = 1;
    for (auto k : side) d *= set.dims()[k];
    return d;
}

// Dimension of the operator solution space on `side`.
inline std::size_t solution_dim(const nonloc::StateSet& set, const std::vector<std::size_t>& side)
{
    const std::size_t d = side_dimension(set, side);
    return d * d - rank(constraint_rows(set, side));
}

} // namespace oracle
