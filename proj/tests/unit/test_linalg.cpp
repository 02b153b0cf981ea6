#include "nonloc/linalg.hpp"

#include <doctest.h>

using namespace nonloc;

namespace {

SparseMatrix from_dense(std::size_t cols, const std::vector<std::vector<int>>& rows)
{
    SparseMatrix m(cols);
    for (const auto& r : rows) {
        std::vector<std::pair<std::size_t, Integer>> t;
        for (std::size_t c = 0; c < r.size(); ++c) t.emplace_back(c, r[c]);
        m.add_row(SparseRow::from_terms(std::move(t)));
    }
    return m;
}

bool same_span(const std::vector<RationalVector>& a, const std::vector<RationalVector>& b)
{
    if (a.size() != b.size()) return false;
    std::vector<RationalVector> both = a;
    both.insert(both.end(), b.begin(), b.end());
    return rank_dense(both) == a.size() && rank_dense(a) == a.size();
}

} // namespace

TEST_CASE("nullspace small cases")
{
    CHECK(nullspace(from_dense(2, {{1, 0}, {0, 1}})).empty());

    const auto ns = nullspace(from_dense(2, {{1, -1}}));
    REQUIRE(ns.size() == 1);
    CHECK(ns[0] == RationalVector{1, 1});

    const auto full = nullspace(SparseMatrix(3));
    REQUIRE(full.size() == 3);
    CHECK(full[0] == RationalVector{1, 0, 0});
    CHECK(full[2] == RationalVector{0, 0, 1});
}

TEST_CASE("rank small cases")
{
    CHECK(rank(from_dense(4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})) == 4);
    CHECK(rank(from_dense(3, {{1, 2, 3}, {1, 2, 3}})) == 1);
    CHECK(rank(from_dense(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, -1}})) == 2);
}

TEST_CASE("dense oracle agrees on the same inputs")
{
    for (const auto& m : {from_dense(2, {{1, 0}, {0, 1}}), from_dense(2, {{1, -1}}), SparseMatrix(3),
                          from_dense(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, -1}})})
        CHECK(same_span(nullspace(m), nullspace_dense_oracle(to_dense(m))));
    CHECK_THROWS_AS(nullspace_dense_oracle(DenseIntMatrix(1, kDenseOracleMaxCols + 1)), ShapeError);
}

TEST_CASE("elimination dedups scalar multiples")
{
    const auto e = eliminate(from_dense(3, {{2, 4, 0}, {1, 2, 0}, {-3, -6, 0}, {0, 0, 5}}));
    CHECK(e.rows_in == 4);
    CHECK(e.rows_after_dedup == 2);
    CHECK(e.rank == 2);
    REQUIRE(e.basis.size() == 1);
    CHECK(multiply(from_dense(3, {{2, 4, 0}, {0, 0, 5}}), e.basis[0]) == RationalVector{0, 0});
}

TEST_CASE("sparse row validation")
{
    SparseMatrix m(2);
    CHECK_THROWS_AS(m.add_row(SparseRow{{{5, Integer(1)}}}), ShapeError);
    CHECK_THROWS_AS(m.add_row(SparseRow{{{1, Integer(1)}, {0, Integer(1)}}}), ShapeError);
    const auto r = SparseRow::from_terms({{1, Integer(2)}, {0, Integer(1)}, {1, Integer(-2)}});
    REQUIRE(r.size() == 1);
    CHECK(r.entries[0].first == 0);
}

TEST_CASE("fractions")
{
    Rational half(3, 6);
    half.canonicalize();
    CHECK(to_fraction_string(half) == "1/2");
    CHECK(to_fraction_string(Rational(-4)) == "-4/1");
    CHECK(parse_fraction("-2/4") == Rational(-1, 2));
    CHECK(parse_fraction("7") == Rational(7));
    CHECK_THROWS_AS(parse_fraction("1/0"), InputError);
    CHECK_THROWS_AS(parse_fraction("x"), InputError);
}
