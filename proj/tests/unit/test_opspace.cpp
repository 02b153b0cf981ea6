#include "nonloc/opspace.hpp"

#include "oracle.hpp"

#include <doctest.h>

using namespace nonloc;

namespace {

RationalMatrix diag(std::vector<int> d)
{
    RationalMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

Grouping side(std::size_t n, std::vector<std::size_t> s) { return Grouping::from_side(n, std::move(s)); }

} // namespace

TEST_CASE("constraint rows on tripartite(3) side A")
{
    const auto set = construct_tripartite(3);
    const auto cs = build_constraints(set, side(3, {0}));
    CHECK(cs.unknowns.count() == 9);
    const auto a1 = *set.find("alpha:i=1:1"), a2 = *set.find("alpha:i=1:2"), a3 = *set.find("alpha:i=1:3");

    bool found13 = false, found12 = false;
    for (std::size_t r = 0; r < cs.provenance.size(); ++r) {
        const auto& tag = cs.provenance[r];
        if (tag.first == a1 && tag.second == a3) {
            found13 = true;
            const auto& row = cs.rows.rows()[r];
            REQUIRE(row.size() == 1);
            CHECK(row.entries[0].first == cs.unknowns.column(0, 1));
        }
        if (tag.first == a1 && tag.second == a2) found12 = true;
    }
    CHECK(found13);
    CHECK_FALSE(found12);
}

TEST_CASE("row count on side BC matches the exhaustive pair scan")
{
    // 272 frozen from oracle::constraint_rows (24*23 ordered pairs scanned directly).
    const auto set = construct_tripartite(3);
    const auto cs = build_constraints(set, side(3, {1, 2}));
    CHECK(cs.unknowns.count() == 81);
    CHECK(cs.rows.row_count() == 272);
    CHECK(oracle::constraint_rows(set, {1, 2}).size() == 272);
}

TEST_CASE("core set and full set are trivial")
{
    const auto core = solve(construct_tripartite_core(3), side(3, {0}));
    CHECK(core.dim == 1);
    CHECK(core.trivial);
    CHECK_FALSE(core.witness.has_value());
    REQUIRE(core.basis.size() == 1);
    CHECK(core.basis[0].is_scalar());
    CHECK(solve(construct_tripartite(3), side(3, {1, 2})).trivial);
}

TEST_CASE("c66 side A and the block projector")
{
    const auto set = construct_example_c66();
    const auto g = side(2, {0});
    const auto r = solve(set, g);
    CHECK_FALSE(r.trivial);
    CHECK(r.dim == 20); // frozen from oracle::solution_dim
    CHECK(oracle::solution_dim(set, {0}) == 20);
    CHECK(check_solution(set, g, diag({1, 1, 1, 0, 0, 0})));
    CHECK(in_span(r.basis, diag({1, 1, 1, 0, 0, 0})));

    REQUIRE(r.witness.has_value());
    CHECK(r.witness->trace() == 0);
    CHECK_FALSE(r.witness->is_scalar());
    CHECK(check_solution(set, g, *r.witness));
}

TEST_CASE("c333 reducible only on two-party sides")
{
    const auto set = construct_example_c333();
    for (std::size_t k = 0; k < 3; ++k) CHECK(solve(set, side(3, {k})).trivial);
    const auto g = side(3, {0, 1});
    const auto r = solve(set, g);
    CHECK(r.dim == 43); // frozen from oracle::solution_dim
    CHECK(oracle::solution_dim(set, {0, 1}) == 43);

    RationalMatrix proj(9); // |01><01| + |02><02|
    proj.at(1, 1) = 1;
    proj.at(2, 2) = 1;
    CHECK(check_solution(set, g, proj));
    CHECK(in_span(r.basis, proj));
    REQUIRE(r.witness.has_value());
    CHECK(check_solution(set, g, *r.witness));
    CHECK(r.witness->trace() == 0);
}

TEST_CASE("check_solution")
{
    const auto set = construct_tripartite(3);
    const auto g = side(3, {0});
    CHECK(check_solution(set, g, RationalMatrix::identity(3)));
    RationalMatrix e01(3);
    e01.at(0, 1) = 1;
    CHECK_FALSE(check_solution(set, g, e01));
    CHECK_THROWS_AS(check_solution(set, g, RationalMatrix::identity(4)), ShapeError);
}

TEST_CASE("witness extraction")
{
    const auto trivial = solve(construct_tripartite(3), side(3, {0}));
    CHECK_FALSE(extract_witness(trivial).has_value());

    const auto r = solve(construct_example_c66(), side(2, {0}));
    const auto w = extract_witness(r);
    REQUIRE(w.has_value());
    Integer g = 0;
    bool first = true;
    for (const auto& x : w->flat()) {
        CHECK(x.get_den() == 1);
        if (x != 0 && first) {
            CHECK(x > 0);
            first = false;
        }
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Integer(x.get_num()).get_mpz_t());
    }
    CHECK(g == 1);
}

TEST_CASE("rational matrix helpers")
{
    auto m = RationalMatrix::identity(2);
    CHECK(m.is_scalar());
    m.at(0, 1) = 3;
    CHECK_FALSE(m.is_scalar());
    CHECK(m.transpose().at(1, 0) == 3);
    CHECK(m.trace() == 2);
    CHECK(RationalMatrix(2).is_zero());
    CHECK_THROWS_AS(RationalMatrix::from_vector(2, RationalVector(3)), ShapeError);
}

TEST_CASE("tripartite(4) dimensions agree with the dense oracle")
{
    const auto set = construct_tripartite(4);
    for (const auto& g : enumerate_bipartitions(3)) CHECK(solve(set, g).dim == oracle::solution_dim(set, g.side()));
}
