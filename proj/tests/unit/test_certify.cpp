#include "nonloc/certify.hpp"

#include <doctest.h>

#include <algorithm>

using namespace nonloc;

namespace {

Grouping side(std::size_t n, std::vector<std::size_t> s) { return Grouping::from_side(n, std::move(s)); }

std::vector<std::size_t> indices(const StateSet& set, std::initializer_list<const char*> labels)
{
    std::vector<std::size_t> out;
    for (const char* l : labels) out.push_back(*set.find(l));
    return out;
}

std::size_t idx(const StateSet& set, const Grouping& g, const char* digits)
{
    return *parse_index_name(digits, set.dims(), g.side());
}

} // namespace

TEST_CASE("strong nonlocality verdicts")
{
    const auto t = strong_nonlocality(construct_tripartite(3));
    CHECK(t.certified);
    CHECK(t.all_groupings);
    CHECK(t.results.size() == 6);
    CHECK(t.failing().empty());

    const auto c = strong_nonlocality(construct_example_c333());
    CHECK_FALSE(c.certified);
    std::vector<std::string> failing;
    for (const auto* r : c.failing()) failing.push_back(r->grouping.side_name());
    CHECK(failing == std::vector<std::string>{"AB", "AC", "BC"});
    for (const auto* r : c.failing()) CHECK(r->witness.has_value());
}

TEST_CASE("partial requests are not a full verdict")
{
    const auto v = certify_groupings(construct_tripartite(3), {side(3, {0})});
    CHECK(v.certified);
    CHECK_FALSE(v.all_groupings);
}

TEST_CASE("parallel results keep grouping order")
{
    const auto set = construct_tripartite(4);
    const auto a = strong_nonlocality(set, 1);
    const auto b = strong_nonlocality(set, 4);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].grouping == b.results[i].grouping);
        CHECK(a.results[i].dim == b.results[i].dim);
    }
}

TEST_CASE("non-orthogonal input is rejected")
{
    const ProductState z{{PartyVector::basis(3, 0), PartyVector::basis(3, 0)}, "a"};
    auto z2 = z;
    z2.label = "b";
    const StateSet bad({3, 3}, {z, z2}, "bad");
    try {
        strong_nonlocality(bad);
        FAIL("expected NonOrthogonalError");
    } catch (const NonOrthogonalError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].first == "a");
    }
}

TEST_CASE("core set side A: zeros from the first family, then diagonal equalities")
{
    const auto set = construct_tripartite_core(3);
    const auto g = side(3, {0});
    const auto cert = derive_certificate(set, g);
    CHECK(cert.saturated);
    CHECK(check_certificate(cert, set, g));

    // (alpha_1^{1,2}, alpha_1^{3,4}) in both orders give the first two facts.
    REQUIRE(cert.facts.size() >= 2);
    using E = std::vector<std::pair<std::size_t, std::size_t>>;
    CHECK(cert.facts[0].kind == FactKind::EntryZero);
    CHECK(cert.facts[0].entries == E{{0, 1}});
    CHECK(cert.facts[1].entries == E{{1, 0}});
    for (const auto& f : {cert.facts[0], cert.facts[1]})
        for (const auto& [a, b] : f.evidence) {
            CHECK(a.starts_with("alpha:i=1:"));
            CHECK(b.starts_with("alpha:i=1:"));
        }

    const auto diag = std::find_if(cert.facts.begin(), cert.facts.end(),
                                   [](const Fact& f) { return f.kind == FactKind::DiagEqual; });
    REQUIRE(diag != cert.facts.end());
    bool within = false;
    for (const auto& [a, b] : diag->evidence)
        within = within || ((a == "alpha:i=1:5" && b == "alpha:i=1:6") || (a == "alpha:i=2:5" && b == "alpha:i=2:6"));
    CHECK(within);
}

TEST_CASE("four-party family psi_{7,8} with phi_{37..40}, side AB")
{
    const auto set = construct_fourpartite();
    const auto g = side(4, {0, 1});
    const auto local = derive_local(set, g, indices(set, {"psi:7", "psi:8", "phi:37", "phi:38", "phi:39", "phi:40"}), {});
    const auto e00 = idx(set, g, "00"), e01 = idx(set, g, "01"), e02 = idx(set, g, "02");
    for (const auto& e : {std::pair{e01, e00}, std::pair{e02, e00}, std::pair{e00, e01}, std::pair{e00, e02}})
        CHECK(local.zeros.contains(e));
}

TEST_CASE("psi_{19,20} give b_{11,11} = b_{21,21} on side AC")
{
    const auto set = construct_fourpartite();
    const auto g = side(4, {0, 2});
    const auto known = proven_zeros(derive_certificate(set, g));
    const auto local = derive_local(set, g, indices(set, {"psi:19", "psi:20"}), known);
    const auto i11 = idx(set, g, "11"), i21 = idx(set, g, "21");
    bool found = false;
    for (const auto& cls : local.diagonal_classes)
        found = found || (std::find(cls.begin(), cls.end(), i11) != cls.end() &&
                          std::find(cls.begin(), cls.end(), i21) != cls.end());
    CHECK(found);
}

TEST_CASE("certificates saturate exactly on trivial groupings")
{
    for (const auto& set : {construct_tripartite(3), construct_tripartite(4), construct_fourpartite()})
        for (const auto& g : enumerate_bipartitions(set.party_count())) {
            const auto cert = derive_certificate(set, g);
            CHECK(check_certificate(cert, set, g));
            CHECK(cert.saturated == solve(set, g).trivial);
        }
}

TEST_CASE("certificates on reducible groupings are sound but unsaturated")
{
    const auto set = construct_example_c333();
    const auto g = side(3, {0, 1});
    const auto cert = derive_certificate(set, g);
    CHECK_FALSE(cert.saturated);
    CHECK(check_certificate(cert, set, g));
}

TEST_CASE("check_certificate rejects false facts")
{
    const auto set = construct_tripartite(3);
    const auto g = side(3, {0});
    Certificate fake{g, 3, {Fact{FactKind::EntryZero, {{0, 0}}, {}}}, false};
    CHECK_FALSE(check_certificate(fake, set, g));

    Certificate empty{g, 3, {}, false};
    CHECK(check_certificate(empty, set, g));

    Certificate overclaim{g, 3, {}, true};
    CHECK_FALSE(check_certificate(overclaim, set, g));

    Certificate out_of_range{g, 3, {Fact{FactKind::EntryZero, {{0, 7}}, {}}}, false};
    CHECK_FALSE(check_certificate(out_of_range, set, g));
}

TEST_CASE("entry names")
{
    const auto set = construct_fourpartite();
    const auto g = side(4, {1, 2, 3});
    CHECK(entry_name(set, g, idx(set, g, "201"), idx(set, g, "022")) == "201,022");
}
