#pragma once

// Randomized properties shared by the property tests and the acceptance binary.
// Every generator is hand-rolled on a seeded mt19937_64.

#include "nonloc/opspace.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace props {

using namespace nonloc;
using Rng = std::mt19937_64;

inline constexpr std::size_t kCases = 1000;
inline constexpr std::size_t kOracleMaxUnknowns = 2000;

struct Outcome {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool ok() const { return cases > 0 && failures == 0; }
    void fail(const std::string& what)
    {
        if (failures++ == 0) first_failure = what;
    }
};

inline const std::vector<StateSet>& builtin_sets()
{
    static const std::vector<StateSet> sets = {
        construct_tripartite(3),  construct_tripartite(4),  construct_tripartite_core(4), construct_example_c66(),
        construct_example_c333(), construct_fourpartite(),
    };
    return sets;
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Each state kept with a random probability; never empty.
inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n)
{
    const double keep = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
    std::bernoulli_distribution coin(keep);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (coin(rng)) out.push_back(i);
    if (out.empty()) out.push_back(uniform(rng, 0, n - 1));
    return out;
}

// Groupings whose measuring side has at most `max_dim` basis states.
inline Grouping random_grouping(Rng& rng, const StateSet& set, std::size_t max_dim)
{
    std::vector<Grouping> ok;
    for (const auto& g : enumerate_bipartitions(set.party_count()))
        if (side_dim(set, g) <= max_dim) ok.push_back(g);
    return ok[uniform(rng, 0, ok.size() - 1)];
}

inline std::string describe(const StateSet& s, const Grouping& g)
{
    return s.family() + " (" + std::to_string(s.size()) + " states) side " + g.side_name();
}

inline std::vector<RationalVector> flat(const std::vector<RationalMatrix>& basis)
{
    std::vector<RationalVector> out;
    for (const auto& b : basis) out.push_back(b.flat());
    return out;
}

// The identity satisfies every constraint and lies in the solution space.
inline Outcome identity_in_nullspace(std::uint64_t seed, std::size_t cases = kCases)
{
    Rng rng(seed);
    Outcome o;
    for (; o.cases < cases; ++o.cases) {
        const auto& base = builtin_sets()[uniform(rng, 0, builtin_sets().size() - 1)];
        const auto set = base.subset(random_subset(rng, base.size()), base.family() + "-sub");
        const auto g = random_grouping(rng, set, 27);
        const auto r = solve(set, g);
        const auto id = RationalMatrix::identity(side_dim(set, g));
        if (r.dim < 1 || !check_solution(set, g, id) || !in_span(r.basis, id)) o.fail(describe(set, g));
    }
    return o;
}

inline SparseMatrix random_integer_matrix(Rng& rng)
{
    const std::size_t cols = uniform(rng, 1, 30), rows = uniform(rng, 0, 24);
    const double density = std::uniform_real_distribution<double>(0.05, 0.9)(rng);
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<int> val(-4, 4);
    SparseMatrix m(cols);
    std::vector<SparseRow> made;
    for (std::size_t r = 0; r < rows; ++r) {
        // Occasionally a combination of earlier rows, to exercise rank deficiency.
        if (!made.empty() && uniform(rng, 0, 3) == 0) {
            std::vector<std::pair<std::size_t, Integer>> t;
            for (int k = 0; k < 2; ++k) {
                const auto& src = made[uniform(rng, 0, made.size() - 1)];
                const int c = val(rng);
                for (const auto& [col, v] : src.entries) t.emplace_back(col, v * c);
            }
            made.push_back(SparseRow::from_terms(std::move(t)));
        } else {
            std::vector<std::pair<std::size_t, Integer>> t;
            for (std::size_t c = 0; c < cols; ++c)
                if (coin(rng)) t.emplace_back(c, val(rng));
            made.push_back(SparseRow::from_terms(std::move(t)));
        }
        m.add_row(made.back());
    }
    return m;
}

// Sparse and dense elimination span the same nullspace.
inline Outcome sparse_dense_agreement(std::uint64_t seed, std::size_t cases = kCases)
{
    Rng rng(seed);
    Outcome o;
    for (; o.cases < cases; ++o.cases) {
        SparseMatrix m(1);
        std::string what;
        if (o.cases % 2 == 0) {
            m = random_integer_matrix(rng);
            what = "random " + std::to_string(m.row_count()) + "x" + std::to_string(m.ncols());
        } else {
            const auto& base = builtin_sets()[uniform(rng, 0, builtin_sets().size() - 1)];
            const auto set = base.subset(random_subset(rng, base.size()), base.family() + "-sub");
            const auto g = random_grouping(rng, set, 16);
            m = build_constraints(set, g).rows;
            what = describe(set, g);
        }
        if (m.ncols() > kOracleMaxUnknowns) continue;
        const auto a = nullspace(m);
        const auto b = nullspace_dense_oracle(to_dense(m));
        bool ok = a.size() == b.size();
        for (const auto* basis : {&a, &b})
            for (const auto& v : *basis)
                for (const auto& x : multiply(m, v)) ok = ok && x == 0;
        if (ok) {
            auto both = a;
            both.insert(both.end(), b.begin(), b.end());
            ok = rank_dense(a) == a.size() && rank_dense(both) == a.size();
        }
        if (!ok) o.fail(what);
    }
    return o;
}

// Adding states never enlarges the solution space.
inline Outcome subset_monotonicity(std::uint64_t seed, std::size_t cases = kCases)
{
    Rng rng(seed);
    Outcome o;
    for (; o.cases < cases; ++o.cases) {
        const auto& base = builtin_sets()[uniform(rng, 0, builtin_sets().size() - 1)];
        const auto big = random_subset(rng, base.size());
        std::vector<std::size_t> small;
        for (auto i : big)
            if (uniform(rng, 0, 2) != 0) small.push_back(i);
        if (small.empty()) small.push_back(big.front());
        const auto sb = base.subset(big, "big"), ss = base.subset(small, "small");
        const auto g = random_grouping(rng, sb, 27);
        const auto db = solve(sb, g).dim, ds = solve(ss, g).dim;
        if (db > ds) o.fail(describe(sb, g) + ": " + std::to_string(db) + " > " + std::to_string(ds));
    }
    return o;
}

// Union of random orbits of the party cycle; the result is cycle-invariant.
inline StateSet random_cycle_closed(Rng& rng, const StateSet& full)
{
    const auto sym = Symmetry::party_cycle(full.party_count(), full.dims().front());
    const auto image = apply_symmetry(full, sym);
    std::map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < full.size(); ++i) where[ray_key(full[i])] = i;
    std::vector<std::size_t> next(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) next[i] = where.at(ray_key(image[i]));

    std::vector<bool> taken(full.size(), false), seen(full.size(), false);
    const double keep = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
    std::bernoulli_distribution coin(keep);
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (seen[i]) continue;
        const bool pick = coin(rng);
        for (std::size_t k = i; !seen[k]; k = next[k]) {
            seen[k] = true;
            taken[k] = pick;
        }
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < full.size(); ++i)
        if (taken[i]) idx.push_back(i);
    if (idx.empty())
        for (std::size_t k = 0; idx.empty() || k != 0; k = next[k]) idx.push_back(k);
    std::sort(idx.begin(), idx.end());
    return full.subset(idx, full.family() + "-orbits");
}

// For a cycle-invariant set, a grouping and its image under the cycle have equal dimension.
inline Outcome symmetry_transport(std::uint64_t seed, std::size_t cases = kCases)
{
    static const std::vector<StateSet> bases = {construct_tripartite(3), construct_tripartite(4)};
    Rng rng(seed);
    Outcome o;
    for (; o.cases < cases; ++o.cases) {
        const auto set = random_cycle_closed(rng, bases[uniform(rng, 0, bases.size() - 1)]);
        const auto sym = Symmetry::party_cycle(3, set.dims().front());
        if (!is_invariant(set, sym)) {
            o.fail(set.family() + ": generator produced a non-invariant set");
            continue;
        }
        const auto g = random_grouping(rng, set, 16);
        const auto h = permute_grouping(g, sym.party_perm);
        const auto dg = solve(set, g).dim, dh = solve(set, h).dim;
        if (dg != dh)
            o.fail(describe(set, g) + " vs " + h.side_name() + ": " + std::to_string(dg) + " != " + std::to_string(dh));
    }
    return o;
}

// The solution space is closed under transpose.
inline Outcome transpose_closure(std::uint64_t seed, std::size_t cases = kCases)
{
    Rng rng(seed);
    Outcome o;
    for (; o.cases < cases; ++o.cases) {
        const auto& base = builtin_sets()[uniform(rng, 0, builtin_sets().size() - 1)];
        const auto set = base.subset(random_subset(rng, base.size()), base.family() + "-sub");
        const auto g = random_grouping(rng, set, 16);
        const auto r = solve(set, g);
        auto rows = flat(r.basis);
        for (const auto& b : r.basis) rows.push_back(b.transpose().flat());
        if (rank_dense(std::move(rows)) != r.dim) o.fail(describe(set, g));
    }
    return o;
}

struct Property {
    const char* name;
    Outcome (*run)(std::uint64_t, std::size_t);
    std::uint64_t seed;
};

inline const std::vector<Property>& all()
{
    static const std::vector<Property> list = {
        {"identity in nullspace", identity_in_nullspace, 0x1d0001},
        {"sparse vs dense oracle span", sparse_dense_agreement, 0x1d0002},
        {"monotonicity under subsets", subset_monotonicity, 0x1d0003},
        {"cyclic symmetry transport", symmetry_transport, 0x1d0004},
        {"transpose closure", transpose_closure, 0x1d0005},
    };
    return list;
}

} // namespace props
