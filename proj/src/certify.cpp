#include "nonloc/certify.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <optional>
#include <map>
#include <numeric>
#include <thread>

namespace nonloc {

NonOrthogonalError::NonOrthogonalError(std::vector<std::pair<std::string, std::string>> violations)
    : InputError("set is not pairwise orthogonal (" + std::to_string(violations.size()) + " violating pairs)"),
      violations_(std::move(violations))
{
}

std::vector<const OpSpaceReport*> Verdict::failing() const
{
    std::vector<const OpSpaceReport*> out;
    for (const auto& r : results)
        if (!r.trivial) out.push_back(&r);
    return out;
}

Verdict certify_groupings(const StateSet& set, const std::vector<Grouping>& groupings, unsigned jobs)
{
    auto ortho = verify_orthogonality(set);
    if (!ortho.ok) throw NonOrthogonalError(std::move(ortho.violations));

    std::vector<std::optional<OpSpaceReport>> slots(groupings.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < groupings.size();) {
            try {
                slots[i] = solve(set, groupings[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::clamp<unsigned>(jobs, 1, std::max<std::size_t>(1, groupings.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    Verdict v{set.family(), {}, true, groupings == enumerate_bipartitions(set.party_count())};
    for (auto& s : slots) {
        v.certified = v.certified && s->trivial;
        v.results.push_back(std::move(*s));
    }
    return v;
}

Verdict strong_nonlocality(const StateSet& set, unsigned jobs)
{
    return certify_groupings(set, enumerate_bipartitions(set.party_count()), jobs);
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // Smaller root wins so representatives are stable.
    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

// Reduced unknowns: an off-diagonal column c < D*D, or D*D + r for the class
// of diagonal entries with representative r.
using KeyRow = std::vector<std::pair<std::size_t, Integer>>;

struct Block {
    std::vector<std::size_t> rows; // indices into the restricted row list
    std::vector<std::size_t> keys; // ascending
};

// Connected blocks of a row set, ordered by first row.
std::vector<Block> split_blocks(const std::vector<KeyRow>& rows)
{
    std::map<std::size_t, std::size_t> key_owner;
    UnionFind uf(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& [k, v] : rows[r]) {
            auto [it, fresh] = key_owner.emplace(k, r);
            if (!fresh) uf.unite(it->second, r);
        }
    std::map<std::size_t, std::size_t> root_block;
    std::vector<Block> blocks;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto [it, fresh] = root_block.emplace(uf.find(r), blocks.size());
        if (fresh) blocks.emplace_back();
        blocks[it->second].rows.push_back(r);
    }
    for (auto& b : blocks) {
        std::set<std::size_t> keys;
        for (auto r : b.rows)
            for (const auto& e : rows[r]) keys.insert(e.first);
        b.keys.assign(keys.begin(), keys.end());
    }
    return blocks;
}

struct BlockResult {
    std::vector<std::size_t> zero_keys;
    std::vector<std::vector<std::size_t>> equal_keys; // groups of diagonal keys
};

BlockResult analyse_block(const std::vector<KeyRow>& rows, const Block& block, std::size_t diag_base)
{
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < block.keys.size(); ++i) local.emplace(block.keys[i], i);
    SparseMatrix m(block.keys.size());
    for (auto r : block.rows) {
        std::vector<std::pair<std::size_t, Integer>> terms;
        for (const auto& [k, v] : rows[r]) terms.emplace_back(local.at(k), v);
        m.add_row(SparseRow::from_terms(std::move(terms)));
    }
    const auto basis = nullspace(m);

    BlockResult out;
    std::map<std::vector<Rational>, std::vector<std::size_t>> by_profile;
    for (std::size_t i = 0; i < block.keys.size(); ++i) {
        std::vector<Rational> profile;
        profile.reserve(basis.size());
        bool zero = true;
        for (const auto& v : basis) {
            profile.push_back(v[i]);
            zero = zero && v[i] == 0;
        }
        if (block.keys[i] < diag_base) {
            if (zero) out.zero_keys.push_back(block.keys[i]);
        } else if (!zero) {
            by_profile[profile].push_back(block.keys[i]);
        }
    }
    for (auto& [profile, keys] : by_profile)
        if (keys.size() > 1) out.equal_keys.push_back(std::move(keys));
    std::sort(out.equal_keys.begin(), out.equal_keys.end());
    return out;
}

// Equal-support states are sign siblings of one template.
std::vector<std::size_t> infer_templates(const StateSet& set)
{
    std::map<std::vector<std::vector<std::size_t>>, std::size_t> ids;
    std::vector<std::size_t> tmpl;
    for (const auto& s : set.states()) {
        std::vector<std::vector<std::size_t>> key;
        for (const auto& p : s.parties) key.push_back(p.support());
        auto [it, fresh] = ids.emplace(std::move(key), ids.size());
        tmpl.push_back(it->second);
    }
    return tmpl;
}

struct Knowledge {
    std::size_t dim;
    std::vector<char> zero; // per column
    UnionFind diag;
    explicit Knowledge(std::size_t d) : dim(d), zero(d * d, 0), diag(d) {}

    std::size_t diag_base() const { return dim * dim; }

    KeyRow restrict(const SparseRow& row)
    {
        std::map<std::size_t, Integer> acc;
        for (const auto& [c, v] : row.entries) {
            const std::size_t p = c / dim, q = c % dim;
            if (p == q)
                acc[diag_base() + diag.find(p)] += v;
            else if (!zero[c])
                acc[c] += v;
        }
        KeyRow out;
        for (auto& [k, v] : acc)
            if (v != 0) out.emplace_back(k, std::move(v));
        return out;
    }
};

std::vector<std::pair<std::string, std::string>> evidence_of(const StateSet& set, const std::vector<PairTag>& tags)
{
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(tags.size());
    for (const auto& t : tags) out.emplace_back(set[t.first].label, set[t.second].label);
    return out;
}

} // namespace

Certificate derive_certificate(const StateSet& set, const Grouping& g)
{
    auto sys = build_constraints(set, g);
    const std::size_t D = sys.unknowns.dim;
    Certificate cert{g, D, {}, false};
    Knowledge know(D);

    const auto tmpl = infer_templates(set);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> families;
    for (std::size_t r = 0; r < sys.provenance.size(); ++r) {
        auto a = tmpl[sys.provenance[r].first], b = tmpl[sys.provenance[r].second];
        families[{std::min(a, b), std::max(a, b)}].push_back(r);
    }

    std::map<std::pair<std::size_t, std::size_t>, std::vector<KeyRow>> last_seen;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [fam, row_ids] : families) {
            std::vector<KeyRow> rows;
            std::vector<PairTag> tags;
            for (auto r : row_ids) {
                auto kr = know.restrict(sys.rows.rows()[r]);
                if (kr.empty()) continue;
                rows.push_back(std::move(kr));
                tags.push_back(sys.provenance[r]);
            }
            auto& seen = last_seen[fam];
            if (rows == seen) continue;
            seen = rows;

            for (const auto& block : split_blocks(rows)) {
                auto res = analyse_block(rows, block, know.diag_base());
                if (res.zero_keys.empty() && res.equal_keys.empty()) continue;
                std::vector<PairTag> used;
                for (auto r : block.rows) used.push_back(tags[r]);
                auto evidence = evidence_of(set, used);

                if (!res.zero_keys.empty()) {
                    Fact f{FactKind::EntryZero, {}, evidence};
                    for (auto c : res.zero_keys) {
                        know.zero[c] = 1;
                        f.entries.emplace_back(c / D, c % D);
                    }
                    cert.facts.push_back(std::move(f));
                }
                for (const auto& group : res.equal_keys) {
                    std::vector<std::size_t> reps;
                    for (auto k : group) reps.push_back(k - know.diag_base());
                    Fact f{FactKind::DiagEqual, {}, evidence};
                    for (std::size_t p = 0; p < D; ++p)
                        if (std::find(reps.begin(), reps.end(), know.diag.find(p)) != reps.end())
                            f.entries.emplace_back(p, p);
                    for (auto r : reps) know.diag.unite(reps.front(), r);
                    cert.facts.push_back(std::move(f));
                }
                changed = true;
            }
            // Later families see the new knowledge within the same pass.
        }
    }

    bool saturated = true;
    for (std::size_t c = 0; c < D * D && saturated; ++c)
        if (c / D != c % D && !know.zero[c]) saturated = false;
    for (std::size_t p = 0; p < D && saturated; ++p)
        if (know.diag.find(p) != know.diag.find(0)) saturated = false;
    cert.saturated = saturated;
    return cert;
}

std::set<std::pair<std::size_t, std::size_t>> proven_zeros(const Certificate& cert)
{
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (const auto& f : cert.facts)
        if (f.kind == FactKind::EntryZero) out.insert(f.entries.begin(), f.entries.end());
    return out;
}

bool check_certificate(const Certificate& cert, const StateSet& set, const Grouping& g)
{
    if (!(cert.grouping == g)) return false;
    const std::size_t D = side_dim(set, g);
    if (cert.dim != D) return false;
    const auto report = solve(set, g);

    std::vector<char> zero(D * D, 0);
    UnionFind diag(D);
    for (const auto& f : cert.facts) {
        if (f.entries.empty()) return false;
        for (const auto& [p, q] : f.entries) {
            if (p >= D || q >= D) return false;
            if (f.kind == FactKind::DiagEqual && p != q) return false;
        }
        for (const auto& b : report.basis) {
            const auto& [p0, q0] = f.entries.front();
            for (const auto& [p, q] : f.entries) {
                if (f.kind == FactKind::EntryZero && b.at(p, q) != 0) return false;
                if (f.kind == FactKind::DiagEqual && b.at(p, q) != b.at(p0, q0)) return false;
            }
        }
        for (const auto& [p, q] : f.entries) {
            if (f.kind == FactKind::EntryZero)
                zero[p * D + q] = 1;
            else
                diag.unite(f.entries.front().first, p);
        }
    }

    bool covered = true;
    for (std::size_t c = 0; c < D * D && covered; ++c)
        if (c / D != c % D && !zero[c]) covered = false;
    for (std::size_t p = 0; p < D && covered; ++p)
        if (diag.find(p) != diag.find(0)) covered = false;
    if (cert.saturated != covered) return false;
    return !cert.saturated || report.dim == 1;
}

LocalDerivation derive_local(const StateSet& set, const Grouping& g, const std::vector<std::size_t>& states,
                             const std::set<std::pair<std::size_t, std::size_t>>& known_zero)
{
    const auto sub = set.subset(states, set.family());
    auto sys = build_constraints(sub, g);
    const std::size_t D = sys.unknowns.dim;
    Knowledge know(D);
    for (const auto& [p, q] : known_zero) know.zero[p * D + q] = 1;

    std::vector<KeyRow> rows;
    for (const auto& r : sys.rows.rows()) {
        auto kr = know.restrict(r);
        if (!kr.empty()) rows.push_back(std::move(kr));
    }
    LocalDerivation out;
    if (rows.empty()) return out;
    Block all;
    all.rows.resize(rows.size());
    std::iota(all.rows.begin(), all.rows.end(), 0);
    std::set<std::size_t> keys;
    for (const auto& r : rows)
        for (const auto& e : r) keys.insert(e.first);
    all.keys.assign(keys.begin(), keys.end());

    auto res = analyse_block(rows, all, know.diag_base());
    for (auto c : res.zero_keys) out.zeros.emplace(c / D, c % D);
    for (const auto& group : res.equal_keys) {
        std::vector<std::size_t> cls;
        for (auto k : group) cls.push_back(k - know.diag_base());
        out.diagonal_classes.push_back(std::move(cls));
    }
    return out;
}

std::string entry_name(const StateSet& set, const Grouping& g, std::size_t p, std::size_t q)
{
    return index_name(p, set.dims(), g.side()) + "," + index_name(q, set.dims(), g.side());
}

} // namespace nonloc
