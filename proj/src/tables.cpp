#include "nonloc/tables.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <utility>

#ifndef NONLOC_DATA_DIR
#define NONLOC_DATA_DIR "data"
#endif

namespace nonloc {

using Entry = std::pair<std::size_t, std::size_t>;

std::filesystem::path default_fixture_dir() { return std::filesystem::path(NONLOC_DATA_DIR) / "tables"; }

TableFixture load_fixture(std::string_view id, const std::filesystem::path& dir)
{
    static const std::vector<std::string> ids = {"I", "II", "III", "IV", "V"};
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
        throw InputError("unknown table id '" + std::string(id) + "' (expected I, II, III, IV or V)");
    const auto path = dir / ("table_" + std::string(id) + ".json");
    std::ifstream in(path);
    if (!in) throw InputError("missing fixture " + path.string());

    TableFixture fx;
    try {
        const auto j = nlohmann::json::parse(in);
        fx.table = j.at("table").get<std::string>();
        fx.set = j.at("set").get<std::string>();
        fx.side = j.at("side").get<std::string>();
        fx.symbol = j.at("symbol").get<std::string>();
        fx.kind = j.at("kind").get<std::string>();
        for (const auto& r : j.at("rows"))
            fx.rows.push_back({r.at("row").get<int>(), r.at("states").get<std::vector<std::string>>(),
                               r.at("entries").get<std::vector<std::string>>()});
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed fixture " + path.string() + ": " + e.what());
    }
    if (fx.table != id) throw InputError("fixture " + path.string() + " describes table " + fx.table);
    if (fx.kind != "off_diagonal" && fx.kind != "diagonal")
        throw InputError("fixture " + path.string() + " has unknown kind '" + fx.kind + "'");
    return fx;
}

namespace {

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// "phi_{29,30}" -> ("phi", {"29", "30"}); also accepts "varphi_7".
std::optional<std::pair<std::string, std::vector<std::string>>> parse_state_group(std::string_view text)
{
    auto us = text.find('_');
    if (us == std::string_view::npos || us == 0) return std::nullopt;
    std::string family(text.substr(0, us));
    auto body = text.substr(us + 1);
    if (body.size() >= 2 && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
    std::vector<std::string> idx;
    for (std::size_t start = 0;;) {
        auto comma = body.find(',', start);
        auto part = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return std::nullopt;
        idx.emplace_back(part);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return std::make_pair(family, idx);
}

// Inner text of "a_{01,11}", or nullopt if the symbol or braces are wrong.
std::optional<std::string> cell_body(std::string_view text, std::string_view symbol)
{
    const std::string head = std::string(symbol) + "_{";
    if (!text.starts_with(head) || !text.ends_with("}")) return std::nullopt;
    return std::string(text.substr(head.size(), text.size() - head.size() - 1));
}

class Context {
public:
    Context(const StateSet& set, const Grouping& g) : set_(set), g_(g) {}

    std::optional<Entry> parse_entry(std::string_view body) const
    {
        auto comma = body.find(',');
        if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) return std::nullopt;
        auto p = parse_index_name(body.substr(0, comma), set_.dims(), g_.side());
        auto q = parse_index_name(body.substr(comma + 1), set_.dims(), g_.side());
        if (!p || !q) return std::nullopt;
        return Entry{*p, *q};
    }

    std::string name(const Entry& e) const { return entry_name(set_, g_, e.first, e.second); }
    std::string index(std::size_t p) const { return index_name(p, set_.dims(), g_.side()); }

private:
    const StateSet& set_;
    const Grouping& g_;
};

struct CitedStates {
    std::vector<std::size_t> indices;
    std::vector<std::string> labels;
    std::vector<std::string> unknown; // printed groups with an unresolvable label
};

CitedStates resolve(const StateSet& set, const std::vector<std::string>& groups)
{
    CitedStates out;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        auto parsed = parse_state_group(groups[gi]);
        if (!parsed) {
            out.unknown.push_back(groups[gi]);
            continue;
        }
        for (std::size_t mi = 0; mi < parsed->second.size(); ++mi) {
            const std::string label = parsed->first + ":" + parsed->second[mi];
            auto i = set.find(label);
            if (!i) {
                out.unknown.push_back(groups[gi]);
                continue;
            }
            if (std::find(out.indices.begin(), out.indices.end(), *i) != out.indices.end()) continue;
            out.indices.push_back(*i);
            out.labels.push_back(label);
        }
    }
    return out;
}

std::string group_text(const std::string& family, const std::vector<std::string>& idx)
{
    std::string text = family + "_{";
    for (std::size_t k = 0; k < idx.size(); ++k) text += (k ? "," : "") + idx[k];
    return text + "}";
}

// Replacement groups to try, most plausible first: one member index changed by
// a single character, then the whole group swapped for the sign siblings of
// another template of the same family and size.
std::vector<std::pair<std::size_t, std::string>> label_alternatives(const StateSet& set,
                                                                    const std::vector<std::string>& groups)
{
    std::vector<std::pair<std::string, std::string>> labels; // (family, index)
    for (const auto& s : set.states()) {
        const auto colon = s.label.find(':');
        if (colon != std::string::npos) labels.emplace_back(s.label.substr(0, colon), s.label.substr(colon + 1));
    }
    std::vector<std::pair<std::size_t, std::string>> out;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        auto parsed = parse_state_group(groups[gi]);
        if (!parsed) continue;
        for (std::size_t mi = 0; mi < parsed->second.size(); ++mi) {
            std::vector<std::pair<int, std::string>> alts;
            for (const auto& [fam, idx] : labels)
                if (fam == parsed->first && edit_distance(idx, parsed->second[mi]) == 1)
                    alts.emplace_back(std::stoi(idx), idx);
            std::sort(alts.begin(), alts.end());
            for (const auto& alt : alts) {
                auto idx = parsed->second;
                idx[mi] = alt.second;
                out.emplace_back(gi, group_text(parsed->first, idx));
            }
        }
    }
    std::map<std::pair<std::string, std::vector<std::vector<std::size_t>>>, std::vector<std::string>> templates;
    std::vector<std::pair<std::string, std::vector<std::vector<std::size_t>>>> order;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& s = set[i];
        const auto colon = s.label.find(':');
        if (colon == std::string::npos) continue;
        std::vector<std::vector<std::size_t>> key;
        for (const auto& p : s.parties) key.push_back(p.support());
        auto k = std::make_pair(s.label.substr(0, colon), std::move(key));
        auto [it, fresh] = templates.try_emplace(k);
        if (fresh) order.push_back(k);
        it->second.push_back(s.label.substr(colon + 1));
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        auto parsed = parse_state_group(groups[gi]);
        if (!parsed) continue;
        for (const auto& k : order) {
            const auto& idx = templates.at(k);
            if (k.first != parsed->first || idx.size() != parsed->second.size() || idx == parsed->second) continue;
            out.emplace_back(gi, group_text(k.first, idx));
        }
    }
    return out;
}

enum class Problem { None, Malformed, Duplicate, NotImplied, NotDerivable };

const char* problem_kind(Problem p)
{
    switch (p) {
    case Problem::Malformed: return "malformed_entry";
    case Problem::Duplicate: return "duplicate_entry";
    case Problem::NotImplied: return "not_implied";
    case Problem::NotDerivable: return "not_derivable";
    case Problem::None: break;
    }
    return "";
}

struct Cell {
    std::string printed;
    std::string body; // inner text used for edit distances
    std::optional<Entry> entry;
    Problem problem = Problem::None;
    std::optional<Entry> corrected;
};

struct Outcome {
    std::string derivation = "none";
    std::vector<Cell> cells;
    std::set<Entry> pool; // derived but unclaimed, available as replacements
};

std::set<Entry> transposes(const std::set<Entry>& s)
{
    std::set<Entry> out;
    for (const auto& [p, q] : s) out.emplace(q, p);
    return out;
}

// Off-diagonal row: which printed cells hold, and what the cited states derive.
Outcome check_zero_row(const StateSet& set, const Grouping& g, const Context& ctx, const FixtureRow& row,
                       const std::string& symbol, const std::vector<std::size_t>& states,
                       const OpSpaceReport& space, const std::set<Entry>& proven)
{
    Outcome out;
    std::set<Entry> claims;
    for (const auto& printed : row.entries) {
        Cell c{printed, printed, std::nullopt, Problem::None, std::nullopt};
        auto body = cell_body(printed, symbol);
        if (body) c.body = *body;
        if (body) c.entry = ctx.parse_entry(*body);
        if (!c.entry) {
            c.problem = Problem::Malformed;
        } else if (claims.count(*c.entry)) {
            c.problem = Problem::Duplicate;
        } else {
            const auto [p, q] = *c.entry;
            const bool sound = std::all_of(space.basis.begin(), space.basis.end(),
                                           [&](const RationalMatrix& b) { return b.at(p, q) == 0; });
            if (!sound || p == q)
                c.problem = Problem::NotImplied;
            else
                claims.insert(*c.entry);
        }
        out.cells.push_back(std::move(c));
    }
    if (states.empty()) return out;

    const auto standalone = derive_local(set, g, states, {}).zeros;
    std::set<Entry> derived = standalone;
    out.derivation = "standalone";
    if (!std::includes(derived.begin(), derived.end(), claims.begin(), claims.end())) {
        std::set<Entry> background;
        const auto keep = [&] {
            auto k = claims;
            auto t = transposes(claims);
            k.insert(t.begin(), t.end());
            return k;
        }();
        std::set_difference(proven.begin(), proven.end(), keep.begin(), keep.end(),
                            std::inserter(background, background.end()));
        derived = derive_local(set, g, states, background).zeros;
        out.derivation = "context";
    }
    bool all = true;
    for (auto& c : out.cells)
        if (c.problem == Problem::None && !derived.count(*c.entry)) {
            c.problem = Problem::NotDerivable;
            all = false;
        }
    if (!all) out.derivation = "none";
    for (const std::set<Entry>* src : {&standalone, &std::as_const(derived)})
        for (const auto& e : *src)
            if (!claims.count(e)) out.pool.insert(e);
    return out;
}

// Diagonal row: cells are the members of one printed equality chain.
Outcome check_diagonal_row(const StateSet& set, const Grouping& g, const Context& ctx, const FixtureRow& row,
                           const std::string& symbol, const std::vector<std::size_t>& states,
                           const OpSpaceReport& space, const std::set<Entry>& proven)
{
    Outcome out;
    std::vector<std::string> members;
    for (const auto& chain : row.entries)
        for (std::size_t start = 0;;) {
            auto eq = chain.find('=', start);
            members.push_back(chain.substr(start, eq == std::string::npos ? std::string::npos : eq - start));
            if (eq == std::string::npos) break;
            start = eq + 1;
        }

    std::set<std::size_t> claims;
    for (const auto& printed : members) {
        Cell c{printed, printed, std::nullopt, Problem::None, std::nullopt};
        auto body = cell_body(printed, symbol);
        if (body) c.body = *body;
        if (body) c.entry = ctx.parse_entry(*body);
        if (!c.entry || c.entry->first != c.entry->second)
            c.problem = Problem::Malformed;
        else if (claims.count(c.entry->first))
            c.problem = Problem::Duplicate;
        else
            claims.insert(c.entry->first);
        out.cells.push_back(std::move(c));
    }
    if (!claims.empty()) {
        const std::size_t k0 = *claims.begin();
        const bool sound = std::all_of(space.basis.begin(), space.basis.end(), [&](const RationalMatrix& b) {
            return std::all_of(claims.begin(), claims.end(), [&](std::size_t k) { return b.at(k, k) == b.at(k0, k0); });
        });
        if (!sound)
            for (auto& c : out.cells)
                if (c.problem == Problem::None) c.problem = Problem::NotImplied;
    }
    if (states.empty()) return out;

    const auto local = derive_local(set, g, states, proven);
    const std::vector<std::size_t>* cls = nullptr;
    for (const auto& c : local.diagonal_classes)
        if (std::includes(c.begin(), c.end(), claims.begin(), claims.end())) cls = &c;
    if (cls && !claims.empty()) {
        out.derivation = "standalone";
        for (auto k : *cls)
            if (!claims.count(k)) out.pool.emplace(k, k);
    } else {
        for (auto& c : out.cells)
            if (c.problem == Problem::None) c.problem = Problem::NotDerivable;
    }
    return out;
}

// Assigns replacements to problem cells: nearest pool entry by edit distance,
// then the one whose substitution also fits the other problem cells sharing
// the printed row index, then transposes of claimed entries, then entries
// sharing an index with the row's claims, then lowest (p, q).
void assign_corrections(Outcome& out, const Context& ctx)
{
    std::set<Entry> claims;
    for (const auto& c : out.cells)
        if (c.problem == Problem::None) claims.insert(*c.entry);
    const auto claim_t = transposes(claims);
    std::set<Entry> used;

    auto split = [](const std::string& body) {
        auto comma = body.find(',');
        return comma == std::string::npos ? std::make_pair(body, std::string())
                                          : std::make_pair(body.substr(0, comma), body.substr(comma + 1));
    };

    for (std::size_t i = 0; i < out.cells.size(); ++i) {
        auto& cell = out.cells[i];
        if (cell.problem == Problem::None) continue;
        const auto [pp, pq] = split(cell.body);
        std::optional<Entry> best;
        std::tuple<std::size_t, long, int, long> best_key{};
        for (const auto& e : out.pool) {
            if (used.count(e)) continue;
            const std::size_t d = edit_distance(cell.body, ctx.name(e));
            if (d > 2) continue;
            long fits = 0;
            for (std::size_t j = 0; j < out.cells.size(); ++j) {
                if (j == i || out.cells[j].problem == Problem::None) continue;
                const auto [op, oq] = split(out.cells[j].body);
                if (op != pp) continue;
                auto other = ctx.parse_entry(ctx.index(e.first) + "," + oq);
                if (other && out.pool.count(*other) && !used.count(*other)) ++fits;
            }
            long shares = 0;
            for (const auto& c : claims) shares += (c.first == e.first) + (c.second == e.second);
            std::tuple<std::size_t, long, int, long> key{d, -fits, claim_t.count(e) ? 0 : 1, -shares};
            if (!best || key < best_key) {
                best = e;
                best_key = key;
            }
        }
        if (best) {
            cell.corrected = best;
            used.insert(*best);
        }
    }
}

bool resolved(const Outcome& out)
{
    return std::all_of(out.cells.begin(), out.cells.end(),
                       [](const Cell& c) { return c.problem == Problem::None || c.corrected; });
}

bool has_underivable(const Outcome& out)
{
    return std::any_of(out.cells.begin(), out.cells.end(),
                       [](const Cell& c) { return c.problem == Problem::NotDerivable; });
}

} // namespace

TableReport reproduce_table(const TableFixture& fx)
{
    const auto set = construct_named(fx.set);
    const auto g = parse_grouping(fx.side + "|" + [&] {
        std::string rest;
        auto side = parse_party_cell(fx.side, set.party_count());
        for (std::size_t k = 0; k < set.party_count(); ++k)
            if (std::find(side.begin(), side.end(), k) == side.end()) rest += party_name(k);
        return rest;
    }(), fx.side, set.party_count());
    const Context ctx(set, g);
    const bool diagonal = fx.kind == "diagonal";

    const auto space = solve(set, g);
    const auto cert = derive_certificate(set, g);
    const auto proven = proven_zeros(cert);

    TableReport report;
    report.table = fx.table;
    report.kind = fx.kind;
    report.grouping = g.cut_name();
    report.side = g.side_name();
    report.certificate_saturated = cert.saturated;

    auto check_once = [&](const FixtureRow& row, const std::vector<std::size_t>& states) {
        return diagonal ? check_diagonal_row(set, g, ctx, row, fx.symbol, states, space, proven)
                        : check_zero_row(set, g, ctx, row, fx.symbol, states, space, proven);
    };
    auto check = [&](const FixtureRow& row, const std::vector<std::size_t>& states) {
        auto out = check_once(row, states);
        assign_corrections(out, ctx);
        if (resolved(out) && has_underivable(out)) {
            // Re-derive with the replacements in place to see how the row now follows.
            FixtureRow fixed = row;
            fixed.entries.clear();
            for (const auto& c : out.cells) {
                const auto& e = c.problem == Problem::None ? *c.entry : *c.corrected;
                fixed.entries.push_back(fx.symbol + "_{" + ctx.name(e) + "}");
            }
            if (diagonal) {
                std::string chain;
                for (const auto& e : fixed.entries) chain += (chain.empty() ? "" : "=") + e;
                fixed.entries = {chain};
            }
            auto again = check_once(fixed, states);
            if (!has_underivable(again)) out.derivation = again.derivation;
        }
        return out;
    };

    std::set<Entry> covered;
    std::set<std::size_t> covered_diag;
    for (const auto& row : fx.rows) {
        auto cited = resolve(set, row.states);
        std::vector<Erratum> errata;
        for (const auto& u : cited.unknown) errata.push_back({row.number, "unknown_label", u, ""});
        auto out = check(row, cited.indices);

        // A mistyped state label can explain claims no replacement entry can.
        if (!resolved(out) && (has_underivable(out) || !cited.unknown.empty())) {
            for (const auto& [gi, text] : label_alternatives(set, row.states)) {
                auto groups = row.states;
                groups[gi] = text;
                auto alt = resolve(set, groups);
                if (!alt.unknown.empty()) continue;
                auto trial = check(row, alt.indices);
                if (!resolved(trial) || has_underivable(trial)) continue;
                std::erase_if(errata, [](const Erratum& e) { return e.kind == "unknown_label"; });
                errata.push_back({row.number, "label_typo", row.states[gi], text});
                cited = std::move(alt);
                out = std::move(trial);
                break;
            }
        }

        RowResult rr;
        rr.row = row.number;
        rr.states = cited.labels;
        rr.derivation = out.derivation;
        for (const auto& c : out.cells) {
            if (c.problem != Problem::None)
                errata.push_back({row.number, problem_kind(c.problem), c.printed,
                                  c.corrected ? std::string(fx.symbol) + "_{" + ctx.name(*c.corrected) + "}" : ""});
            std::optional<Entry> e = c.problem == Problem::None ? c.entry : c.corrected;
            if (!e) continue;
            rr.entries.push_back(ctx.name(*e));
            covered.insert(*e);
            covered.emplace(e->second, e->first);
            if (diagonal) covered_diag.insert(e->first);
        }
        rr.matched = resolved(out) && out.derivation != "none" && cited.unknown.empty();
        (rr.matched ? report.matched : report.missing).push_back(row.number);
        report.rows.push_back(std::move(rr));
        report.errata.insert(report.errata.end(), errata.begin(), errata.end());
    }

    const std::size_t D = side_dim(set, g);
    if (diagonal) {
        for (std::size_t p = 0; p < D; ++p)
            if (!covered_diag.count(p)) report.extra.push_back(ctx.name({p, p}));
    } else {
        for (const auto& e : proven)
            if (!covered.count(e)) report.extra.push_back(ctx.name(e));
    }
    return report;
}

TableReport reproduce_table(std::string_view id, const std::filesystem::path& dir)
{
    return reproduce_table(load_fixture(id, dir));
}

} // namespace nonloc
