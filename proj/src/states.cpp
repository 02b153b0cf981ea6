#include "nonloc/states.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nonloc {

PartyVector PartyVector::basis(std::size_t dim, std::size_t index)
{
    if (index >= dim) throw ShapeError("basis index out of range");
    PartyVector v{std::vector<Integer>(dim, 0)};
    v.amps[index] = 1;
    return v;
}

PartyVector PartyVector::superposed(std::size_t dim, std::size_t first, std::size_t second, int sign)
{
    if (first >= dim || second >= dim || first == second) throw ShapeError("bad superposition indices");
    PartyVector v{std::vector<Integer>(dim, 0)};
    v.amps[first] = 1;
    v.amps[second] = sign < 0 ? -1 : 1;
    return v;
}

bool PartyVector::is_zero() const
{
    return std::all_of(amps.begin(), amps.end(), [](const Integer& a) { return a == 0; });
}

std::vector<std::size_t> PartyVector::support() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < amps.size(); ++i)
        if (amps[i] != 0) out.push_back(i);
    return out;
}

Integer dot(const PartyVector& a, const PartyVector& b)
{
    if (a.dim() != b.dim()) throw ShapeError("party vectors of different dimension");
    Integer acc = 0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        if (a.amps[i] != 0 && b.amps[i] != 0) acc += a.amps[i] * b.amps[i];
    return acc;
}

StateSet::StateSet(std::vector<std::size_t> dims, std::vector<ProductState> states, std::string family)
    : dims_(std::move(dims)), states_(std::move(states)), family_(std::move(family))
{
    if (dims_.empty()) throw ShapeError("a state set needs at least one party");
    for (auto d : dims_)
        if (d == 0) throw ShapeError("local dimension must be positive");
    std::unordered_set<std::string> labels;
    for (const auto& s : states_) {
        if (s.label.empty()) throw InputError("state without a label");
        if (!labels.insert(s.label).second) throw InputError("duplicate state label '" + s.label + "'");
        if (s.parties.size() != dims_.size())
            throw ShapeError("state '" + s.label + "' has " + std::to_string(s.parties.size()) + " parties, expected " +
                             std::to_string(dims_.size()));
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (s.parties[k].dim() != dims_[k])
                throw ShapeError("state '" + s.label + "' party " + std::to_string(k) + " has dimension " +
                                 std::to_string(s.parties[k].dim()) + ", expected " + std::to_string(dims_[k]));
            if (s.parties[k].is_zero())
                throw InputError("state '" + s.label + "' has a zero vector on party " + std::to_string(k));
        }
    }
}

std::optional<std::size_t> StateSet::find(std::string_view label) const
{
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i].label == label) return i;
    return std::nullopt;
}

StateSet StateSet::subset(std::span<const std::size_t> indices, std::string family) const
{
    std::vector<ProductState> picked;
    picked.reserve(indices.size());
    for (auto i : indices) {
        if (i >= states_.size()) throw ShapeError("state index out of range");
        picked.push_back(states_[i]);
    }
    return StateSet(dims_, std::move(picked), std::move(family));
}

StateSet StateSet::select(std::span<const std::string> labels, std::string family) const
{
    std::vector<std::size_t> idx;
    for (const auto& l : labels) {
        auto i = find(l);
        if (!i) throw InputError("no state labelled '" + l + "' in " + family_);
        idx.push_back(*i);
    }
    return subset(idx, std::move(family));
}

namespace {

// One party token of a template: "3" or "1±2".
struct KetToken {
    std::size_t first;
    std::optional<std::size_t> second;
};

// Template like "0|1|0±1|0±2". Digits are single characters.
std::vector<KetToken> parse_template(std::string_view text)
{
    std::vector<KetToken> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto bar = text.find('|', pos);
        auto tok = text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
        KetToken k{static_cast<std::size_t>(tok.at(0) - '0'), std::nullopt};
        if (tok.size() > 1) k.second = static_cast<std::size_t>(tok.back() - '0');
        out.push_back(k);
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
    }
    return out;
}

// Expands a template into its sign siblings; the first ± is the most significant
// sign, so a double template yields (++, +-, -+, --).
std::vector<std::vector<PartyVector>> expand(std::string_view text, std::size_t dim)
{
    auto tokens = parse_template(text);
    std::vector<std::size_t> pm;
    for (std::size_t k = 0; k < tokens.size(); ++k)
        if (tokens[k].second) pm.push_back(k);
    std::vector<std::vector<PartyVector>> out;
    const std::size_t combos = std::size_t{1} << pm.size();
    for (std::size_t c = 0; c < combos; ++c) {
        std::vector<PartyVector> parties;
        for (std::size_t k = 0; k < tokens.size(); ++k) {
            if (!tokens[k].second) {
                parties.push_back(PartyVector::basis(dim, tokens[k].first));
                continue;
            }
            auto rank = static_cast<std::size_t>(std::find(pm.begin(), pm.end(), k) - pm.begin());
            bool minus = (c >> (pm.size() - 1 - rank)) & 1U;
            parties.push_back(PartyVector::superposed(dim, tokens[k].first, *tokens[k].second, minus ? -1 : 1));
        }
        out.push_back(std::move(parties));
    }
    return out;
}

void require_dim(int d)
{
    if (d < 3) throw DimensionError("local dimension must be at least 3, got " + std::to_string(d));
}

std::vector<ProductState> alpha_states(std::size_t d)
{
    std::vector<ProductState> out;
    for (std::size_t i = 1; i < d; ++i) {
        const std::string tag = "alpha:i=" + std::to_string(i) + ":";
        auto e0 = PartyVector::basis(d, 0);
        auto ei = PartyVector::basis(d, i);
        int k = 1;
        for (int sign : {1, -1})
            out.push_back({{e0, ei, PartyVector::superposed(d, 0, i, sign)}, tag + std::to_string(k++)});
        for (int sign : {1, -1})
            out.push_back({{ei, PartyVector::superposed(d, 0, i, sign), e0}, tag + std::to_string(k++)});
        for (int sign : {1, -1})
            out.push_back({{PartyVector::superposed(d, 0, i, sign), e0, ei}, tag + std::to_string(k++)});
    }
    return out;
}

} // namespace

StateSet construct_tripartite(int d)
{
    require_dim(d);
    const auto dim = static_cast<std::size_t>(d);
    auto states = alpha_states(dim);
    for (std::size_t i = 1; i < dim; ++i) {
        for (std::size_t j = 1; j < dim; ++j) {
            if (i == j) continue;
            const std::string tag = "beta:i=" + std::to_string(i) + ",j=" + std::to_string(j) + ":";
            auto ei = PartyVector::basis(dim, i);
            auto ej = PartyVector::basis(dim, j);
            int k = 1;
            for (int sign : {1, -1})
                states.push_back({{ei, ej, PartyVector::superposed(dim, 0, i, sign)}, tag + std::to_string(k++)});
            for (int sign : {1, -1})
                states.push_back({{ej, PartyVector::superposed(dim, 0, i, sign), ei}, tag + std::to_string(k++)});
            for (int sign : {1, -1})
                states.push_back({{PartyVector::superposed(dim, 0, i, sign), ei, ej}, tag + std::to_string(k++)});
        }
    }
    return StateSet({dim, dim, dim}, std::move(states), "tripartite(" + std::to_string(d) + ")");
}

StateSet construct_tripartite_core(int d)
{
    require_dim(d);
    const auto dim = static_cast<std::size_t>(d);
    return StateSet({dim, dim, dim}, alpha_states(dim), "tripartite-core(" + std::to_string(d) + ")");
}

namespace {

struct TemplateBlock {
    const char* family;
    std::vector<std::pair<const char*, int>> templates; // template, label index of first sibling
};

// Column order of the printed four-party basis.
const std::vector<std::pair<const char*, int>>& phi_templates()
{
    static const std::vector<std::pair<const char*, int>> t = {
        {"0|1|0±1|0±2", 1},  {"1|2|1±2|1±0", 5},  {"2|0|2±0|2±1", 9},  {"1|0±1|0±2|0", 13},
        {"2|1±2|1±0|1", 17}, {"0|2±0|2±1|2", 21}, {"0±1|0±2|0|1", 25}, {"1±2|1±0|1|2", 29},
        {"2±0|2±1|2|0", 33}, {"0±2|0|1|0±1", 37}, {"1±0|1|2|1±2", 41}, {"2±1|2|0|2±0", 45},
    };
    return t;
}

const std::vector<std::pair<const char*, int>>& psi_templates_display()
{
    static const std::vector<std::pair<const char*, int>> t = {
        {"1|1|0|1±2", 1},  {"2|2|1|2±0", 3},  {"0|0|2|0±1", 5},  {"1|0|1±2|1", 13},
        {"2|1|2±0|2", 15}, {"0|2|0±1|0", 17}, {"0|1±2|1|1", 7},  {"1|2±0|2|2", 9},
        {"2|0±1|0|0", 11}, {"1±2|1|1|0", 19}, {"2±0|2|2|1", 21}, {"0±1|0|0|2", 23},
    };
    return t;
}

const std::vector<std::pair<const char*, int>>& varphi_templates()
{
    static const std::vector<std::pair<const char*, int>> t = {
        {"1|0|1|0", 1}, {"2|1|2|1", 2}, {"0|2|0|2", 3}, {"0|1|0|1", 4}, {"1|2|1|2", 5},
        {"2|0|2|0", 6}, {"0|0|0|0", 7}, {"1|1|1|1", 8}, {"2|2|2|2", 9},
    };
    return t;
}

void append_block(std::vector<ProductState>& out, const char* family,
                  const std::vector<std::pair<const char*, int>>& templates, std::size_t dim)
{
    for (const auto& [text, first] : templates) {
        int k = first;
        for (auto& parties : expand(text, dim))
            out.push_back({std::move(parties), std::string(family) + ":" + std::to_string(k++)});
    }
}

std::vector<ProductState> sorted_by_index(std::vector<ProductState> v)
{
    auto index = [](const ProductState& s) { return std::stoi(s.label.substr(s.label.find(':') + 1)); };
    std::stable_sort(v.begin(), v.end(), [&](const auto& a, const auto& b) { return index(a) < index(b); });
    return v;
}

} // namespace

StateSet construct_fourpartite()
{
    std::vector<ProductState> states;
    append_block(states, "phi", phi_templates(), 3);
    append_block(states, "psi", psi_templates_display(), 3);
    append_block(states, "varphi", varphi_templates(), 3);
    return StateSet({3, 3, 3, 3}, std::move(states), "fourpartite");
}

StateSet construct_fourpartite_subset(std::string_view name)
{
    std::vector<ProductState> states;
    if (name == "psi") {
        append_block(states, "psi", psi_templates_display(), 3);
        states = sorted_by_index(std::move(states));
    } else if (name == "phi") {
        append_block(states, "phi", phi_templates(), 3);
    } else if (name == "varphi") {
        append_block(states, "varphi", varphi_templates(), 3);
    } else {
        throw InputError("unknown four-party subset '" + std::string(name) + "' (expected psi, phi or varphi)");
    }
    return StateSet({3, 3, 3, 3}, std::move(states), "fourpartite:" + std::string(name));
}

StateSet construct_example_c66()
{
    static const char* templates[] = {"0|0±1", "0±1|2", "2|1±2", "1±2|0", "3|3±4", "3±4|5", "5|4±5", "4±5|3"};
    std::vector<ProductState> states;
    int k = 1;
    for (const char* t : templates)
        for (auto& parties : expand(t, 6)) states.push_back({std::move(parties), "c66:" + std::to_string(k++)});
    return StateSet({6, 6}, std::move(states), "example-c66");
}

StateSet construct_example_c333()
{
    // Same kets (and order) as the alpha states at d = 3, so the labels are shared.
    return StateSet({3, 3, 3}, alpha_states(3), "example-c333");
}

namespace {

int parse_d(std::string_view selector, std::string_view text)
{
    int d = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw InputError("bad dimension in selector '" + std::string(selector) + "'");
    return d;
}

StateSet construct_single(std::string_view sel)
{
    if (sel == "fourpartite") return construct_fourpartite();
    if (sel == "example:c66") return construct_example_c66();
    if (sel == "example:c333") return construct_example_c333();
    if (sel.starts_with("fourpartite:")) return construct_fourpartite_subset(sel.substr(12));
    if (sel.starts_with("tripartite:")) return construct_tripartite(parse_d(sel, sel.substr(11)));
    if (sel.starts_with("tripartite-core:")) return construct_tripartite_core(parse_d(sel, sel.substr(16)));
    throw InputError("unknown set selector '" + std::string(sel) + "'");
}

} // namespace

StateSet construct_named(std::string_view selector)
{
    if (selector.find('+') == std::string_view::npos) return construct_single(selector);
    // "fourpartite:psi+phi" shares the prefix of its first part.
    std::string prefix;
    if (auto colon = selector.find(':'); colon != std::string_view::npos && colon < selector.find('+'))
        prefix = std::string(selector.substr(0, colon + 1));
    std::vector<ProductState> states;
    std::optional<std::vector<std::size_t>> dims;
    std::size_t start = 0;
    for (bool first = true;; first = false) {
        const auto plus = selector.find('+', start);
        std::string part(selector.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
        if (!first && part.find(':') == std::string::npos && !prefix.empty()) part = prefix + part;
        auto s = construct_single(part);
        if (dims && *dims != s.dims()) throw InputError("selector '" + std::string(selector) + "' mixes dimensions");
        dims = s.dims();
        states.insert(states.end(), s.states().begin(), s.states().end());
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    return StateSet(*dims, std::move(states), std::string(selector));
}

Integer inner_product(const ProductState& s, const ProductState& t)
{
    if (s.parties.size() != t.parties.size()) throw ShapeError("states with different party counts");
    Integer acc = 1;
    for (std::size_t k = 0; k < s.parties.size(); ++k) {
        acc *= dot(s.parties[k], t.parties[k]);
        if (acc == 0) break;
    }
    return acc;
}

OrthogonalityReport verify_orthogonality(const StateSet& set)
{
    OrthogonalityReport report;
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (inner_product(set[i], set[j]) != 0) report.violations.emplace_back(set[i].label, set[j].label);
    report.ok = report.violations.empty();
    return report;
}

namespace {

bool is_permutation_of_iota(const std::vector<std::size_t>& p)
{
    std::vector<bool> seen(p.size(), false);
    for (auto x : p) {
        if (x >= p.size() || seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

std::vector<std::size_t> invert(const std::vector<std::size_t>& p)
{
    std::vector<std::size_t> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
    return inv;
}

void check_symmetry(const StateSet& set, const Symmetry& sym)
{
    const auto& dims = set.dims();
    if (std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) != dims.end())
        throw ShapeError("symmetries need equal local dimensions");
    if (sym.party_perm.size() != set.party_count() || !is_permutation_of_iota(sym.party_perm))
        throw InputError("party permutation is not a permutation of the " + std::to_string(set.party_count()) +
                         " parties");
    if (sym.digit_perm.size() != dims.front() || !is_permutation_of_iota(sym.digit_perm))
        throw InputError("digit permutation is not a permutation of 0.." + std::to_string(dims.front() - 1));
}

} // namespace

Symmetry Symmetry::identity(std::size_t parties, std::size_t dim)
{
    Symmetry s;
    s.party_perm.resize(parties);
    s.digit_perm.resize(dim);
    std::iota(s.party_perm.begin(), s.party_perm.end(), std::size_t{0});
    std::iota(s.digit_perm.begin(), s.digit_perm.end(), std::size_t{0});
    return s;
}

Symmetry Symmetry::party_cycle(std::size_t parties, std::size_t dim)
{
    auto s = identity(parties, dim);
    for (std::size_t k = 0; k < parties; ++k) s.party_perm[k] = (k + 1) % parties;
    return s;
}

Symmetry Symmetry::inverse() const { return {invert(party_perm), invert(digit_perm)}; }

StateSet apply_symmetry(const StateSet& set, const Symmetry& sym)
{
    check_symmetry(set, sym);
    std::vector<ProductState> image;
    image.reserve(set.size());
    for (const auto& s : set.states()) {
        ProductState t{std::vector<PartyVector>(s.parties.size()), s.label};
        for (std::size_t k = 0; k < s.parties.size(); ++k) {
            PartyVector v{std::vector<Integer>(s.parties[k].dim(), 0)};
            for (std::size_t i = 0; i < v.amps.size(); ++i) v.amps[sym.digit_perm[i]] = s.parties[k].amps[i];
            t.parties[sym.party_perm[k]] = std::move(v);
        }
        image.push_back(std::move(t));
    }
    return StateSet(set.dims(), std::move(image), set.family());
}

std::string ray_key(const ProductState& s)
{
    std::string key;
    for (const auto& p : s.parties) {
        Integer g = 0;
        for (const auto& a : p.amps) g = gcd(g, a);
        bool flip = false;
        for (const auto& a : p.amps)
            if (a != 0) {
                flip = a < 0;
                break;
            }
        for (const auto& a : p.amps) {
            Integer v = a / g;
            if (flip) v = -v;
            key += v.get_str();
            key += ',';
        }
        key += '|';
    }
    return key;
}

namespace {

std::set<std::string> ray_set(const StateSet& set)
{
    std::set<std::string> keys;
    for (const auto& s : set.states()) keys.insert(ray_key(s));
    return keys;
}

// adjacency[u][v]: digits u and v appear together in some party support.
std::vector<std::vector<bool>> digit_graph(const StateSet& set)
{
    const std::size_t d = set.dims().front();
    std::vector<std::vector<bool>> adj(d, std::vector<bool>(d, false));
    for (const auto& s : set.states())
        for (const auto& p : s.parties) {
            auto sup = p.support();
            for (auto u : sup)
                for (auto v : sup)
                    if (u != v) adj[u][v] = true;
        }
    return adj;
}

void graph_automorphisms(const std::vector<std::vector<bool>>& adj, std::vector<std::size_t>& perm,
                         std::vector<bool>& used, std::vector<std::vector<std::size_t>>& out)
{
    const std::size_t pos = perm.size();
    const std::size_t d = adj.size();
    if (pos == d) {
        out.push_back(perm);
        return;
    }
    for (std::size_t img = 0; img < d; ++img) {
        if (used[img]) continue;
        bool ok = true;
        for (std::size_t u = 0; u < pos && ok; ++u) ok = adj[u][pos] == adj[perm[u]][img];
        if (!ok) continue;
        used[img] = true;
        perm.push_back(img);
        graph_automorphisms(adj, perm, used, out);
        perm.pop_back();
        used[img] = false;
    }
}

} // namespace

bool is_invariant(const StateSet& set, const Symmetry& sym)
{
    return ray_set(apply_symmetry(set, sym)) == ray_set(set);
}

std::vector<Symmetry> search_symmetries(const StateSet& set)
{
    check_symmetry(set, Symmetry::identity(set.party_count(), set.dims().front()));
    const auto original = ray_set(set);

    std::vector<std::vector<std::size_t>> digit_perms;
    {
        auto adj = digit_graph(set);
        std::vector<std::size_t> perm;
        std::vector<bool> used(adj.size(), false);
        graph_automorphisms(adj, perm, used, digit_perms);
    }

    std::vector<std::size_t> party(set.party_count());
    std::iota(party.begin(), party.end(), std::size_t{0});
    std::vector<Symmetry> found;
    do {
        for (const auto& dp : digit_perms) {
            Symmetry sym{party, dp};
            if (ray_set(apply_symmetry(set, sym)) == original) found.push_back(std::move(sym));
        }
    } while (std::next_permutation(party.begin(), party.end()));
    return found;
}

} // namespace nonloc
