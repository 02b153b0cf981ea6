#include "nonloc/partition.hpp"

#include <algorithm>

namespace nonloc {

Grouping Grouping::from_side(std::size_t parties, std::vector<std::size_t> side)
{
    if (parties < 2) throw ShapeError("a bipartition needs at least two parties");
    std::sort(side.begin(), side.end());
    if (std::adjacent_find(side.begin(), side.end()) != side.end()) throw ShapeError("repeated party in grouping");
    if (side.empty() || side.size() >= parties) throw ShapeError("measuring side must be a proper nonempty subset");
    if (side.back() >= parties) throw ShapeError("party index out of range");
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < parties; ++k)
        if (!std::binary_search(side.begin(), side.end(), k)) rest.push_back(k);
    return Grouping(parties, std::move(side), std::move(rest));
}

std::size_t Grouping::side_mask() const
{
    std::size_t mask = 0;
    for (auto k : side_) mask |= std::size_t{1} << k;
    return mask;
}

char party_name(std::size_t index)
{
    if (index >= 26) throw ShapeError("at most 26 named parties");
    return static_cast<char>('A' + index);
}

namespace {

std::string cell_name(const std::vector<std::size_t>& cell)
{
    std::string s;
    for (auto k : cell) s += party_name(k);
    return s;
}

} // namespace

std::string Grouping::cut_name() const
{
    const bool side_first = side_.front() == 0;
    const auto& a = side_first ? side_ : complement_;
    const auto& b = side_first ? complement_ : side_;
    return cell_name(a) + "|" + cell_name(b);
}

std::string Grouping::side_name() const { return cell_name(side_); }

std::vector<Grouping> enumerate_bipartitions(std::size_t parties)
{
    if (parties < 2) throw ShapeError("need at least two parties to bipartition");
    if (parties > 20) throw ShapeError("too many parties to enumerate");
    std::vector<Grouping> out;
    const std::size_t full = (std::size_t{1} << parties) - 1;
    for (std::size_t mask = 1; mask < full; ++mask) {
        std::vector<std::size_t> side;
        for (std::size_t k = 0; k < parties; ++k)
            if (mask >> k & 1U) side.push_back(k);
        out.push_back(Grouping::from_side(parties, std::move(side)));
    }
    return out;
}

std::vector<std::size_t> parse_party_cell(std::string_view text, std::size_t parties)
{
    std::vector<std::size_t> out;
    for (char c : text) {
        if (c < 'A' || c > 'Z') throw InputError("bad party name '" + std::string(1, c) + "'");
        auto k = static_cast<std::size_t>(c - 'A');
        if (k >= parties) throw InputError("party " + std::string(1, c) + " does not exist");
        out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw InputError("party listed twice in '" + std::string(text) + "'");
    return out;
}

Grouping parse_grouping(std::string_view cut, std::string_view side, std::size_t parties)
{
    auto bar = cut.find('|');
    if (bar == std::string_view::npos || cut.find('|', bar + 1) != std::string_view::npos)
        throw InputError("cut must have the form X|Y, got '" + std::string(cut) + "'");
    auto left = parse_party_cell(cut.substr(0, bar), parties);
    auto right = parse_party_cell(cut.substr(bar + 1), parties);
    if (left.empty() || right.empty()) throw InputError("both cells of a cut must be nonempty");
    if (left.size() + right.size() != parties) throw InputError("cut '" + std::string(cut) + "' does not cover every party");
    std::vector<std::size_t> all = left;
    all.insert(all.end(), right.begin(), right.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw InputError("cells of a cut overlap");
    if (side.empty()) return Grouping::from_side(parties, left);
    auto s = parse_party_cell(side, parties);
    if (s != left && s != right)
        throw InputError("side '" + std::string(side) + "' is not a cell of cut '" + std::string(cut) + "'");
    return Grouping::from_side(parties, s);
}

Grouping permute_grouping(const Grouping& g, std::span<const std::size_t> perm)
{
    if (perm.size() != g.party_count()) throw ShapeError("permutation size does not match party count");
    std::vector<std::size_t> side;
    for (auto k : g.side()) side.push_back(perm[k]);
    return Grouping::from_side(g.party_count(), std::move(side));
}

std::size_t composite_dim(std::span<const std::size_t> dims, std::span<const std::size_t> group)
{
    std::size_t d = 1;
    for (auto k : group) {
        if (k >= dims.size()) throw ShapeError("party index out of range");
        d *= dims[k];
    }
    return d;
}

CompositeVector group_state(const ProductState& s, std::span<const std::size_t> group)
{
    if (group.empty()) throw ShapeError("empty party group");
    CompositeVector out{1};
    std::size_t prev = s.parties.size();
    for (auto k : group) {
        if (k >= s.parties.size()) throw ShapeError("party index out of range");
        if (prev != s.parties.size() && k <= prev) throw ShapeError("party group must be strictly ascending");
        prev = k;
        const auto& v = s.parties[k].amps;
        CompositeVector next(out.size() * v.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i] == 0) continue;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (v[j] != 0) next[i * v.size() + j] = out[i] * v[j];
        }
        out = std::move(next);
    }
    return out;
}

std::vector<std::size_t> decode_index(std::size_t index, std::span<const std::size_t> dims,
                                      std::span<const std::size_t> group)
{
    std::vector<std::size_t> digits(group.size());
    for (std::size_t m = group.size(); m-- > 0;) {
        const auto d = dims[group[m]];
        digits[m] = index % d;
        index /= d;
    }
    if (index != 0) throw ShapeError("composite index out of range");
    return digits;
}

std::size_t encode_index(std::span<const std::size_t> digits, std::span<const std::size_t> dims,
                         std::span<const std::size_t> group)
{
    if (digits.size() != group.size()) throw ShapeError("digit count does not match group size");
    std::size_t index = 0;
    for (std::size_t m = 0; m < group.size(); ++m) {
        const auto d = dims[group[m]];
        if (digits[m] >= d) throw ShapeError("digit out of range");
        index = index * d + digits[m];
    }
    return index;
}

std::string index_name(std::size_t index, std::span<const std::size_t> dims, std::span<const std::size_t> group)
{
    bool wide = false;
    for (auto k : group) wide = wide || dims[k] > 10;
    std::string s;
    for (auto digit : decode_index(index, dims, group)) {
        if (wide && !s.empty()) s += '.';
        s += std::to_string(digit);
    }
    return s;
}

std::optional<std::size_t> parse_index_name(std::string_view text, std::span<const std::size_t> dims,
                                            std::span<const std::size_t> group)
{
    bool wide = false;
    for (auto k : group) wide = wide || dims[k] > 10;
    std::vector<std::string_view> parts;
    if (wide) {
        for (std::size_t start = 0;;) {
            auto dot = text.find('.', start);
            parts.push_back(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
            if (dot == std::string_view::npos) break;
            start = dot + 1;
        }
    } else {
        for (std::size_t i = 0; i < text.size(); ++i) parts.push_back(text.substr(i, 1));
    }
    if (parts.size() != group.size()) return std::nullopt;
    std::vector<std::size_t> digits;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].empty() || parts[i].size() > 3) return std::nullopt;
        std::size_t v = 0;
        for (char c : parts[i]) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + static_cast<std::size_t>(c - '0');
        }
        if (v >= dims[group[i]]) return std::nullopt;
        digits.push_back(v);
    }
    return encode_index(digits, dims, group);
}

Integer partial_overlap(const ProductState& s, const ProductState& t, std::span<const std::size_t> group)
{
    Integer acc = 1;
    for (auto k : group) {
        if (k >= s.parties.size() || k >= t.parties.size()) throw ShapeError("party index out of range");
        acc *= dot(s.parties[k], t.parties[k]);
        if (acc == 0) break;
    }
    return acc;
}

} // namespace nonloc
