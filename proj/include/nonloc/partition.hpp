#pragma once

#include "nonloc/states.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nonloc {

/// A bipartition of the parties together with the cell that carries the measurement.
///
/// `side` and `complement` are ascending, disjoint, nonempty and cover 0..n-1.
class Grouping {
public:
    static Grouping from_side(std::size_t parties, std::vector<std::size_t> side);

    std::size_t party_count() const { return parties_; }
    const std::vector<std::size_t>& side() const { return side_; }
    const std::vector<std::size_t>& complement() const { return complement_; }

    /// Bit k set iff party k is on the measuring side.
    std::size_t side_mask() const;

    /// Cut in "A|BC" form: the cell holding party A first, each cell ascending.
    std::string cut_name() const;
    /// Measuring side, e.g. "BC".
    std::string side_name() const;

    bool operator==(const Grouping&) const = default;

private:
    Grouping(std::size_t parties, std::vector<std::size_t> side, std::vector<std::size_t> complement)
        : parties_(parties), side_(std::move(side)), complement_(std::move(complement)) {}

    std::size_t parties_;
    std::vector<std::size_t> side_;
    std::vector<std::size_t> complement_;
};

/// All 2^n - 2 ordered groupings, by side bitmask ascending.
std::vector<Grouping> enumerate_bipartitions(std::size_t parties);

char party_name(std::size_t index);

/// Parties named by letters, e.g. "AC" -> {0, 2}; sorted, duplicates rejected.
std::vector<std::size_t> parse_party_cell(std::string_view text, std::size_t parties);

/// Parses a cut such as "AB|C" together with the measuring side ("AB").
/// An empty side selects the first cell of the cut.
Grouping parse_grouping(std::string_view cut, std::string_view side, std::size_t parties);

/// Image of a grouping when party k is moved to slot perm[k].
Grouping permute_grouping(const Grouping& g, std::span<const std::size_t> perm);

using CompositeVector = std::vector<Integer>;

/// Product of the dimensions of the listed parties.
std::size_t composite_dim(std::span<const std::size_t> dims, std::span<const std::size_t> group);

/// Kronecker product of the group's party vectors; |i>|j> maps to i*d_q + j.
CompositeVector group_state(const ProductState& s, std::span<const std::size_t> group);

/// Digits of a composite index, one per group member.
std::vector<std::size_t> decode_index(std::size_t index, std::span<const std::size_t> dims,
                                      std::span<const std::size_t> group);

std::size_t encode_index(std::span<const std::size_t> digits, std::span<const std::size_t> dims,
                         std::span<const std::size_t> group);

/// Digit string of a composite index ("012"); digits are dot-separated when a
/// member dimension exceeds 10.
std::string index_name(std::size_t index, std::span<const std::size_t> dims, std::span<const std::size_t> group);

/// Inverse of index_name; nullopt when the text has the wrong arity or a digit out of range.
std::optional<std::size_t> parse_index_name(std::string_view text, std::span<const std::size_t> dims,
                                            std::span<const std::size_t> group);

/// Product of the per-party overlaps over `group`.
Integer partial_overlap(const ProductState& s, const ProductState& t, std::span<const std::size_t> group);

} // namespace nonloc
