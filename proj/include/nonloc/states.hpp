#pragma once

#include "nonloc/core.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nonloc {

/// Unnormalized integer amplitudes of one party's ket in the computational basis.
struct PartyVector {
    std::vector<Integer> amps;

    /// |index> in dimension `dim`.
    static PartyVector basis(std::size_t dim, std::size_t index);

    /// |first + sign*second>, sign = +1 or -1.
    static PartyVector superposed(std::size_t dim, std::size_t first, std::size_t second, int sign);

    std::size_t dim() const { return amps.size(); }
    bool is_zero() const;

    /// Indices with nonzero amplitude, ascending.
    std::vector<std::size_t> support() const;

    bool operator==(const PartyVector&) const = default;
};

Integer dot(const PartyVector& a, const PartyVector& b);

struct ProductState {
    std::vector<PartyVector> parties;
    std::string label;

    std::size_t party_count() const { return parties.size(); }
};

/// An ordered, validated collection of product states over fixed party dimensions.
///
/// Construction checks shapes, nonzero party vectors and label uniqueness.
/// Orthogonality is a separate check (verify_orthogonality), so that a
/// non-orthogonal file can still be loaded and reported on.
class StateSet {
public:
    StateSet(std::vector<std::size_t> dims, std::vector<ProductState> states, std::string family);

    std::size_t party_count() const { return dims_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<ProductState>& states() const { return states_; }
    const ProductState& operator[](std::size_t i) const { return states_[i]; }
    std::size_t size() const { return states_.size(); }
    const std::string& family() const { return family_; }

    std::optional<std::size_t> find(std::string_view label) const;

    /// States at the given indices, in the given order.
    StateSet subset(std::span<const std::size_t> indices, std::string family) const;

    /// States with the given labels; throws InputError on an unknown label.
    StateSet select(std::span<const std::string> labels, std::string family) const;

private:
    std::vector<std::size_t> dims_;
    std::vector<ProductState> states_;
    std::string family_;
};

// Built-in families. Every output is pairwise orthogonal.

/// 6(d-1)^2 states on C^d x C^d x C^d, labelled alpha:i=<i>:<k> and beta:i=<i>,j=<j>:<k>.
StateSet construct_tripartite(int d);

/// The 6(d-1) alpha states, a labelled subset of construct_tripartite(d).
StateSet construct_tripartite_core(int d);

/// The 81-state product basis of (C^3)^{x4}, labelled phi:1..48, psi:1..24, varphi:1..9.
StateSet construct_fourpartite();

/// "psi" (24 states), "phi" (48) or "varphi" (9).
StateSet construct_fourpartite_subset(std::string_view name);

StateSet construct_example_c66();
StateSet construct_example_c333();

/// Built-in family by selector: "tripartite:<d>", "tripartite-core:<d>",
/// "fourpartite", "fourpartite:psi|phi|varphi", "example:c66", "example:c333".
/// Selectors joined by '+' give the concatenation (same dimensions required).
/// Throws InputError on an unknown selector, DimensionError on a bad d.
StateSet construct_named(std::string_view selector);

/// Product of per-party integer dot products.
Integer inner_product(const ProductState& s, const ProductState& t);

struct OrthogonalityReport {
    bool ok = true;
    std::vector<std::pair<std::string, std::string>> violations;
};

OrthogonalityReport verify_orthogonality(const StateSet& set);

/// A party permutation together with one digit relabelling applied to every party.
///
/// party_perm[k] is the slot that party k's ket moves to; digit_perm[i] is the
/// new index of basis digit i.
struct Symmetry {
    std::vector<std::size_t> party_perm;
    std::vector<std::size_t> digit_perm;

    static Symmetry identity(std::size_t parties, std::size_t dim);
    /// Party k moves to slot k+1 (mod n), i.e. A->B->C->...->A.
    static Symmetry party_cycle(std::size_t parties, std::size_t dim);

    Symmetry inverse() const;
    bool operator==(const Symmetry&) const = default;
};

StateSet apply_symmetry(const StateSet& set, const Symmetry& sym);

/// True iff the image of `set` equals `set` as a set of rays.
bool is_invariant(const StateSet& set, const Symmetry& sym);

/// Every (party permutation, uniform digit permutation) leaving `set` invariant.
///
/// Digit permutations are restricted to automorphisms of the digit
/// co-occurrence graph (digits linked when they share the support of some
/// party vector). Any invariant symmetry is such an automorphism, so the
/// restriction only prunes the search.
std::vector<Symmetry> search_symmetries(const StateSet& set);

/// Canonical text key of the ray spanned by a product state.
std::string ray_key(const ProductState& s);

} // namespace nonloc
