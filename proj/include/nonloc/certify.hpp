#pragma once

#include "nonloc/opspace.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace nonloc {

/// Raised when certification is asked for on a set that is not orthogonal.
class NonOrthogonalError : public InputError {
public:
    explicit NonOrthogonalError(std::vector<std::pair<std::string, std::string>> violations);
    const std::vector<std::pair<std::string, std::string>>& violations() const { return violations_; }

private:
    std::vector<std::pair<std::string, std::string>> violations_;
};

struct Verdict {
    std::string family;
    std::vector<OpSpaceReport> results; // one per grouping, in request order
    bool certified = false;             // every requested grouping trivial
    bool all_groupings = false;         // the request covered all 2^n - 2 groupings

    std::vector<const OpSpaceReport*> failing() const;
};

/// Solves every grouping of enumerate_bipartitions(n). `jobs` bounds the
/// number of groupings solved concurrently; results keep grouping order.
Verdict strong_nonlocality(const StateSet& set, unsigned jobs = 1);

/// Same, restricted to the given groupings.
Verdict certify_groupings(const StateSet& set, const std::vector<Grouping>& groupings, unsigned jobs = 1);

enum class FactKind { EntryZero, DiagEqual };

/// One derivation step. EntryZero lists operator entries (p, q) proven zero;
/// DiagEqual lists diagonal entries (p, p) proven equal to one another.
struct Fact {
    FactKind kind;
    std::vector<std::pair<std::size_t, std::size_t>> entries;
    std::vector<std::pair<std::string, std::string>> evidence; // state-label pairs of the rows used
};

struct Certificate {
    Grouping grouping;
    std::size_t dim = 0; // measuring-side dimension D
    std::vector<Fact> facts;
    bool saturated = false; // every off-diagonal zero and all diagonals equal
};

/// Fixpoint propagation over template families.
///
/// States are grouped into templates (sign siblings, identified by equal
/// per-party supports). A family is every constraint row between two
/// templates, or within one. Each pass restricts a family's rows to the
/// entries still unknown (known zeros dropped, equal diagonals merged) and
/// reads off, per connected block, the entries forced to zero and the
/// diagonal entries forced equal. Passes repeat until nothing changes.
Certificate derive_certificate(const StateSet& set, const Grouping& g);

/// True iff every fact holds on every basis element of solve(set, g) and the
/// saturated flag matches the facts (and implies a trivial solution space).
bool check_certificate(const Certificate& cert, const StateSet& set, const Grouping& g);

/// What the constraint rows among a chosen group of states prove on their own,
/// given entries already known to be zero.
struct LocalDerivation {
    std::set<std::pair<std::size_t, std::size_t>> zeros;      // newly forced off-diagonal zeros
    std::vector<std::vector<std::size_t>> diagonal_classes;   // diagonal indices forced equal (size >= 2)
};

LocalDerivation derive_local(const StateSet& set, const Grouping& g, const std::vector<std::size_t>& states,
                             const std::set<std::pair<std::size_t, std::size_t>>& known_zero);

/// All entries a certificate proves zero.
std::set<std::pair<std::size_t, std::size_t>> proven_zeros(const Certificate& cert);

/// "p,q" with composite digit names, e.g. "01,20".
std::string entry_name(const StateSet& set, const Grouping& g, std::size_t p, std::size_t q);

} // namespace nonloc
