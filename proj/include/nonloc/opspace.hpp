#pragma once

#include "nonloc/linalg.hpp"
#include "nonloc/partition.hpp"
#include "nonloc/states.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nonloc {

/// Entries (p, q) of a D x D operator, flattened as p * D + q.
struct OperatorUnknowns {
    std::size_t dim = 0;

    std::size_t count() const { return dim * dim; }
    std::size_t column(std::size_t p, std::size_t q) const { return p * dim + q; }
    std::size_t row_of(std::size_t column) const { return column / dim; }
    std::size_t col_of(std::size_t column) const { return column % dim; }
};

/// Ordered pair of state indices behind one constraint row.
struct PairTag {
    std::size_t first;
    std::size_t second;
};

/// Linear constraints <x_i| M |x_j> = 0 on the measuring side, one row per
/// ordered pair i != j whose complement-side overlap is nonzero.
struct ConstraintSystem {
    Grouping grouping;
    OperatorUnknowns unknowns;
    SparseMatrix rows;
    std::vector<PairTag> provenance;
};

/// Dense square rational matrix, row-major.
class RationalMatrix {
public:
    explicit RationalMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    static RationalMatrix identity(std::size_t dim);
    static RationalMatrix from_vector(std::size_t dim, const RationalVector& v);

    std::size_t dim() const { return dim_; }
    Rational& at(std::size_t p, std::size_t q) { return data_[p * dim_ + q]; }
    const Rational& at(std::size_t p, std::size_t q) const { return data_[p * dim_ + q]; }
    const RationalVector& flat() const { return data_; }

    RationalMatrix transpose() const;
    bool is_zero() const;
    /// True iff the matrix is c * identity for some c (including c = 0).
    bool is_scalar() const;
    Rational trace() const;

    bool operator==(const RationalMatrix&) const = default;

private:
    std::size_t dim_;
    RationalVector data_;
};

struct OpSpaceStats {
    std::size_t rows_emitted = 0;
    std::size_t rows_after_dedup = 0;
    double elapsed_ms = 0.0;
};

struct OpSpaceReport {
    Grouping grouping;
    std::size_t dim = 0; // dimension of the solution space
    bool trivial = false;
    std::vector<RationalMatrix> basis;
    std::optional<RationalMatrix> witness;
    OpSpaceStats stats;
};

/// Composite dimension of the measuring side.
std::size_t side_dim(const StateSet& set, const Grouping& g);

ConstraintSystem build_constraints(const StateSet& set, const Grouping& g);

/// Solution space of build_constraints(set, g), reshaped into D x D matrices.
OpSpaceReport solve(const StateSet& set, const Grouping& g);

/// True iff <x_i| M |x_j> * w_ij = 0 for every ordered pair i != j.
bool check_solution(const StateSet& set, const Grouping& g, const RationalMatrix& m);

/// Traceless, non-scalar element of a nontrivial solution space, scaled to a
/// primitive integer matrix whose first nonzero entry is positive.
std::optional<RationalMatrix> extract_witness(const OpSpaceReport& report);

/// True iff m lies in the span of `basis` (exact).
bool in_span(const std::vector<RationalMatrix>& basis, const RationalMatrix& m);

} // namespace nonloc
