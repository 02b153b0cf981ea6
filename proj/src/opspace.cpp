#include "nonloc/opspace.hpp"

#include <chrono>

namespace nonloc {

RationalMatrix RationalMatrix::identity(std::size_t dim)
{
    RationalMatrix m(dim);
    for (std::size_t p = 0; p < dim; ++p) m.at(p, p) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_vector(std::size_t dim, const RationalVector& v)
{
    if (v.size() != dim * dim) throw ShapeError("vector length is not dim^2");
    RationalMatrix m(dim);
    m.data_ = v;
    return m;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(dim_);
    for (std::size_t p = 0; p < dim_; ++p)
        for (std::size_t q = 0; q < dim_; ++q) t.at(q, p) = at(p, q);
    return t;
}

bool RationalMatrix::is_zero() const
{
    for (const auto& x : data_)
        if (x != 0) return false;
    return true;
}

bool RationalMatrix::is_scalar() const
{
    for (std::size_t p = 0; p < dim_; ++p)
        for (std::size_t q = 0; q < dim_; ++q) {
            if (p != q && at(p, q) != 0) return false;
            if (p == q && at(p, p) != at(0, 0)) return false;
        }
    return true;
}

Rational RationalMatrix::trace() const
{
    Rational t = 0;
    for (std::size_t p = 0; p < dim_; ++p) t += at(p, p);
    return t;
}

namespace {

using SparseVec = std::vector<std::pair<std::size_t, Integer>>;

void check_shape(const StateSet& set, const Grouping& g)
{
    if (g.party_count() != set.party_count())
        throw ShapeError("grouping over " + std::to_string(g.party_count()) + " parties applied to a " +
                         std::to_string(set.party_count()) + "-party set");
}

std::vector<SparseVec> side_vectors(const StateSet& set, const Grouping& g)
{
    std::vector<SparseVec> out;
    out.reserve(set.size());
    for (const auto& s : set.states()) {
        auto full = group_state(s, g.side());
        SparseVec v;
        for (std::size_t p = 0; p < full.size(); ++p)
            if (full[p] != 0) v.emplace_back(p, full[p]);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

std::size_t side_dim(const StateSet& set, const Grouping& g)
{
    check_shape(set, g);
    return composite_dim(set.dims(), g.side());
}

ConstraintSystem build_constraints(const StateSet& set, const Grouping& g)
{
    const std::size_t dim = side_dim(set, g);
    if (set.size() == 0) throw InputError("cannot build constraints for an empty set");
    OperatorUnknowns unknowns{dim};
    ConstraintSystem sys{g, unknowns, SparseMatrix(unknowns.count()), {}};
    const auto x = side_vectors(set, g);

    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            if (i == j) continue;
            if (partial_overlap(set[i], set[j], g.complement()) == 0) continue;
            SparseRow row;
            row.entries.reserve(x[i].size() * x[j].size());
            for (const auto& [p, a] : x[i])
                for (const auto& [q, b] : x[j]) row.entries.emplace_back(unknowns.column(p, q), a * b);
            sys.rows.add_row(std::move(row));
            sys.provenance.push_back({i, j});
        }
    }
    return sys;
}

OpSpaceReport solve(const StateSet& set, const Grouping& g)
{
    const auto start = std::chrono::steady_clock::now();
    auto sys = build_constraints(set, g);
    auto elim = eliminate(sys.rows);

    OpSpaceReport report{g, elim.basis.size(), false, {}, std::nullopt, {}};
    for (const auto& v : elim.basis) report.basis.push_back(RationalMatrix::from_vector(sys.unknowns.dim, v));
    report.trivial = report.dim == 1;
    report.witness = extract_witness(report);
    report.stats.rows_emitted = elim.rows_in;
    report.stats.rows_after_dedup = elim.rows_after_dedup;
    report.stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

bool check_solution(const StateSet& set, const Grouping& g, const RationalMatrix& m)
{
    const std::size_t dim = side_dim(set, g);
    if (m.dim() != dim)
        throw ShapeError("operator is " + std::to_string(m.dim()) + "x" + std::to_string(m.dim()) + ", expected " +
                         std::to_string(dim) + "x" + std::to_string(dim));
    const auto x = side_vectors(set, g);
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            if (i == j || partial_overlap(set[i], set[j], g.complement()) == 0) continue;
            Rational acc = 0;
            for (const auto& [p, a] : x[i])
                for (const auto& [q, b] : x[j])
                    if (m.at(p, q) != 0) acc += a * b * m.at(p, q);
            if (acc != 0) return false;
        }
    }
    return true;
}

std::optional<RationalMatrix> extract_witness(const OpSpaceReport& report)
{
    if (report.dim <= 1) return std::nullopt;
    for (const auto& b : report.basis) {
        if (b.is_scalar()) continue;
        const std::size_t dim = b.dim();
        RationalMatrix w = b;
        const Rational mean = b.trace() / static_cast<unsigned long>(dim);
        for (std::size_t p = 0; p < dim; ++p) w.at(p, p) -= mean;

        Integer den = 1, num = 0;
        for (const auto& x : w.flat()) {
            if (x == 0) continue;
            den = lcm(den, x.get_den());
            num = gcd(num, x.get_num());
        }
        Rational scale(den, num);
        for (const auto& x : w.flat())
            if (x != 0) {
                if (x < 0) scale = -scale;
                break;
            }
        scale.canonicalize();
        for (std::size_t p = 0; p < dim; ++p)
            for (std::size_t q = 0; q < dim; ++q) w.at(p, q) *= scale;
        return w;
    }
    return std::nullopt;
}

bool in_span(const std::vector<RationalMatrix>& basis, const RationalMatrix& m)
{
    if (m.is_zero()) return true;
    std::vector<RationalVector> rows;
    for (const auto& b : basis) {
        if (b.dim() != m.dim()) throw ShapeError("basis and matrix dimensions differ");
        rows.push_back(b.flat());
    }
    const auto r = rank_dense(rows);
    rows.push_back(m.flat());
    return rank_dense(std::move(rows)) == r;
}

} // namespace nonloc
