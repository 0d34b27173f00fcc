#include "ecalc/linalg.hpp"

#include "ecalc/errors.hpp"

namespace ecalc {

namespace {

std::vector<std::vector<Int>> clear_denominators(const RatMat& m) {
    std::vector<std::vector<Int>> rows(static_cast<std::size_t>(m.rows()));
    for (long i = 0; i < m.rows(); ++i) {
        Int l = 1;
        for (long j = 0; j < m.cols(); ++j) l = lcm(l, denominator(m(i, j)));
        auto& row = rows[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(m.cols()));
        for (long j = 0; j < m.cols(); ++j)
            row[static_cast<std::size_t>(j)] = numerator(m(i, j)) * (l / denominator(m(i, j)));
    }
    return rows;
}

} // namespace

Echelon bareiss_echelon(const RatMat& m) {
    auto rows = clear_denominators(m);
    const long nr = m.rows(), nc = m.cols();
    Echelon e;
    e.cols = nc;
    Int prev = 1;
    long r = 0; // current elimination row
    for (long c = 0; c < nc && r < nr; ++c) {
        long piv = -1;
        for (long i = r; i < nr; ++i)
            if (rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[static_cast<std::size_t>(piv)], rows[static_cast<std::size_t>(r)]);
        const auto& prow = rows[static_cast<std::size_t>(r)];
        const Int p = prow[static_cast<std::size_t>(c)];
        for (long i = r + 1; i < nr; ++i) {
            auto& row = rows[static_cast<std::size_t>(i)];
            const Int q = row[static_cast<std::size_t>(c)];
            for (long j = c + 1; j < nc; ++j) {
                // one-step fraction-free update; division by the previous
                // pivot is exact (Sylvester identity)
                row[static_cast<std::size_t>(j)] =
                    (p * row[static_cast<std::size_t>(j)] - q * prow[static_cast<std::size_t>(j)]) / prev;
            }
            row[static_cast<std::size_t>(c)] = 0;
            for (long j = 0; j < c; ++j) row[static_cast<std::size_t>(j)] = 0;
        }
        e.pivot_cols.push_back(c);
        prev = p;
        ++r;
    }
    rows.resize(static_cast<std::size_t>(r));
    e.rows = std::move(rows);
    e.rank = r;
    return e;
}

long exact_rank(const RatMat& m) { return bareiss_echelon(m).rank; }

namespace {

/// Back-substitute the echelon system rows * x = rhs (rhs rational, one entry
/// per echelon row) with the given values preassigned to non-pivot columns.
std::vector<Rat> back_substitute(const Echelon& e, const std::vector<Rat>& rhs,
                                 const std::vector<Rat>& free_values) {
    std::vector<Rat> x(free_values);
    for (long r = e.rank - 1; r >= 0; --r) {
        const auto& row = e.rows[static_cast<std::size_t>(r)];
        const long pc = e.pivot_cols[static_cast<std::size_t>(r)];
        Rat acc = rhs[static_cast<std::size_t>(r)];
        for (long j = pc + 1; j < e.cols; ++j)
            if (row[static_cast<std::size_t>(j)] != 0)
                acc -= Rat(row[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(pc)] = acc / Rat(row[static_cast<std::size_t>(pc)]);
    }
    return x;
}

} // namespace

std::vector<std::vector<Rat>> kernel_basis(const RatMat& m) {
    Echelon e = bareiss_echelon(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (long pc : e.pivot_cols) is_pivot[static_cast<std::size_t>(pc)] = true;

    std::vector<std::vector<Rat>> basis;
    const std::vector<Rat> zero_rhs(static_cast<std::size_t>(e.rank), Rat(0));
    for (long f = 0; f < m.cols(); ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        std::vector<Rat> seed(static_cast<std::size_t>(m.cols()), Rat(0));
        seed[static_cast<std::size_t>(f)] = 1;
        basis.push_back(back_substitute(e, zero_rhs, seed));
    }
    return basis;
}

bool in_column_span(const RatMat& m, const std::vector<Rat>& v) {
    if (static_cast<long>(v.size()) != m.rows()) throw DomainError("in_column_span: size mismatch");
    RatMat aug(m.rows(), m.cols() + 1);
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = v[static_cast<std::size_t>(i)];
    }
    return exact_rank(aug) == exact_rank(m);
}

std::optional<std::vector<Rat>> solve_columns(const RatMat& m, const std::vector<Rat>& b) {
    if (static_cast<long>(b.size()) != m.rows()) throw DomainError("solve_columns: size mismatch");
    // Eliminate the augmented matrix, then check that no pivot lands in the
    // right-hand column.
    RatMat aug(m.rows(), m.cols() + 1);
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[static_cast<std::size_t>(i)];
    }
    Echelon e = bareiss_echelon(aug);
    std::vector<Rat> rhs;
    Echelon sys; // echelon restricted to the coefficient columns
    sys.cols = m.cols();
    for (long r = 0; r < e.rank; ++r) {
        const long pc = e.pivot_cols[static_cast<std::size_t>(r)];
        if (pc == m.cols()) return std::nullopt; // inconsistent
        auto row = e.rows[static_cast<std::size_t>(r)];
        rhs.push_back(Rat(row.back()));
        row.pop_back();
        sys.rows.push_back(std::move(row));
        sys.pivot_cols.push_back(pc);
    }
    sys.rank = static_cast<long>(sys.rows.size());
    const std::vector<Rat> zeros(static_cast<std::size_t>(m.cols()), Rat(0));
    return back_substitute(sys, rhs, zeros);
}

} // namespace ecalc
