#pragma once

#include "ecalc/rational.hpp"

#include <optional>
#include <vector>

namespace ecalc {

/// Minimal dense rational matrix.  The exact layer only needs storage plus
/// the elimination routines below, so this deliberately stays a plain
/// container (Eigen is reserved for the floating-point side; its expression
/// machinery does not interoperate with multiprecision scalars on this
/// toolchain).
class RatMat {
public:
    RatMat() = default;
    RatMat(long rows, long cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}

    long rows() const { return rows_; }
    long cols() const { return cols_; }

    Rat& operator()(long i, long j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
    const Rat& operator()(long i, long j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

private:
    long rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

/// Row-echelon data produced by fraction-free (Bareiss) elimination.  Rows
/// are integer vectors: each input row is scaled by the LCM of its
/// denominators first, so every later division in the one-step elimination
/// is exact over the integers.
struct Echelon {
    std::vector<std::vector<Int>> rows; ///< echelon rows, one per pivot
    std::vector<long> pivot_cols;       ///< pivot column of each echelon row
    long rank = 0;
    long cols = 0;
};

/// Fraction-free forward elimination with column pivoting.
Echelon bareiss_echelon(const RatMat& m);

long exact_rank(const RatMat& m);

/// Basis of { x : M x = 0 }, one vector per free column.
std::vector<std::vector<Rat>> kernel_basis(const RatMat& m);

/// True if v lies in the column span of m.
bool in_column_span(const RatMat& m, const std::vector<Rat>& v);

/// Some x with M x = b, if the system is consistent (free variables are set
/// to zero).
std::optional<std::vector<Rat>> solve_columns(const RatMat& m, const std::vector<Rat>& b);

} // namespace ecalc
