#pragma once

#include "ecalc/eframe.hpp"

#include <map>
#include <string>
#include <vector>

namespace ecalc {

/// 1-based, strictly increasing tuple of frame indices (matches the printed
/// theta superscripts and the JSON documents).
using IdxSet = std::vector<int>;

/// Shuffle sign merging two disjoint increasing tuples into `merged`;
/// returns 0 when they share an index.
int merge_indices(const IdxSet& a, const IdxSet& b, IdxSet& merged);

/// Differential form expressed in the frame coframe basis: a map from
/// strictly increasing index tuples to coefficient functions.  A genuine
/// section has polynomial coefficients; quotient coefficients mark the form
/// as "extended" (they appear when singular ambient expressions are pulled
/// into the frame basis).  Wedge products may carry a formal degree above
/// the frame rank; such forms are identically zero.
class EForm {
public:
    EForm(EFramePtr frame, int degree);

    static EForm zero(EFramePtr frame, int degree) { return EForm(std::move(frame), degree); }
    static EForm scalar(EFramePtr frame, SingFunc f);
    /// Basis form theta^{i1} ^ ... ^ theta^{ip} for increasing 1-based indices.
    static EForm theta(EFramePtr frame, IdxSet idx);

    const EFramePtr& frame() const { return frame_; }
    int degree() const { return degree_; }
    const std::map<IdxSet, SingFunc>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    /// True when some coefficient is a genuine quotient.
    bool extended() const;

    /// Coefficient of the basis tuple (zero when absent).
    SingFunc coeff(const IdxSet& idx) const;
    void set_coeff(const IdxSet& idx, SingFunc f);
    void add_coeff(const IdxSet& idx, const SingFunc& f);

    /// omega(V_{i1}, ..., V_{ip}) on generators in any order: signed
    /// coefficient lookup, zero on a repeated index.
    SingFunc value_on(const std::vector<int>& idx) const;

    EForm operator-() const;
    EForm operator+(const EForm& o) const;
    EForm operator-(const EForm& o) const;
    EForm operator*(const SingFunc& f) const;
    EForm operator*(const Rat& c) const;
    bool operator==(const EForm& o) const;
    bool operator!=(const EForm& o) const { return !(*this == o); }

    std::string str() const;

private:
    void check_key(const IdxSet& idx) const;

    EFramePtr frame_;
    int degree_ = 0;
    std::map<IdxSet, SingFunc> terms_;
};

inline EForm operator*(const SingFunc& f, const EForm& w) { return w * f; }
inline EForm operator*(const Rat& c, const EForm& w) { return w * c; }

EForm wedge(const EForm& a, const EForm& b);

/// Exterior derivative in the frame basis:
///   d(f theta_I) = sum_k V_k(f) theta^k ^ theta_I + f d(theta_I),
/// with d(theta^k) = -1/2 sum_{ij} c^k_{ij} theta^i ^ theta^j.
EForm ederiv(const EForm& w);

/// Contraction with a section X = sum_k X[k] e_k given by its frame
/// components; degree-0 input contracts to zero.
EForm interior(const std::vector<SingFunc>& X, const EForm& w);

/// Cartan formula d(i_X w) + i_X(d w).
EForm lie_derivative(const std::vector<SingFunc>& X, const EForm& w);

/// Grid used by the numeric nondegeneracy fallback: a uniform lattice on
/// [lo, hi]^dim, skipping points within locus_tol of a declared singular
/// component.
struct GridOptions {
    int points_per_axis = 17;
    double lo = -1.0;
    double hi = 1.0;
    double tol = 1e-9;
    double locus_tol = 1e-7;
};

enum class NondegKind {
    symbolic_unit,        ///< pairing determinant is a nonzero constant
    numeric_nonvanishing, ///< nonconstant but bounded away from zero on the grid
    degenerate,           ///< vanishes (witness point recorded)
    structural_odd        ///< odd rank: alternating pairing is always singular
};

struct NondegVerdict {
    NondegKind kind = NondegKind::degenerate;
    SingFunc det;                ///< determinant of [w(e_i, e_j)]
    long samples = 0;            ///< grid points actually tested
    double min_abs_det = 0.0;    ///< smallest |det| seen on the grid
    std::vector<double> witness; ///< point realizing a vanishing determinant
};

/// Pairing matrix W_{ij} = w(e_i, e_j) of a degree-2 form.
std::vector<std::vector<SingFunc>> pairing_matrix(const EForm& w);

/// Laplace-expansion determinant for small quotient matrices.
SingFunc singfunc_matrix_det(const std::vector<std::vector<SingFunc>>& m);

NondegVerdict nondeg_check(const EForm& w, const GridOptions& opt = {});

} // namespace ecalc
