#pragma once

#include "ecalc/singfunc.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ecalc {

/// Vector field in ambient coordinates: one component per chart variable.
struct VectorField {
    std::vector<SingFunc> comp;

    bool operator==(const VectorField& o) const { return comp == o.comp; }
};

/// Derivation action V(f).
SingFunc apply_vf(const VectorField& v, const SingFunc& f);

/// Lie bracket [v, w] in ambient coordinates.
VectorField vf_bracket(const VectorField& v, const VectorField& w);

/// Result of expanding pairwise brackets in a generating set.  When ok,
/// c[i][j][k] are the structure functions: [V_i, V_j] = sum_k c[i][j][k] V_k,
/// antisymmetric in (i, j).
struct InvolutivityResult {
    bool ok = false;
    std::string reason;
    long generic_rank = 0; ///< rank of the coefficient matrix over the fraction field
    std::vector<std::vector<std::vector<SingFunc>>> c;
};

/// Try to express all pairwise brackets of polynomial generators back in the
/// generators, with polynomial coefficient functions of total degree at most
/// degree_bound (a negative bound picks deg(bracket) + max generator degree).
/// Dependent generator sets are allowed here; the solve sets free variables
/// to zero, so ([d/dx, x d/dx]) resolves to 1 * (d/dx).  Frame construction,
/// which needs local freeness, is where a dependent set becomes an error.
InvolutivityResult check_involutive(const std::vector<VectorField>& gens, int degree_bound = -1);

/// A frame of generators for a locally free involutive module of vector
/// fields on a coordinate box.  Construction always verifies the structure
/// functions (brackets reproduce exactly), and that every generator is
/// tangent to each declared singular-locus component.
class EFrame {
public:
    static EFrame full(int n);
    static EFrame b(int n);
    static EFrame bk(int n, unsigned k);
    /// Coordinate model with x_i d/dx_i on the listed hyperplanes (1-based
    /// variable indices) and plain d/dx_i elsewhere.
    static EFrame c_model(int n, std::vector<int> hyperplanes);
    /// Radial + rotational pair on the first two variables, translations on
    /// the rest; the singular set is the origin of the (x, y) plane, carried
    /// by the defining function x^2 + y^2.
    static EFrame elliptic(int n = 2);
    /// Tangential frame d/dx_i for i in `tangent` (rank below dim).
    static EFrame foliation(int n, std::vector<int> tangent);
    static EFrame custom(std::vector<std::string> vars, std::vector<VectorField> gens,
                         std::vector<Poly> singular_factors, std::vector<Poly> z_locus,
                         int degree_bound = -1);

    int dim() const { return static_cast<int>(vars_.size()); }
    int rank() const { return static_cast<int>(gen_.size()); }
    const std::vector<std::string>& vars() const { return vars_; }
    const std::string& kind() const { return kind_; }
    const std::vector<VectorField>& generators() const { return gen_; }
    const std::vector<Poly>& singular_factors() const { return singular_; }
    const std::vector<Poly>& z_locus() const { return z_locus_; }

    /// Structure function c^k_{ij} with [V_i, V_j] = sum_k c^k_{ij} V_k.
    const SingFunc& c(int i, int j, int k) const;
    bool commuting() const { return commuting_; }

    SingFunc apply_generator(std::size_t k, const SingFunc& f) const;

    /// Generator components as an r x n polynomial matrix (rows are
    /// generators).
    std::vector<std::vector<Poly>> anchor() const;

    /// Dual coframe: row k gives theta^k = sum_i A[k][i] dx_i, characterized
    /// by <theta^k, V_l> = delta_kl.  Requires rank == dim and the anchor
    /// determinant to factor over the declared singular set.
    std::vector<std::vector<SingFunc>> coframe_in_dx() const;

    bool operator==(const EFrame& o) const;
    bool operator!=(const EFrame& o) const { return !(*this == o); }

private:
    EFrame() = default;
    void finalize(int degree_bound); // verify involutivity + tangency

    std::vector<std::string> vars_;
    std::vector<VectorField> gen_;
    std::vector<Poly> singular_;
    std::vector<Poly> z_locus_;
    std::vector<std::vector<std::vector<SingFunc>>> c_;
    std::string kind_ = "custom";
    bool commuting_ = true;
};

using EFramePtr = std::shared_ptr<const EFrame>;

/// Named standard frames for the command line ("full2", "b2", "elliptic",
/// "c2", ...): kind name optionally followed by the dimension.
EFramePtr frame_by_name(const std::string& name);

/// Generic rank of a polynomial matrix over the fraction field, by
/// fraction-free elimination (divisions are exact by the Sylvester
/// identity).
long poly_matrix_rank(std::vector<std::vector<Poly>> m);

/// Determinant of a square polynomial matrix (fraction-free elimination).
Poly poly_matrix_det(std::vector<std::vector<Poly>> m);

} // namespace ecalc
