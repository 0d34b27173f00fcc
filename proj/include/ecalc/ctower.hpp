#pragma once

#include "ecalc/eform.hpp"
#include "ecalc/numerics.hpp"

#include <map>
#include <string>
#include <vector>

namespace ecalc {

/// Ordered tuple of hyperplane indices (1-based coordinates) cut out so far;
/// the empty tuple is the ambient chart.  Reorderings name the same locus but
/// carry the sign of the permutation in all residue data.
using Stratum = std::vector<int>;

/// Local model of a self-crossing hypersurface: a coordinate box with a set of
/// singular coordinate hyperplanes and the tower of their intersections.
class CModel {
public:
    CModel(int dim, std::vector<int> hyperplanes);

    int dim() const { return dim_; }
    const std::vector<int>& hyperplanes() const { return hyperplanes_; }

    /// Ambient frame: x_i d/dx_i on the declared hyperplanes, d/dx_i elsewhere.
    const EFramePtr& frame() const { return stratum_frame({}); }

    /// Frame induced on the locus where the listed coordinates vanish; cached,
    /// and the order of the tuple does not matter for the frame itself.
    const EFramePtr& stratum_frame(const Stratum& s) const;

    /// Hyperplanes that still cut the given stratum, ascending.
    std::vector<int> remaining(const Stratum& s) const;

    /// All ordered tuples of distinct hyperplanes with the given length.
    std::vector<Stratum> ordered_strata(int level) const;

    /// 0-based ambient positions of the coordinates surviving on the stratum.
    std::vector<std::size_t> kept_positions(const Stratum& s) const;

    /// 1-based index of the generator of x_i d/dx_i in the stratum's frame.
    int frame_slot(const Stratum& s, int hyperplane) const;

private:
    std::vector<int> removed_set(const Stratum& s) const; // sorted, validated

    int dim_ = 0;
    std::vector<int> hyperplanes_;
    mutable std::map<std::vector<int>, EFramePtr> frames_;
};

/// Sign of the permutation sorting the tuple ascending (+1 or -1).
int stratum_sign(const Stratum& s);

/// Residue along {x_i = 0} of a genuine form on the given stratum: the
/// coefficient form of the x_i d/dx_i coframe factor, restricted to the child
/// stratum, with the contraction sign.
EForm residue(const CModel& m, const Stratum& s, const EForm& w, int hyperplane);

/// The same residue computed by contracting with (-1)^(p-1) x_i d/dx_i and
/// restricting; agrees with `residue` identically.
EForm residue_via_contraction(const CModel& m, const Stratum& s, const EForm& w, int hyperplane);

/// All iterated residues of one form, keyed by the ordered tuple of
/// hyperplanes crossed (first crossing first); the empty key is the form.
struct ResidueTower {
    int top_degree = 0;
    std::map<Stratum, EForm> entries;

    int levels() const; ///< deepest level reached
    std::map<Stratum, EForm> level(int k) const;
};

ResidueTower residue_tower(const CModel& m, const EForm& w);

/// Forms on every ordered stratum of one level.
using LevelAssignment = std::map<Stratum, EForm>;

struct CompatVerdict {
    bool compatible = true;
    std::string reason;
    Stratum witness;
    explicit operator bool() const { return compatible; }
};

/// A level-k assignment is compatible when reordering a tuple changes the
/// value by the sign of the permutation, and recursively: every form is
/// either smooth (each coefficient divisible by the singular coordinates its
/// basis tuple pairs with) or its residues form a compatible assignment one
/// level down.
CompatVerdict is_compatible(const CModel& m, int level, const LevelAssignment& a);

struct LevelInvariant {
    int level = 0;
    bool exact = false;           ///< bottom level: locally constant rational values
    std::vector<Stratum> strata;  ///< ordered strata, ascending
    std::vector<double> volumes;  ///< principal-value volumes per stratum (when !exact)
    std::vector<Rat> constants;   ///< constant values per stratum (when exact)
};

/// Per-level classes of a closed top-degree form on the box: the level-0
/// volume, principal-value volumes of the iterated residues, and the exact
/// constants where the tower bottoms out in 0-forms.
std::vector<LevelInvariant> decomposition_invariants(const CModel& m, const EForm& w,
                                                     const QuadratureOptions& opt = {});

/// One summand of an inverse residue: the ordered tuple of hyperplanes it
/// crosses (wedged innermost-last) and the coefficient form pulled back to
/// the base stratum.
struct PreimageBlock {
    Stratum tuple;
    Rat weight; ///< (-1)^(m+1) / m! for an m-fold crossing
    EForm lifted;
};

struct StratumPreimage {
    Stratum base;
    EForm form; ///< sum of weight * lifted ^ theta factors over all blocks
    std::vector<PreimageBlock> blocks;
};

/// Build, on the given base stratum, a form whose residue along every
/// remaining hyperplane j equals target[base + (j)].  The target must cover
/// those strata and be compatible; deeper coefficients are its own iterated
/// residues.
StratumPreimage res_preimage(const CModel& m, const Stratum& base, const LevelAssignment& target);

/// Preimages on all ordered strata of the given level at once.
LevelAssignment res_preimage_all(const CModel& m, int level, const LevelAssignment& target);

/// Odd flattening profile: t on [0,1/2], glued quadratically to the constant
/// 3/4 beyond |t| = 1; smooth replacement for the identity near the crossing.
double rho_odd(double t);

/// chi(t) = t * rho'(t) / rho(t): equals 1 on |t| <= 1/2 and 0 for |t| >= 1,
/// so chi(x)/x dx is a closed, compactly supported stand-in for dx/x.
double rho_chi(double t);

/// Evaluate the preimage of an ambient-chart base as an ordinary form in the
/// coordinate basis: every crossed factor dx_j/x_j is realized as the
/// mollified chi(x_j)/x_j dx_j, making the result globally defined.  Keys are
/// ascending coordinate index tuples.
std::map<IdxSet, double> preimage_eval_dx(const CModel& m, const StratumPreimage& pre,
                                          const std::vector<double>& point);

} // namespace ecalc
