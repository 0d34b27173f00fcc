#pragma once

#include "ecalc/multivec.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ecalc {

enum class ComplexKind {
    e_forms,     ///< frame-coframe de Rham complex, differential ederiv
    lichnerowicz ///< ambient multivector complex, differential [P, .]
};

/// Uniform coefficient-degree shift of the coframe differential, when it
/// exists: every generator's nonzero components are homogeneous polynomials
/// of one degree per generator, all generators share the same shift
/// (degree - 1), and every structure function is zero or homogeneous of that
/// shift.  Returns nullopt when the differential mixes degrees (the graded
/// engine then falls back to the truncated band mode).
std::optional<int> e_grading_shift(const EFramePtr& frame);

/// Shift of [P, .] on polynomial multivectors: defined when every
/// coefficient of P is homogeneous of one common degree m; the bracket then
/// shifts coefficient degree by m - 1.
std::optional<int> lichnerowicz_grading_shift(const MultiVec& p);

/// One cohomology class found by the engine.  The representative lives in
/// e_reps / p_reps of the owning report at the same position.
struct CohomClass {
    int level = 0;
    int coeff_degree = 0; ///< -1 in truncated mode (whole band <= N)
    std::string rep;      ///< rendered representative
};

struct GradedCohomReport {
    ComplexKind kind = ComplexKind::e_forms;
    std::string subject;  ///< frame kind or bivector, for printing
    bool graded = true;   ///< false: truncated band mode was used
    int shift = 0;        ///< degree shift of the differential (graded mode)
    int max_degree = 0;   ///< coefficient-degree band actually computed
    std::string warning;  ///< coverage caveats
    /// (level, coeff degree) -> dim; zero blocks omitted.  In truncated mode
    /// the degree key is -1 (one aggregate entry per level).
    std::map<std::pair<int, int>, long> dims;
    std::vector<long> totals; ///< per level, all computed degrees summed
    std::vector<CohomClass> classes;
    std::vector<EForm> e_reps;    ///< representatives (e_forms kind)
    std::vector<MultiVec> p_reps; ///< representatives (lichnerowicz kind)
};

/// Cohomology of the polynomial coframe complex through coefficient degree
/// max_degree: exact rational ranks block-by-block in graded mode, or the
/// degree band <= max_degree with image drawn from degree <= max_degree + 1
/// otherwise (complete for the band, since the differential lowers degree by
/// at most one).
GradedCohomReport e_cohomology(const EFramePtr& frame, int max_degree);

/// Cohomology of polynomial multivectors under [P, .] for a Poisson P with
/// polynomial coefficients, organized as in e_cohomology.
GradedCohomReport poisson_cohomology(const MultiVec& p, int max_degree);

/// The quadratic structure (x^2 + y^2) d/dx ^ d/dy on the plane: the dual
/// bivector of the elliptic frame's standard area form.
MultiVec plane_elliptic_poisson();

struct CompareReport {
    GradedCohomReport e;
    GradedCohomReport p;
    /// per level k = 0, 1, 2: (coframe-complex dim, bivector-complex dim)
    std::vector<std::pair<long, long>> level_dims;
    bool distinct_at_two = false;
    std::string text; ///< human-readable summary
};

/// Run both engines over the elliptic plane model and report where the two
/// graded theories agree and where they part ways (level 2).
CompareReport compare_e_vs_poisson(const EFramePtr& frame, int max_degree = 12);

} // namespace ecalc
