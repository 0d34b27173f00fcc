#pragma once

#include "ecalc/eform.hpp"
#include "ecalc/multivec.hpp"

#include <string>
#include <vector>

namespace ecalc {

/// Rational change of coordinates into another chart, defined on the half
/// box where `domain_sign * x[domain_var] > 0`.
struct Transition {
    std::string to;
    std::size_t domain_var = 0;
    int domain_sign = 1;
    std::vector<SingFunc> map; ///< target coordinates as functions of source ones
};

struct Chart {
    std::string name;
    EFramePtr frame;
    double box_lo = -1.0;
    double box_hi = 1.0;
    std::vector<VectorField> fields; ///< the atlas-wide fields in chart coordinates
    MultiVec pi;                     ///< the structure bivector, frame basis
    std::vector<Transition> transitions;
};

struct Atlas {
    std::string id;
    std::vector<Chart> charts;
    const Chart& chart(const std::string& name) const;
};

/// The ten projective-style charts on the unit 4-sphere, each carrying the
/// five scaling fields v_1..v_5 and the bivector
/// (v1+v2)^(v2+v3) + (v3+v4)^(v4+v5).
Atlas gallery_s4();

struct S4Report {
    bool fields_commute = false;    ///< [v_a, v_b] = 0 in every chart, exact
    bool relation_holds = false;    ///< v_1 + ... + v_5 = 0 in every chart, exact
    bool bracket_closes = false;    ///< [pi, pi] = 0 in every chart, exact
    bool wedge_identity = false;    ///< pi^pi = 2 * sum of hatted 4-vectors, exact
    bool expansion_matches = false; ///< reference six-term expansion on U1+/U1-
    bool nondegenerate = false;     ///< dual form grid check off the locus
    double min_abs_det = 0.0;       ///< smallest |det| seen on the grid
    bool transitions_consistent = false; ///< round trips and triple loops, 1e-10
    std::string expansion_diff;     ///< term-level mismatches, empty when equal
    bool ok = false;
    std::string text;               ///< one line per check
};

/// Run every chart-level check of the sphere atlas.  `grid` points per axis
/// (odd counts skip the hyperplanes automatically), |det| threshold `tol`.
S4Report s4_verify(int grid = 9, double tol = 1e-9);

/// Named worked examples shared by the command-line driver and the tests.
struct MoserExample {
    EFramePtr frame;
    EForm w0, w1, mu;
};

/// dx/x ^ dy/y ^ dz/z on the three-axis model.
EForm gallery_xyz3_form();
/// k * dx/x ^ dy/y on the two-axis model.
EForm gallery_nodarboux_form(const Rat& k);
/// dx/x ^ dy, 2 dx/x ^ dy and the primitive -y dx/x on the half-plane model.
MoserExample gallery_b_worked();

std::vector<std::string> gallery_ids();
std::string gallery_describe(const std::string& id);

} // namespace ecalc
