#pragma once

#include "ecalc/eform.hpp"

#include <functional>
#include <vector>

namespace ecalc {

/// Regularized-volume quadrature settings: the excluded neighborhood
/// shrinks through eps = 2^-j for j in [eps_pow_min, eps_pow_max].
struct QuadratureOptions {
    int eps_pow_min = 3;
    int eps_pow_max = 12;
    int order = 20;          ///< Gauss-Legendre points per panel
    int smooth_panels = 4;   ///< fixed subdivision on nonsingular axes
    double tolerance = 1e-6; ///< convergence threshold on the Richardson tail
    bool require_convergence = true;
};

struct QuadratureReport {
    double value = 0.0; ///< Richardson-extrapolated limit
    double error_estimate = 0.0;
    bool converged = false;
    std::vector<double> eps;      ///< schedule actually used
    std::vector<double> partial;  ///< integral over the box minus each U_eps
    std::vector<double> diagonal; ///< Richardson table diagonal
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Principal-value volume of a top-degree form on the unit box [-1,1]^n:
/// tensor-product Gauss quadrature outside the symmetric neighborhood
/// U_eps = union {|x_i| < eps} of the singular hyperplanes, extrapolated in
/// eps.  The frame must be a coordinate-hyperplane model (diagonal
/// monomial generators), and the coefficient's denominator factors must lie
/// among the frame's singular coordinates.
QuadratureReport liouville_volume(const EForm& w, const QuadratureOptions& opt = {});

/// Exact oracle for the same limit: peel each singular coordinate with the
/// split f = f|_{x=0} + x g; the constant term integrates to zero by
/// symmetry and the remainder is an ordinary polynomial integral.
Rat liouville_exact(const EForm& w);

struct IndependenceReport {
    QuadratureReport standard_run;
    QuadratureReport modified_run;
    double difference = 0.0;
};

/// Recompute the regularized volume with one hyperplane's neighborhood
/// defined by |h_alt| < eps instead of |x_i| < eps, and report the
/// difference of the two limits.  h_alt must equal x_i * u with u a
/// polynomial in the other variables, nonvanishing on the box.
IndependenceReport defining_function_independence(const EForm& w, int hyperplane, const SingFunc& h_alt,
                                                  const QuadratureOptions& opt = {});

/// Time-dependent section in frame components: X(t) = sum_k coeff[k](t) e_k,
/// each coefficient an exact function of the chart variables at any rational
/// time (solves are memoized per t, so repeated stage times are free).
struct MoserField {
    EFramePtr frame;
    std::vector<std::function<SingFunc(const Rat&)>> coeff;
    std::vector<SingFunc> at(const Rat& t) const;
};

/// Solve iota_{X_t} omega_t = -mu exactly in frame components, where
/// omega_t = (1-t) omega0 + t omega1.  Checks d(mu) = omega1 - omega0 and
/// nondegeneracy of omega_t at the given t before solving.
std::vector<SingFunc> moser_vector_field(const EForm& omega0, const EForm& omega1, const EForm& mu, const Rat& t);

/// The same solve packaged as a reusable time-dependent field (solved
/// symbolically once per requested t).
MoserField moser_field(const EForm& omega0, const EForm& omega1, const EForm& mu);

struct FlowOptions {
    int steps = 1000;
    double t_end = 1.0;
    double box_lo = -1.25; ///< trajectory must stay inside this box
    double box_hi = 1.25;
};

struct FlowResult {
    std::vector<double> times;
    std::vector<std::vector<double>> points;
    /// variational Jacobian d(flow)/d(p0) alongside each sample, row-major
    std::vector<std::vector<std::vector<double>>> jacobians;
};

/// Classical fixed-step RK4 for the ambient expansion of a time-dependent
/// frame field, with the variational equation integrated alongside.
FlowResult integrate_flow(const MoserField& X, const std::vector<double>& p0, const FlowOptions& opt = {});

struct MoserReport {
    double max_residual = 0.0;
    std::vector<double> residuals; ///< one per check point
};

/// Integrate the Moser field from each check point and compare the pullback
/// of omega1 under the time-1 flow against omega0 as ordinary 2-forms in
/// dx coordinates (valid off the singular locus).
MoserReport verify_moser(const EForm& omega0, const EForm& omega1, const EForm& mu,
                         const std::vector<std::vector<double>>& check_points, const FlowOptions& opt = {});

/// Homotopy operator Q w = int_0^1 phi_t^*(iota_{X_t} w) dt evaluated at a
/// point: returns the dx-coefficients of the degree (p-1) result, keyed by
/// increasing index tuples.
std::map<IdxSet, double> homotopy_Q(const EForm& w, const MoserField& X, const std::vector<double>& p,
                                    const FlowOptions& opt = {});

/// Degree-wise primitive finder for d(mu) = target on a star-shaped box:
/// exact linear solve over monomial coefficients.  Returns an empty
/// optional when the target is not exact in the polynomial complex.
std::optional<EForm> find_primitive(const EForm& target, int coeff_degree_bound = -1);

} // namespace ecalc
