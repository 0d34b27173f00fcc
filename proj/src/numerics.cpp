#include "ecalc/numerics.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace ecalc {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw DomainError("quadrature order must be positive");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n(x) and P'_n(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

/// Per-axis description of a hyperplane-model integrand x^(e - net_pow).
struct AxisModel {
    unsigned frame_pow = 0; ///< exponent in the generator x^k d/dx
    unsigned den_pow = 0;   ///< extra power folded in from the coefficient
    unsigned net_pow() const { return frame_pow + den_pow; }
};

/// The frame must look like a coordinate-hyperplane model: generator k is
/// c * x_k^a * d/dx_k.  Returns the per-axis exponents a and the inverse
/// constant product (so the integrand picks up 1/c per axis).
std::vector<AxisModel> axis_models(const EFramePtr& fr, Rat& lead_inv) {
    if (fr->rank() != fr->dim()) throw DomainError("volume quadrature needs a full-rank frame");
    const auto n = static_cast<std::size_t>(fr->dim());
    std::vector<AxisModel> axes(n);
    lead_inv = Rat(1);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& g = fr->generators()[k];
        for (std::size_t j = 0; j < n; ++j) {
            const SingFunc& comp = g.comp[j];
            if (j != k) {
                if (!comp.is_zero()) throw DomainError("volume quadrature needs a coordinate-hyperplane model");
                continue;
            }
            if (!comp.is_poly() || comp.num().terms().size() != 1)
                throw DomainError("volume quadrature needs monomial generators");
            const auto& [e, c] = *comp.num().terms().begin();
            for (std::size_t v = 0; v < n; ++v)
                if (v != k && e[v] != 0) throw DomainError("volume quadrature needs a coordinate-hyperplane model");
            axes[k].frame_pow = e[k];
            lead_inv = lead_inv / c;
        }
    }
    return axes;
}

/// Coefficient of the top basis tuple with denominator factors folded into
/// the per-axis exponents; returns the polynomial numerator.
Poly fold_coefficient(const EForm& w, std::vector<AxisModel>& axes) {
    const auto& fr = w.frame();
    IdxSet top(static_cast<std::size_t>(fr->rank()));
    for (int i = 0; i < fr->rank(); ++i) top[static_cast<std::size_t>(i)] = i + 1;
    const SingFunc f = w.coeff(top);
    for (const auto& d : f.den()) {
        bool matched = false;
        for (std::size_t v = 0; v < fr->vars().size(); ++v) {
            if (d.factor == Poly::variable(fr->vars(), fr->vars()[v])) {
                axes[v].den_pow += d.power;
                matched = true;
                break;
            }
        }
        if (!matched) throw DomainError("singular factor off the declared hyperplanes: " + d.factor.str());
    }
    return f.num();
}

struct Panels {
    std::vector<std::pair<double, double>> pos; ///< positive-side panels only when symmetric
    bool symmetric = false;                     ///< true: mirror with x -> -x
};

Panels singular_panels(double eps) {
    Panels p;
    p.symmetric = true;
    double lo = eps;
    while (lo < 1.0) {
        const double hi = std::min(2.0 * lo, 1.0);
        p.pos.emplace_back(lo, hi);
        lo = hi;
    }
    return p;
}

Panels smooth_panels_for(int count) {
    Panels p;
    const double h = 2.0 / count;
    for (int i = 0; i < count; ++i) p.pos.emplace_back(-1.0 + i * h, -1.0 + (i + 1) * h);
    return p;
}

/// integral of x^e / x^pow over the axis panels (numeric Gauss per panel)
double axis_monomial_integral(const Panels& panels, long e, long pow, const std::vector<double>& nodes,
                              const std::vector<double>& weights) {
    const long m = e - pow;
    if (panels.symmetric && ((m % 2) != 0)) return 0.0; // odd integrand, symmetric domain
    double total = 0.0;
    for (const auto& [lo, hi] : panels.pos) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double x = mid + half * nodes[q];
            acc += weights[q] * std::pow(x, static_cast<double>(m));
        }
        total += acc * half;
    }
    if (panels.symmetric) total *= 2.0;
    return total;
}

struct RichardsonResult {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> diagonal;
};

/// Eliminate powers eps^1, eps^2, ... from a sequence on eps_j = 2^-j.
RichardsonResult richardson(const std::vector<double>& v) {
    std::vector<std::vector<double>> t(v.size());
    RichardsonResult r;
    for (std::size_t j = 0; j < v.size(); ++j) {
        t[j].resize(j + 1);
        t[j][0] = v[j];
        double p2 = 1.0;
        for (std::size_t m = 1; m <= j; ++m) {
            p2 *= 2.0;
            t[j][m] = (p2 * t[j][m - 1] - t[j - 1][m - 1]) / (p2 - 1.0);
        }
        r.diagonal.push_back(t[j][j]);
    }
    r.value = r.diagonal.back();
    if (r.diagonal.size() >= 2) r.error = std::abs(r.diagonal.back() - r.diagonal[r.diagonal.size() - 2]);
    return r;
}

} // namespace

QuadratureReport liouville_volume(const EForm& w, const QuadratureOptions& opt) {
    const auto& fr = w.frame();
    if (w.degree() != fr->rank()) throw DomainError("volume needs a top-degree form");
    Rat lead_inv(1);
    auto axes = axis_models(fr, lead_inv);
    const Poly num = fold_coefficient(w, axes);
    const double scale = static_cast<double>(lead_inv);

    std::vector<double> nodes, weights;
    gauss_legendre(opt.order, nodes, weights);

    QuadratureReport rep;
    for (int j = opt.eps_pow_min; j <= opt.eps_pow_max; ++j) {
        const double eps = std::ldexp(1.0, -j);
        double total = 0.0;
        // cache per-axis monomial integrals for this eps
        std::vector<std::map<unsigned, double>> cache(axes.size());
        std::vector<Panels> panels(axes.size());
        for (std::size_t k = 0; k < axes.size(); ++k)
            panels[k] = axes[k].net_pow() > 0 ? singular_panels(eps) : smooth_panels_for(opt.smooth_panels);
        for (const auto& [e, c] : num.terms()) {
            double prod = static_cast<double>(c);
            for (std::size_t k = 0; k < axes.size() && prod != 0.0; ++k) {
                auto it = cache[k].find(e[k]);
                if (it == cache[k].end()) {
                    const double v =
                        axis_monomial_integral(panels[k], e[k], axes[k].net_pow(), nodes, weights);
                    it = cache[k].emplace(e[k], v).first;
                }
                prod *= it->second;
            }
            total += prod;
        }
        rep.eps.push_back(eps);
        rep.partial.push_back(total * scale);
    }
    const auto rich = richardson(rep.partial);
    rep.value = rich.value;
    rep.error_estimate = rich.error;
    rep.diagonal = rich.diagonal;
    rep.converged = rep.error_estimate < opt.tolerance;
    if (opt.require_convergence && !rep.converged)
        throw Error("volume quadrature did not converge: tail " + std::to_string(rep.error_estimate));
    return rep;
}

Rat liouville_exact(const EForm& w) {
    const auto& fr = w.frame();
    if (w.degree() != fr->rank()) throw DomainError("volume needs a top-degree form");
    Rat lead_inv(1);
    auto axes = axis_models(fr, lead_inv);
    const Poly num = fold_coefficient(w, axes);
    Rat total(0);
    for (const auto& [e, c] : num.terms()) {
        Rat prod = c;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const long m = static_cast<long>(e[k]) - static_cast<long>(axes[k].net_pow());
            if (m % 2 != 0) {
                prod = Rat(0); // odd power: symmetric principal value vanishes
                break;
            }
            if (m < 0) throw Error("principal value diverges on axis " + fr->vars()[k]);
            prod *= Rat(2, m + 1);
        }
        total += prod;
    }
    return total * lead_inv;
}

IndependenceReport defining_function_independence(const EForm& w, int hyperplane, const SingFunc& h_alt,
                                                  const QuadratureOptions& opt) {
    const auto& fr = w.frame();
    if (hyperplane < 1 || hyperplane > fr->dim()) throw DomainError("hyperplane index out of range");
    const auto hy = static_cast<std::size_t>(hyperplane - 1);
    Rat lead_inv(1);
    auto axes = axis_models(fr, lead_inv);
    const Poly num = fold_coefficient(w, axes);
    const double scale = static_cast<double>(lead_inv);

    // h_alt = x_i * u with u free of x_i and nonvanishing on the box
    if (!h_alt.is_poly()) throw DomainError("alternative defining function must be polynomial");
    const Poly xi = Poly::variable(fr->vars(), fr->vars()[hy]);
    const auto u_opt = h_alt.num().divide_exact(xi);
    if (!u_opt) throw DomainError("defining function does not vanish on the hyperplane");
    const Poly u = *u_opt;
    if (!u.derivative(hy).is_zero())
        throw DomainError("defining function must be x_i times a function of the other variables");
    {
        GridOptions g;
        std::vector<double> pt(static_cast<std::size_t>(fr->dim()), 0.0);
        const double h = (g.hi - g.lo) / (g.points_per_axis - 1);
        std::vector<int> idx(pt.size(), 0);
        while (true) {
            for (std::size_t k = 0; k < pt.size(); ++k) pt[k] = g.lo + h * idx[k];
            if (std::abs(u.eval(pt)) < 1e-9) throw DomainError("defining function degenerates on the box");
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == g.points_per_axis) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }

    IndependenceReport rep;
    rep.standard_run = liouville_volume(w, opt);

    std::vector<double> nodes, weights;
    gauss_legendre(opt.order, nodes, weights);
    const auto n = axes.size();

    QuadratureReport mod;
    for (int j = opt.eps_pow_min; j <= opt.eps_pow_max; ++j) {
        const double eps = std::ldexp(1.0, -j);
        // outer: all axes but `hy`; inner: axis hy with a u-dependent cutoff
        std::vector<std::vector<std::pair<double, double>>> outer(n); // (point, weight) per axis
        for (std::size_t k = 0; k < n; ++k) {
            if (k == hy) continue;
            const Panels p = axes[k].net_pow() > 0 ? singular_panels(eps) : smooth_panels_for(opt.smooth_panels);
            for (const auto& [lo, hi] : p.pos) {
                const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                for (std::size_t q = 0; q < nodes.size(); ++q) {
                    const double x = mid + half * nodes[q];
                    outer[k].emplace_back(x, weights[q] * half);
                    if (p.symmetric) outer[k].emplace_back(-x, weights[q] * half);
                }
            }
        }
        double total = 0.0;
        std::vector<std::size_t> pick(n, 0);
        std::vector<double> pt(n, 0.0);
        while (true) {
            double wgt = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == hy) continue;
                pt[k] = outer[k][pick[k]].first;
                wgt *= outer[k][pick[k]].second;
            }
            const double cutoff = eps / std::abs(u.eval(pt));
            double inner = 0.0;
            if (cutoff < 1.0)
                for (const auto& [lo, hi] : singular_panels(cutoff).pos) {
                    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                    for (std::size_t q = 0; q < nodes.size(); ++q) {
                        for (const double sgn : {1.0, -1.0}) {
                            pt[hy] = sgn * (mid + half * nodes[q]);
                            double g = num.eval(pt);
                            for (std::size_t k = 0; k < n; ++k)
                                for (unsigned r = 0; r < axes[k].net_pow(); ++r) g /= pt[k];
                            inner += weights[q] * half * g;
                        }
                    }
                }
            total += wgt * inner;
            std::size_t k = 0;
            while (k < n && (k == hy || ++pick[k] == outer[k].size())) {
                if (k != hy) pick[k] = 0;
                ++k;
            }
            if (k == n) break;
        }
        mod.eps.push_back(eps);
        mod.partial.push_back(total * scale);
    }
    const auto rich = richardson(mod.partial);
    mod.value = rich.value;
    mod.error_estimate = rich.error;
    mod.diagonal = rich.diagonal;
    mod.converged = mod.error_estimate < opt.tolerance;
    if (opt.require_convergence && !mod.converged)
        throw Error("volume quadrature did not converge: tail " + std::to_string(mod.error_estimate));
    rep.modified_run = mod;
    rep.difference = std::abs(rep.standard_run.value - rep.modified_run.value);
    return rep;
}

std::vector<SingFunc> MoserField::at(const Rat& t) const {
    std::vector<SingFunc> out;
    out.reserve(coeff.size());
    for (const auto& c : coeff) out.push_back(c(t));
    return out;
}

namespace {

void check_moser_data(const EForm& w0, const EForm& w1, const EForm& mu) {
    const auto& fr = w0.frame();
    if ((w1.frame() != fr && !(*w1.frame() == *fr)) || (mu.frame() != fr && !(*mu.frame() == *fr)))
        throw DomainError("path endpoints and primitive must share one frame");
    if (w0.degree() != 2 || w1.degree() != 2 || mu.degree() != 1)
        throw DomainError("path construction expects two 2-forms and a 1-form");
    if (!(ederiv(mu) == w1 - w0)) throw DomainError("d of the primitive differs from omega1 - omega0");
}

} // namespace

std::vector<SingFunc> moser_vector_field(const EForm& w0, const EForm& w1, const EForm& mu, const Rat& t) {
    check_moser_data(w0, w1, mu);
    const auto& fr = w0.frame();
    const EForm wt = w0 * (Rat(1) - t) + w1 * t;
    const auto verdict = nondeg_check(wt);
    if (verdict.kind == NondegKind::degenerate || verdict.kind == NondegKind::structural_odd)
        throw DomainError("interpolated form degenerates at the requested time");

    const auto W = pairing_matrix(wt);
    const SingFunc det = singfunc_matrix_det(W);
    const auto n = static_cast<std::size_t>(fr->rank());
    std::vector<SingFunc> rhs;
    for (std::size_t j = 0; j < n; ++j) rhs.push_back(mu.coeff({static_cast<int>(j) + 1}));

    // iota_X w = -mu reads sum_i X_i W[i][j] = -mu_j; antisymmetry of W turns
    // it into W X = mu, solved exactly by Cramer's rule.
    std::vector<SingFunc> X;
    for (std::size_t k = 0; k < n; ++k) {
        auto Wk = W;
        for (std::size_t i = 0; i < n; ++i) Wk[i][k] = rhs[i];
        X.push_back(singfunc_matrix_det(Wk).divide(det, fr->singular_factors()));
    }
    return X;
}

MoserField moser_field(const EForm& w0, const EForm& w1, const EForm& mu) {
    check_moser_data(w0, w1, mu);
    MoserField f;
    f.frame = w0.frame();
    const auto cache = std::make_shared<std::map<Rat, std::vector<SingFunc>>>();
    const auto n = static_cast<std::size_t>(f.frame->rank());
    for (std::size_t k = 0; k < n; ++k)
        f.coeff.push_back([w0, w1, mu, cache, k](const Rat& t) {
            auto it = cache->find(t);
            if (it == cache->end()) it = cache->emplace(t, moser_vector_field(w0, w1, mu, t)).first;
            return it->second[k];
        });
    return f;
}

namespace {

Rat rat_from_double(double x) {
    if (x == 0.0) return Rat(0);
    int e = 0;
    const double m = std::frexp(x, &e);
    Rat r(static_cast<long long>(std::ldexp(m, 53)));
    for (int s = e - 53; s < 0; ++s) r /= 2;
    for (int s = e - 53; s > 0; --s) r *= 2;
    return r;
}

/// Ambient expansion of a frame field at one time, with its coordinate
/// Jacobian; cached per rational time across a whole integration run.
struct FlowEngine {
    const MoserField& X;
    std::map<Rat, std::pair<std::vector<SingFunc>, std::vector<std::vector<SingFunc>>>> cache;

    const std::pair<std::vector<SingFunc>, std::vector<std::vector<SingFunc>>>& ambient(const Rat& t) {
        auto it = cache.find(t);
        if (it != cache.end()) return it->second;
        const auto& fr = X.frame;
        const auto n = static_cast<std::size_t>(fr->dim());
        const auto comps = X.at(t);
        if (comps.size() != static_cast<std::size_t>(fr->rank()))
            throw DomainError("field has the wrong number of frame components");
        std::vector<SingFunc> amb(n, SingFunc::zero(fr->vars()));
        for (std::size_t k = 0; k < comps.size(); ++k)
            for (std::size_t i = 0; i < n; ++i) amb[i] += comps[k] * fr->generators()[k].comp[i];
        for (const auto& a : amb)
            if (!a.is_poly())
                throw DomainError("field is not smooth in ambient coordinates: " + a.str());
        std::vector<std::vector<SingFunc>> jac(n, std::vector<SingFunc>(n, SingFunc::zero(fr->vars())));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) jac[i][j] = amb[i].derivative(j);
        return cache.emplace(t, std::make_pair(std::move(amb), std::move(jac))).first->second;
    }

    /// one combined derivative evaluation: dx/dt and dJ/dt = (DX) J
    void rate(const Rat& t, const std::vector<double>& x, const std::vector<std::vector<double>>& J,
              std::vector<double>& dx, std::vector<std::vector<double>>& dJ) {
        const auto& [amb, jac] = ambient(t);
        const auto n = amb.size();
        dx.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) dx[i] = amb[i].eval(x);
        std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) D[i][j] = jac[i][j].eval(x);
        dJ.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) dJ[i][j] += D[i][k] * J[k][j];
    }

    FlowResult run(const std::vector<double>& p0, const FlowOptions& opt) {
        const auto n = static_cast<std::size_t>(X.frame->dim());
        if (p0.size() != n) throw DomainError("starting point dimension mismatch");
        if (opt.steps < 1) throw DomainError("flow needs at least one step");
        const Rat T = rat_from_double(opt.t_end);
        const Rat hr = T / opt.steps;
        const double h = opt.t_end / opt.steps;

        FlowResult res;
        std::vector<double> x = p0;
        std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) J[i][i] = 1.0;

        auto record = [&](double tnow) {
            for (double c : x)
                if (c < opt.box_lo || c > opt.box_hi) throw Error("trajectory left the chart box");
            res.times.push_back(tnow);
            res.points.push_back(x);
            res.jacobians.push_back(J);
        };
        record(0.0);

        std::vector<double> k1, k2, k3, k4;
        std::vector<std::vector<double>> K1, K2, K3, K4;
        for (int s = 0; s < opt.steps; ++s) {
            const Rat t0 = hr * s, tm = hr * s + hr / 2, t1 = hr * (s + 1);
            auto shifted = [&](const std::vector<double>& k, const std::vector<std::vector<double>>& K,
                              double c, std::vector<double>& xs, std::vector<std::vector<double>>& Js) {
                xs = x;
                Js = J;
                for (std::size_t i = 0; i < n; ++i) {
                    xs[i] += c * h * k[i];
                    for (std::size_t j = 0; j < n; ++j) Js[i][j] += c * h * K[i][j];
                }
            };
            std::vector<double> xs;
            std::vector<std::vector<double>> Js;
            rate(t0, x, J, k1, K1);
            shifted(k1, K1, 0.5, xs, Js);
            rate(tm, xs, Js, k2, K2);
            shifted(k2, K2, 0.5, xs, Js);
            rate(tm, xs, Js, k3, K3);
            shifted(k3, K3, 1.0, xs, Js);
            rate(t1, xs, Js, k4, K4);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
                for (std::size_t j = 0; j < n; ++j)
                    J[i][j] += h / 6.0 * (K1[i][j] + 2 * K2[i][j] + 2 * K3[i][j] + K4[i][j]);
            }
            record((s + 1) * h);
        }
        return res;
    }
};

/// Numeric matrix of a 2-form in coordinate differentials at a point.
std::vector<std::vector<double>> two_form_in_dx(const EForm& w, const std::vector<double>& p) {
    const auto& fr = w.frame();
    const auto n = static_cast<std::size_t>(fr->dim());
    const auto C = fr->coframe_in_dx();
    std::vector<std::vector<double>> Cv(C.size(), std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < C.size(); ++a)
        for (std::size_t i = 0; i < n; ++i) Cv[a][i] = C[a][i].eval(p);
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
    for (const auto& [I, f] : w.terms()) {
        const double c = f.eval(p);
        const auto a = static_cast<std::size_t>(I[0] - 1), b = static_cast<std::size_t>(I[1] - 1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) M[i][j] += c * (Cv[a][i] * Cv[b][j] - Cv[a][j] * Cv[b][i]);
    }
    return M;
}

} // namespace

FlowResult integrate_flow(const MoserField& X, const std::vector<double>& p0, const FlowOptions& opt) {
    FlowEngine eng{X, {}};
    return eng.run(p0, opt);
}

MoserReport verify_moser(const EForm& w0, const EForm& w1, const EForm& mu,
                         const std::vector<std::vector<double>>& check_points, const FlowOptions& opt) {
    const MoserField X = moser_field(w0, w1, mu);
    FlowEngine eng{X, {}};
    const auto n = static_cast<std::size_t>(w0.frame()->dim());
    MoserReport rep;
    for (const auto& p : check_points) {
        const FlowResult fl = eng.run(p, opt);
        const auto& q = fl.points.back();
        const auto& J = fl.jacobians.back();
        const auto M1 = two_form_in_dx(w1, q);
        const auto M0 = two_form_in_dx(w0, p);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = -M0[i][j];
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) acc += J[a][i] * M1[a][b] * J[b][j];
                worst = std::max(worst, std::abs(acc));
            }
        rep.residuals.push_back(worst);
        rep.max_residual = std::max(rep.max_residual, worst);
    }
    return rep;
}

std::map<IdxSet, double> homotopy_Q(const EForm& w, const MoserField& X, const std::vector<double>& p,
                                    const FlowOptions& opt) {
    const auto& fr = w.frame();
    if (X.frame != fr && !(*X.frame == *fr)) throw DomainError("field and form must share one frame");
    std::map<IdxSet, double> out;
    if (w.degree() == 0) return out;
    const auto n = static_cast<std::size_t>(fr->dim());
    const int k = w.degree() - 1;

    FlowEngine eng{X, {}};
    const FlowResult fl = eng.run(p, opt);
    const Rat T = rat_from_double(opt.t_end);

    // ascending index tuples of length k over 1..n
    std::vector<IdxSet> tuples;
    IdxSet cur(static_cast<std::size_t>(k));
    auto gen = [&](auto&& self, int pos, int next) -> void {
        if (pos == k) {
            tuples.push_back(cur);
            return;
        }
        for (int i = next; i <= static_cast<int>(n); ++i) {
            cur[static_cast<std::size_t>(pos)] = i;
            self(self, pos + 1, i + 1);
        }
    };
    gen(gen, 0, 1);

    std::function<double(const std::vector<std::vector<double>>&, const IdxSet&, const IdxSet&)> det_fn;
    det_fn = [&](const std::vector<std::vector<double>>& J, const IdxSet& rows, const IdxSet& cols) -> double {
        const std::size_t d = rows.size();
        if (d == 0) return 1.0;
        if (d == 1) return J[static_cast<std::size_t>(rows[0] - 1)][static_cast<std::size_t>(cols[0] - 1)];
        double acc = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            IdxSet rrest;
            for (std::size_t s = 0; s < d; ++s)
                if (s != r) rrest.push_back(rows[s]);
            IdxSet crest(cols.begin() + 1, cols.end());
            const double piv = J[static_cast<std::size_t>(rows[r] - 1)][static_cast<std::size_t>(cols[0] - 1)];
            if (piv == 0.0) continue;
            acc += (r % 2 == 0 ? 1.0 : -1.0) * piv * det_fn(J, rrest, crest);
        }
        return acc;
    };

    const auto C = fr->coframe_in_dx();
    std::map<IdxSet, std::vector<double>> samples; // integrand per tuple per time
    for (const auto& I : tuples) samples[I] = {};

    for (std::size_t s = 0; s < fl.times.size(); ++s) {
        const Rat t = T * static_cast<int>(s) / opt.steps;
        const EForm eta = interior(X.at(t), w); // frame components, degree k
        const auto& q = fl.points[s];
        const auto& J = fl.jacobians[s];
        // dx-components of eta at the transported point
        std::map<IdxSet, double> etadx;
        std::vector<std::vector<double>> Cv(C.size(), std::vector<double>(n, 0.0));
        for (std::size_t a = 0; a < C.size(); ++a)
            for (std::size_t i = 0; i < n; ++i) Cv[a][i] = C[a][i].eval(q);
        for (const auto& [A, f] : eta.terms()) {
            const double c = f.eval(q);
            // expand theta^{A} = prod of rows of C into coordinate components
            IdxSet pickJ(A.size());
            auto expand = [&](auto&& self, std::size_t pos, double acc) -> void {
                if (acc == 0.0) return;
                if (pos == A.size()) {
                    // sort with permutation sign
                    IdxSet key = pickJ;
                    int inv = 0;
                    for (std::size_t u = 0; u < key.size(); ++u)
                        for (std::size_t v = u + 1; v < key.size(); ++v) {
                            if (key[u] == key[v]) return;
                            if (key[u] > key[v]) ++inv;
                        }
                    std::sort(key.begin(), key.end());
                    etadx[key] += (inv % 2 == 0 ? acc : -acc);
                    return;
                }
                const auto row = static_cast<std::size_t>(A[pos] - 1);
                for (std::size_t i = 0; i < n; ++i) {
                    if (Cv[row][i] == 0.0) continue;
                    pickJ[pos] = static_cast<int>(i) + 1;
                    self(self, pos + 1, acc * Cv[row][i]);
                }
            };
            expand(expand, 0, c);
        }
        // pull back along the Jacobian and store one sample per tuple
        for (const auto& I : tuples) {
            double val = 0.0;
            for (const auto& [Jkey, av] : etadx)
                if (av != 0.0) val += av * det_fn(J, Jkey, I);
            samples[I].push_back(val);
        }
    }

    // composite trapezoid in t
    const double h = opt.t_end / opt.steps;
    for (const auto& I : tuples) {
        const auto& v = samples[I];
        double acc = 0.0;
        for (std::size_t s = 0; s + 1 < v.size(); ++s) acc += 0.5 * h * (v[s] + v[s + 1]);
        if (acc != 0.0) out[I] = acc;
    }
    return out;
}

std::optional<EForm> find_primitive(const EForm& target, int coeff_degree_bound) {
    const auto& fr = target.frame();
    if (target.degree() < 1) throw DomainError("a 0-form has no primitive");
    if (target.extended()) throw DomainError("primitive search needs genuine polynomial coefficients");
    const auto n = fr->vars().size();

    int D = coeff_degree_bound;
    if (D < 0) {
        int dmax = 0;
        for (const auto& [I, f] : target.terms()) dmax = std::max(dmax, f.num().total_degree());
        D = dmax + 1;
    }

    // monomial basis up to total degree D
    std::vector<Exps> mons;
    Exps e(n, 0);
    auto genm = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos == n) {
            mons.push_back(e);
            return;
        }
        for (int d = 0; d <= left; ++d) {
            e[pos] = static_cast<unsigned>(d);
            self(self, pos + 1, left - d);
        }
        e[pos] = 0;
    };
    genm(genm, 0, D);

    // ascending tuples of length degree-1
    const int k = target.degree() - 1;
    std::vector<IdxSet> tuples;
    IdxSet cur(static_cast<std::size_t>(k));
    auto gent = [&](auto&& self, int pos, int next) -> void {
        if (pos == k) {
            tuples.push_back(cur);
            return;
        }
        for (int i = next; i <= fr->rank(); ++i) {
            cur[static_cast<std::size_t>(pos)] = i;
            self(self, pos + 1, i + 1);
        }
    };
    if (k == 0) tuples.push_back({});
    else gent(gent, 0, 1);

    // columns: d(monomial * theta_K); rows: (tuple, monomial) of the image
    struct RowKey {
        IdxSet idx;
        Exps mon;
        bool operator<(const RowKey& o) const { return std::tie(idx, mon) < std::tie(o.idx, o.mon); }
    };
    std::map<RowKey, std::size_t> rowid;
    std::vector<std::vector<Rat>> cols;
    auto column_of = [&](const EForm& img) {
        std::vector<std::pair<std::size_t, Rat>> entries;
        for (const auto& [I, f] : img.terms())
            for (const auto& [me, c] : f.num().terms()) {
                const RowKey key{I, me};
                auto it = rowid.find(key);
                if (it == rowid.end()) it = rowid.emplace(key, rowid.size()).first;
                entries.emplace_back(it->second, c);
            }
        return entries;
    };
    std::vector<std::vector<std::pair<std::size_t, Rat>>> sparse_cols;
    for (const auto& K : tuples)
        for (const auto& me : mons) {
            EForm basis(fr, k);
            basis.set_coeff(K, SingFunc(Poly::monomial(fr->vars(), me, Rat(1))));
            sparse_cols.push_back(column_of(ederiv(basis)));
        }
    std::vector<std::pair<std::size_t, Rat>> rhs_sparse = column_of(target);

    const std::size_t rows = rowid.size(), ncols = sparse_cols.size();
    std::vector<std::vector<Rat>> A(rows, std::vector<Rat>(ncols, Rat(0)));
    std::vector<Rat> b(rows, Rat(0));
    for (std::size_t c = 0; c < ncols; ++c)
        for (const auto& [r, v] : sparse_cols[c]) A[r][c] += v;
    for (const auto& [r, v] : rhs_sparse) b[r] += v;

    // exact Gaussian elimination, free unknowns pinned to zero
    std::vector<long> pivot_col(rows, -1);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < ncols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && A[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[rank]);
        std::swap(b[p], b[rank]);
        const Rat inv = Rat(1) / A[rank][c];
        for (std::size_t j = c; j < ncols; ++j) A[rank][j] *= inv;
        b[rank] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][c] == 0) continue;
            const Rat f = A[r][c];
            for (std::size_t j = c; j < ncols; ++j) A[r][j] -= f * A[rank][j];
            b[r] -= f * b[rank];
        }
        pivot_col[rank] = static_cast<long>(c);
        ++rank;
    }
    for (std::size_t r = rank; r < rows; ++r)
        if (b[r] != 0) return std::nullopt; // not exact within the bound

    std::vector<Rat> sol(ncols, Rat(0));
    for (std::size_t r = 0; r < rank; ++r) sol[static_cast<std::size_t>(pivot_col[r])] = b[r];

    EForm mu(fr, k);
    std::size_t c = 0;
    for (const auto& K : tuples)
        for (const auto& me : mons) {
            if (sol[c] != 0) mu.add_coeff(K, SingFunc(Poly::monomial(fr->vars(), me, sol[c])));
            ++c;
        }
    if (!(ederiv(mu) == target)) return std::nullopt;
    return mu;
}

} // namespace ecalc
