#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecalc/errors.hpp"
#include "ecalc/numerics.hpp"

#include <cmath>
#include <memory>
#include <random>

using namespace ecalc;

namespace {

SingFunc sf(const std::string& text, const EFramePtr& fr) { return parse_singfunc(text, fr->vars()); }

EForm top_form(const EFramePtr& fr, const SingFunc& f) {
    EForm w(fr, fr->rank());
    std::vector<int> idx;
    for (int i = 1; i <= fr->rank(); ++i) idx.push_back(i);
    w.set_coeff(idx, f);
    return w;
}

} // namespace

TEST_CASE("Gauss-Legendre rules integrate high-degree monomials") {
    std::vector<double> x, w;
    gauss_legendre(20, x, w);
    REQUIRE(x.size() == 20);
    for (int m = 0; m <= 39; ++m) {
        double acc = 0.0;
        for (std::size_t q = 0; q < x.size(); ++q) acc += w[q] * std::pow(x[q], m);
        const double want = (m % 2 == 0) ? 2.0 / (m + 1) : 0.0;
        CHECK(std::abs(acc - want) < 1e-13);
    }
    CHECK_THROWS_AS(gauss_legendre(0, x, w), DomainError);
}

TEST_CASE("volume of the smooth area form on the box") {
    const auto fr = frame_by_name("full2");
    const EForm w = top_form(fr, sf("1", fr));
    CHECK(liouville_exact(w) == Rat(4));
    const auto rep = liouville_volume(w);
    CHECK(rep.converged);
    CHECK(std::abs(rep.value - 4.0) < 1e-9);
    CHECK(rep.partial.size() == 10);
    CHECK(rep.diagonal.size() == 10);
}

TEST_CASE("odd singular density has vanishing principal value") {
    const auto fr = frame_by_name("c2");
    const EForm w = top_form(fr, sf("x", fr));
    CHECK(liouville_exact(w) == Rat(0));
    const auto rep = liouville_volume(w);
    CHECK(std::abs(rep.value) < 1e-8);
}

TEST_CASE("quartic density evaluates to 40/9") {
    const auto fr = frame_by_name("c2");
    const EForm w = top_form(fr, sf("x*y + x^3*y^3", fr));
    CHECK(liouville_exact(w) == Rat(40, 9));
    const auto rep = liouville_volume(w);
    CHECK(rep.converged);
    CHECK(std::abs(rep.value - 40.0 / 9.0) < 1e-6);
    // the extrapolation ladder should tighten monotonically at the tail
    const auto& d = rep.diagonal;
    CHECK(std::abs(d[d.size() - 1] - d[d.size() - 2]) <= std::abs(d[2] - d[1]) + 1e-12);
}

TEST_CASE("quadrature agrees with the symbolic principal value on random densities") {
    std::mt19937 rng(808091u);
    std::uniform_int_distribution<int> nterms(1, 4), coef(-5, 5), expo(0, 4), which(0, 3);
    int checked = 0;
    for (int trial = 0; trial < 210; ++trial) {
        EFramePtr fr;
        switch (which(rng)) {
        case 0: fr = frame_by_name("full2"); break;
        case 1: fr = std::make_shared<EFrame>(EFrame::c_model(2, {1})); break;
        case 2: fr = frame_by_name("c2"); break;
        default: fr = frame_by_name("c3"); break;
        }
        Poly p = Poly::zero(fr->vars());
        const int terms = nterms(rng);
        for (int t = 0; t < terms; ++t) {
            Exps e(fr->vars().size(), 0);
            for (auto& ei : e) ei = static_cast<unsigned>(expo(rng));
            p += Poly::monomial(fr->vars(), e, coef(rng));
        }
        const EForm w = top_form(fr, SingFunc(p));
        const Rat oracle = liouville_exact(w);
        const auto rep = liouville_volume(w);
        CHECK(std::abs(rep.value - static_cast<double>(oracle)) < 1e-6);
        ++checked;
    }
    CHECK(checked == 210);
}

TEST_CASE("divergent principal values are reported") {
    const auto fr = frame_by_name("c2");
    const EForm w = top_form(fr, sf("(y)/((x))", fr));
    CHECK_THROWS_AS(liouville_exact(w), Error);
    CHECK_THROWS_AS(liouville_volume(w), Error);
    QuadratureOptions opt;
    opt.require_convergence = false;
    const auto rep = liouville_volume(w, opt);
    CHECK(!rep.converged);
}

TEST_CASE("volume quadrature rejects frames and forms outside the box model") {
    const auto ell = frame_by_name("elliptic");
    CHECK_THROWS_AS(liouville_volume(top_form(ell, sf("1", ell))), DomainError);
    const auto fr = frame_by_name("c2");
    CHECK_THROWS_AS(liouville_volume(EForm(fr, 1)), DomainError);
    // a denominator factor that is not one of the coordinate hyperplanes
    EForm bad(fr, 2);
    bad.set_coeff(std::vector<int>{1, 2}, sf("(y)/((x + y))", fr));
    CHECK_THROWS_AS(liouville_volume(bad), DomainError);
    CHECK_THROWS_AS(liouville_exact(bad), DomainError);
}

TEST_CASE("volume is independent of the defining function of a hyperplane") {
    const auto fr = frame_by_name("c2");
    const EForm w = top_form(fr, sf("x*y + x^3*y^3", fr));
    // h = x (1 + 3/10 y^2), nonvanishing scaling on the box
    const Poly h = Poly::variable(fr->vars(), "x") *
                   (Poly::constant(fr->vars(), 1) + Poly::monomial(fr->vars(), {0, 2}, Rat(3, 10)));
    const auto rep = defining_function_independence(w, 1, SingFunc(h));
    CHECK(rep.standard_run.converged);
    CHECK(rep.modified_run.converged);
    CHECK(std::abs(rep.standard_run.value - 40.0 / 9.0) < 1e-6);
    CHECK(rep.difference < 1e-4);
}

TEST_CASE("defining-function change keeps odd principal values at zero") {
    const auto fr = frame_by_name("c2");
    const EForm w = top_form(fr, sf("x", fr));
    const Poly h = Poly::variable(fr->vars(), "x") *
                   (Poly::constant(fr->vars(), 1) + Poly::monomial(fr->vars(), {0, 2}, Rat(1)));
    const auto rep = defining_function_independence(w, 1, SingFunc(h));
    CHECK(std::abs(rep.standard_run.value) < 1e-8);
    CHECK(std::abs(rep.modified_run.value) < 1e-8);
    CHECK(rep.difference < 1e-8);
}

TEST_CASE("invalid defining functions are rejected") {
    const auto fr = frame_by_name("c2");
    const EForm w = top_form(fr, sf("x*y", fr));
    const auto vars = fr->vars();
    // does not vanish on the hyperplane
    CHECK_THROWS_AS(defining_function_independence(w, 1, sf("1 + x", fr)), DomainError);
    // vanishes to second order
    CHECK_THROWS_AS(defining_function_independence(w, 1, sf("x^2", fr)), DomainError);
    // scaling factor vanishes inside the box
    CHECK_THROWS_AS(defining_function_independence(w, 1, sf("x*y", fr)), DomainError);
    // out-of-range hyperplane index
    CHECK_THROWS_AS(defining_function_independence(w, 3, sf("x", fr)), DomainError);
}

namespace {

/// Half-plane path of area forms used throughout: omega0 = theta1^theta2,
/// omega1 = 2 theta1^theta2, primitive mu = -y theta1.
struct PathFixture {
    EFramePtr fr = frame_by_name("b2");
    EForm w0 = EForm::theta(fr, {1, 2});
    EForm w1 = EForm::theta(fr, {1, 2}) * Rat(2);
    EForm mu{fr, 1};

    PathFixture() { mu.set_coeff({1}, SingFunc(-Poly::variable(fr->vars(), "y"))); }
};

MoserField constant_field(const EFramePtr& fr, const std::vector<SingFunc>& comps) {
    MoserField f;
    f.frame = fr;
    for (const auto& c : comps)
        f.coeff.push_back([c](const Rat&) { return c; });
    return f;
}

double qval(const std::map<IdxSet, double>& q, const IdxSet& key) {
    const auto it = q.find(key);
    return it == q.end() ? 0.0 : it->second;
}

} // namespace

TEST_CASE("path field solves the contraction equation exactly") {
    const PathFixture fx;
    for (const Rat& t : {Rat(0), Rat(1, 2), Rat(1), Rat(7, 3)}) {
        const auto X = moser_vector_field(fx.w0, fx.w1, fx.mu, t);
        REQUIRE(X.size() == 2);
        CHECK(X[0].is_zero());
        const Poly expect = Poly::variable(fx.fr->vars(), "y") * (Rat(-1) / (Rat(1) + t));
        CHECK(X[1] == SingFunc(expect));
        // contraction of the interpolated form recovers -mu
        const EForm wt = fx.w0 * (Rat(1) - t) + fx.w1 * t;
        CHECK(interior(X, wt) == -fx.mu);
    }
    const MoserField f = moser_field(fx.w0, fx.w1, fx.mu);
    for (const Rat& t : {Rat(1, 3), Rat(2, 5), Rat(1, 3)})
        CHECK(f.at(t) == moser_vector_field(fx.w0, fx.w1, fx.mu, t));
}

TEST_CASE("path construction validates its inputs") {
    const PathFixture fx;
    // primitive does not differentiate to the difference of the endpoints
    CHECK_THROWS_AS(moser_vector_field(fx.w0, fx.w0 * Rat(3), fx.mu, Rat(0)), DomainError);
    // equal endpoints demand a closed primitive
    CHECK_THROWS_AS(moser_vector_field(fx.w0, fx.w0, fx.mu, Rat(0)), DomainError);
    // degree mismatch
    CHECK_THROWS_AS(moser_vector_field(fx.mu, fx.mu, fx.w0, Rat(0)), DomainError);
    // frame mismatch
    const auto full = frame_by_name("full2");
    CHECK_THROWS_AS(moser_vector_field(fx.w0, fx.w1, EForm(full, 1), Rat(0)), DomainError);
    // interpolation degenerates at t = 1/2
    EForm muz(fx.fr, 1);
    muz.set_coeff({1}, SingFunc(Poly::variable(fx.fr->vars(), "y") * Rat(2)));
    CHECK_THROWS_AS(moser_vector_field(fx.w0, -fx.w0, muz, Rat(1, 2)), DomainError);
    // odd rank never admits a nondegenerate 2-form
    const auto b3 = frame_by_name("b3");
    const EForm v0 = EForm::theta(b3, {1, 2});
    CHECK_THROWS_AS(moser_vector_field(v0, v0, EForm(b3, 1), Rat(0)), DomainError);
}

TEST_CASE("zero field flows to the identity exactly") {
    const PathFixture fx;
    const MoserField f = moser_field(fx.w0, fx.w0, EForm(fx.fr, 1));
    const std::vector<double> p0{0.3, -0.8};
    const auto fl = integrate_flow(f, p0, FlowOptions{100, 1.0, -1.25, 1.25});
    REQUIRE(fl.points.size() == 101);
    CHECK(fl.points.back() == p0);
    CHECK(fl.jacobians.back()[0][0] == 1.0);
    CHECK(fl.jacobians.back()[0][1] == 0.0);
    CHECK(fl.jacobians.back()[1][0] == 0.0);
    CHECK(fl.jacobians.back()[1][1] == 1.0);
}

TEST_CASE("path flow halves the fiber coordinate") {
    const PathFixture fx;
    const MoserField f = moser_field(fx.w0, fx.w1, fx.mu);
    const auto fl = integrate_flow(f, {0.7, 0.9});
    REQUIRE(fl.times.size() == 1001);
    REQUIRE(fl.points.size() == 1001);
    REQUIRE(fl.jacobians.size() == 1001);
    CHECK(fl.times.front() == 0.0);
    CHECK(std::abs(fl.times.back() - 1.0) < 1e-12);
    // dx/dt = 0 and dy/dt = -y/(1+t): endpoint (x0, y0/2)
    CHECK(fl.points.back()[0] == 0.7);
    CHECK(std::abs(fl.points.back()[1] - 0.45) < 1e-6);
    // variational solution diag(1, 1/2)
    CHECK(std::abs(fl.jacobians.back()[0][0] - 1.0) < 1e-9);
    CHECK(std::abs(fl.jacobians.back()[1][1] - 0.5) < 1e-6);
    CHECK(fl.jacobians.back()[0][1] == 0.0);
    CHECK(fl.jacobians.back()[1][0] == 0.0);
    // identity at time zero
    CHECK(fl.jacobians.front()[0][0] == 1.0);
    CHECK(fl.jacobians.front()[1][0] == 0.0);
    // a trajectory started on the hyperplane stays on it
    const auto on_z = integrate_flow(f, {0.0, 1.0});
    CHECK(on_z.points.back()[0] == 0.0);
    CHECK(std::abs(on_z.points.back()[1] - 0.5) < 1e-6);
}

TEST_CASE("flow integrator reproduces an exponential and its variational factor") {
    const auto fr = frame_by_name("b2");
    // frame component 1 on x d/dx: ambient velocity (x, 0)
    const MoserField f =
        constant_field(fr, {SingFunc::constant(fr->vars(), Rat(1)), SingFunc::zero(fr->vars())});
    const auto fl = integrate_flow(f, {0.3, -0.8});
    const double e1 = std::exp(1.0);
    CHECK(std::abs(fl.points.back()[0] - 0.3 * e1) < 1e-9);
    CHECK(fl.points.back()[1] == -0.8);
    CHECK(std::abs(fl.jacobians.back()[0][0] - e1) < 1e-9);
    CHECK(fl.jacobians.back()[1][1] == 1.0);
    // started on the singular hyperplane: position pinned, expansion factor still e
    const auto on_z = integrate_flow(f, {0.0, 0.25});
    CHECK(on_z.points.back()[0] == 0.0);
    CHECK(std::abs(on_z.jacobians.back()[0][0] - e1) < 1e-9);
    // leaving the chart box is an error
    CHECK_THROWS_AS(integrate_flow(f, {0.6, 0.0}), Error);
    // malformed calls
    CHECK_THROWS_AS(integrate_flow(f, {0.1}), DomainError);
    CHECK_THROWS_AS(integrate_flow(f, {0.1, 0.1}, FlowOptions{0, 1.0, -1.25, 1.25}), DomainError);
    CHECK_THROWS_AS(integrate_flow(f, {2.0, 0.0}), Error);
}

TEST_CASE("variational Jacobian matches finite differences of the flow") {
    const auto fr = frame_by_name("full2");
    const auto vars = fr->vars();
    const SingFunc pa(Poly::monomial(vars, {0, 2}, Rat(1, 4)));
    const SingFunc pb(Poly::monomial(vars, {1, 0}, Rat(1, 8)));
    const SingFunc px(Poly::monomial(vars, {2, 0}, Rat(-1, 4)));
    const SingFunc py(Poly::monomial(vars, {0, 1}, Rat(1, 8)));
    MoserField f;
    f.frame = fr;
    f.coeff.push_back([pa, pb](const Rat& t) { return pa + pb * t; });
    f.coeff.push_back([px, py](const Rat& t) { return px + py * t; });

    const FlowOptions opt{50, 1.0, -1.25, 1.25};
    std::mt19937 rng(808108u);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    const double delta = 1e-4;
    for (int trial = 0; trial < 12; ++trial) {
        const std::vector<double> p{U(rng), U(rng)};
        const auto J = integrate_flow(f, p, opt).jacobians.back();
        for (int j = 0; j < 2; ++j) {
            auto pp = p, pm = p;
            pp[static_cast<std::size_t>(j)] += delta;
            pm[static_cast<std::size_t>(j)] -= delta;
            const auto qp = integrate_flow(f, pp, opt).points.back();
            const auto qm = integrate_flow(f, pm, opt).points.back();
            for (int i = 0; i < 2; ++i) {
                const double fd = (qp[static_cast<std::size_t>(i)] - qm[static_cast<std::size_t>(i)]) / (2 * delta);
                CHECK(std::abs(J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - fd) < 1e-5);
            }
        }
    }
}

TEST_CASE("sections of the structure module preserve the singular locus") {
    std::mt19937 rng(808107u);
    std::uniform_int_distribution<int> C(-3, 3);
    std::uniform_int_distribution<int> E(0, 2);
    for (const char* name : {"b2", "c2", "c3", "elliptic", "bk3_2"}) {
        const auto fr = frame_by_name(name);
        const auto vars = fr->vars();
        for (int trial = 0; trial < 50; ++trial) {
            // random polynomial frame components
            std::vector<SingFunc> comp;
            for (int k = 0; k < fr->rank(); ++k) {
                Poly p = Poly::zero(vars);
                for (int m = 0; m < 4; ++m) {
                    Exps e(vars.size(), 0);
                    for (auto& ei : e) ei = static_cast<unsigned>(E(rng));
                    p += Poly::monomial(vars, e, Rat(C(rng)));
                }
                comp.push_back(SingFunc(p));
            }
            VectorField total{std::vector<SingFunc>(vars.size(), SingFunc::zero(vars))};
            for (int k = 0; k < fr->rank(); ++k)
                for (std::size_t i = 0; i < vars.size(); ++i)
                    total.comp[i] += comp[static_cast<std::size_t>(k)] *
                                     fr->generators()[static_cast<std::size_t>(k)].comp[i];
            for (const Poly& z : fr->z_locus()) {
                const SingFunc der = apply_vf(total, SingFunc(z));
                REQUIRE(der.is_poly());
                CHECK(der.num().divide_exact(z).has_value());
            }
        }
    }
}

TEST_CASE("time-one pullback of the path endpoint returns the start form") {
    const PathFixture fx;
    std::vector<std::vector<double>> pts;
    for (double x : {-0.9, -0.5, 0.2, 0.6, 1.0})
        for (double y : {-1.0, -0.5, 0.1, 0.5, 0.9}) pts.push_back({x, y});
    const auto rep = verify_moser(fx.w0, fx.w1, fx.mu, pts);
    REQUIRE(rep.residuals.size() == 25);
    CHECK(rep.max_residual < 1e-6);

    // gauge freedom: adding an exact term to the primitive changes the flow
    // but not the conclusion
    EForm mu2 = fx.mu;
    mu2.add_coeff({1}, SingFunc(Poly::monomial(fx.fr->vars(), {2, 0}, Rat(2))));
    std::vector<std::vector<double>> small;
    for (double x : {-0.4, 0.3, 0.5})
        for (double y : {-0.3, 0.2, 0.4}) small.push_back({x, y});
    CHECK(verify_moser(fx.w0, fx.w1, mu2, small).max_residual < 1e-6);

    // second gauge: a term along the other coframe direction
    EForm mu3 = fx.mu;
    mu3.add_coeff({2}, SingFunc(Poly::monomial(fx.fr->vars(), {0, 1}, Rat(2))));
    CHECK(verify_moser(fx.w0, fx.w1, mu3, small).max_residual < 1e-6);

    // stopping the flow halfway leaves a visible mismatch
    const auto half = verify_moser(fx.w0, fx.w1, fx.mu, small, FlowOptions{400, 0.5, -1.25, 1.25});
    CHECK(half.max_residual > 0.1);
}

TEST_CASE("flow integrator converges at fourth order") {
    // The plain path field happens to be integrated exactly (its flow is a
    // Moebius map in t), so the study uses a gauge-shifted primitive whose
    // flow has a genuinely exponential first coordinate: x(1) = x0 e^{-y0}.
    const PathFixture fx;
    EForm mu3 = fx.mu;
    mu3.add_coeff({2}, SingFunc(Poly::monomial(fx.fr->vars(), {0, 1}, Rat(2))));
    const MoserField f = moser_field(fx.w0, fx.w1, mu3);
    const double exact = 0.5 * std::exp(-1.0);
    std::vector<double> errs;
    for (int n : {8, 16, 32, 64}) {
        const auto fl = integrate_flow(f, {0.5, 1.0}, FlowOptions{n, 1.0, -1.25, 1.25});
        errs.push_back(std::abs(fl.points.back()[0] - exact));
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        REQUIRE(errs[i + 1] > 0.0);
        CHECK(std::log2(errs[i] / errs[i + 1]) >= 3.5);
    }
    CHECK(errs.back() < 1e-8);
}

TEST_CASE("homotopy integral differentiates to the pullback defect") {
    const auto fr = frame_by_name("full2");
    const auto vars = fr->vars();
    const SingFunc pa(Poly::monomial(vars, {0, 2}, Rat(1, 4)));
    const SingFunc pb(Poly::monomial(vars, {1, 0}, Rat(1, 8)));
    const SingFunc px(Poly::monomial(vars, {2, 0}, Rat(-1, 4)));
    const SingFunc py(Poly::monomial(vars, {0, 1}, Rat(1, 8)));
    MoserField f;
    f.frame = fr;
    f.coeff.push_back([pa, pb](const Rat& t) { return pa + pb * t; });
    f.coeff.push_back([px, py](const Rat& t) { return px + py * t; });

    // closed (top-degree) form with nonconstant coefficient
    EForm w(fr, 2);
    w.set_coeff({1, 2}, SingFunc(Poly::constant(vars, Rat(1)) + Poly::monomial(vars, {2, 0}, Rat(1))));

    const FlowOptions opt{600, 1.0, -1.25, 1.25};
    const double delta = 1e-3;
    for (const auto& p : std::vector<std::vector<double>>{
             {0.1, 0.2}, {-0.3, 0.25}, {0.4, -0.35}, {0.0, 0.0}, {-0.45, -0.4}}) {
        // d(Q w) coefficient on dx^dy by central differences of Q
        auto shift = [&](int axis, double d) {
            auto q = p;
            q[static_cast<std::size_t>(axis)] += d;
            return homotopy_Q(w, f, q, opt);
        };
        const double dQ2_dx = (qval(shift(0, delta), {2}) - qval(shift(0, -delta), {2})) / (2 * delta);
        const double dQ1_dy = (qval(shift(1, delta), {1}) - qval(shift(1, -delta), {1})) / (2 * delta);
        const double lhs = dQ2_dx - dQ1_dy;
        // pullback defect phi_1^* w - w on the same coefficient
        const auto fl = integrate_flow(f, p, opt);
        const auto& q = fl.points.back();
        const auto& J = fl.jacobians.back();
        const double fq = 1.0 + q[0] * q[0];
        const double fp = 1.0 + p[0] * p[0];
        const double rhs = fq * (J[0][0] * J[1][1] - J[0][1] * J[1][0]) - fp;
        CHECK(std::abs(lhs - rhs) < 1e-5);
    }

    // zero field: no transport, empty result
    const auto zf = constant_field(fr, {SingFunc::zero(vars), SingFunc::zero(vars)});
    CHECK(homotopy_Q(w, zf, {0.5, 0.5}).empty());
    // scalar forms contract to zero
    CHECK(homotopy_Q(EForm::scalar(fr, SingFunc::constant(vars, Rat(3))), f, {0.1, 0.1}).empty());
    // frames must match
    const PathFixture fx;
    CHECK_THROWS_AS(homotopy_Q(fx.w0, f, {0.1, 0.1}), DomainError);
}

TEST_CASE("primitive solver recovers the path primitive") {
    const PathFixture fx;
    const EForm target = fx.w1 - fx.w0;
    const auto got = find_primitive(target);
    REQUIRE(got.has_value());
    CHECK(*got == fx.mu);
    CHECK(ederiv(*got) == target);
}

TEST_CASE("primitive solver certifies the non-exact line class") {
    const auto b1 = frame_by_name("b1");
    const EForm cls = EForm::theta(b1, {1});
    CHECK(ederiv(cls).is_zero());
    CHECK(!find_primitive(cls).has_value());
    CHECK(!find_primitive(cls, 9).has_value());
}

TEST_CASE("primitive solver inverts the derivative on random one-forms") {
    std::mt19937 rng(808109u);
    std::uniform_int_distribution<int> C(-4, 4);
    std::uniform_int_distribution<int> E(0, 3);
    int solved = 0;
    for (const char* name : {"b2", "c2"}) {
        const auto fr = frame_by_name(name);
        const auto vars = fr->vars();
        for (int trial = 0; trial < 10; ++trial) {
            EForm mu(fr, 1);
            for (int k = 1; k <= fr->rank(); ++k) {
                Poly p = Poly::zero(vars);
                for (int m = 0; m < 3; ++m) {
                    Exps e(vars.size(), 0);
                    for (auto& ei : e) ei = static_cast<unsigned>(E(rng));
                    p += Poly::monomial(vars, e, Rat(C(rng)));
                }
                mu.add_coeff({k}, SingFunc(p));
            }
            const EForm target = ederiv(mu);
            const auto got = find_primitive(target);
            REQUIRE(got.has_value());
            CHECK(ederiv(*got) == target);
            if (!target.is_zero()) ++solved;
        }
    }
    CHECK(solved >= 15);
    // rejections
    const auto fr = frame_by_name("c2");
    CHECK_THROWS_AS(find_primitive(EForm::scalar(fr, SingFunc::constant(fr->vars(), Rat(1)))), DomainError);
    EForm ext(fr, 1);
    ext.set_coeff({1}, sf("(1)/((x))", fr));
    CHECK_THROWS_AS(find_primitive(ext), DomainError);
}
