#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecalc/ctower.hpp"
#include "ecalc/errors.hpp"

#include <cmath>
#include <random>

using namespace ecalc;

namespace {

SingFunc sf(const std::string& text, const EFramePtr& fr) { return parse_singfunc(text, fr->vars()); }

EForm kform(const EFramePtr& fr, const IdxSet& idx, const SingFunc& f) {
    EForm w(fr, static_cast<int>(idx.size()));
    w.set_coeff(idx, f);
    return w;
}

EForm constant_form(const EFramePtr& fr, const Rat& c) {
    return EForm::scalar(fr, SingFunc(Poly::constant(fr->vars(), c)));
}

Poly rand_poly(const std::vector<std::string>& vars, std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(0, 3), coef(-4, 4), expo(0, 2);
    Poly p = Poly::zero(vars);
    const int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        Exps e(vars.size(), 0);
        for (auto& ei : e) ei = static_cast<unsigned>(expo(rng));
        p += Poly::monomial(vars, e, coef(rng));
    }
    return p;
}

EForm rand_form(const EFramePtr& fr, int degree, std::mt19937& rng) {
    EForm w(fr, degree);
    std::vector<int> idx(static_cast<std::size_t>(degree));
    std::uniform_int_distribution<int> keep(0, 2);
    auto rec = [&](auto&& self, int pos, int next) -> void {
        if (pos == degree) {
            if (keep(rng) == 0) return;
            Poly p = rand_poly(fr->vars(), rng);
            if (!p.is_zero()) w.add_coeff(idx, SingFunc(p));
            return;
        }
        for (int i = next; i <= fr->rank(); ++i) {
            idx[static_cast<std::size_t>(pos)] = i;
            self(self, pos + 1, i + 1);
        }
    };
    rec(rec, 0, 1);
    return w;
}

} // namespace

TEST_CASE("stratum frames of the crossing model") {
    const CModel m(3, {1, 2, 3});
    CHECK(m.frame()->rank() == 3);
    CHECK(m.frame()->vars() == std::vector<std::string>{"x", "y", "z"});
    const auto& s1 = m.stratum_frame({1});
    CHECK(s1->vars() == std::vector<std::string>{"y", "z"});
    CHECK(s1->rank() == 2);
    CHECK(m.stratum_frame({1, 3}) == m.stratum_frame({3, 1})); // cached by locus
    const auto& pt = m.stratum_frame({1, 2, 3});
    CHECK(pt->rank() == 0);
    CHECK(pt->vars().empty());
    CHECK(m.remaining({1}) == std::vector<int>{2, 3});
    CHECK(m.remaining({}) == std::vector<int>{1, 2, 3});
    CHECK(m.frame_slot({2}, 3) == 2);
    CHECK(m.ordered_strata(2).size() == 6);
    CHECK(m.ordered_strata(0) == std::vector<Stratum>{{}});
    CHECK(m.ordered_strata(4).empty());

    const CModel mixed(3, {2});
    CHECK(mixed.stratum_frame({2})->rank() == 2);
    CHECK(mixed.stratum_frame({2})->singular_factors().empty());
    CHECK(mixed.remaining({2}).empty());

    CHECK(stratum_sign({1, 2, 3}) == 1);
    CHECK(stratum_sign({2, 1, 3}) == -1);
    CHECK(stratum_sign({3, 1, 2}) == 1);

    CHECK_THROWS_AS(CModel(0, {}), DomainError);
    CHECK_THROWS_AS(CModel(2, {3}), DomainError);
    CHECK_THROWS_AS(m.stratum_frame({1, 1}), DomainError);
    CHECK_THROWS_AS(m.stratum_frame({4}), DomainError);
    CHECK(mixed.frame_slot({}, 1) == 1);          // smooth coordinates keep their slots
    CHECK_THROWS_AS(m.frame_slot({1}, 1), DomainError); // removed coordinate has none
}

TEST_CASE("the residue figure of the threefold crossing") {
    const CModel m(3, {1, 2, 3});
    const EForm omega = kform(m.frame(), {1, 2, 3}, sf("1", m.frame()));
    const ResidueTower t = residue_tower(m, omega);
    CHECK(t.top_degree == 3);
    CHECK(t.levels() == 3);
    CHECK(t.entries.size() == 16);

    auto expect1 = [&](const Stratum& s, const Rat& c) {
        const auto& fr = m.stratum_frame(s);
        CHECK(t.entries.at(s) == kform(fr, {1, 2}, SingFunc(Poly::constant(fr->vars(), c))));
    };
    expect1({1}, 1);  // dy/y ^ dz/z
    expect1({2}, -1); // dz/z ^ dx/x written on the ascending basis
    expect1({3}, 1);  // dx/x ^ dy/y

    auto expect2 = [&](const Stratum& s, const Rat& c) {
        const auto& fr = m.stratum_frame(s);
        CHECK(t.entries.at(s) == kform(fr, {1}, SingFunc(Poly::constant(fr->vars(), c))));
    };
    expect2({1, 2}, -1); // -dz/z
    expect2({2, 1}, 1);
    expect2({1, 3}, 1); // dy/y
    expect2({3, 1}, -1);
    expect2({3, 2}, 1); // dx/x
    expect2({2, 3}, -1);

    auto expect3 = [&](const Stratum& s, const Rat& c) {
        CHECK(t.entries.at(s) == constant_form(m.stratum_frame(s), c));
    };
    expect3({1, 2, 3}, -1);
    expect3({1, 3, 2}, 1);
    expect3({2, 1, 3}, 1);
    expect3({2, 3, 1}, -1);
    expect3({3, 1, 2}, -1);
    expect3({3, 2, 1}, 1);
}

TEST_CASE("towers of the area family carry the coefficient at the double point") {
    for (const Rat& k : {Rat(1), Rat(2), Rat(7, 2)}) {
        const CModel m(2, {1, 2});
        const EForm w = kform(m.frame(), {1, 2}, SingFunc(Poly::constant(m.frame()->vars(), k)));
        const ResidueTower t = residue_tower(m, w);
        CHECK(t.levels() == 2);
        CHECK(t.entries.at({1}) ==
              kform(m.stratum_frame({1}), {1}, SingFunc(Poly::constant(m.stratum_frame({1})->vars(), -k))));
        CHECK(t.entries.at({2}) ==
              kform(m.stratum_frame({2}), {1}, SingFunc(Poly::constant(m.stratum_frame({2})->vars(), k))));
        CHECK(t.entries.at({1, 2}) == constant_form(m.stratum_frame({1, 2}), -k));
        CHECK(t.entries.at({2, 1}) == constant_form(m.stratum_frame({2, 1}), k));
        // unordered double-point data is the pair {k, -k}
        const Rat a = t.entries.at({1, 2}).coeff(IdxSet{}).num().constant_value();
        const Rat b = t.entries.at({2, 1}).coeff(IdxSet{}).num().constant_value();
        CHECK(((a == k && b == -k) || (a == -k && b == k)));
    }
}

TEST_CASE("residues of smooth forms vanish") {
    const CModel m(2, {1, 2});
    const auto& fr = m.frame();
    // xy theta_1^theta_2 is the plain area form dx^dy
    const EForm area = kform(fr, {1, 2}, sf("x*y", fr));
    CHECK(residue(m, {}, area, 1).is_zero());
    CHECK(residue(m, {}, area, 2).is_zero());
    const EForm one_leg = kform(fr, {1}, sf("x*y^2 + x^2", fr));
    CHECK(residue(m, {}, one_leg, 1).is_zero());
    CHECK(!residue(m, {}, kform(fr, {1}, sf("y", fr)), 1).is_zero());
}

TEST_CASE("residue commutes with the exterior derivative") {
    std::mt19937 rng(808101u);
    const CModel m3(3, {1, 2, 3});
    std::uniform_int_distribution<int> degree(1, 3), plane(1, 3);
    int checked = 0;
    for (int trial = 0; trial < 210; ++trial) {
        const EForm w = rand_form(m3.frame(), degree(rng), rng);
        const int i = plane(rng);
        const EForm lhs = residue(m3, {}, ederiv(w), i);
        const EForm rhs = ederiv(residue(m3, {}, w, i));
        CHECK(lhs == rhs);
        ++checked;
    }
    CHECK(checked == 210);
}

TEST_CASE("the coefficient route and the contraction route agree") {
    std::mt19937 rng(808102u);
    const CModel m3(3, {1, 2, 3});
    std::uniform_int_distribution<int> degree(1, 3), pick(0, 2);
    for (int trial = 0; trial < 210; ++trial) {
        // alternate between the ambient chart and a one-deep stratum
        Stratum s;
        if (pick(rng) == 0) s = {pick(rng) + 1};
        const auto& fr = m3.stratum_frame(s);
        const int d = std::min(degree(rng), fr->rank());
        const EForm w = rand_form(fr, d, rng);
        for (int i : m3.remaining(s)) CHECK(residue(m3, s, w, i) == residue_via_contraction(m3, s, w, i));
    }
}

TEST_CASE("towers from global forms are compatible at every level") {
    std::mt19937 rng(808103u);
    const CModel m2(2, {1, 2});
    const CModel m3(3, {1, 2, 3});
    std::uniform_int_distribution<int> degree2(1, 2), degree3(1, 3);
    for (int trial = 0; trial < 25; ++trial) {
        const EForm w2 = rand_form(m2.frame(), degree2(rng), rng);
        const ResidueTower t2 = residue_tower(m2, w2);
        for (int k = 0; k <= t2.levels(); ++k) {
            const auto verdict = is_compatible(m2, k, t2.level(k));
            CHECK(verdict.compatible);
        }
        const EForm w3 = rand_form(m3.frame(), degree3(rng), rng);
        const ResidueTower t3 = residue_tower(m3, w3);
        for (int k = 0; k <= t3.levels(); ++k) CHECK(is_compatible(m3, k, t3.level(k)).compatible);
    }
}

TEST_CASE("opposite orderings of a double stratum carry opposite values") {
    std::mt19937 rng(808104u);
    const CModel m2(2, {1, 2});
    for (int trial = 0; trial < 210; ++trial) {
        const EForm w = rand_form(m2.frame(), 2, rng);
        const ResidueTower t = residue_tower(m2, w);
        CHECK(t.entries.at({1, 2}) == -t.entries.at({2, 1}));
    }
}

TEST_CASE("branch values at a crossing must be opposite") {
    const CModel m(2, {1, 2});
    const auto& on_x0 = m.stratum_frame({1}); // coordinates (y)
    const auto& on_y0 = m.stratum_frame({2}); // coordinates (x)

    auto level1 = [&](const SingFunc& g, const SingFunc& f) {
        LevelAssignment a;
        a.emplace(Stratum{1}, kform(on_x0, {1}, g)); // g(y) dy/y on {x=0}
        a.emplace(Stratum{2}, kform(on_y0, {1}, f)); // f(x) dx/x on {y=0}
        return a;
    };

    // f(0) = 1, g(0) = -1: the double-point values are opposite
    const auto good = is_compatible(m, 1, level1(sf("-1 + y", on_x0), sf("1 + x", on_y0)));
    CHECK(good.compatible);

    // f(0) = g(0) = 1: fails exactly at the double point
    const auto bad = is_compatible(m, 1, level1(sf("1 + y", on_x0), sf("1 + x", on_y0)));
    CHECK(!bad.compatible);
    CHECK(bad.witness.size() == 2);
    CHECK(bad.reason == "reordering does not act by the permutation sign");

    // all-zero assignment is compatible
    LevelAssignment zero;
    zero.emplace(Stratum{1}, EForm::zero(on_x0, 1));
    zero.emplace(Stratum{2}, EForm::zero(on_y0, 1));
    CHECK(is_compatible(m, 1, zero).compatible);

    // bookkeeping failures carry reasons
    LevelAssignment missing;
    missing.emplace(Stratum{1}, EForm::zero(on_x0, 1));
    CHECK(!is_compatible(m, 1, missing).compatible);
    LevelAssignment mixed;
    mixed.emplace(Stratum{1}, EForm::zero(on_x0, 1));
    mixed.emplace(Stratum{2}, EForm::zero(on_y0, 0));
    CHECK(!is_compatible(m, 1, mixed).compatible);
    LevelAssignment skew;
    skew.emplace(Stratum{1, 2}, constant_form(m.stratum_frame({1, 2}), 5));
    skew.emplace(Stratum{2, 1}, constant_form(m.stratum_frame({2, 1}), 5));
    CHECK(!is_compatible(m, 2, skew).compatible);
    LevelAssignment quotient;
    quotient.emplace(Stratum{1}, kform(on_x0, {1}, sf("(1)/((y))", on_x0)));
    quotient.emplace(Stratum{2}, kform(on_y0, {1}, sf("1", on_y0)));
    CHECK(!is_compatible(m, 1, quotient).compatible);
}

TEST_CASE("whole-level compatibility of a global form") {
    const CModel m(2, {1, 2});
    const EForm w = kform(m.frame(), {1, 2}, sf("3 + x*y + x^2", m.frame()));
    LevelAssignment root;
    root.emplace(Stratum{}, w);
    CHECK(is_compatible(m, 0, root).compatible);
}

TEST_CASE("decomposition invariants of the area family") {
    std::vector<std::vector<Rat>> seen;
    for (const Rat& k : {Rat(1), Rat(2), Rat(7, 2)}) {
        const CModel m(2, {1, 2});
        const EForm w = kform(m.frame(), {1, 2}, SingFunc(Poly::constant(m.frame()->vars(), k)));
        const auto inv = decomposition_invariants(m, w);
        REQUIRE(inv.size() == 3);
        CHECK(inv[0].level == 0);
        CHECK(!inv[0].exact);
        REQUIRE(inv[0].volumes.size() == 1);
        CHECK(std::abs(inv[0].volumes[0]) < 1e-6);
        CHECK(!inv[1].exact);
        REQUIRE(inv[1].volumes.size() == 2);
        CHECK(std::abs(inv[1].volumes[0]) < 1e-6);
        CHECK(std::abs(inv[1].volumes[1]) < 1e-6);
        CHECK(inv[2].exact);
        REQUIRE(inv[2].constants.size() == 2);
        CHECK(inv[2].strata == std::vector<Stratum>{{1, 2}, {2, 1}});
        CHECK(inv[2].constants == std::vector<Rat>{-k, k});
        seen.push_back(inv[2].constants);
    }
    // distinct members of the family have distinct invariant vectors
    CHECK(seen[0] != seen[1]);
    CHECK(seen[0] != seen[2]);
    CHECK(seen[1] != seen[2]);
}

TEST_CASE("decomposition invariants of the plain area form") {
    const CModel m(2, {1, 2});
    const EForm w = kform(m.frame(), {1, 2}, sf("x*y", m.frame())); // dx^dy
    const auto inv = decomposition_invariants(m, w);
    REQUIRE(inv.size() == 3);
    CHECK(std::abs(inv[0].volumes[0] - 4.0) < 1e-6);
    CHECK(std::abs(inv[1].volumes[0]) < 1e-9);
    CHECK(std::abs(inv[1].volumes[1]) < 1e-9);
    CHECK(inv[2].constants == std::vector<Rat>{Rat(0), Rat(0)});

    CHECK_THROWS_AS(decomposition_invariants(m, kform(m.frame(), {1}, sf("1", m.frame()))), DomainError);
}

TEST_CASE("preimage splitting rebuilds the threefold crossing form") {
    const CModel m(3, {1, 2, 3});
    const EForm omega = kform(m.frame(), {1, 2, 3}, sf("1", m.frame()));
    const ResidueTower t = residue_tower(m, omega);
    const auto pre = res_preimage(m, {}, t.level(1));
    CHECK(pre.form == omega);
    CHECK(pre.blocks.size() == 3 + 6 + 6);
}

TEST_CASE("double-point data lifts to the area form in two steps") {
    const CModel m(2, {1, 2});
    const Rat c(7, 2);
    LevelAssignment bottom;
    bottom.emplace(Stratum{1, 2}, constant_form(m.stratum_frame({1, 2}), -c));
    bottom.emplace(Stratum{2, 1}, constant_form(m.stratum_frame({2, 1}), c));
    REQUIRE(is_compatible(m, 2, bottom).compatible);

    const LevelAssignment mid = res_preimage_all(m, 1, bottom);
    CHECK(is_compatible(m, 1, mid).compatible);
    for (int j : {1, 2})
        CHECK(residue(m, {j}, mid.at({j}), j == 1 ? 2 : 1) == bottom.at({j, j == 1 ? 2 : 1}));

    const auto pre = res_preimage(m, {}, mid);
    CHECK(pre.form == kform(m.frame(), {1, 2}, SingFunc(Poly::constant(m.frame()->vars(), c))));
}

TEST_CASE("preimage splitting inverts the residue on random towers") {
    std::mt19937 rng(808105u);
    const CModel m3(3, {1, 2, 3});
    std::uniform_int_distribution<int> degree(1, 3);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const EForm w = rand_form(m3.frame(), degree(rng), rng);
        const ResidueTower t = residue_tower(m3, w);
        for (int level = 0; level < std::min(t.levels(), 2); ++level) {
            const auto target = t.level(level + 1);
            for (const auto& base : m3.ordered_strata(level)) {
                const auto pre = res_preimage(m3, base, target);
                for (int j : m3.remaining(base)) {
                    Stratum child = base;
                    child.push_back(j);
                    CHECK(residue(m3, base, pre.form, j) == target.at(child));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("preimage levels stay sign-equivariant") {
    std::mt19937 rng(808106u);
    const CModel m3(3, {1, 2, 3});
    for (int trial = 0; trial < 20; ++trial) {
        const EForm w = rand_form(m3.frame(), 3, rng);
        const ResidueTower t = residue_tower(m3, w);
        const auto rebuilt = res_preimage_all(m3, 1, t.level(2));
        CHECK(is_compatible(m3, 1, rebuilt).compatible);
    }
}

TEST_CASE("the flattening profile and its logarithmic damper") {
    for (double t : {0.0, 0.1, 0.25, 0.5}) {
        CHECK(rho_odd(t) == t);
        CHECK(rho_odd(-t) == -t);
        CHECK(rho_chi(t) == 1.0);
    }
    for (double t : {1.0, 1.5, 20.0}) {
        CHECK(rho_odd(t) == 0.75);
        CHECK(rho_odd(-t) == -0.75);
        CHECK(rho_chi(t) == 0.0);
    }
    // continuity and flat gluing at the seams
    CHECK(std::abs(rho_odd(0.5 + 1e-9) - 0.5) < 1e-8);
    CHECK(std::abs(rho_odd(1.0 - 1e-9) - 0.75) < 1e-8);
    const double h = 1e-6;
    auto slope = [&](double t) { return (rho_odd(t + h) - rho_odd(t - h)) / (2 * h); };
    CHECK(std::abs(slope(0.5) - 1.0) < 1e-5);
    CHECK(std::abs(slope(1.0)) < 1e-5);
    // monotone on the gluing interval, and chi = t rho'/rho there
    for (double t = 0.5; t < 1.0; t += 0.05) {
        CHECK(slope(t) > 0.0);
        CHECK(std::abs(rho_chi(t) - t * slope(t) / rho_odd(t)) < 1e-4);
    }
}

TEST_CASE("mollified realization of a preimage form") {
    const CModel m(2, {1, 2});
    const Rat k(2);
    const EForm w = kform(m.frame(), {1, 2}, SingFunc(Poly::constant(m.frame()->vars(), k)));
    const ResidueTower t = residue_tower(m, w);
    const auto pre = res_preimage(m, {}, t.level(1));
    CHECK(pre.form == w);

    auto component = [&](const std::map<IdxSet, double>& vals, const IdxSet& key) {
        const auto it = vals.find(key);
        return it == vals.end() ? 0.0 : it->second;
    };

    // inside the flat region the realization is the singular form itself
    for (const auto& p : {std::vector<double>{0.3, -0.4}, std::vector<double>{-0.45, 0.2}}) {
        const auto vals = preimage_eval_dx(m, pre, p);
        CHECK(std::abs(component(vals, {1, 2}) - 2.0 / (p[0] * p[1])) < 1e-12);
    }
    // far from every hyperplane the crossed factors are damped to zero
    const auto far = preimage_eval_dx(m, pre, {1.5, -1.25});
    CHECK(std::abs(component(far, {1, 2})) < 1e-15);
    CHECK(std::abs(component(far, {1})) < 1e-15);
    CHECK(std::abs(component(far, {2})) < 1e-15);

    CHECK_THROWS_AS(preimage_eval_dx(m, pre, {0.1}), DomainError);
    StratumPreimage off = pre;
    off.base = {1};
    CHECK_THROWS_AS(preimage_eval_dx(m, off, {0.1, 0.1}), DomainError);
}

TEST_CASE("residue bookkeeping errors") {
    const CModel m(2, {1, 2});
    const auto& fr = m.frame();
    const EForm w = kform(fr, {1, 2}, sf("1", fr));
    CHECK_THROWS_AS(residue(m, {}, constant_form(fr, 1), 1), DomainError); // 0-form
    CHECK_THROWS_AS(residue(m, {1}, w, 1), DomainError); // wrong stratum for the form
    const EForm quotient = kform(fr, {1}, sf("(1)/((x))", fr));
    CHECK_THROWS_AS(residue(m, {}, quotient, 1), DomainError);
    CHECK_THROWS_AS(residue_tower(m, quotient), DomainError);
    const CModel mixed(3, {2});
    const EForm w3 = kform(mixed.frame(), {1, 2}, sf("1", mixed.frame()));
    CHECK_THROWS_AS(residue(mixed, {}, w3, 1), DomainError); // x1 is not singular here
    CHECK(residue(mixed, {}, w3, 2).degree() == 1);
}
