#include "ecalc/gallery.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace ecalc {

namespace {

std::string chart_name(int axis, int sign) {
    return "U" + std::to_string(axis) + (sign > 0 ? "+" : "-");
}

// Chart (i, s) keeps the sphere coordinates x_j, j != i, listed in
// increasing j.  pos maps the sphere label to the chart slot.
std::vector<int> chart_labels(int axis) {
    std::vector<int> labels;
    for (int j = 1; j <= 5; ++j)
        if (j != axis) labels.push_back(j);
    return labels;
}

Chart make_s4_chart(int axis, int sign) {
    const auto labels = chart_labels(axis);
    std::vector<std::string> vars;
    for (int j : labels) vars.push_back("x" + std::to_string(j));

    std::vector<VectorField> gens;
    std::vector<Poly> hyperplanes;
    for (std::size_t a = 0; a < 4; ++a) {
        const Poly xa = Poly::variable(vars, vars[a]);
        hyperplanes.push_back(xa);
        VectorField g;
        for (std::size_t b = 0; b < 4; ++b)
            g.comp.push_back(a == b ? SingFunc(xa) : SingFunc::zero(vars));
        gens.push_back(std::move(g));
    }
    const auto fr = std::make_shared<EFrame>(
        EFrame::custom(vars, gens, hyperplanes, hyperplanes));

    // v_j = x_j d/dx_j away from its own axis chart; on the axis chart it is
    // minus the sum of the others, so the five fields always add to zero.
    std::vector<VectorField> fields(5);
    std::vector<MultiVec> vmv;
    for (int j = 1; j <= 5; ++j) {
        VectorField v;
        MultiVec m(fr, 1, MvBasis::frame);
        if (j == axis) {
            for (std::size_t a = 0; a < 4; ++a) {
                v.comp.push_back(SingFunc(-Poly::variable(vars, vars[a])));
                m.add_coeff({static_cast<int>(a) + 1}, SingFunc::constant(vars, Rat(-1)));
            }
        } else {
            const auto it = std::find(labels.begin(), labels.end(), j);
            const auto a = static_cast<std::size_t>(it - labels.begin());
            for (std::size_t b = 0; b < 4; ++b)
                v.comp.push_back(a == b ? SingFunc(Poly::variable(vars, vars[a]))
                                        : SingFunc::zero(vars));
            m.add_coeff({static_cast<int>(a) + 1}, SingFunc::constant(vars, Rat(1)));
        }
        fields[static_cast<std::size_t>(j - 1)] = std::move(v);
        vmv.push_back(std::move(m));
    }

    MultiVec pi = mv_wedge(vmv[0] + vmv[1], vmv[1] + vmv[2]) +
                  mv_wedge(vmv[2] + vmv[3], vmv[3] + vmv[4]);

    // Transition into chart (k, t), defined where t*x_k > 0: divide the
    // homogeneous representative (x with s inserted at slot i) by x_k and
    // normalize the target sign.
    std::vector<Transition> transitions;
    for (int k = 1; k <= 5; ++k) {
        if (k == axis) continue;
        const auto kt = std::find(labels.begin(), labels.end(), k);
        const auto kpos = static_cast<std::size_t>(kt - labels.begin());
        const Poly xk = Poly::variable(vars, vars[kpos]);
        for (int t : {1, -1}) {
            Transition tr;
            tr.to = chart_name(k, t);
            tr.domain_var = kpos;
            tr.domain_sign = t;
            for (int m : chart_labels(k)) {
                const Poly num = m == axis
                                     ? Poly::constant(vars, Rat(sign * t))
                                     : Poly::variable(vars, "x" + std::to_string(m)) * Rat(t);
                tr.map.push_back(SingFunc(num).divide(xk, fr->singular_factors()));
            }
            transitions.push_back(std::move(tr));
        }
    }

    return Chart{chart_name(axis, sign), fr,   -1.0, 1.0,
                 std::move(fields),      pi,   std::move(transitions)};
}

bool vf_is_zero(const VectorField& v) {
    for (const auto& c : v.comp)
        if (!c.is_zero()) return false;
    return true;
}

using Mat4 = std::array<std::array<double, 4>, 4>;

double det4(const Mat4& m) {
    double out = 0.0;
    for (int c0 = 0; c0 < 4; ++c0) {
        std::array<int, 3> rest{};
        int w = 0;
        for (int c = 0; c < 4; ++c)
            if (c != c0) rest[static_cast<std::size_t>(w++)] = c;
        double minor = 0.0;
        for (int p = 0; p < 3; ++p) {
            const int c1 = rest[static_cast<std::size_t>(p)];
            const int c2 = rest[static_cast<std::size_t>((p + 1) % 3)];
            const int c3 = rest[static_cast<std::size_t>((p + 2) % 3)];
            minor += m[1][static_cast<std::size_t>(c1)] *
                     (m[2][static_cast<std::size_t>(c2)] * m[3][static_cast<std::size_t>(c3)] -
                      m[2][static_cast<std::size_t>(c3)] * m[3][static_cast<std::size_t>(c2)]);
        }
        out += (c0 % 2 == 0 ? 1.0 : -1.0) * m[0][static_cast<std::size_t>(c0)] * minor;
    }
    return out;
}

std::vector<double> apply_map(const std::vector<SingFunc>& map, const std::vector<double>& p) {
    std::vector<double> out;
    out.reserve(map.size());
    for (const auto& f : map) out.push_back(f.eval(p));
    return out;
}

const Transition* find_transition(const Chart& c, const std::string& to) {
    for (const auto& tr : c.transitions)
        if (tr.to == to) return &tr;
    return nullptr;
}

} // namespace

const Chart& Atlas::chart(const std::string& name) const {
    for (const auto& c : charts)
        if (c.name == name) return c;
    throw DomainError("no chart named " + name + " in atlas " + id);
}

Atlas gallery_s4() {
    Atlas atlas;
    atlas.id = "s4";
    for (int axis = 1; axis <= 5; ++axis)
        for (int sign : {1, -1}) atlas.charts.push_back(make_s4_chart(axis, sign));
    return atlas;
}

S4Report s4_verify(int grid, double tol) {
    if (grid < 1) throw DomainError("grid needs at least one point per axis");
    const Atlas atlas = gallery_s4();
    S4Report rep;
    rep.fields_commute = rep.relation_holds = rep.bracket_closes = true;
    rep.wedge_identity = rep.expansion_matches = rep.nondegenerate = true;
    rep.transitions_consistent = true;
    rep.min_abs_det = std::numeric_limits<double>::infinity();

    // grid values (2r - grid)/grid, r = 0..grid-1: never zero when grid is
    // odd; zero coordinates are skipped otherwise
    std::vector<double> axis_vals;
    for (int r = 0; r < grid; ++r)
        axis_vals.push_back(static_cast<double>(2 * r - grid) / grid);

    for (const auto& chart : atlas.charts) {
        for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = a + 1; b < 5; ++b)
                if (!vf_is_zero(vf_bracket(chart.fields[a], chart.fields[b])))
                    rep.fields_commute = false;

        VectorField total = chart.fields[0];
        for (std::size_t a = 1; a < 5; ++a)
            for (std::size_t i = 0; i < 4; ++i) total.comp[i] += chart.fields[a].comp[i];
        if (!vf_is_zero(total)) rep.relation_holds = false;

        if (!is_poisson(chart.pi).ok) rep.bracket_closes = false;

        // pi^pi against twice the sum of the five hatted 4-vectors
        MultiVec hatted(chart.frame, 4, MvBasis::ambient);
        for (std::size_t skip = 0; skip < 5; ++skip) {
            MultiVec prod = MultiVec::scalar(chart.frame, SingFunc::constant(chart.frame->vars(), Rat(1)));
            for (std::size_t a = 0; a < 5; ++a)
                if (a != skip) prod = mv_wedge(prod, MultiVec::from_vector_field(chart.frame, chart.fields[a]));
            hatted = hatted + prod;
        }
        if (anchor_expand(mv_wedge(chart.pi, chart.pi)) != hatted * Rat(2)) rep.wedge_identity = false;

        // dual-form determinant in ambient coordinates across the grid
        const EForm dual = bivector_to_form(chart.pi);
        const auto M = pairing_matrix(dual);
        const auto C = chart.frame->coframe_in_dx();
        std::vector<std::size_t> r(4, 0);
        std::vector<double> p(4);
        for (r[0] = 0; r[0] < axis_vals.size(); ++r[0])
            for (r[1] = 0; r[1] < axis_vals.size(); ++r[1])
                for (r[2] = 0; r[2] < axis_vals.size(); ++r[2])
                    for (r[3] = 0; r[3] < axis_vals.size(); ++r[3]) {
                        bool on_locus = false;
                        for (int i = 0; i < 4; ++i) {
                            p[static_cast<std::size_t>(i)] = axis_vals[r[static_cast<std::size_t>(i)]];
                            on_locus = on_locus || std::abs(p[static_cast<std::size_t>(i)]) < 1e-12;
                        }
                        if (on_locus) continue;
                        Mat4 Cv{}, Mv{}, MC{}, amb{};
                        for (std::size_t a = 0; a < 4; ++a)
                            for (std::size_t i = 0; i < 4; ++i) {
                                Cv[a][i] = C[a][i].eval(p);
                                Mv[a][i] = M[a][i].eval(p);
                            }
                        for (std::size_t a = 0; a < 4; ++a)
                            for (std::size_t j = 0; j < 4; ++j)
                                for (std::size_t b = 0; b < 4; ++b) MC[a][j] += Mv[a][b] * Cv[b][j];
                        for (std::size_t i = 0; i < 4; ++i)
                            for (std::size_t j = 0; j < 4; ++j)
                                for (std::size_t a = 0; a < 4; ++a) amb[i][j] += Cv[a][i] * MC[a][j];
                        const double det = det4(amb);
                        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(det));
                        if (std::abs(det) <= tol) rep.nondegenerate = false;
                    }
    }

    // reference six-term expansion on the first-axis charts
    for (const char* name : {"U1+", "U1-"}) {
        const auto& chart = atlas.chart(name);
        const auto& vars = chart.frame->vars();
        auto mono = [&](int a, int b) {
            return SingFunc(Poly::variable(vars, vars[static_cast<std::size_t>(a - 1)]) *
                            Poly::variable(vars, vars[static_cast<std::size_t>(b - 1)]));
        };
        MultiVec want(chart.frame, 2, MvBasis::ambient);
        want.set_coeff({1, 2}, mono(1, 2));            // x2x3 d2^d3
        want.set_coeff({1, 3}, mono(1, 3));            // x2x4 d2^d4
        want.set_coeff({2, 3}, mono(2, 3) * Rat(2));   // 2 x3x4 d3^d4
        want.set_coeff({1, 4}, mono(1, 4));            // x2x5 d2^d5
        want.set_coeff({2, 4}, mono(2, 4) * Rat(2));   // 2 x3x5 d3^d5
        want.set_coeff({3, 4}, mono(3, 4));            // x4x5 d4^d5
        const MultiVec got = anchor_expand(chart.pi);
        if (got != want) {
            rep.expansion_matches = false;
            std::ostringstream diff;
            diff << chart.name << ": expected " << want.str() << ", computed " << got.str() << "; ";
            rep.expansion_diff += diff.str();
        }
    }

    // transition consistency: round trips and triple loops on off-locus
    // sample points, skipping legs whose half-box domain misses the point
    const double mags[4] = {0.35, 0.55, 0.75, 0.95};
    long tested = 0;
    auto in_domain = [](const Transition& tr, const std::vector<double>& p) {
        return tr.domain_sign * p[tr.domain_var] > 0;
    };
    for (const auto& A : atlas.charts) {
        for (const auto& t1 : A.transitions) {
            const auto& B = atlas.chart(t1.to);
            for (int pattern = 0; pattern < 4; ++pattern) {
                std::vector<double> p(4);
                for (std::size_t i = 0; i < 4; ++i)
                    p[i] = mags[(i + static_cast<std::size_t>(pattern)) % 4] *
                           (((static_cast<std::size_t>(pattern) >> i) & 1u) ? -1.0 : 1.0);
                p[t1.domain_var] = std::abs(p[t1.domain_var]) * t1.domain_sign;
                const auto q = apply_map(t1.map, p);

                const Transition* back = find_transition(B, A.name);
                if (back != nullptr && in_domain(*back, q)) {
                    const auto rtrip = apply_map(back->map, q);
                    for (std::size_t i = 0; i < 4; ++i)
                        if (std::abs(rtrip[i] - p[i]) > 1e-10) rep.transitions_consistent = false;
                    ++tested;
                }
                for (const auto& t2 : B.transitions) {
                    if (t2.to == A.name || !in_domain(t2, q)) continue;
                    const auto& Cc = atlas.chart(t2.to);
                    const Transition* home = find_transition(Cc, A.name);
                    if (home == nullptr) continue;
                    const auto s = apply_map(t2.map, q);
                    if (!in_domain(*home, s)) continue;
                    const auto loop = apply_map(home->map, s);
                    for (std::size_t i = 0; i < 4; ++i)
                        if (std::abs(loop[i] - p[i]) > 1e-10) rep.transitions_consistent = false;
                    ++tested;
                }
            }
        }
    }
    if (tested < 100) rep.transitions_consistent = false;

    rep.ok = rep.fields_commute && rep.relation_holds && rep.bracket_closes &&
             rep.wedge_identity && rep.nondegenerate && rep.transitions_consistent;
    std::ostringstream text;
    auto line = [&](const char* what, bool pass) {
        text << what << ": " << (pass ? "pass" : "FAIL") << "\n";
    };
    line("commuting fields", rep.fields_commute);
    line("fields sum to zero", rep.relation_holds);
    line("bracket closes on the bivector", rep.bracket_closes);
    line("wedge square identity", rep.wedge_identity);
    line("reference expansion on the first-axis charts", rep.expansion_matches);
    line("dual form nondegenerate off the locus", rep.nondegenerate);
    line("transition maps consistent", rep.transitions_consistent);
    rep.text = text.str();
    return rep;
}

EForm gallery_xyz3_form() { return EForm::theta(frame_by_name("c3"), {1, 2, 3}); }

EForm gallery_nodarboux_form(const Rat& k) {
    return EForm::theta(frame_by_name("c2"), {1, 2}) * k;
}

MoserExample gallery_b_worked() {
    const auto fr = frame_by_name("b2");
    const EForm w0 = EForm::theta(fr, {1, 2});
    EForm mu(fr, 1);
    mu.set_coeff({1}, SingFunc(-Poly::variable(fr->vars(), "y")));
    return MoserExample{fr, w0, w0 * Rat(2), mu};
}

std::vector<std::string> gallery_ids() { return {"s4", "xyz3", "nodarboux", "b-worked"}; }

std::string gallery_describe(const std::string& id) {
    if (id == "s4") return "ten-chart atlas on the 4-sphere with five scaling fields and their bivector";
    if (id == "xyz3") return "dx/x ^ dy/y ^ dz/z on the three-axis model";
    if (id == "nodarboux") return "k dx/x ^ dy/y on the two-axis model (one form per value of k)";
    if (id == "b-worked") return "half-plane path dx/x^dy to 2 dx/x^dy with primitive -y dx/x";
    throw DomainError("unknown gallery id: " + id + " (try: s4, xyz3, nodarboux, b-worked)");
}

} // namespace ecalc
