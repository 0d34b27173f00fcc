#include "ecalc/cohomology.hpp"
#include "ecalc/ctower.hpp"
#include "ecalc/errors.hpp"
#include "ecalc/gallery.hpp"
#include "ecalc/json_io.hpp"
#include "ecalc/numerics.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ecalc;

namespace {

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    Json j;
    in >> j;
    return j;
}

std::string tuple_key(const Stratum& s) {
    std::string key;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) key += ",";
        key += std::to_string(s[i]);
    }
    return key;
}

/// Hyperplane model behind a frame whose singular set is a union of
/// coordinate hyperplanes (the b/c family); rejects anything else.
CModel cmodel_of(const EFramePtr& fr) {
    std::vector<int> hp;
    for (int i = 0; i < fr->dim(); ++i) {
        const Poly xi = Poly::variable(fr->vars(), fr->vars()[static_cast<std::size_t>(i)]);
        for (const auto& z : fr->z_locus())
            if (z == xi) hp.push_back(i + 1);
    }
    CModel m(fr->dim(), hp);
    if (*m.frame() != *fr)
        throw DomainError("this command needs a coordinate-hyperplane model (b/c family)");
    return m;
}

struct Emitter {
    std::string out_path;

    int finish(CliReport& rep) const {
        rep.exit_status = rep.all_pass() ? 0 : 1;
        for (const auto& v : rep.verdicts)
            std::cout << v.name << ": " << (v.pass ? "pass" : "FAIL") << "\n";
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw ParseError("cannot write " + out_path, 0);
            out << report_to_json(rep).dump(2) << "\n";
        }
        return rep.exit_status;
    }
};

Json cohomology_rows(const GradedCohomReport& rep) {
    Json rows = Json::array();
    for (const auto& [kd, dim] : rep.dims) {
        Json reps = Json::array();
        for (std::size_t i = 0; i < rep.classes.size(); ++i)
            if (rep.classes[i].level == kd.first && rep.classes[i].coeff_degree == kd.second)
                reps.push_back(rep.classes[i].rep);
        rows.push_back(Json{{"k", kd.first}, {"d", kd.second}, {"dim", dim}, {"representatives", reps}});
    }
    return rows;
}

void print_cohomology(const GradedCohomReport& rep) {
    std::cout << "subject: " << rep.subject << (rep.graded ? "  (graded, shift " + std::to_string(rep.shift) + ")" : "  (truncated band)") << "\n";
    if (!rep.warning.empty()) std::cout << "note: " << rep.warning << "\n";
    std::cout << "level  degree  dim  representatives\n";
    for (const auto& [kd, dim] : rep.dims) {
        std::cout << kd.first << "      " << kd.second << "       " << dim << "    ";
        bool first = true;
        for (const auto& c : rep.classes)
            if (c.level == kd.first && c.coeff_degree == kd.second) {
                if (!first) std::cout << ",  ";
                first = false;
                std::cout << c.rep;
            }
        std::cout << "\n";
    }
    std::cout << "totals:";
    for (const long t : rep.totals) std::cout << " " << t;
    std::cout << "\n";
}

std::vector<std::vector<double>> default_check_points() {
    const double xs[5] = {-1.0, -0.5, 0.25, 0.6, 1.0};
    const double ys[5] = {-1.0, -0.4, 0.1, 0.55, 0.9};
    std::vector<std::vector<double>> pts;
    for (double x : xs)
        for (double y : ys) pts.push_back({x, y});
    return pts;
}

int cmd_involutive(const std::string& frame_spec, const Emitter& em) {
    const auto fr = frame_from_spec(frame_spec);
    const auto res = check_involutive(fr->generators());
    CliReport rep;
    rep.command = "involutive";
    rep.digest = input_digest(Json{{"command", "involutive"}, {"frame", frame_to_json(fr)}});
    rep.verdicts.push_back({"involutive", res.ok});
    Json c = Json::array();
    for (std::size_t i = 0; i < res.c.size(); ++i)
        for (std::size_t j = 0; j < res.c.size(); ++j)
            for (std::size_t k = 0; k < res.c.size(); ++k)
                if (!res.c[i][j][k].is_zero())
                    c.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"coeff", res.c[i][j][k].str()}});
    rep.data = Json{{"commuting", fr->commuting()}, {"generic_rank", res.generic_rank}, {"structure_functions", c}};
    std::cout << "generators: " << fr->rank() << ", generic rank " << res.generic_rank
              << (fr->commuting() ? ", commuting" : "") << "\n";
    return em.finish(rep);
}

int cmd_d(const std::string& frame_spec, const std::string& form_path, const Emitter& em) {
    EFramePtr fr = frame_spec.empty() ? nullptr : frame_from_spec(frame_spec);
    const EForm w = form_from_json(load_json_file(form_path), fr);
    const EForm dw = ederiv(w);
    CliReport rep;
    rep.command = "d";
    rep.digest = input_digest(Json{{"command", "d"}, {"form", form_to_json(w)}});
    rep.verdicts.push_back({"d_squared_zero", ederiv(dw).is_zero()});
    rep.data = Json{{"result", form_to_json(dw)}, {"result_str", dw.str()}};
    std::cout << "d(" << w.str() << ") = " << dw.str() << "\n";
    return em.finish(rep);
}

int cmd_wedge(const std::string& frame_spec, const std::string& a_path, const std::string& b_path,
              const Emitter& em) {
    EFramePtr fr = frame_spec.empty() ? nullptr : frame_from_spec(frame_spec);
    const EForm a = form_from_json(load_json_file(a_path), fr);
    const EForm b = form_from_json(load_json_file(b_path), a.frame());
    const EForm ab = wedge(a, b);
    CliReport rep;
    rep.command = "wedge";
    rep.digest = input_digest(Json{{"command", "wedge"}, {"a", form_to_json(a)}, {"b", form_to_json(b)}});
    rep.verdicts.push_back({"computed", true});
    rep.data = Json{{"result", form_to_json(ab)}, {"result_str", ab.str()}};
    std::cout << ab.str() << "\n";
    return em.finish(rep);
}

int tower_common(const CModel& m, const EForm& w, const std::string& command, const Emitter& em) {
    const auto tower = residue_tower(m, w);
    CliReport rep;
    rep.command = command;
    rep.digest = input_digest(Json{{"command", command}, {"form", form_to_json(w)}});
    Json entries = Json::object();
    for (const auto& [s, f] : tower.entries) entries[tuple_key(s)] = f.str();
    rep.data = Json{{"levels", tower.levels()}, {"entries", entries}};
    rep.verdicts.push_back({"computed", true});
    for (int level = 0; level <= tower.levels(); ++level) {
        std::cout << "level " << level << ":\n";
        for (const auto& [s, f] : tower.level(level))
            std::cout << "  (" << tuple_key(s) << ") -> " << f.str() << "\n";
    }
    return em.finish(rep);
}

int cmd_residue(const std::string& frame_spec, const std::string& form_path, int index,
                const std::string& gallery_id, const Emitter& em) {
    if (!gallery_id.empty()) {
        if (gallery_id != "xyz3") throw DomainError("residue knows the gallery entry xyz3 only");
        return tower_common(CModel(3, {1, 2, 3}), gallery_xyz3_form(), "residue", em);
    }
    if (frame_spec.empty() || form_path.empty())
        throw DomainError("residue needs --frame and --form (or --gallery xyz3)");
    const auto fr = frame_from_spec(frame_spec);
    const CModel m = cmodel_of(fr);
    const EForm w = form_from_json(load_json_file(form_path), fr);
    const EForm r = residue(m, {}, w, index);
    CliReport rep;
    rep.command = "residue";
    rep.digest = input_digest(Json{{"command", "residue"}, {"form", form_to_json(w)}, {"index", index}});
    rep.verdicts.push_back({"computed", true});
    rep.data = Json{{"result", form_to_json(r)}, {"result_str", r.str()}};
    std::cout << "res_" << index << " = " << r.str() << "\n";
    return em.finish(rep);
}

int cmd_tower(const std::string& frame_spec, const std::string& form_path, const std::string& gallery_id,
              const Emitter& em) {
    if (!gallery_id.empty()) {
        if (gallery_id != "xyz3") throw DomainError("tower knows the gallery entry xyz3 only");
        return tower_common(CModel(3, {1, 2, 3}), gallery_xyz3_form(), "tower", em);
    }
    const auto fr = frame_from_spec(frame_spec);
    return tower_common(cmodel_of(fr), form_from_json(load_json_file(form_path), fr), "tower", em);
}

int cmd_compatible(const std::string& frame_spec, const std::string& form_path, const Emitter& em) {
    const auto fr = frame_from_spec(frame_spec);
    const CModel m = cmodel_of(fr);
    const EForm w = form_from_json(load_json_file(form_path), fr);
    const auto verdict = is_compatible(m, 0, {{Stratum{}, w}});
    CliReport rep;
    rep.command = "compatible";
    rep.digest = input_digest(Json{{"command", "compatible"}, {"form", form_to_json(w)}});
    rep.verdicts.push_back({"compatible", verdict.compatible});
    rep.data = Json{{"reason", verdict.reason}, {"witness", tuple_key(verdict.witness)}};
    if (!verdict.compatible) std::cout << "reason: " << verdict.reason << "\n";
    return em.finish(rep);
}

int cmd_liouville(const std::string& frame_spec, const std::string& form_path, double eps_min, double eps_max,
                  int order, double tol, const Emitter& em) {
    const auto fr = frame_from_spec(frame_spec);
    cmodel_of(fr); // validates the model family
    const EForm w = form_from_json(load_json_file(form_path), fr);
    QuadratureOptions opt;
    opt.order = order;
    opt.tolerance = tol;
    if (eps_max > 0) opt.eps_pow_min = static_cast<int>(std::lround(-std::log2(eps_max)));
    if (eps_min > 0) opt.eps_pow_max = static_cast<int>(std::lround(-std::log2(eps_min)));
    const auto q = liouville_volume(w, opt);
    CliReport rep;
    rep.command = "liouville";
    rep.digest = input_digest(Json{{"command", "liouville"}, {"form", form_to_json(w)},
                                   {"eps_pow", Json::array({opt.eps_pow_min, opt.eps_pow_max})},
                                   {"order", opt.order}});
    rep.verdicts.push_back({"converged", q.converged});
    rep.residuals.emplace_back("error_estimate", q.error_estimate);
    rep.data = Json{{"value", q.value}, {"diagonal", q.diagonal}};
    std::cout.precision(12);
    std::cout << "volume = " << q.value << "  (error estimate " << q.error_estimate << ")\n";
    try {
        const Rat exact = liouville_exact(w);
        const double ex = static_cast<double>(exact);
        rep.residuals.emplace_back("vs_exact", std::abs(q.value - ex));
        rep.verdicts.push_back({"matches_exact", std::abs(q.value - ex) < std::max(tol, q.error_estimate * 4)});
        rep.data["exact"] = exact.str();
        std::cout << "exact  = " << exact.str() << "\n";
    } catch (const Error&) {
        // no closed form for this coefficient; quadrature stands alone
    }
    return em.finish(rep);
}

int cmd_cohomology(const std::string& frame_spec, int max_degree, const Emitter& em) {
    const auto fr = frame_from_spec(frame_spec);
    const auto rep = e_cohomology(fr, max_degree);
    CliReport out;
    out.command = "cohomology";
    out.digest = input_digest(Json{{"command", "cohomology"}, {"frame", frame_to_json(fr)}, {"max_degree", max_degree}});
    long total = 0;
    for (const long t : rep.totals) total += t;
    out.verdicts.push_back({"classes_match_totals", static_cast<long>(rep.classes.size()) == total});
    out.data = Json{{"graded", rep.graded}, {"shift", rep.shift}, {"warning", rep.warning},
                    {"totals", rep.totals}, {"table", cohomology_rows(rep)}};
    print_cohomology(rep);
    return em.finish(out);
}

int cmd_poisson_cohomology(const std::string& bivector_path, int max_degree, const Emitter& em) {
    const MultiVec pi = bivector_path.empty() ? plane_elliptic_poisson()
                                              : multivec_from_json(load_json_file(bivector_path));
    const auto rep = poisson_cohomology(pi, max_degree);
    CliReport out;
    out.command = "poisson-cohomology";
    out.digest = input_digest(Json{{"command", "poisson-cohomology"}, {"bivector", multivec_to_json(pi)},
                                   {"max_degree", max_degree}});
    long total = 0;
    for (const long t : rep.totals) total += t;
    out.verdicts.push_back({"classes_match_totals", static_cast<long>(rep.classes.size()) == total});
    out.data = Json{{"graded", rep.graded}, {"shift", rep.shift}, {"warning", rep.warning},
                    {"totals", rep.totals}, {"table", cohomology_rows(rep)}};
    print_cohomology(rep);
    return em.finish(out);
}

int cmd_compare(const std::string& frame_spec, int max_degree, const Emitter& em) {
    const auto cmp = compare_e_vs_poisson(frame_from_spec(frame_spec), max_degree);
    CliReport rep;
    rep.command = "compare";
    rep.digest = input_digest(Json{{"command", "compare"}, {"frame", frame_to_json(cmp.e.e_reps.empty() ? frame_from_spec(frame_spec) : cmp.e.e_reps[0].frame())}, {"max_degree", max_degree}});
    Json dims = Json::array();
    for (const auto& [a, b] : cmp.level_dims) dims.push_back(Json::array({a, b}));
    rep.verdicts.push_back({"distinct_at_level_two", cmp.distinct_at_two});
    rep.data = Json{{"level_dims", dims}, {"text", cmp.text}};
    std::cout << cmp.text;
    return em.finish(rep);
}

int cmd_moser(const std::string& gallery_id, int steps, double tol, const std::string& points_path,
              const Emitter& em) {
    if (gallery_id != "b-worked") throw DomainError("moser knows the gallery entry b-worked only");
    const MoserExample ex = gallery_b_worked();
    const auto vars = ex.frame->vars();
    const Poly y = Poly::variable(vars, "y");

    const MoserField X = moser_field(ex.w0, ex.w1, ex.mu);
    bool field_ok = true;
    for (const Rat& t : {Rat(0), Rat(1) / 3, Rat(1) / 2, Rat(1)}) {
        const auto comps = X.at(t);
        field_ok = field_ok && comps[0].is_zero() &&
                   comps[1] == SingFunc(y * (Rat(-1) / (Rat(1) + t)));
    }

    std::vector<std::vector<double>> pts;
    if (!points_path.empty()) {
        for (const auto& row : load_json_file(points_path)) pts.push_back(row.get<std::vector<double>>());
    } else {
        pts = default_check_points();
    }

    FlowOptions opt;
    opt.steps = steps;
    double endpoint_err = 0.0;
    for (const auto& p : pts) {
        const auto flow = integrate_flow(X, p, opt);
        const auto& q = flow.points.back();
        endpoint_err = std::max(endpoint_err, std::abs(q[0] - p[0]));
        endpoint_err = std::max(endpoint_err, std::abs(q[1] - p[1] / 2));
    }
    const auto mrep = verify_moser(ex.w0, ex.w1, ex.mu, pts, opt);

    CliReport rep;
    rep.command = "moser";
    rep.digest = input_digest(Json{{"command", "moser"}, {"gallery", gallery_id}, {"steps", steps},
                                   {"points", pts.size()}});
    rep.verdicts.push_back({"field_matches_exact", field_ok});
    rep.verdicts.push_back({"endpoint_halves_fiber", endpoint_err < tol});
    rep.verdicts.push_back({"pullback_residual_small", mrep.max_residual < tol});
    rep.residuals.emplace_back("endpoint_error", endpoint_err);
    rep.residuals.emplace_back("max_residual", mrep.max_residual);
    rep.data = Json{{"check_points", pts.size()}, {"field_at_0", "-y e_2 (fiber direction)"}};
    std::cout.precision(12);
    std::cout << "endpoint error " << endpoint_err << ", pullback residual " << mrep.max_residual << "\n";
    return em.finish(rep);
}

int cmd_s4(int grid, double tol, const Emitter& em) {
    const auto s4 = s4_verify(grid, tol);
    CliReport rep;
    rep.command = "s4";
    rep.digest = input_digest(Json{{"command", "s4"}, {"grid", grid}});
    rep.verdicts.push_back({"commuting_fields", s4.fields_commute});
    rep.verdicts.push_back({"fields_sum_to_zero", s4.relation_holds});
    rep.verdicts.push_back({"bracket_closes", s4.bracket_closes});
    rep.verdicts.push_back({"wedge_square_identity", s4.wedge_identity});
    rep.verdicts.push_back({"reference_expansion", s4.expansion_matches});
    rep.verdicts.push_back({"nondegenerate_off_locus", s4.nondegenerate});
    rep.verdicts.push_back({"transitions_consistent", s4.transitions_consistent});
    rep.residuals.emplace_back("min_abs_det", s4.min_abs_det);
    rep.data = Json{{"text", s4.text}, {"expansion_diff", s4.expansion_diff}};
    std::cout << s4.text;
    return em.finish(rep);
}

int cmd_gallery(const std::string& id, const Emitter& em) {
    CliReport rep;
    rep.command = "gallery";
    rep.digest = input_digest(Json{{"command", "gallery"}, {"id", id}});
    if (id.empty()) {
        Json ids = Json::array();
        for (const auto& g : gallery_ids()) {
            std::cout << g << ": " << gallery_describe(g) << "\n";
            ids.push_back(g);
        }
        rep.data = Json{{"ids", ids}};
    } else {
        std::cout << id << ": " << gallery_describe(id) << "\n";
        if (id == "xyz3") std::cout << gallery_xyz3_form().str() << "\n";
        if (id == "nodarboux") std::cout << gallery_nodarboux_form(Rat(7) / 2).str() << " (k = 7/2)\n";
        if (id == "b-worked") {
            const auto ex = gallery_b_worked();
            std::cout << "start " << ex.w0.str() << ", end " << ex.w1.str() << ", primitive " << ex.mu.str() << "\n";
        }
        rep.data = Json{{"id", id}, {"description", gallery_describe(id)}};
    }
    rep.verdicts.push_back({"known", true});
    return em.finish(rep);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"calculus on singular tangent frames: forms, residues, volumes, cohomology, flows"};
    app.require_subcommand(1);

    std::string frame_spec, form_path, form2_path, out_path, gallery_id, points_path, bivector_path;
    int index = 1, max_degree = 12, steps = 1000, grid = 9, quad_order = 20;
    double eps_min = 0.0, eps_max = 0.0, tol = 1e-6, s4_tol = 1e-9;

    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", out_path, "write the JSON report here"); };

    auto* involutive = app.add_subcommand("involutive", "check a generator set and print its structure functions");
    involutive->add_option("--frame", frame_spec, "frame name, JSON text, or file")->required();
    add_out(involutive);

    auto* d = app.add_subcommand("d", "exterior derivative of a form");
    d->add_option("--frame", frame_spec, "frame override");
    d->add_option("--form", form_path, "form JSON file")->required();
    add_out(d);

    auto* wedgec = app.add_subcommand("wedge", "wedge product of two forms");
    wedgec->add_option("--frame", frame_spec, "frame override");
    wedgec->add_option("--form", form_path, "first form")->required();
    wedgec->add_option("--form2", form2_path, "second form")->required();
    add_out(wedgec);

    auto* residuec = app.add_subcommand("residue", "residue along one hyperplane, or a gallery tower");
    residuec->add_option("--frame", frame_spec, "hyperplane-model frame");
    residuec->add_option("--form", form_path, "form JSON file");
    residuec->add_option("--index", index, "1-based hyperplane coordinate");
    residuec->add_option("--gallery", gallery_id, "gallery entry (xyz3)");
    add_out(residuec);

    auto* towerc = app.add_subcommand("tower", "all iterated residues of a form");
    towerc->add_option("--frame", frame_spec, "hyperplane-model frame");
    towerc->add_option("--form", form_path, "form JSON file");
    towerc->add_option("--gallery", gallery_id, "gallery entry (xyz3)");
    add_out(towerc);

    auto* compatiblec = app.add_subcommand("compatible", "check the residue compatibility of a form");
    compatiblec->add_option("--frame", frame_spec, "hyperplane-model frame")->required();
    compatiblec->add_option("--form", form_path, "form JSON file")->required();
    add_out(compatiblec);

    auto* liouvillec = app.add_subcommand("liouville", "principal-value volume on the unit box");
    liouvillec->add_option("--frame", frame_spec, "hyperplane-model frame")->required();
    liouvillec->add_option("--form", form_path, "top-degree form JSON file")->required();
    liouvillec->add_option("--eps-min", eps_min, "smallest excluded-neighborhood width");
    liouvillec->add_option("--eps-max", eps_max, "largest excluded-neighborhood width");
    liouvillec->add_option("--quad-order", quad_order, "Gauss-Legendre points per panel");
    liouvillec->add_option("--tol", tol, "convergence threshold");
    add_out(liouvillec);

    auto* cohomologyc = app.add_subcommand("cohomology", "graded cohomology of the coframe complex");
    cohomologyc->add_option("--frame", frame_spec, "frame name, JSON text, or file")->required();
    cohomologyc->add_option("--max-degree", max_degree, "coefficient degree cap");
    add_out(cohomologyc);

    auto* poissonc = app.add_subcommand("poisson-cohomology", "graded cohomology of the bracket complex");
    poissonc->add_option("--bivector", bivector_path, "bivector JSON file (default: quadratic plane structure)");
    poissonc->add_option("--max-degree", max_degree, "coefficient degree cap");
    add_out(poissonc);

    auto* comparec = app.add_subcommand("compare", "coframe vs bracket cohomology on the elliptic plane");
    comparec->add_option("--frame", frame_spec, "frame (default: elliptic)");
    comparec->add_option("--max-degree", max_degree, "coefficient degree cap");
    add_out(comparec);

    auto* moserc = app.add_subcommand("moser", "solve and verify a path-of-forms normalization");
    moserc->add_option("--gallery", gallery_id, "worked example (default: b-worked)");
    moserc->add_option("--steps", steps, "RK4 steps");
    moserc->add_option("--tol", tol, "pass threshold for the residuals");
    moserc->add_option("--points", points_path, "JSON file with check points [[x, y], ...]");
    add_out(moserc);

    auto* s4c = app.add_subcommand("s4", "verify the ten-chart sphere atlas");
    s4c->add_option("--grid", grid, "points per axis for the nondegeneracy sweep");
    s4c->add_option("--tol", s4_tol, "determinant threshold");
    add_out(s4c);

    auto* galleryc = app.add_subcommand("gallery", "list or describe the worked examples");
    galleryc->add_option("id", gallery_id, "entry to describe");
    add_out(galleryc);

    try {
        app.parse(argc, argv);
        const Emitter em{out_path};
        if (involutive->parsed()) return cmd_involutive(frame_spec, em);
        if (d->parsed()) return cmd_d(frame_spec, form_path, em);
        if (wedgec->parsed()) return cmd_wedge(frame_spec, form_path, form2_path, em);
        if (residuec->parsed()) return cmd_residue(frame_spec, form_path, index, gallery_id, em);
        if (towerc->parsed()) return cmd_tower(frame_spec, form_path, gallery_id, em);
        if (compatiblec->parsed()) return cmd_compatible(frame_spec, form_path, em);
        if (liouvillec->parsed()) return cmd_liouville(frame_spec, form_path, eps_min, eps_max, quad_order, tol, em);
        if (cohomologyc->parsed()) return cmd_cohomology(frame_spec, max_degree, em);
        if (poissonc->parsed()) return cmd_poisson_cohomology(bivector_path, max_degree, em);
        if (comparec->parsed()) return cmd_compare(frame_spec.empty() ? "elliptic" : frame_spec, max_degree, em);
        if (moserc->parsed()) return cmd_moser(gallery_id.empty() ? "b-worked" : gallery_id, steps, tol, points_path, em);
        if (s4c->parsed()) return cmd_s4(grid, s4_tol, em);
        if (galleryc->parsed()) return cmd_gallery(gallery_id, em);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
