#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecalc/errors.hpp"
#include "ecalc/gallery.hpp"
#include "ecalc/json_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace ecalc;

namespace {

std::string cli_path() {
    const char* p = std::getenv("ECALC_CLI");
    REQUIRE_MESSAGE(p != nullptr, "ECALC_CLI must point at the driver binary");
    return p;
}

std::filesystem::path scratch_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("ecalc_test_" + name);
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

Json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    Json j;
    in >> j;
    return j;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("frame documents round-trip through JSON with their kind") {
    for (const char* name : {"b2", "c3", "elliptic", "full2", "bk3_2"}) {
        const auto fr = frame_by_name(name);
        const auto back = frame_from_json(frame_to_json(fr));
        CHECK(*back == *fr);
        CHECK(back->kind() == fr->kind());
    }
    // a frame that is not in the named catalogue stays custom
    const auto chart = gallery_s4().charts.front().frame;
    const auto back = frame_from_json(frame_to_json(chart));
    CHECK(*back == *chart);
    CHECK(back->kind() == "custom");
}

TEST_CASE("frame documents accept names and shorthands") {
    CHECK(*frame_from_json(Json("b2")) == *frame_by_name("b2"));
    CHECK(*frame_from_json(Json{{"name", "elliptic"}}) == *frame_by_name("elliptic"));
    // hyperplane shorthand: x d/dx + d/dy is the half-plane frame
    const auto fr = frame_from_json(Json{{"dim", 2}, {"hyperplanes", Json::array({1})}});
    CHECK(*fr == *frame_by_name("b2"));
    CHECK_THROWS_AS(frame_from_json(Json{{"vars", Json::array({"x"})}}), ParseError);
    CHECK_THROWS_AS(frame_from_json(Json(3)), ParseError);
    // declared shape must match the generators
    Json bad = frame_to_json(frame_by_name("b2"));
    bad["rank"] = 7;
    CHECK_THROWS_AS(frame_from_json(bad), ParseError);
}

TEST_CASE("frame specs resolve names, inline text, and files") {
    CHECK(*frame_from_spec("c2") == *frame_by_name("c2"));
    CHECK(*frame_from_spec("{\"dim\": 2, \"hyperplanes\": [1, 2]}") == *frame_by_name("c2"));
    const auto path = scratch_file("frame.json");
    std::ofstream(path) << frame_to_json(frame_by_name("elliptic")).dump();
    CHECK(*frame_from_spec(path.string()) == *frame_by_name("elliptic"));
    CHECK_THROWS_AS(frame_from_spec("no_such_frame"), DomainError);
    CHECK_THROWS_AS(frame_from_spec("{not json"), ParseError);
    CHECK_THROWS_AS(frame_from_spec("/nonexistent/frame.json"), ParseError);
}

TEST_CASE("form and multivector documents round-trip") {
    const auto fr = frame_by_name("b2");
    EForm w(fr, 1);
    w.set_coeff({1}, parse_singfunc("x^2 + 3/2*y", fr->vars()));
    w.set_coeff({2}, parse_singfunc("(1 + y)/((x)^2)", fr->vars()));
    const EForm back = form_from_json(form_to_json(w));
    CHECK(back == w);
    CHECK(back.frame()->kind() == "b");

    MultiVec m(fr, 2, MvBasis::ambient);
    m.set_coeff({1, 2}, parse_singfunc("x*y - 2", fr->vars()));
    CHECK(multivec_from_json(multivec_to_json(m)) == m);
    MultiVec f(fr, 1, MvBasis::frame);
    f.set_coeff({2}, SingFunc::constant(fr->vars(), Rat(5)));
    CHECK(multivec_from_json(multivec_to_json(f)) == f);

    CHECK_THROWS_AS(form_from_json(Json{{"frame", "b2"}}), ParseError);
    CHECK_THROWS_AS(multivec_from_json(Json{{"frame", "b2"}, {"degree", 1}, {"basis", "sideways"}}),
                    ParseError);
}

TEST_CASE("reports round-trip and digests are stable") {
    CliReport r;
    r.command = "demo";
    r.digest = input_digest(Json{{"command", "demo"}});
    r.verdicts = {{"first", true}, {"second", false}};
    r.residuals = {{"gap", 0.5}};
    r.data = Json{{"k", 3}};
    const CliReport back = report_from_json(report_to_json(r));
    CHECK(back.command == r.command);
    CHECK(back.digest == r.digest);
    CHECK(back.verdicts.size() == 2);
    CHECK(back.verdicts[1].name == "second");
    CHECK_FALSE(back.all_pass());
    CHECK(back.residuals == r.residuals);
    CHECK(back.data == r.data);

    CHECK(r.digest.size() == 16);
    CHECK(input_digest(Json{{"command", "demo"}}) == r.digest);
    CHECK(input_digest(Json{{"command", "other"}}) != r.digest);
    CHECK(fnv1a64("") == 14695981039346656037ull);
}

TEST_CASE("sphere atlas has ten charts with consistent structure") {
    const Atlas atlas = gallery_s4();
    CHECK(atlas.id == "s4");
    REQUIRE(atlas.charts.size() == 10);
    for (const auto& c : atlas.charts) {
        CHECK(c.frame->dim() == 4);
        CHECK(c.frame->rank() == 4);
        CHECK(c.frame->singular_factors().size() == 4);
        CHECK(c.fields.size() == 5);
        CHECK(c.pi.degree() == 2);
        CHECK(c.transitions.size() == 8);
    }
    CHECK(atlas.chart("U1+").frame->vars() == std::vector<std::string>{"x2", "x3", "x4", "x5"});
    CHECK(atlas.chart("U3-").frame->vars() == std::vector<std::string>{"x1", "x2", "x4", "x5"});
    CHECK_THROWS_AS(atlas.chart("U6+"), DomainError);
}

TEST_CASE("sphere atlas passes every verification") {
    const S4Report rep = s4_verify();
    CHECK(rep.fields_commute);
    CHECK(rep.relation_holds);
    CHECK(rep.bracket_closes);
    CHECK(rep.wedge_identity);
    CHECK(rep.expansion_matches);
    CHECK(rep.expansion_diff.empty());
    CHECK(rep.nondegenerate);
    // ambient determinant is (x2 x3 x4 x5)^-2, smallest at the box corner
    CHECK(rep.min_abs_det == doctest::Approx(1.0));
    CHECK(rep.transitions_consistent);
    CHECK(rep.ok);
    CHECK(rep.text.find("FAIL") == std::string::npos);
    CHECK_THROWS_AS(s4_verify(0), DomainError);
}

TEST_CASE("worked-example entries match their definitions") {
    const EForm xyz = gallery_xyz3_form();
    CHECK(xyz.degree() == 3);
    CHECK(xyz.frame()->kind() == "c");
    const EForm half = gallery_nodarboux_form(Rat(7) / 2);
    CHECK(half.coeff({1, 2}) == SingFunc::constant(half.frame()->vars(), Rat(7) / 2));
    const MoserExample ex = gallery_b_worked();
    CHECK(ex.w1 == ex.w0 * Rat(2));
    CHECK(ederiv(ex.mu) == ex.w1 - ex.w0);
    CHECK(gallery_ids().size() == 4);
    CHECK_THROWS_AS(gallery_describe("nope"), DomainError);
}

TEST_CASE("driver reports the residue figure tower") {
    const auto out = scratch_file("xyz3.json");
    REQUIRE(run_cli("residue --gallery xyz3 --out " + out.string()) == 0);
    const CliReport rep = report_from_json(read_json(out));
    CHECK(rep.command == "residue");
    CHECK(rep.all_pass());
    const auto& entries = rep.data.at("entries");
    CHECK(entries.size() == 16); // 1 + 3 + 6 + 6
    CHECK(entries.at("1") == "(1) th1 th2");
    CHECK(entries.at("2") == "(-1) th1 th2");
    CHECK(entries.at("1,2") == "(-1) th1");
    CHECK(entries.at("2,1") == "(1) th1");
    CHECK(entries.at("1,2,3") == "(-1)");
    CHECK(entries.at("3,2,1") == "(1)");
}

TEST_CASE("driver computes cohomology tables") {
    const auto out = scratch_file("cohom.json");
    REQUIRE(run_cli("cohomology --frame elliptic --max-degree 12 --out " + out.string()) == 0);
    const CliReport rep = report_from_json(read_json(out));
    CHECK(rep.data.at("totals") == Json::array({1, 2, 1}));
    CHECK(rep.data.at("graded") == true);
    bool saw_level_one = false;
    for (const auto& row : rep.data.at("table"))
        if (row.at("k") == 1) {
            saw_level_one = true;
            CHECK(row.at("d") == 0);
            CHECK(row.at("dim") == 2);
            CHECK(row.at("representatives").size() == 2);
        }
    CHECK(saw_level_one);

    const auto pout = scratch_file("pcohom.json");
    REQUIRE(run_cli("poisson-cohomology --max-degree 12 --out " + pout.string()) == 0);
    CHECK(report_from_json(read_json(pout)).data.at("totals") == Json::array({1, 2, 2}));
}

TEST_CASE("driver asserts the level-two separation") {
    const auto out = scratch_file("compare.json");
    REQUIRE(run_cli("compare --out " + out.string()) == 0);
    const CliReport rep = report_from_json(read_json(out));
    CHECK(rep.all_pass());
    CHECK(rep.data.at("level_dims") ==
          Json::array({Json::array({1, 1}), Json::array({2, 2}), Json::array({1, 2})}));
}

TEST_CASE("driver runs the path normalization and the sphere checks") {
    const auto mout = scratch_file("moser.json");
    REQUIRE(run_cli("moser --steps 200 --out " + mout.string()) == 0);
    const CliReport mrep = report_from_json(read_json(mout));
    CHECK(mrep.all_pass());
    for (const auto& [name, value] : mrep.residuals) CHECK(value < 1e-6);

    const auto sout = scratch_file("s4.json");
    REQUIRE(run_cli("s4 --grid 3 --out " + sout.string()) == 0);
    CHECK(report_from_json(read_json(sout)).all_pass());
}

TEST_CASE("driver evaluates volumes and derivatives from documents") {
    const auto form = scratch_file("vol_form.json");
    write_text(form, R"({"frame": "c2", "degree": 2,
                         "terms": [{"indices": [1, 2], "coeff": "x*y + x^3*y^3"}]})");
    const auto out = scratch_file("vol.json");
    REQUIRE(run_cli("liouville --frame c2 --form " + form.string() + " --out " + out.string()) == 0);
    const CliReport rep = report_from_json(read_json(out));
    CHECK(rep.all_pass());
    CHECK(rep.data.at("value").get<double>() == doctest::Approx(40.0 / 9.0).epsilon(1e-9));
    CHECK(rep.data.at("exact") == "40/9");

    const auto dform = scratch_file("d_form.json");
    write_text(dform, R"({"frame": "b2", "degree": 0,
                          "terms": [{"indices": [], "coeff": "x*y"}]})");
    const auto dout = scratch_file("d.json");
    REQUIRE(run_cli("d --form " + dform.string() + " --out " + dout.string()) == 0);
    const CliReport drep = report_from_json(read_json(dout));
    // d(xy) = xy theta1 + xy... on the half-plane frame: (x d/dx)(xy) = xy,
    // (d/dy)(xy) = x
    CHECK(drep.data.at("result_str") == "(x*y) th1 + (x) th2");

    const auto wout = scratch_file("wedge.json");
    REQUIRE(run_cli("wedge --form " + dform.string() + " --form2 " + dform.string() + " --out " +
                    wout.string()) == 0);
    CHECK(report_from_json(read_json(wout)).data.at("result_str") == "(x^2*y^2)");
}

TEST_CASE("driver verifies involutivity and compatibility") {
    REQUIRE(run_cli("involutive --frame elliptic") == 0);
    REQUIRE(run_cli("involutive --frame bk3_2") == 0);

    const auto form = scratch_file("compat_form.json");
    write_text(form, R"({"frame": "c2", "degree": 2,
                         "terms": [{"indices": [1, 2], "coeff": "7"}]})");
    REQUIRE(run_cli("compatible --frame c2 --form " + form.string()) == 0);
}

TEST_CASE("driver maps bad inputs to exit code two") {
    CHECK(run_cli("cohomology --frame no_such_frame") == 2);
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("d --form /nonexistent/form.json") == 2);
    CHECK(run_cli("residue --gallery unknown") == 2);
    CHECK(run_cli("compare --frame b2") == 2);
    CHECK(run_cli("moser --gallery unknown") == 2);
    // elliptic singular set is not a union of coordinate hyperplanes
    const auto form = scratch_file("bad_vol.json");
    write_text(form, R"({"frame": "elliptic", "degree": 2,
                         "terms": [{"indices": [1, 2], "coeff": "1"}]})");
    CHECK(run_cli("liouville --frame elliptic --form " + form.string()) == 2);
    CHECK(run_cli("") == 2);
}

TEST_CASE("driver output is reproducible across runs") {
    const auto a = scratch_file("rep_a.json");
    const auto b = scratch_file("rep_b.json");
    REQUIRE(run_cli("cohomology --frame b1 --max-degree 8 --out " + a.string()) == 0);
    REQUIRE(run_cli("cohomology --frame b1 --max-degree 8 --out " + b.string()) == 0);
    CHECK(read_json(a) == read_json(b));
}
