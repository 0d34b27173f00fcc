#include "ecalc/json_io.hpp"

#include "ecalc/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ecalc {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what, 0); }

std::vector<std::string> string_list(const Json& j, const char* field) {
    if (!j.is_array()) bad(std::string(field) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) bad(std::string(field) + " must contain strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<Poly> poly_list(const Json& j, const std::vector<std::string>& vars, const char* field) {
    std::vector<Poly> out;
    for (const auto& s : string_list(j, field)) out.push_back(parse_poly(s, vars));
    return out;
}

IdxSet indices_of(const Json& j) {
    if (!j.is_array()) bad("indices must be an array");
    IdxSet idx;
    for (const auto& e : j) {
        if (!e.is_number_integer()) bad("indices must be integers");
        idx.push_back(e.get<int>());
    }
    return idx;
}

/// Restore a shipped frame kind when the serialized generators agree with
/// the named constructor; equality ignores the kind tag, so this only
/// upgrades the label (and with it kind-gated behaviour downstream).
EFramePtr restore_kind(const std::string& kind, const EFrame& built) {
    const int n = built.dim();
    EFramePtr candidate;
    try {
        if (kind == "full") candidate = std::make_shared<EFrame>(EFrame::full(n));
        else if (kind == "b") candidate = std::make_shared<EFrame>(EFrame::b(n));
        else if (kind.rfind("b", 0) == 0 && kind.size() > 1)
            candidate = std::make_shared<EFrame>(EFrame::bk(n, static_cast<unsigned>(std::stoul(kind.substr(1)))));
        else if (kind == "elliptic") candidate = std::make_shared<EFrame>(EFrame::elliptic(n));
        else if (kind == "c") {
            std::vector<int> hp;
            for (int i = 0; i < n; ++i) {
                const Poly xi = Poly::variable(built.vars(), built.vars()[static_cast<std::size_t>(i)]);
                for (const auto& z : built.z_locus())
                    if (z == xi) hp.push_back(i + 1);
            }
            candidate = std::make_shared<EFrame>(EFrame::c_model(n, hp));
        } else if (kind == "foliation") {
            std::vector<int> tangent;
            for (const auto& g : built.generators())
                for (std::size_t i = 0; i < g.comp.size(); ++i)
                    if (!g.comp[i].is_zero()) tangent.push_back(static_cast<int>(i) + 1);
            candidate = std::make_shared<EFrame>(EFrame::foliation(n, tangent));
        }
    } catch (const Error&) {
        return nullptr;
    }
    if (candidate && *candidate == built) return candidate;
    return nullptr;
}

} // namespace

Json frame_to_json(const EFramePtr& fr) {
    Json j;
    j["dim"] = fr->dim();
    j["rank"] = fr->rank();
    j["kind"] = fr->kind();
    j["vars"] = fr->vars();
    Json gens = Json::array();
    for (const auto& g : fr->generators()) {
        Json comps = Json::array();
        for (const auto& c : g.comp) comps.push_back(c.str());
        gens.push_back(std::move(comps));
    }
    j["generators"] = std::move(gens);
    Json sing = Json::array(), locus = Json::array();
    for (const auto& f : fr->singular_factors()) sing.push_back(f.str());
    for (const auto& z : fr->z_locus()) locus.push_back(z.str());
    j["singular_factors"] = std::move(sing);
    j["z_locus"] = std::move(locus);
    return j;
}

EFramePtr frame_from_json(const Json& j) {
    if (j.is_string()) return frame_by_name(j.get<std::string>());
    if (!j.is_object()) bad("frame document must be an object or a name");
    if (j.contains("name")) return frame_by_name(j.at("name").get<std::string>());
    if (j.contains("hyperplanes") && !j.contains("generators")) {
        if (!j.contains("dim")) bad("hyperplane shorthand needs \"dim\"");
        std::vector<int> hp;
        for (const auto& e : j.at("hyperplanes")) hp.push_back(e.get<int>());
        return std::make_shared<EFrame>(EFrame::c_model(j.at("dim").get<int>(), hp));
    }
    if (!j.contains("vars") || !j.contains("generators")) bad("frame document needs \"vars\" and \"generators\"");
    const auto vars = string_list(j.at("vars"), "vars");
    std::vector<VectorField> gens;
    for (const auto& g : j.at("generators")) {
        VectorField v;
        for (const auto& comp : string_list(g, "generator")) v.comp.push_back(parse_singfunc(comp, vars));
        gens.push_back(std::move(v));
    }
    std::vector<Poly> sing, locus;
    if (j.contains("singular_factors")) sing = poly_list(j.at("singular_factors"), vars, "singular_factors");
    if (j.contains("z_locus")) locus = poly_list(j.at("z_locus"), vars, "z_locus");
    auto built = EFrame::custom(vars, std::move(gens), std::move(sing), std::move(locus));
    if (j.contains("dim") && j.at("dim").get<int>() != built.dim()) bad("declared dim disagrees with vars");
    if (j.contains("rank") && j.at("rank").get<int>() != built.rank()) bad("declared rank disagrees with generators");
    if (j.contains("kind"))
        if (auto named = restore_kind(j.at("kind").get<std::string>(), built)) return named;
    return std::make_shared<EFrame>(std::move(built));
}

EFramePtr frame_from_spec(const std::string& spec) {
    try {
        if (!spec.empty() && (spec[0] == '{' || spec[0] == '"')) return frame_from_json(Json::parse(spec));
        if (spec.size() > 5 && spec.rfind(".json") == spec.size() - 5) {
            std::ifstream in(spec);
            if (!in) bad("cannot open frame file " + spec);
            Json j;
            in >> j;
            return frame_from_json(j);
        }
    } catch (const Json::exception& e) {
        bad(std::string("malformed frame JSON: ") + e.what());
    }
    return frame_by_name(spec);
}

Json form_to_json(const EForm& w) {
    Json j;
    j["frame"] = frame_to_json(w.frame());
    j["degree"] = w.degree();
    Json terms = Json::array();
    for (const auto& [idx, f] : w.terms()) terms.push_back(Json{{"indices", idx}, {"coeff", f.str()}});
    j["terms"] = std::move(terms);
    return j;
}

EForm form_from_json(const Json& j, EFramePtr frame) {
    if (!j.is_object()) bad("form document must be an object");
    EFramePtr fr = std::move(frame);
    if (!fr) {
        if (!j.contains("frame")) bad("form document needs a \"frame\"");
        fr = frame_from_json(j.at("frame"));
    }
    if (!j.contains("degree")) bad("form document needs a \"degree\"");
    EForm w(fr, j.at("degree").get<int>());
    if (j.contains("terms"))
        for (const auto& t : j.at("terms"))
            w.add_coeff(indices_of(t.at("indices")), parse_singfunc(t.at("coeff").get<std::string>(), fr->vars()));
    return w;
}

Json multivec_to_json(const MultiVec& m) {
    Json j;
    j["frame"] = frame_to_json(m.frame());
    j["degree"] = m.degree();
    j["basis"] = m.basis() == MvBasis::frame ? "frame" : "ambient";
    Json terms = Json::array();
    for (const auto& [idx, f] : m.terms()) terms.push_back(Json{{"indices", idx}, {"coeff", f.str()}});
    j["terms"] = std::move(terms);
    return j;
}

MultiVec multivec_from_json(const Json& j, EFramePtr frame) {
    if (!j.is_object()) bad("multivector document must be an object");
    EFramePtr fr = std::move(frame);
    if (!fr) {
        if (!j.contains("frame")) bad("multivector document needs a \"frame\"");
        fr = frame_from_json(j.at("frame"));
    }
    if (!j.contains("degree") || !j.contains("basis")) bad("multivector document needs \"degree\" and \"basis\"");
    const std::string basis = j.at("basis").get<std::string>();
    if (basis != "frame" && basis != "ambient") bad("basis must be \"frame\" or \"ambient\"");
    MultiVec m(fr, j.at("degree").get<int>(), basis == "frame" ? MvBasis::frame : MvBasis::ambient);
    if (j.contains("terms"))
        for (const auto& t : j.at("terms"))
            m.add_coeff(indices_of(t.at("indices")), parse_singfunc(t.at("coeff").get<std::string>(), fr->vars()));
    return m;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string input_digest(const Json& inputs) {
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(inputs.dump());
    return hex.str();
}

bool CliReport::all_pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

Json report_to_json(const CliReport& r) {
    Json j;
    j["command"] = r.command;
    j["digest"] = r.digest;
    Json verdicts = Json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(Json{{"name", v.name}, {"pass", v.pass}});
    j["verdicts"] = std::move(verdicts);
    Json residuals = Json::object();
    for (const auto& [name, val] : r.residuals) residuals[name] = val;
    j["residuals"] = std::move(residuals);
    j["exit_status"] = r.exit_status;
    j["data"] = r.data;
    return j;
}

CliReport report_from_json(const Json& j) {
    CliReport r;
    r.command = j.at("command").get<std::string>();
    r.digest = j.at("digest").get<std::string>();
    for (const auto& v : j.at("verdicts"))
        r.verdicts.push_back({v.at("name").get<std::string>(), v.at("pass").get<bool>()});
    for (const auto& [name, val] : j.at("residuals").items()) r.residuals.emplace_back(name, val.get<double>());
    r.exit_status = j.at("exit_status").get<int>();
    if (j.contains("data")) r.data = j.at("data");
    return r;
}

} // namespace ecalc
