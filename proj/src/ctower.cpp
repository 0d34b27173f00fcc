#include "ecalc/ctower.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ecalc {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

CModel::CModel(int dim, std::vector<int> hyperplanes) : dim_(dim), hyperplanes_(sorted_unique(std::move(hyperplanes))) {
    if (dim_ < 1) throw DomainError("model dimension must be positive");
    frames_[{}] = std::make_shared<EFrame>(EFrame::c_model(dim_, hyperplanes_));
}

std::vector<int> CModel::removed_set(const Stratum& s) const {
    std::vector<int> r = s;
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end())
        throw DomainError("stratum tuple repeats a hyperplane");
    for (int i : r)
        if (!std::binary_search(hyperplanes_.begin(), hyperplanes_.end(), i))
            throw DomainError("stratum tuple names an undeclared hyperplane");
    return r;
}

const EFramePtr& CModel::stratum_frame(const Stratum& s) const {
    const auto key = removed_set(s);
    auto it = frames_.find(key);
    if (it != frames_.end()) return it->second;

    const auto& ambient = frames_.at({})->vars();
    std::vector<std::string> vars;
    std::vector<bool> sing;
    for (int v = 1; v <= dim_; ++v) {
        if (std::binary_search(key.begin(), key.end(), v)) continue;
        vars.push_back(ambient[static_cast<std::size_t>(v - 1)]);
        sing.push_back(std::binary_search(hyperplanes_.begin(), hyperplanes_.end(), v));
    }
    std::vector<VectorField> gens;
    std::vector<Poly> factors;
    const Poly one = Poly::constant(vars, 1);
    for (std::size_t k = 0; k < vars.size(); ++k) {
        VectorField g;
        g.comp.assign(vars.size(), SingFunc::zero(vars));
        const Poly lead = sing[k] ? Poly::variable(vars, vars[k]) : one;
        g.comp[k] = SingFunc(lead);
        gens.push_back(std::move(g));
        if (sing[k]) factors.push_back(Poly::variable(vars, vars[k]));
    }
    auto fr = std::make_shared<EFrame>(EFrame::custom(vars, std::move(gens), factors, factors));
    return frames_.emplace(key, std::move(fr)).first->second;
}

std::vector<int> CModel::remaining(const Stratum& s) const {
    const auto key = removed_set(s);
    std::vector<int> out;
    for (int i : hyperplanes_)
        if (!std::binary_search(key.begin(), key.end(), i)) out.push_back(i);
    return out;
}

std::vector<Stratum> CModel::ordered_strata(int level) const {
    if (level < 0) throw DomainError("negative tower level");
    std::vector<Stratum> out;
    Stratum cur;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == level) {
            out.push_back(cur);
            return;
        }
        for (int i : hyperplanes_) {
            if (std::find(cur.begin(), cur.end(), i) != cur.end()) continue;
            cur.push_back(i);
            self(self);
            cur.pop_back();
        }
    };
    if (level <= static_cast<int>(hyperplanes_.size())) rec(rec);
    return out;
}

std::vector<std::size_t> CModel::kept_positions(const Stratum& s) const {
    const auto key = removed_set(s);
    std::vector<std::size_t> out;
    for (int v = 1; v <= dim_; ++v)
        if (!std::binary_search(key.begin(), key.end(), v)) out.push_back(static_cast<std::size_t>(v - 1));
    return out;
}

int CModel::frame_slot(const Stratum& s, int hyperplane) const {
    const auto kept = kept_positions(s);
    const auto want = static_cast<std::size_t>(hyperplane - 1);
    for (std::size_t k = 0; k < kept.size(); ++k)
        if (kept[k] == want) return static_cast<int>(k) + 1;
    throw DomainError("hyperplane does not survive on this stratum");
}

int stratum_sign(const Stratum& s) {
    int inv = 0;
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (s[a] > s[b]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

namespace {

void check_on_stratum(const CModel& m, const Stratum& s, const EForm& w) {
    const auto& fr = m.stratum_frame(s);
    if (w.frame() != fr && !(*w.frame() == *fr)) throw DomainError("form does not live on the given stratum");
}

void check_genuine(const EForm& w) {
    if (w.extended()) throw DomainError("residue calculus needs genuine polynomial coefficients");
}

/// Substitute x_i = 0, drop the variable, and re-key the basis tuples onto
/// the child frame.  No term of w may still involve the slot of x_i.
EForm restrict_onto_child(const CModel& m, const Stratum& s, int i, const EForm& w) {
    const int slot = m.frame_slot(s, i);
    const auto sub = static_cast<std::size_t>(slot - 1); // kept vars align with frame slots
    Stratum child = s;
    child.push_back(i);
    const auto& cfr = m.stratum_frame(child);

    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < m.kept_positions(s).size(); ++k)
        if (k != sub) keep.push_back(k);

    EForm out(cfr, w.degree());
    for (const auto& [I, f] : w.terms()) {
        IdxSet J;
        for (int idx : I) {
            if (idx == slot) throw Error("restriction applied across the removed coframe slot");
            J.push_back(idx > slot ? idx - 1 : idx);
        }
        const SingFunc g = f.substitute_zero(sub).restrict_vars(keep);
        if (!g.is_zero()) out.add_coeff(J, g);
    }
    return out;
}

int hyperplane_check(const CModel& m, const Stratum& s, const EForm& w, int hyperplane) {
    check_on_stratum(m, s, w);
    check_genuine(w);
    if (w.degree() < 1) throw DomainError("a 0-form has no residue");
    const auto rem = m.remaining(s);
    if (std::find(rem.begin(), rem.end(), hyperplane) == rem.end())
        throw DomainError("hyperplane is not singular on this stratum");
    return m.frame_slot(s, hyperplane);
}

} // namespace

EForm residue(const CModel& m, const Stratum& s, const EForm& w, int hyperplane) {
    const int slot = hyperplane_check(m, s, w, hyperplane);
    // keep only the theta_i part, with the sign of commuting theta_i to the end
    EForm alpha(w.frame(), w.degree() - 1);
    for (const auto& [I, f] : w.terms()) {
        const auto pos = std::find(I.begin(), I.end(), slot);
        if (pos == I.end()) continue;
        const auto t = static_cast<std::size_t>(pos - I.begin());
        IdxSet rest;
        for (int idx : I)
            if (idx != slot) rest.push_back(idx);
        const bool neg = (I.size() - 1 - t) % 2 != 0;
        alpha.add_coeff(rest, neg ? -f : f);
    }
    return restrict_onto_child(m, s, hyperplane, alpha);
}

EForm residue_via_contraction(const CModel& m, const Stratum& s, const EForm& w, int hyperplane) {
    const int slot = hyperplane_check(m, s, w, hyperplane);
    const auto& fr = m.stratum_frame(s);
    std::vector<SingFunc> L(static_cast<std::size_t>(fr->rank()), SingFunc::zero(fr->vars()));
    const Rat sign = w.degree() % 2 == 0 ? Rat(-1) : Rat(1); // (-1)^(p-1)
    L[static_cast<std::size_t>(slot - 1)] = SingFunc(Poly::constant(fr->vars(), sign));
    return restrict_onto_child(m, s, hyperplane, interior(L, w));
}

ResidueTower residue_tower(const CModel& m, const EForm& w) {
    check_on_stratum(m, {}, w);
    check_genuine(w);
    ResidueTower t;
    t.top_degree = w.degree();
    t.entries.emplace(Stratum{}, w);
    std::vector<Stratum> frontier{{}};
    while (!frontier.empty()) {
        std::vector<Stratum> next;
        for (const auto& s : frontier) {
            const EForm& cur = t.entries.at(s);
            if (cur.degree() < 1) continue;
            for (int j : m.remaining(s)) {
                Stratum child = s;
                child.push_back(j);
                t.entries.emplace(child, residue(m, s, cur, j));
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
    return t;
}

int ResidueTower::levels() const {
    std::size_t deepest = 0;
    for (const auto& [s, w] : entries) deepest = std::max(deepest, s.size());
    return static_cast<int>(deepest);
}

std::map<Stratum, EForm> ResidueTower::level(int k) const {
    std::map<Stratum, EForm> out;
    for (const auto& [s, w] : entries)
        if (static_cast<int>(s.size()) == k) out.emplace(s, w);
    return out;
}

namespace {

/// A form on a stratum is smooth as an ordinary form when every coefficient
/// is divisible by the singular coordinates its basis tuple pairs with.
bool stratum_form_smooth(const CModel& m, const Stratum& s, const EForm& w) {
    const auto& fr = m.stratum_frame(s);
    const auto kept = m.kept_positions(s);
    for (const auto& [I, f] : w.terms()) {
        Poly prod = Poly::constant(fr->vars(), 1);
        for (int idx : I) {
            const int coord = static_cast<int>(kept[static_cast<std::size_t>(idx - 1)]) + 1;
            const auto& hs = m.hyperplanes();
            if (std::binary_search(hs.begin(), hs.end(), coord))
                prod = prod * Poly::variable(fr->vars(), fr->vars()[static_cast<std::size_t>(idx - 1)]);
        }
        if (prod.is_constant()) continue;
        if (!f.is_poly() || !f.num().divide_exact(prod)) return false;
    }
    return true;
}

} // namespace

CompatVerdict is_compatible(const CModel& m, int level, const LevelAssignment& a) {
    const auto strata = m.ordered_strata(level);
    int deg = -1;
    for (const auto& s : strata) {
        const auto it = a.find(s);
        if (it == a.end()) return {false, "assignment misses a stratum", s};
        const EForm& w = it->second;
        const auto& fr = m.stratum_frame(s);
        if (w.frame() != fr && !(*w.frame() == *fr)) return {false, "form not on its stratum frame", s};
        if (w.extended()) return {false, "coefficients are not genuine polynomials", s};
        if (deg < 0) deg = w.degree();
        else if (w.degree() != deg) return {false, "mixed degrees across the level", s};
    }
    for (const auto& s : strata) {
        Stratum sorted = s;
        std::sort(sorted.begin(), sorted.end());
        const EForm& ref = a.at(sorted);
        const EForm want = stratum_sign(s) > 0 ? ref : -ref;
        if (!(a.at(s) == want)) return {false, "reordering does not act by the permutation sign", s};
    }
    bool all_smooth = true;
    for (const auto& s : strata) all_smooth = all_smooth && stratum_form_smooth(m, s, a.at(s));
    if (all_smooth) return {};

    LevelAssignment next;
    for (const auto& s : strata)
        for (int j : m.remaining(s)) {
            Stratum child = s;
            child.push_back(j);
            next.emplace(std::move(child), residue(m, s, a.at(s), j));
        }
    return is_compatible(m, level + 1, next);
}

std::vector<LevelInvariant> decomposition_invariants(const CModel& m, const EForm& w,
                                                     const QuadratureOptions& opt) {
    check_on_stratum(m, {}, w);
    check_genuine(w);
    if (w.degree() != m.dim()) throw DomainError("decomposition invariants need a top-degree form");
    if (!ederiv(w).is_zero()) throw DomainError("decomposition invariants need a closed form");

    const ResidueTower t = residue_tower(m, w);
    std::vector<LevelInvariant> out;
    for (int k = 0; k <= t.levels(); ++k) {
        LevelInvariant inv;
        inv.level = k;
        inv.strata = m.ordered_strata(k);
        inv.exact = (m.dim() - k == 0);
        for (const auto& s : inv.strata) {
            const EForm& e = t.entries.at(s);
            if (inv.exact) {
                const SingFunc c = e.coeff(IdxSet{});
                if (!c.is_poly() || !c.num().is_constant())
                    throw Error("bottom residue is not locally constant: " + c.str());
                inv.constants.push_back(c.num().constant_value());
            } else {
                inv.volumes.push_back(liouville_volume(e, opt).value);
            }
        }
        out.push_back(std::move(inv));
    }
    return out;
}

namespace {

/// Constant extension from a deeper stratum back onto a shallower one: the
/// coefficients become independent of the re-inserted coordinates and the
/// basis tuples are re-keyed.
EForm lift_to(const CModel& m, const Stratum& from, const Stratum& base, const EForm& w) {
    const auto& bfr = m.stratum_frame(base);
    const auto kc = m.kept_positions(from);
    const auto kb = m.kept_positions(base);
    std::vector<std::size_t> pos(kc.size());
    for (std::size_t a = 0; a < kc.size(); ++a) {
        const auto it = std::lower_bound(kb.begin(), kb.end(), kc[a]);
        pos[a] = static_cast<std::size_t>(it - kb.begin());
    }
    EForm out(bfr, w.degree());
    for (const auto& [I, f] : w.terms()) {
        IdxSet J;
        for (int idx : I) J.push_back(static_cast<int>(pos[static_cast<std::size_t>(idx - 1)]) + 1);
        out.add_coeff(J, f.extend_vars(bfr->vars(), pos));
    }
    return out;
}

Rat factorial(int n) {
    Rat r(1);
    for (int i = 2; i <= n; ++i) r *= Rat(i);
    return r;
}

} // namespace

StratumPreimage res_preimage(const CModel& m, const Stratum& base, const LevelAssignment& target) {
    const auto rem = m.remaining(base);
    if (rem.empty()) throw DomainError("the bottom stratum has no residues to invert");
    int deg = -1;
    for (int j : rem) {
        Stratum child = base;
        child.push_back(j);
        const auto it = target.find(child);
        if (it == target.end()) throw DomainError("target assignment misses a child stratum");
        check_on_stratum(m, child, it->second);
        check_genuine(it->second);
        if (deg < 0) deg = it->second.degree();
        else if (it->second.degree() != deg) throw DomainError("target assignment mixes degrees");
    }

    const auto& bfr = m.stratum_frame(base);
    StratumPreimage pre{base, EForm(bfr, deg + 1), {}};

    // Depth-first over ordered tuples J: the coefficient at J is the iterated
    // residue of the first-crossed target, and each tuple contributes
    // (-1)^(m+1)/m! * lift(beta_J) ^ theta_{J_m} ^ ... ^ theta_{J_1}.
    auto visit = [&](auto&& self, const Stratum& J, const EForm& beta) -> void {
        const int mlen = static_cast<int>(J.size());
        Stratum at = base;
        at.insert(at.end(), J.begin(), J.end());

        PreimageBlock blk{J, (mlen % 2 == 1 ? Rat(1) : Rat(-1)) / factorial(mlen),
                          lift_to(m, at, base, beta)};
        if (!blk.lifted.is_zero()) {
            EForm term = blk.lifted;
            for (auto it = J.rbegin(); it != J.rend(); ++it)
                term = wedge(term, EForm::theta(bfr, {m.frame_slot(base, *it)}));
            pre.form = pre.form + term * blk.weight;
            pre.blocks.push_back(std::move(blk));
        }

        if (beta.degree() < 1) return;
        for (int j : m.remaining(at)) {
            Stratum Jn = J;
            Jn.push_back(j);
            self(self, Jn, residue(m, at, beta, j));
        }
    };
    for (int j : rem) {
        Stratum child = base;
        child.push_back(j);
        visit(visit, {j}, target.at(child));
    }
    return pre;
}

LevelAssignment res_preimage_all(const CModel& m, int level, const LevelAssignment& target) {
    LevelAssignment out;
    for (const auto& s : m.ordered_strata(level)) out.emplace(s, res_preimage(m, s, target).form);
    return out;
}

double rho_odd(double t) {
    const double a = std::abs(t), s = t < 0 ? -1.0 : 1.0;
    if (a <= 0.5) return t;
    if (a >= 1.0) return s * 0.75;
    return s * (-a * a + 2.0 * a - 0.25);
}

double rho_chi(double t) {
    const double a = std::abs(t);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    return a * (2.0 - 2.0 * a) / (-a * a + 2.0 * a - 0.25);
}

std::map<IdxSet, double> preimage_eval_dx(const CModel& m, const StratumPreimage& pre,
                                          const std::vector<double>& point) {
    if (!pre.base.empty()) throw DomainError("pointwise evaluation is defined on the ambient chart");
    if (static_cast<int>(point.size()) != m.dim()) throw DomainError("point dimension mismatch");
    const auto& hs = m.hyperplanes();

    std::map<IdxSet, double> out;
    for (const auto& blk : pre.blocks) {
        // mollified weight of the freshly crossed factors
        double cross = static_cast<double>(blk.weight);
        for (int j : blk.tuple) {
            const double x = point[static_cast<std::size_t>(j - 1)];
            cross *= rho_chi(x) / x;
            if (cross == 0.0) break;
        }
        if (cross == 0.0) continue;
        for (const auto& [I, f] : blk.lifted.terms()) {
            double val = cross * f.eval(point);
            // coframe factors of the lifted part, in the plain coordinate basis
            std::vector<int> seq;
            for (int idx : I) {
                if (std::binary_search(hs.begin(), hs.end(), idx)) val /= point[static_cast<std::size_t>(idx - 1)];
                seq.push_back(idx);
            }
            for (auto it = blk.tuple.rbegin(); it != blk.tuple.rend(); ++it) seq.push_back(*it);
            int inv = 0;
            for (std::size_t a = 0; a < seq.size(); ++a)
                for (std::size_t b = a + 1; b < seq.size(); ++b)
                    if (seq[a] > seq[b]) ++inv;
            if (inv % 2 != 0) val = -val;
            std::sort(seq.begin(), seq.end());
            out[seq] += val;
        }
    }
    return out;
}

} // namespace ecalc
