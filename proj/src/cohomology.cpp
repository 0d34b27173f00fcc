#include "ecalc/cohomology.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace ecalc {

std::optional<int> e_grading_shift(const EFramePtr& frame) {
    std::optional<int> shift;
    for (const auto& g : frame->generators()) {
        std::optional<int> gen_degree;
        for (const auto& c : g.comp) {
            if (c.is_zero()) continue;
            if (!c.is_poly()) return std::nullopt;
            const auto h = c.num().homogeneous_degree();
            if (!h) return std::nullopt;
            if (gen_degree && *gen_degree != *h) return std::nullopt;
            gen_degree = *h;
        }
        if (!gen_degree) continue;
        const int s = *gen_degree - 1;
        if (shift && *shift != s) return std::nullopt;
        shift = s;
    }
    if (!shift) return 0; // no generators: zero differential, trivially graded
    if (!frame->commuting()) {
        for (int i = 1; i <= frame->rank(); ++i)
            for (int j = 1; j <= frame->rank(); ++j)
                for (int k = 1; k <= frame->rank(); ++k) {
                    const SingFunc& c = frame->c(i, j, k);
                    if (c.is_zero()) continue;
                    if (!c.is_poly()) return std::nullopt;
                    const auto h = c.num().homogeneous_degree();
                    if (!h || *h != *shift) return std::nullopt;
                }
    }
    return shift;
}

std::optional<int> lichnerowicz_grading_shift(const MultiVec& p) {
    const MultiVec q = p.basis() == MvBasis::ambient ? p : anchor_expand(p);
    std::optional<int> m;
    for (const auto& [I, f] : q.terms()) {
        if (!f.is_poly()) return std::nullopt;
        const auto h = f.num().homogeneous_degree();
        if (!h) return std::nullopt;
        if (m && *m != *h) return std::nullopt;
        m = *h;
    }
    if (!m) return -1; // zero structure: zero differential
    return *m - 1;
}

namespace {

// ----- exact linear algebra over the rationals -----

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>; // row-major

/// Reduced row echelon form in place; returns the pivot column of each
/// pivot row.
std::vector<std::size_t> rref(Mat& m) {
    std::vector<std::size_t> piv;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
        std::size_t p = row;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[row]);
        const Rat inv = Rat(1) / m[row][c];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || m[r][c] == 0) continue;
            const Rat f = m[r][c];
            for (std::size_t j = 0; j < cols; ++j) m[r][j] -= f * m[row][j];
        }
        piv.push_back(c);
        ++row;
    }
    return piv;
}

/// Basis of the nullspace of m (columns = unknowns).
std::vector<Vec> kernel_basis(Mat m, std::size_t cols) {
    if (m.empty()) {
        std::vector<Vec> out;
        for (std::size_t j = 0; j < cols; ++j) {
            Vec v(cols, Rat(0));
            v[j] = 1;
            out.push_back(std::move(v));
        }
        return out;
    }
    const auto piv = rref(m);
    std::vector<bool> is_piv(cols, false);
    for (const auto c : piv) is_piv[c] = true;
    std::vector<Vec> out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        Vec v(cols, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

/// Incremental span tracker.  Pivot vectors are reduced against their
/// predecessors on insertion, so a sequential pass clears every pivot
/// position of the probe.
struct Eliminator {
    std::vector<std::pair<std::size_t, Vec>> pivots;

    bool add(Vec v) {
        for (const auto& [pos, p] : pivots) {
            if (v[pos] == 0) continue;
            const Rat f = v[pos] / p[pos];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * p[i];
        }
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                pivots.emplace_back(i, std::move(v));
                return true;
            }
        return false;
    }
};

// ----- basis bookkeeping -----

using BasisKey = std::pair<IdxSet, Exps>;

std::vector<IdxSet> tuples_of(int len, int range) {
    std::vector<IdxSet> out;
    if (len == 0) {
        out.push_back({});
        return out;
    }
    if (len < 0 || len > range) return out;
    IdxSet cur(static_cast<std::size_t>(len));
    auto gen = [&](auto&& self, int pos, int next) -> void {
        if (pos == len) {
            out.push_back(cur);
            return;
        }
        for (int i = next; i <= range; ++i) {
            cur[static_cast<std::size_t>(pos)] = i;
            self(self, pos + 1, i + 1);
        }
    };
    gen(gen, 0, 1);
    return out;
}

void monomials_of_degree(std::size_t nvars, int d, std::vector<Exps>& out) {
    Exps e(nvars, 0);
    if (nvars == 0) {
        if (d == 0) out.push_back(e);
        return;
    }
    auto gen = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos + 1 == nvars) {
            e[pos] = static_cast<unsigned>(left);
            out.push_back(e);
            return;
        }
        for (int a = left; a >= 0; --a) {
            e[pos] = static_cast<unsigned>(a);
            self(self, pos + 1, left - a);
        }
    };
    gen(gen, 0, d);
}

std::vector<BasisKey> block_basis(const std::vector<IdxSet>& tuples, std::size_t nvars, int degree) {
    std::vector<Exps> mons;
    monomials_of_degree(nvars, degree, mons);
    std::vector<BasisKey> out;
    for (const auto& I : tuples)
        for (const auto& e : mons) out.emplace_back(I, e);
    return out;
}

std::vector<BasisKey> band_basis(const std::vector<IdxSet>& tuples, std::size_t nvars, int max_degree) {
    std::vector<BasisKey> out;
    for (int d = 0; d <= max_degree; ++d) {
        const auto layer = block_basis(tuples, nvars, d);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

// ----- kind adapters -----

struct CoframeOps {
    EFramePtr fr;
    int levels() const { return fr->rank(); }
    int index_range() const { return fr->rank(); }
    EForm make(int level) const { return EForm(fr, level); }
    static void add(EForm& e, const IdxSet& I, const Poly& m) { e.add_coeff(I, SingFunc(m)); }
    static const std::map<IdxSet, SingFunc>& terms(const EForm& e) { return e.terms(); }
    EForm diff(const EForm& e) const { return ederiv(e); }
};

struct BivectorOps {
    MultiVec pi;
    EFramePtr fr;
    int levels() const { return fr->dim(); }
    int index_range() const { return fr->dim(); }
    MultiVec make(int level) const { return MultiVec(fr, level, MvBasis::ambient); }
    static void add(MultiVec& e, const IdxSet& I, const Poly& m) { e.add_coeff(I, SingFunc(m)); }
    static const std::map<IdxSet, SingFunc>& terms(const MultiVec& e) { return e.terms(); }
    MultiVec diff(const MultiVec& e) const { return lichnerowicz_d(pi, e); }
};

// ----- shared engine pieces -----

template <class Ops>
auto basis_element(const Ops& ops, int level, const BasisKey& key) {
    auto elem = ops.make(level);
    Ops::add(elem, key.first, Poly::monomial(ops.fr->vars(), key.second, Rat(1)));
    return elem;
}

/// Dense coordinates of elem over the rows listed in `rowid`; unknown keys
/// either extend the space (dynamic = true) or are an error.
template <class Elem>
Vec vectorize(const Elem& elem, std::map<BasisKey, std::size_t>& rowid, bool dynamic,
              std::vector<std::pair<std::size_t, Rat>>* sparse = nullptr) {
    std::vector<std::pair<std::size_t, Rat>> entries;
    for (const auto& [I, f] : elem.terms()) {
        if (!f.is_poly())
            throw DomainError("differential left the polynomial coefficient ring: " + f.str());
        for (const auto& [e, c] : f.num().terms()) {
            const BasisKey key{I, e};
            auto it = rowid.find(key);
            if (it == rowid.end()) {
                if (!dynamic) throw Error("graded block leaked outside its degree");
                it = rowid.emplace(key, rowid.size()).first;
            }
            entries.emplace_back(it->second, c);
        }
    }
    if (sparse) {
        *sparse = entries;
        return {};
    }
    Vec v(rowid.size(), Rat(0));
    for (const auto& [r, c] : entries) v[r] += c;
    return v;
}

template <class Ops, class Elem>
Elem devectorize(const Ops& ops, int level, const std::vector<BasisKey>& basis, const Vec& v) {
    auto elem = ops.make(level);
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (v[j] != 0) Ops::add(elem, basis[j].first, Poly::monomial(ops.fr->vars(), basis[j].second, v[j]));
    return elem;
}

template <class Elem>
void emit_class(GradedCohomReport& rep, std::vector<Elem>& reps, const Elem& elem, int level, int degree) {
    rep.classes.push_back(CohomClass{level, degree, elem.str()});
    reps.push_back(elem);
}

/// One cohomology block: kernel of the level differential on `dom`, taken
/// modulo the image of the previous level from `prev`.  Emits one class per
/// quotient dimension and returns the dimension.
template <class Ops, class Elem>
long solve_block(const Ops& ops, int level, int degree_tag, const std::vector<BasisKey>& dom,
                 const std::vector<BasisKey>& prev, std::map<BasisKey, std::size_t> rowid, bool dynamic,
                 GradedCohomReport& rep, std::vector<Elem>& reps) {
    // differential matrix on the block
    std::vector<std::vector<std::pair<std::size_t, Rat>>> cols;
    for (const auto& key : dom) {
        const auto img = ops.diff(basis_element(ops, level, key));
        std::vector<std::pair<std::size_t, Rat>> sp;
        vectorize(img, rowid, dynamic, &sp);
        cols.push_back(std::move(sp));
        // complex property: the differential applied twice vanishes
        if (!ops.diff(img).is_zero()) throw Error("differential does not square to zero");
    }
    Mat m(rowid.size(), Vec(dom.size(), Rat(0)));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, val] : cols[c]) m[r][c] += val;
    const auto kernels = kernel_basis(std::move(m), dom.size());

    // image columns over the domain coordinates (plus any overflow rows)
    std::map<BasisKey, std::size_t> imrow;
    for (std::size_t j = 0; j < dom.size(); ++j) imrow.emplace(dom[j], j);
    std::vector<std::vector<std::pair<std::size_t, Rat>>> imcols;
    for (const auto& key : prev) {
        const auto img = ops.diff(basis_element(ops, level - 1, key));
        std::vector<std::pair<std::size_t, Rat>> sp;
        vectorize(img, imrow, dynamic, &sp);
        imcols.push_back(std::move(sp));
    }
    Eliminator elim;
    for (const auto& sp : imcols) {
        Vec v(imrow.size(), Rat(0));
        for (const auto& [r, val] : sp) v[r] += val;
        elim.add(std::move(v));
    }
    long dim = 0;
    for (const auto& kv : kernels) {
        Vec probe(imrow.size(), Rat(0));
        for (std::size_t j = 0; j < dom.size(); ++j) probe[j] = kv[j];
        if (!elim.add(std::move(probe))) continue;
        ++dim;
        emit_class(rep, reps, devectorize<Ops, Elem>(ops, level, dom, kv), level, degree_tag);
    }
    return dim;
}

template <class Ops, class Elem>
void run_graded(const Ops& ops, int shift, int max_degree, GradedCohomReport& rep, std::vector<Elem>& reps) {
    const auto nvars = ops.fr->vars().size();
    rep.totals.assign(static_cast<std::size_t>(ops.levels()) + 1, 0);
    for (int k = 0; k <= ops.levels(); ++k) {
        const auto dom_tuples = tuples_of(k, ops.index_range());
        const auto prev_tuples = tuples_of(k - 1, ops.index_range());
        const auto cod_tuples = tuples_of(k + 1, ops.index_range());
        for (int d = 0; d <= max_degree; ++d) {
            const auto dom = block_basis(dom_tuples, nvars, d);
            if (dom.empty()) continue;
            // the image entering this block comes from degree d - shift,
            // whether or not that exceeds the reporting band
            const auto prev =
                d - shift >= 0 ? block_basis(prev_tuples, nvars, d - shift) : std::vector<BasisKey>{};
            std::map<BasisKey, std::size_t> rowid;
            if (d + shift >= 0)
                for (const auto& key : block_basis(cod_tuples, nvars, d + shift))
                    rowid.emplace(key, rowid.size());
            const long dim =
                solve_block(ops, k, d, dom, prev, std::move(rowid), /*dynamic=*/false, rep, reps);
            if (dim > 0) rep.dims[{k, d}] = dim;
            rep.totals[static_cast<std::size_t>(k)] += dim;
        }
    }
    rep.warning = "totals cover coefficient degrees 0.." + std::to_string(max_degree);
}

template <class Ops, class Elem>
void run_truncated(const Ops& ops, int max_degree, GradedCohomReport& rep, std::vector<Elem>& reps) {
    const auto nvars = ops.fr->vars().size();
    rep.totals.assign(static_cast<std::size_t>(ops.levels()) + 1, 0);
    for (int k = 0; k <= ops.levels(); ++k) {
        const auto dom = band_basis(tuples_of(k, ops.index_range()), nvars, max_degree);
        if (dom.empty()) continue;
        // one degree above the band on the image side: the differential
        // lowers coefficient degree by at most one, so this captures every
        // primitive that can cancel a class inside the band
        const auto prev = band_basis(tuples_of(k - 1, ops.index_range()), nvars, max_degree + 1);
        const long dim = solve_block(ops, k, -1, dom, prev, {}, /*dynamic=*/true, rep, reps);
        if (dim > 0) rep.dims[{k, -1}] = dim;
        rep.totals[static_cast<std::size_t>(k)] = dim;
    }
    rep.warning = "truncated mode (differential mixes coefficient degrees): totals cover the band of "
                  "coefficient degrees 0.." +
                  std::to_string(max_degree) + " with primitives drawn from one degree above";
}

} // namespace

GradedCohomReport e_cohomology(const EFramePtr& frame, int max_degree) {
    if (max_degree < 0) throw DomainError("coefficient degree bound must be nonnegative");
    GradedCohomReport rep;
    rep.kind = ComplexKind::e_forms;
    rep.subject = frame->kind() + std::to_string(frame->dim());
    rep.max_degree = max_degree;
    const CoframeOps ops{frame};
    const auto shift = e_grading_shift(frame);
    if (shift) {
        rep.graded = true;
        rep.shift = *shift;
        run_graded<CoframeOps, EForm>(ops, *shift, max_degree, rep, rep.e_reps);
    } else {
        rep.graded = false;
        run_truncated<CoframeOps, EForm>(ops, max_degree, rep, rep.e_reps);
    }
    return rep;
}

GradedCohomReport poisson_cohomology(const MultiVec& p, int max_degree) {
    if (max_degree < 0) throw DomainError("coefficient degree bound must be nonnegative");
    const MultiVec q = anchor_expand(p); // identity on ambient inputs
    if (q.degree() != 2) throw DomainError("the bracket differential needs a bivector");
    for (const auto& [I, f] : q.terms())
        if (!f.is_poly()) throw DomainError("bivector coefficients must be polynomial");
    const auto verdict = is_poisson(q);
    if (!verdict.ok) throw DomainError("bivector is not Poisson: bracket term " + verdict.witness);

    GradedCohomReport rep;
    rep.kind = ComplexKind::lichnerowicz;
    rep.subject = q.str();
    rep.max_degree = max_degree;
    const BivectorOps ops{q, q.frame()};
    const auto shift = lichnerowicz_grading_shift(q);
    if (shift) {
        rep.graded = true;
        rep.shift = *shift;
        run_graded<BivectorOps, MultiVec>(ops, *shift, max_degree, rep, rep.p_reps);
    } else {
        rep.graded = false;
        run_truncated<BivectorOps, MultiVec>(ops, max_degree, rep, rep.p_reps);
    }
    return rep;
}

MultiVec plane_elliptic_poisson() {
    const auto fr = frame_by_name("elliptic");
    MultiVec p(fr, 2, MvBasis::ambient);
    const Poly w = Poly::monomial(fr->vars(), {2, 0}, Rat(1)) + Poly::monomial(fr->vars(), {0, 2}, Rat(1));
    p.set_coeff({1, 2}, SingFunc(w));
    return p;
}

CompareReport compare_e_vs_poisson(const EFramePtr& frame, int max_degree) {
    if (frame->kind() != "elliptic" || frame->dim() != 2)
        throw DomainError("the comparison runs on the elliptic plane model");
    CompareReport out;
    out.e = e_cohomology(frame, max_degree);
    out.p = poisson_cohomology(plane_elliptic_poisson(), max_degree);
    std::ostringstream os;
    os << "coframe complex vs bracket complex on the elliptic plane (degrees <= " << max_degree << ")\n";
    for (int k = 0; k <= 2; ++k) {
        const long a = out.e.totals[static_cast<std::size_t>(k)];
        const long b = out.p.totals[static_cast<std::size_t>(k)];
        out.level_dims.emplace_back(a, b);
        os << "  level " << k << ": " << a << " vs " << b << (a == b ? "  (agree)" : "  (distinct)") << "\n";
    }
    out.distinct_at_two = out.level_dims[2].first != out.level_dims[2].second;
    os << (out.distinct_at_two ? "the two theories differ at level 2" : "no difference detected") << "\n";
    out.text = os.str();
    return out;
}

} // namespace ecalc
