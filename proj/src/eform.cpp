#include "ecalc/eform.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ecalc {

int merge_indices(const IdxSet& a, const IdxSet& b, IdxSet& merged) {
    merged.clear();
    merged.reserve(a.size() + b.size());
    int sign = 1;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            merged.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining entries of a
            if ((a.size() - i) % 2 != 0) sign = -sign;
            merged.push_back(b[j++]);
        }
    }
    while (i < a.size()) merged.push_back(a[i++]);
    while (j < b.size()) merged.push_back(b[j++]);
    return sign;
}

EForm::EForm(EFramePtr frame, int degree) : frame_(std::move(frame)), degree_(degree) {
    if (!frame_) throw DomainError("form needs a frame");
    if (degree < 0) throw DomainError("negative form degree");
}

EForm EForm::scalar(EFramePtr frame, SingFunc f) {
    EForm w(std::move(frame), 0);
    w.set_coeff({}, std::move(f));
    return w;
}

EForm EForm::theta(EFramePtr frame, IdxSet idx) {
    EForm w(frame, static_cast<int>(idx.size()));
    w.set_coeff(idx, SingFunc::constant(frame->vars(), 1));
    return w;
}

bool EForm::extended() const {
    for (const auto& [k, f] : terms_)
        if (!f.is_poly()) return true;
    return false;
}

void EForm::check_key(const IdxSet& idx) const {
    if (static_cast<int>(idx.size()) != degree_) throw DomainError("index tuple length differs from form degree");
    for (std::size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] < 1 || idx[t] > frame_->rank()) throw DomainError("frame index out of range");
        if (t > 0 && idx[t] <= idx[t - 1]) throw DomainError("index tuple must be strictly increasing");
    }
}

SingFunc EForm::coeff(const IdxSet& idx) const {
    check_key(idx);
    auto it = terms_.find(idx);
    return it == terms_.end() ? SingFunc::zero(frame_->vars()) : it->second;
}

void EForm::set_coeff(const IdxSet& idx, SingFunc f) {
    check_key(idx);
    if (f.vars() != frame_->vars()) throw DomainError("coefficient over wrong variables");
    if (f.is_zero())
        terms_.erase(idx);
    else
        terms_[idx] = std::move(f);
}

void EForm::add_coeff(const IdxSet& idx, const SingFunc& f) {
    check_key(idx);
    if (f.vars() != frame_->vars()) throw DomainError("coefficient over wrong variables");
    if (f.is_zero()) return;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(idx, f);
        return;
    }
    it->second += f;
    if (it->second.is_zero()) terms_.erase(it);
}

SingFunc EForm::value_on(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != degree_) throw DomainError("argument count differs from form degree");
    IdxSet sorted = idx;
    int sign = 1;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        for (std::size_t j = 0; j + 1 < sorted.size() - i; ++j)
            if (sorted[j] > sorted[j + 1]) {
                std::swap(sorted[j], sorted[j + 1]);
                sign = -sign;
            }
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1]) return SingFunc::zero(frame_->vars());
    SingFunc c = coeff(sorted);
    return sign < 0 ? -c : c;
}

EForm EForm::operator-() const {
    EForm out(frame_, degree_);
    for (const auto& [k, f] : terms_) out.terms_.emplace(k, -f);
    return out;
}

EForm EForm::operator+(const EForm& o) const {
    if (degree_ != o.degree_) throw DomainError("adding forms of different degree");
    if (frame_ != o.frame_ && *frame_ != *o.frame_) throw DomainError("adding forms over different frames");
    EForm out = *this;
    for (const auto& [k, f] : o.terms_) out.add_coeff(k, f);
    return out;
}

EForm EForm::operator-(const EForm& o) const { return *this + (-o); }

EForm EForm::operator*(const SingFunc& f) const {
    EForm out(frame_, degree_);
    if (f.is_zero()) return out;
    for (const auto& [k, g] : terms_) {
        SingFunc prod = g * f;
        if (!prod.is_zero()) out.terms_.emplace(k, std::move(prod));
    }
    return out;
}

EForm EForm::operator*(const Rat& c) const {
    return *this * SingFunc::constant(frame_->vars(), c);
}

bool EForm::operator==(const EForm& o) const {
    return degree_ == o.degree_ && (frame_ == o.frame_ || *frame_ == *o.frame_) && terms_ == o.terms_;
}

std::string EForm::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, f] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << f.str() << ")";
        for (int i : k) os << " th" << i;
    }
    return os.str();
}

EForm wedge(const EForm& a, const EForm& b) {
    if (a.frame() != b.frame() && *a.frame() != *b.frame()) throw DomainError("wedge over different frames");
    EForm out(a.frame(), a.degree() + b.degree());
    if (out.degree() > a.frame()->rank()) return out; // formal overflow: identically zero
    IdxSet merged;
    for (const auto& [I, f] : a.terms())
        for (const auto& [J, g] : b.terms()) {
            const int sign = merge_indices(I, J, merged);
            if (sign == 0) continue;
            SingFunc prod = f * g;
            if (sign < 0) prod = -prod;
            out.add_coeff(merged, prod);
        }
    return out;
}

namespace {

/// d(theta^k) = -1/2 sum_{ij} c^k_{ij} theta^i ^ theta^j (1-based k).
EForm dtheta(const EFramePtr& fr, int k) {
    EForm out(fr, 2);
    if (fr->commuting()) return out;
    for (int i = 1; i <= fr->rank(); ++i)
        for (int j = i + 1; j <= fr->rank(); ++j) {
            const SingFunc& c = fr->c(i - 1, j - 1, k - 1);
            if (!c.is_zero()) out.add_coeff({i, j}, -c);
        }
    return out;
}

} // namespace

EForm ederiv(const EForm& w) {
    const EFramePtr& fr = w.frame();
    EForm out(fr, w.degree() + 1);
    if (out.degree() > fr->rank()) return out;
    IdxSet merged;
    for (const auto& [I, f] : w.terms()) {
        for (int k = 1; k <= fr->rank(); ++k) {
            SingFunc df = fr->apply_generator(static_cast<std::size_t>(k - 1), f);
            if (df.is_zero()) continue;
            const IdxSet kk{k};
            const int sign = merge_indices(kk, I, merged);
            if (sign == 0) continue;
            out.add_coeff(merged, sign < 0 ? -df : df);
        }
        if (!fr->commuting()) {
            for (std::size_t t = 0; t < I.size(); ++t) {
                IdxSet rest;
                for (std::size_t s = 0; s < I.size(); ++s)
                    if (s != t) rest.push_back(I[s]);
                EForm piece = wedge(dtheta(fr, I[t]), EForm::theta(fr, rest)) * f;
                if (t % 2 != 0) piece = -piece;
                out = out + piece;
            }
        }
    }
    return out;
}

EForm interior(const std::vector<SingFunc>& X, const EForm& w) {
    const EFramePtr& fr = w.frame();
    if (static_cast<int>(X.size()) != fr->rank()) throw DomainError("section components differ from frame rank");
    if (w.degree() == 0) return EForm::zero(fr, 0);
    EForm out(fr, w.degree() - 1);
    for (const auto& [I, f] : w.terms())
        for (std::size_t t = 0; t < I.size(); ++t) {
            const SingFunc& xc = X[static_cast<std::size_t>(I[t] - 1)];
            if (xc.is_zero()) continue;
            IdxSet rest;
            for (std::size_t s = 0; s < I.size(); ++s)
                if (s != t) rest.push_back(I[s]);
            SingFunc term = f * xc;
            if (t % 2 != 0) term = -term;
            out.add_coeff(rest, term);
        }
    return out;
}

EForm lie_derivative(const std::vector<SingFunc>& X, const EForm& w) {
    EForm tail = interior(X, ederiv(w));
    if (w.degree() == 0) return tail; // i_X on functions is the zero map
    return ederiv(interior(X, w)) + tail;
}

std::vector<std::vector<SingFunc>> pairing_matrix(const EForm& w) {
    if (w.degree() != 2) throw DomainError("pairing matrix needs a degree-2 form");
    const int r = w.frame()->rank();
    std::vector<std::vector<SingFunc>> W(static_cast<std::size_t>(r),
                                         std::vector<SingFunc>(static_cast<std::size_t>(r),
                                                               SingFunc::zero(w.frame()->vars())));
    for (const auto& [I, f] : w.terms()) {
        W[static_cast<std::size_t>(I[0] - 1)][static_cast<std::size_t>(I[1] - 1)] = f;
        W[static_cast<std::size_t>(I[1] - 1)][static_cast<std::size_t>(I[0] - 1)] = -f;
    }
    return W;
}

SingFunc singfunc_matrix_det(const std::vector<std::vector<SingFunc>>& m) {
    const std::size_t n = m.size();
    if (n == 0) throw DomainError("determinant of an empty matrix");
    for (const auto& row : m)
        if (row.size() != n) throw DomainError("determinant of a non-square matrix");
    if (n == 1) return m[0][0];
    const auto& vars = m[0][0].vars();
    SingFunc acc = SingFunc::zero(vars);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][0].is_zero()) continue;
        std::vector<std::vector<SingFunc>> minor;
        minor.reserve(n - 1);
        for (std::size_t a = 0; a < n; ++a) {
            if (a == i) continue;
            std::vector<SingFunc> row;
            row.reserve(n - 1);
            for (std::size_t b = 1; b < n; ++b) row.push_back(m[a][b]);
            minor.push_back(std::move(row));
        }
        SingFunc term = m[i][0] * singfunc_matrix_det(minor);
        acc += (i % 2 != 0) ? -term : term;
    }
    return acc;
}

NondegVerdict nondeg_check(const EForm& w, const GridOptions& opt) {
    NondegVerdict v;
    const EFramePtr& fr = w.frame();
    v.det = SingFunc::zero(fr->vars());
    if (fr->rank() % 2 != 0) {
        v.kind = NondegKind::structural_odd;
        return v;
    }
    v.det = singfunc_matrix_det(pairing_matrix(w));
    if (v.det.is_constant() && !v.det.is_zero()) {
        v.kind = NondegKind::symbolic_unit;
        return v;
    }

    const std::size_t n = fr->vars().size();
    const int ppa = std::max(opt.points_per_axis, 2);
    std::vector<double> pt(n, 0.0);
    std::vector<int> step(n, 0);
    double min_abs = -1.0;
    std::vector<double> argmin;
    long used = 0;
    while (true) {
        for (std::size_t i = 0; i < n; ++i)
            pt[i] = opt.lo + (opt.hi - opt.lo) * step[i] / (ppa - 1);
        bool on_locus = false;
        for (const auto& z : fr->z_locus())
            if (std::abs(z.eval(pt)) < opt.locus_tol) on_locus = true;
        if (!on_locus) {
            try {
                const double d = std::abs(v.det.eval(pt));
                ++used;
                if (min_abs < 0 || d < min_abs) {
                    min_abs = d;
                    argmin = pt;
                }
            } catch (const SingularEvalError&) {
                // an undeclared pole on the lattice: treat as skipped
            }
        }
        std::size_t c = 0;
        while (c < n && ++step[c] == ppa) step[c++] = 0;
        if (c == n) break;
    }
    v.samples = used;
    v.min_abs_det = min_abs < 0 ? 0.0 : min_abs;
    if (used > 0 && min_abs > opt.tol) {
        v.kind = NondegKind::numeric_nonvanishing;
    } else {
        v.kind = NondegKind::degenerate;
        v.witness = argmin;
    }
    return v;
}

} // namespace ecalc
