#include "ecalc/multivec.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ecalc {

MultiVec::MultiVec(EFramePtr frame, int degree, MvBasis basis)
    : frame_(std::move(frame)), degree_(degree), basis_(basis) {
    if (!frame_) throw DomainError("multivector needs a frame");
    if (degree < 0) throw DomainError("negative multivector degree");
}

MultiVec MultiVec::scalar(EFramePtr frame, SingFunc f, MvBasis basis) {
    MultiVec m(std::move(frame), 0, basis);
    m.set_coeff({}, std::move(f));
    return m;
}

MultiVec MultiVec::basis_elem(EFramePtr frame, IdxSet idx, MvBasis basis) {
    MultiVec m(frame, static_cast<int>(idx.size()), basis);
    m.set_coeff(idx, SingFunc::constant(frame->vars(), 1));
    return m;
}

MultiVec MultiVec::from_vector_field(EFramePtr frame, const VectorField& v) {
    MultiVec m(frame, 1, MvBasis::ambient);
    if (v.comp.size() != frame->vars().size()) throw DomainError("vector field arity differs from chart dimension");
    for (std::size_t i = 0; i < v.comp.size(); ++i) m.add_coeff({static_cast<int>(i) + 1}, v.comp[i]);
    return m;
}

int MultiVec::max_index() const {
    return basis_ == MvBasis::frame ? frame_->rank() : frame_->dim();
}

void MultiVec::check_key(const IdxSet& idx) const {
    if (static_cast<int>(idx.size()) != degree_) throw DomainError("index tuple length differs from degree");
    for (std::size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] < 1 || idx[t] > max_index()) throw DomainError("basis index out of range");
        if (t > 0 && idx[t] <= idx[t - 1]) throw DomainError("index tuple must be strictly increasing");
    }
}

SingFunc MultiVec::coeff(const IdxSet& idx) const {
    check_key(idx);
    auto it = terms_.find(idx);
    return it == terms_.end() ? SingFunc::zero(frame_->vars()) : it->second;
}

void MultiVec::set_coeff(const IdxSet& idx, SingFunc f) {
    check_key(idx);
    if (f.vars() != frame_->vars()) throw DomainError("coefficient over wrong variables");
    if (f.is_zero())
        terms_.erase(idx);
    else
        terms_[idx] = std::move(f);
}

void MultiVec::add_coeff(const IdxSet& idx, const SingFunc& f) {
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

VectorField MultiVec::to_vector_field() const {
    if (degree_ != 1 || basis_ != MvBasis::ambient)
        throw DomainError("only a degree-1 ambient multivector converts to a vector field");
    VectorField v;
    v.comp.assign(frame_->vars().size(), SingFunc::zero(frame_->vars()));
    for (const auto& [k, f] : terms_) v.comp[static_cast<std::size_t>(k[0] - 1)] = f;
    return v;
}

MultiVec MultiVec::operator-() const {
    MultiVec out(frame_, degree_, basis_);
    for (const auto& [k, f] : terms_) out.terms_.emplace(k, -f);
    return out;
}

MultiVec MultiVec::operator+(const MultiVec& o) const {
    if (degree_ != o.degree_) throw DomainError("adding multivectors of different degree");
    if (basis_ != o.basis_) throw DomainError("adding multivectors over different bases");
    if (frame_ != o.frame_ && *frame_ != *o.frame_) throw DomainError("adding multivectors over different frames");
    MultiVec out = *this;
    for (const auto& [k, f] : o.terms_) out.add_coeff(k, f);
    return out;
}

MultiVec MultiVec::operator-(const MultiVec& o) const { return *this + (-o); }

MultiVec MultiVec::operator*(const SingFunc& f) const {
    MultiVec out(frame_, degree_, basis_);
    if (f.is_zero()) return out;
    for (const auto& [k, g] : terms_) {
        SingFunc prod = g * f;
        if (!prod.is_zero()) out.terms_.emplace(k, std::move(prod));
    }
    return out;
}

MultiVec MultiVec::operator*(const Rat& c) const { return *this * SingFunc::constant(frame_->vars(), c); }

bool MultiVec::operator==(const MultiVec& o) const {
    return degree_ == o.degree_ && basis_ == o.basis_ && (frame_ == o.frame_ || *frame_ == *o.frame_) &&
           terms_ == o.terms_;
}

std::string MultiVec::str() const {
    if (terms_.empty()) return "0";
    const char* sym = basis_ == MvBasis::frame ? " e" : " dx";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, f] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << f.str() << ")";
        for (int i : k) os << sym << i;
    }
    return os.str();
}

MultiVec mv_wedge(const MultiVec& a, const MultiVec& b) {
    if (a.basis() != b.basis()) throw DomainError("wedge over different bases");
    if (a.frame() != b.frame() && *a.frame() != *b.frame()) throw DomainError("wedge over different frames");
    MultiVec out(a.frame(), a.degree() + b.degree(), a.basis());
    const int top = a.basis() == MvBasis::frame ? a.frame()->rank() : a.frame()->dim();
    if (out.degree() > top) return out;
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

MultiVec anchor_expand(const MultiVec& p) {
    if (p.basis() == MvBasis::ambient) return p;
    const EFramePtr& fr = p.frame();
    const auto G = fr->anchor();
    MultiVec out(fr, p.degree(), MvBasis::ambient);
    for (const auto& [I, f] : p.terms()) {
        MultiVec acc = MultiVec::scalar(fr, f);
        for (int k : I) {
            MultiVec gen(fr, 1, MvBasis::ambient);
            for (std::size_t i = 0; i < fr->vars().size(); ++i)
                gen.add_coeff({static_cast<int>(i) + 1}, SingFunc(G[static_cast<std::size_t>(k - 1)][i]));
            acc = mv_wedge(acc, gen);
        }
        out = out + acc;
    }
    return out;
}

namespace {

/// Right derivative with respect to the odd generator xi_k (1-based):
/// the generator is commuted past the factors to its right before removal,
/// so the sign is (-1)^(number of factors after it).
MultiVec xi_derivative(const MultiVec& a, int k) {
    MultiVec out(a.frame(), std::max(a.degree() - 1, 0), a.basis());
    if (a.degree() == 0) return out;
    for (const auto& [I, f] : a.terms()) {
        auto pos = std::find(I.begin(), I.end(), k);
        if (pos == I.end()) continue;
        IdxSet rest;
        for (int i : I)
            if (i != k) rest.push_back(i);
        const auto parity = I.size() - 1 - static_cast<std::size_t>(pos - I.begin());
        out.add_coeff(rest, parity % 2 != 0 ? -f : f);
    }
    return out;
}

MultiVec coeff_derivative(const MultiVec& a, std::size_t var) {
    MultiVec out(a.frame(), a.degree(), a.basis());
    for (const auto& [I, f] : a.terms()) out.add_coeff(I, f.derivative(var));
    return out;
}

MultiVec half_bracket(const MultiVec& a, const MultiVec& b) {
    MultiVec out(a.frame(), std::max(a.degree() + b.degree() - 1, 0), a.basis());
    for (std::size_t k = 0; k < a.frame()->vars().size(); ++k) {
        MultiVec lda = xi_derivative(a, static_cast<int>(k) + 1);
        if (lda.is_zero()) continue;
        MultiVec dbk = coeff_derivative(b, k);
        if (dbk.is_zero()) continue;
        out = out + mv_wedge(lda, dbk);
    }
    return out;
}

} // namespace

MultiVec schouten(const MultiVec& a_in, const MultiVec& b_in) {
    const MultiVec a = anchor_expand(a_in);
    const MultiVec b = anchor_expand(b_in);
    if (a.frame() != b.frame() && *a.frame() != *b.frame()) throw DomainError("bracket over different frames");
    if (a.degree() + b.degree() == 0) {
        // two functions bracket to zero
        return MultiVec::zero(a.frame(), 0, MvBasis::ambient);
    }
    MultiVec ab = half_bracket(a, b);
    MultiVec ba = half_bracket(b, a);
    const int s = (a.degree() - 1) * (b.degree() - 1);
    return s % 2 != 0 ? ab + ba : ab - ba;
}

PoissonVerdict is_poisson(const MultiVec& p) {
    if (p.degree() != 2) throw DomainError("Poisson check needs a bivector");
    PoissonVerdict v{false, schouten(p, p), ""};
    v.ok = v.bracket.is_zero();
    if (!v.ok) {
        const auto& [idx, f] = *v.bracket.terms().begin();
        std::ostringstream os;
        os << "[P,P] has component (";
        for (std::size_t t = 0; t < idx.size(); ++t) os << (t ? "," : "") << idx[t];
        os << ") = " << f.str();
        v.witness = os.str();
    }
    return v;
}

MultiVec lichnerowicz_d(const MultiVec& p, const MultiVec& a) { return schouten(p, a); }

SingFunc poisson_bracket(const MultiVec& p_in, const SingFunc& f, const SingFunc& g) {
    const MultiVec p = anchor_expand(p_in);
    if (p.degree() != 2) throw DomainError("function bracket needs a bivector");
    SingFunc acc = SingFunc::zero(p.frame()->vars());
    for (const auto& [I, c] : p.terms()) {
        const auto i = static_cast<std::size_t>(I[0] - 1), j = static_cast<std::size_t>(I[1] - 1);
        acc += c * (f.derivative(i) * g.derivative(j) - f.derivative(j) * g.derivative(i));
    }
    return acc;
}

namespace {

/// Inverse of a small antisymmetric quotient matrix with constant nonzero
/// determinant, via the adjugate.
std::vector<std::vector<SingFunc>> unit_inverse(const std::vector<std::vector<SingFunc>>& m,
                                                const char* what) {
    const std::size_t n = m.size();
    SingFunc det = singfunc_matrix_det(m);
    if (!det.is_constant() || det.is_zero())
        throw DomainError(std::string(what) + ": pairing determinant is not a nonzero constant");
    const Rat d = det.constant_value();
    std::vector<std::vector<SingFunc>> inv(n, std::vector<SingFunc>(n, SingFunc::zero(m[0][0].vars())));
    if (n == 1) throw DomainError(std::string(what) + ": odd rank cannot be inverted");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<std::vector<SingFunc>> minor;
            minor.reserve(n - 1);
            for (std::size_t a = 0; a < n; ++a) {
                if (a == i) continue;
                std::vector<SingFunc> row;
                row.reserve(n - 1);
                for (std::size_t b = 0; b < n; ++b)
                    if (b != k) row.push_back(m[a][b]);
                minor.push_back(std::move(row));
            }
            SingFunc cof = singfunc_matrix_det(minor);
            if ((i + k) % 2 != 0) cof = -cof;
            inv[k][i] = cof * (Rat(1) / d);
        }
    return inv;
}

} // namespace

MultiVec invert_to_bivector(const EForm& w) {
    const auto W = pairing_matrix(w);
    const auto inv = unit_inverse(W, "invert_to_bivector");
    const int r = w.frame()->rank();
    MultiVec p(w.frame(), 2, MvBasis::frame);
    // dual bivector matrix is the negated inverse: theta^1^theta^2 pairs
    // with e_1^e_2, not its negative
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j)
            p.add_coeff({i, j}, -inv[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
    return p;
}

EForm bivector_to_form(const MultiVec& p) {
    if (p.degree() != 2) throw DomainError("dualization needs a bivector");
    if (p.basis() != MvBasis::frame) throw DomainError("dualization needs the frame basis");
    const int r = p.frame()->rank();
    std::vector<std::vector<SingFunc>> B(static_cast<std::size_t>(r),
                                         std::vector<SingFunc>(static_cast<std::size_t>(r),
                                                               SingFunc::zero(p.frame()->vars())));
    for (const auto& [I, f] : p.terms()) {
        B[static_cast<std::size_t>(I[0] - 1)][static_cast<std::size_t>(I[1] - 1)] = f;
        B[static_cast<std::size_t>(I[1] - 1)][static_cast<std::size_t>(I[0] - 1)] = -f;
    }
    const auto inv = unit_inverse(B, "bivector_to_form");
    EForm w(p.frame(), 2);
    for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j)
            w.add_coeff({i, j}, -inv[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
    return w;
}

} // namespace ecalc
