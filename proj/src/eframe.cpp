#include "ecalc/eframe.hpp"

#include "ecalc/errors.hpp"
#include "ecalc/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <utility>

namespace ecalc {

SingFunc apply_vf(const VectorField& v, const SingFunc& f) {
    const std::size_t n = f.vars().size();
    if (v.comp.size() != n) throw DomainError("vector field arity does not match function variables");
    SingFunc out = SingFunc::zero(f.vars());
    for (std::size_t i = 0; i < n; ++i) {
        if (v.comp[i].is_zero()) continue;
        out += v.comp[i] * f.derivative(i);
    }
    return out;
}

VectorField vf_bracket(const VectorField& v, const VectorField& w) {
    const std::size_t n = v.comp.size();
    if (w.comp.size() != n) throw DomainError("vector field arity mismatch in bracket");
    VectorField out;
    out.comp.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.comp.push_back(apply_vf(v, w.comp[i]) - apply_vf(w, v.comp[i]));
    return out;
}

namespace {

std::vector<std::string> shape_check(const std::vector<std::vector<Poly>>& m) {
    if (m.empty() || m[0].empty()) throw DomainError("empty polynomial matrix");
    const std::size_t cols = m[0].size();
    const auto& vars = m[0][0].vars();
    for (const auto& row : m) {
        if (row.size() != cols) throw DomainError("ragged polynomial matrix");
        for (const auto& p : row)
            if (p.vars() != vars) throw DomainError("variable list mismatch in polynomial matrix");
    }
    return vars;
}

Poly exact_div(const Poly& num, const Poly& den) {
    auto q = num.divide_exact(den);
    if (!q) throw Error("fraction-free elimination: inexact division");
    return std::move(*q);
}

/// Exponent vectors of total degree at most `bound`, in a fixed order.
std::vector<Exps> monomials_up_to(std::size_t nvars, unsigned bound) {
    std::vector<Exps> out;
    Exps cur(nvars, 0);
    auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
        if (pos == nvars) {
            out.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            cur[pos] = e;
            self(self, pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, bound);
    return out;
}

int clamped_degree(const Poly& p) { return std::max(p.total_degree(), 0); }

} // namespace

long poly_matrix_rank(std::vector<std::vector<Poly>> m) {
    if (m.empty()) return 0;
    const auto vars = shape_check(m);
    const std::size_t rows = m.size(), cols = m[0].size();
    Poly prev = Poly::constant(vars, 1);
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t p = r;
        while (p < rows && m[p][col].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                m[i][j] = exact_div(m[r][col] * m[i][j] - m[i][col] * m[r][j], prev);
            m[i][col] = Poly::zero(vars);
        }
        prev = m[r][col];
        ++r;
    }
    return static_cast<long>(r);
}

Poly poly_matrix_det(std::vector<std::vector<Poly>> m) {
    const auto vars = shape_check(m);
    const std::size_t n = m.size();
    if (m[0].size() != n) throw DomainError("determinant of a non-square matrix");
    Poly prev = Poly::constant(vars, 1);
    bool flip = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k].is_zero()) ++p;
        if (p == n) return Poly::zero(vars);
        if (p != k) {
            std::swap(m[k], m[p]);
            flip = !flip;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
            m[i][k] = Poly::zero(vars);
        }
        prev = m[k][k];
    }
    return flip ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

InvolutivityResult check_involutive(const std::vector<VectorField>& gens, int degree_bound) {
    InvolutivityResult res;
    if (gens.empty()) {
        res.ok = true;
        return res;
    }
    if (gens[0].comp.empty()) throw DomainError("generator with no components");
    const std::size_t n = gens[0].comp.size();
    const std::vector<std::string> vars = gens[0].comp[0].vars();
    if (vars.size() != n) throw DomainError("generator arity does not match chart dimension");
    const std::size_t r = gens.size();

    std::vector<std::vector<Poly>> G(r, std::vector<Poly>(n, Poly::zero(vars)));
    int max_gen_deg = 0;
    for (std::size_t k = 0; k < r; ++k) {
        if (gens[k].comp.size() != n) throw DomainError("generator arity mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            const SingFunc& c = gens[k].comp[i];
            if (!c.is_poly()) throw DomainError("generators must have polynomial coefficients");
            if (c.vars() != vars) throw DomainError("generator variable list mismatch");
            G[k][i] = c.num();
            max_gen_deg = std::max(max_gen_deg, clamped_degree(G[k][i]));
        }
    }
    res.generic_rank = poly_matrix_rank(G);

    std::vector<std::vector<VectorField>> br(r, std::vector<VectorField>(r));
    int max_br_deg = 0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            br[i][j] = vf_bracket(gens[i], gens[j]);
            for (const auto& c : br[i][j].comp)
                if (!c.is_zero()) max_br_deg = std::max(max_br_deg, clamped_degree(c.num()));
        }
    const unsigned D = degree_bound >= 0 ? static_cast<unsigned>(degree_bound)
                                         : static_cast<unsigned>(max_br_deg + max_gen_deg);

    const std::vector<Exps> mons = monomials_up_to(n, D);
    const SingFunc zero = SingFunc::zero(vars);
    res.c.assign(r, std::vector<std::vector<SingFunc>>(r, std::vector<SingFunc>(r, zero)));

    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            bool trivial = true;
            for (const auto& c : br[i][j].comp) trivial = trivial && c.is_zero();
            if (trivial) continue;

            // Unknowns: coefficient of monomial `a` in c^k, column index k*|mons|+a.
            // Equations: match each ambient component m monomial-by-monomial.
            std::vector<std::vector<Poly>> colpoly(r * mons.size(),
                                                   std::vector<Poly>(n, Poly::zero(vars)));
            std::map<std::pair<std::size_t, Exps>, long> rowid;
            auto touch = [&](std::size_t m, const Poly& p) {
                for (const auto& term : p.terms()) rowid.emplace(std::make_pair(m, term.first), 0);
            };
            for (std::size_t k = 0; k < r; ++k)
                for (std::size_t a = 0; a < mons.size(); ++a)
                    for (std::size_t m = 0; m < n; ++m) {
                        Poly p = Poly::monomial(vars, mons[a], 1) * G[k][m];
                        touch(m, p);
                        colpoly[k * mons.size() + a][m] = std::move(p);
                    }
            for (std::size_t m = 0; m < n; ++m) touch(m, br[i][j].comp[m].num());
            long nrows = 0;
            for (auto& kv : rowid) kv.second = nrows++;

            RatMat M(nrows, static_cast<long>(colpoly.size()));
            for (std::size_t u = 0; u < colpoly.size(); ++u)
                for (std::size_t m = 0; m < n; ++m)
                    for (const auto& term : colpoly[u][m].terms())
                        M(rowid.at({m, term.first}), static_cast<long>(u)) = term.second;
            std::vector<Rat> rhs(static_cast<std::size_t>(nrows), Rat(0));
            for (std::size_t m = 0; m < n; ++m)
                for (const auto& term : br[i][j].comp[m].num().terms())
                    rhs[static_cast<std::size_t>(rowid.at({m, term.first}))] = term.second;

            auto sol = solve_columns(M, rhs);
            if (!sol) {
                std::ostringstream os;
                os << "bracket of generators " << (i + 1) << " and " << (j + 1)
                   << " is not expressible in the generators with coefficient degree <= " << D;
                res.ok = false;
                res.reason = os.str();
                return res;
            }
            for (std::size_t k = 0; k < r; ++k) {
                Poly ck = Poly::zero(vars);
                for (std::size_t a = 0; a < mons.size(); ++a) {
                    const Rat& coef = (*sol)[k * mons.size() + a];
                    if (coef != 0) ck += Poly::monomial(vars, mons[a], coef);
                }
                res.c[i][j][k] = SingFunc(ck);
                res.c[j][i][k] = SingFunc(-ck);
            }
        }
    res.ok = true;
    return res;
}

namespace {

std::vector<std::string> default_vars(int n) {
    if (n <= 0) throw DomainError("chart dimension must be positive");
    if (n == 1) return {"x"};
    if (n == 2) return {"x", "y"};
    if (n == 3) return {"x", "y", "z"};
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

VectorField coordinate_field(const std::vector<std::string>& vars, std::size_t i, const Poly& coeff) {
    VectorField v;
    for (std::size_t j = 0; j < vars.size(); ++j)
        v.comp.push_back(j == i ? SingFunc(coeff) : SingFunc::zero(vars));
    return v;
}

} // namespace

const SingFunc& EFrame::c(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= rank() || j >= rank() || k >= rank())
        throw DomainError("structure function index out of range");
    return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
}

SingFunc EFrame::apply_generator(std::size_t k, const SingFunc& f) const {
    if (k >= gen_.size()) throw DomainError("generator index out of range");
    return apply_vf(gen_[k], f);
}

std::vector<std::vector<Poly>> EFrame::anchor() const {
    std::vector<std::vector<Poly>> g;
    g.reserve(gen_.size());
    for (const auto& v : gen_) {
        std::vector<Poly> row;
        row.reserve(v.comp.size());
        for (const auto& c : v.comp) row.push_back(c.num());
        g.push_back(std::move(row));
    }
    return g;
}

std::vector<std::vector<SingFunc>> EFrame::coframe_in_dx() const {
    const int n = dim();
    if (rank() != n)
        throw DomainError("coframe conversion needs rank equal to dimension (foliation frames have none)");
    const auto G = anchor();
    // theta^k = sum_i A[k][i] dx_i with A = inverse transpose of the
    // generator matrix; built as adjugate over the factored determinant.
    std::vector<std::vector<Poly>> GT(n, std::vector<Poly>(n, Poly::zero(vars_)));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) GT[i][k] = G[k][i];
    Poly det = poly_matrix_det(GT);
    if (det.is_zero()) throw DomainError("generator matrix is singular over the fraction field");

    std::vector<DenFactor> den;
    Poly rem = det;
    for (const auto& f : singular_) {
        unsigned power = 0;
        while (true) {
            auto q = rem.divide_exact(f);
            if (!q) break;
            rem = std::move(*q);
            ++power;
        }
        if (power > 0) den.push_back({f, power});
    }
    if (!rem.is_constant())
        throw DomainError("generator determinant does not factor over the declared singular set");
    const Rat lead = rem.constant_value();

    std::vector<std::vector<SingFunc>> A(n, std::vector<SingFunc>(n, SingFunc::zero(vars_)));
    if (n == 1) {
        A[0][0] = SingFunc(Poly::constant(vars_, Rat(1) / lead), den);
        return A;
    }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            std::vector<std::vector<Poly>> minor;
            minor.reserve(static_cast<std::size_t>(n - 1));
            for (int a = 0; a < n; ++a) {
                if (a == i) continue;
                std::vector<Poly> row;
                row.reserve(static_cast<std::size_t>(n - 1));
                for (int b = 0; b < n; ++b)
                    if (b != k) row.push_back(GT[a][b]);
                minor.push_back(std::move(row));
            }
            Poly cof = poly_matrix_det(std::move(minor));
            if ((i + k) % 2 != 0) cof = -cof;
            // adj(GT)[k][i] = cof(GT)[i][k]
            A[k][i] = SingFunc(cof * (Rat(1) / lead), den);
        }
    return A;
}

bool EFrame::operator==(const EFrame& o) const {
    return vars_ == o.vars_ && gen_ == o.gen_ && singular_ == o.singular_ && z_locus_ == o.z_locus_;
}

void EFrame::finalize(int degree_bound) {
    const std::size_t n = vars_.size();
    for (const auto& g : gen_)
        if (g.comp.size() != n) throw DomainError("generator arity does not match chart dimension");

    auto inv = check_involutive(gen_, degree_bound);
    if (inv.generic_rank < rank())
        throw DomainError("degenerate generator set: generic rank " + std::to_string(inv.generic_rank) +
                          " is below the generator count " + std::to_string(rank()));
    if (!inv.ok) throw DomainError("generators are not involutive: " + inv.reason);
    c_ = std::move(inv.c);

    commuting_ = true;
    for (const auto& plane : c_)
        for (const auto& row : plane)
            for (const auto& f : row) commuting_ = commuting_ && f.is_zero();

    // Re-derive each bracket from the solved structure functions; the frame
    // must reproduce them exactly.
    for (std::size_t i = 0; i < gen_.size(); ++i)
        for (std::size_t j = 0; j < gen_.size(); ++j) {
            VectorField lhs = vf_bracket(gen_[i], gen_[j]);
            for (std::size_t m = 0; m < n; ++m) {
                SingFunc acc = lhs.comp[m];
                for (std::size_t k = 0; k < gen_.size(); ++k) acc -= c_[i][j][k] * gen_[k].comp[m];
                if (!acc.is_zero()) throw Error("structure functions fail to reproduce a bracket");
            }
        }

    // Generators must be tangent to every declared singular component:
    // V(z) divisible by z keeps flows and residues on the right side of Z.
    for (const auto& z : z_locus_)
        for (const auto& g : gen_) {
            SingFunc vz = apply_vf(g, SingFunc(z));
            if (!vz.is_poly() || (!vz.is_zero() && !vz.num().divide_exact(z)))
                throw DomainError("generator is not tangent to the declared singular component " + z.str());
        }
}

EFrame EFrame::full(int n) {
    EFrame f;
    f.vars_ = default_vars(n);
    f.kind_ = "full";
    const Poly one = Poly::constant(f.vars_, 1);
    for (int i = 0; i < n; ++i) f.gen_.push_back(coordinate_field(f.vars_, static_cast<std::size_t>(i), one));
    f.finalize(-1);
    return f;
}

EFrame EFrame::b(int n) { return bk(n, 1); }

EFrame EFrame::bk(int n, unsigned k) {
    if (k == 0) throw DomainError("bk frame needs k >= 1");
    EFrame f;
    f.vars_ = default_vars(n);
    f.kind_ = k == 1 ? "b" : ("b" + std::to_string(k));
    const Poly one = Poly::constant(f.vars_, 1);
    const Poly x1 = Poly::variable(f.vars_, f.vars_[0]);
    f.gen_.push_back(coordinate_field(f.vars_, 0, x1.pow(k)));
    for (int i = 1; i < n; ++i) f.gen_.push_back(coordinate_field(f.vars_, static_cast<std::size_t>(i), one));
    f.singular_ = {x1};
    f.z_locus_ = {x1};
    f.finalize(-1);
    return f;
}

EFrame EFrame::c_model(int n, std::vector<int> hyperplanes) {
    EFrame f;
    f.vars_ = default_vars(n);
    f.kind_ = "c";
    std::sort(hyperplanes.begin(), hyperplanes.end());
    hyperplanes.erase(std::unique(hyperplanes.begin(), hyperplanes.end()), hyperplanes.end());
    const Poly one = Poly::constant(f.vars_, 1);
    std::size_t next = 0;
    for (int i = 0; i < n; ++i) {
        const bool sing = next < hyperplanes.size() && hyperplanes[next] == i + 1;
        if (sing) {
            const Poly xi = Poly::variable(f.vars_, f.vars_[static_cast<std::size_t>(i)]);
            f.gen_.push_back(coordinate_field(f.vars_, static_cast<std::size_t>(i), xi));
            f.singular_.push_back(xi);
            f.z_locus_.push_back(xi);
            ++next;
        } else {
            f.gen_.push_back(coordinate_field(f.vars_, static_cast<std::size_t>(i), one));
        }
    }
    if (next < hyperplanes.size()) throw DomainError("hyperplane index out of range (1-based coordinates)");
    f.finalize(-1);
    return f;
}

EFrame EFrame::elliptic(int n) {
    if (n < 2) throw DomainError("elliptic frame needs dimension >= 2");
    EFrame f;
    f.vars_ = default_vars(n);
    f.kind_ = "elliptic";
    const Poly x = Poly::variable(f.vars_, f.vars_[0]);
    const Poly y = Poly::variable(f.vars_, f.vars_[1]);
    VectorField radial, rotation;
    radial.comp.assign(static_cast<std::size_t>(n), SingFunc::zero(f.vars_));
    rotation.comp.assign(static_cast<std::size_t>(n), SingFunc::zero(f.vars_));
    radial.comp[0] = SingFunc(x);
    radial.comp[1] = SingFunc(y);
    rotation.comp[0] = SingFunc(-y);
    rotation.comp[1] = SingFunc(x);
    f.gen_.push_back(std::move(radial));
    f.gen_.push_back(std::move(rotation));
    const Poly one = Poly::constant(f.vars_, 1);
    for (int i = 2; i < n; ++i) f.gen_.push_back(coordinate_field(f.vars_, static_cast<std::size_t>(i), one));
    f.singular_ = {x * x + y * y};
    f.z_locus_ = {x * x + y * y};
    f.finalize(-1);
    return f;
}

EFrame EFrame::foliation(int n, std::vector<int> tangent) {
    EFrame f;
    f.vars_ = default_vars(n);
    f.kind_ = "foliation";
    std::sort(tangent.begin(), tangent.end());
    tangent.erase(std::unique(tangent.begin(), tangent.end()), tangent.end());
    if (tangent.empty()) throw DomainError("foliation frame needs at least one tangent direction");
    const Poly one = Poly::constant(f.vars_, 1);
    for (int i : tangent) {
        if (i < 1 || i > n) throw DomainError("tangent direction out of range (1-based coordinates)");
        f.gen_.push_back(coordinate_field(f.vars_, static_cast<std::size_t>(i - 1), one));
    }
    f.finalize(-1);
    return f;
}

EFrame EFrame::custom(std::vector<std::string> vars, std::vector<VectorField> gens,
                      std::vector<Poly> singular_factors, std::vector<Poly> z_locus, int degree_bound) {
    if (gens.empty() && !vars.empty()) throw DomainError("custom frame needs at least one generator");
    EFrame f;
    f.vars_ = std::move(vars);
    f.kind_ = "custom";
    f.gen_ = std::move(gens);
    f.singular_ = std::move(singular_factors);
    f.z_locus_ = std::move(z_locus);
    f.finalize(degree_bound);
    return f;
}

EFramePtr frame_by_name(const std::string& name) {
    auto split = [](const std::string& s) -> std::pair<std::string, int> {
        std::size_t i = s.size();
        while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
        if (i == s.size()) return {s, -1};
        return {s.substr(0, i), std::stoi(s.substr(i))};
    };
    const auto [head, dim] = split(name);
    if (head == "full" && dim > 0) return std::make_shared<EFrame>(EFrame::full(dim));
    if (head == "b" && dim > 0) return std::make_shared<EFrame>(EFrame::b(dim));
    if (head == "elliptic") return std::make_shared<EFrame>(EFrame::elliptic(dim > 0 ? dim : 2));
    if (head == "c" && dim > 0) {
        std::vector<int> all;
        for (int i = 1; i <= dim; ++i) all.push_back(i);
        return std::make_shared<EFrame>(EFrame::c_model(dim, all));
    }
    // "bk<k>_<n>": first-coordinate generator x^k d/dx on an n-dimensional chart
    if (head.rfind("bk", 0) == 0 && dim > 0) {
        const std::string mid = head.substr(2);
        if (!mid.empty() && mid.back() == '_') {
            const std::string knum = mid.substr(0, mid.size() - 1);
            if (!knum.empty() && std::all_of(knum.begin(), knum.end(), [](char ch) {
                    return std::isdigit(static_cast<unsigned char>(ch));
                }))
                return std::make_shared<EFrame>(EFrame::bk(dim, static_cast<unsigned>(std::stoul(knum))));
        }
    }
    throw DomainError("unknown frame name: " + name +
                      " (expected full<n>, b<n>, bk<k>_<n>, c<n>, or elliptic)");
}

} // namespace ecalc
