#include "ecalc/poly.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ecalc {

Poly Poly::zero(std::vector<std::string> vars) {
    Poly p;
    p.vars_ = std::move(vars);
    return p;
}

Poly Poly::constant(std::vector<std::string> vars, const Rat& c) {
    Poly p = zero(std::move(vars));
    if (c != 0) p.terms_[Exps(p.vars_.size(), 0)] = c;
    return p;
}

Poly Poly::variable(std::vector<std::string> vars, const std::string& name) {
    Poly p = zero(std::move(vars));
    auto it = std::find(p.vars_.begin(), p.vars_.end(), name);
    if (it == p.vars_.end()) throw DomainError("unknown variable '" + name + "'");
    Exps e(p.vars_.size(), 0);
    e[static_cast<std::size_t>(it - p.vars_.begin())] = 1;
    p.terms_[e] = 1;
    return p;
}

Poly Poly::monomial(std::vector<std::string> vars, const Exps& e, const Rat& c) {
    Poly p = zero(std::move(vars));
    if (e.size() != p.vars_.size()) throw DomainError("monomial: exponent vector length mismatch");
    if (c != 0) p.terms_[e] = c;
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Exps& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
}

Rat Poly::constant_value() const {
    if (!is_constant()) throw DomainError("constant_value: polynomial is not constant");
    return terms_.empty() ? Rat(0) : terms_.begin()->second;
}

int Poly::total_degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (unsigned k : e) d += static_cast<int>(k);
        deg = std::max(deg, d);
    }
    return deg;
}

std::optional<int> Poly::homogeneous_degree() const {
    if (terms_.empty()) return 0;
    std::optional<int> deg;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (unsigned k : e) d += static_cast<int>(k);
        if (!deg) deg = d;
        else if (*deg != d) return std::nullopt;
    }
    return deg;
}

void Poly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0) it = terms_.erase(it);
        else ++it;
    }
}

void Poly::check_same_vars(const Poly& o) const {
    if (vars_ != o.vars_) throw DomainError("polynomial variable lists differ");
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    check_same_vars(o);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.terms_[e] += c;
    r.prune();
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    check_same_vars(o);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.terms_[e] -= c;
    r.prune();
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_same_vars(o);
    Poly r = zero(vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exps e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.terms_[e] += ca * cb;
        }
    }
    r.prune();
    return r;
}

Poly Poly::operator*(const Rat& c) const {
    if (c == 0) return zero(vars_);
    Poly r = *this;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

Poly Poly::pow(unsigned k) const {
    Poly r = constant(vars_, 1);
    for (unsigned i = 0; i < k; ++i) r *= *this;
    return r;
}

Poly Poly::derivative(std::size_t v) const {
    if (v >= vars_.size()) throw DomainError("derivative: variable index out of range");
    Poly r = zero(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[v] == 0) continue;
        Exps d = e;
        d[v] -= 1;
        r.terms_[d] += c * Rat(e[v]);
    }
    r.prune();
    return r;
}

namespace {
template <class T>
T eval_impl(const std::map<Exps, Rat>& terms, const std::vector<T>& point, std::size_t nvars) {
    if (point.size() != nvars) throw DomainError("eval: point dimension mismatch");
    T acc{};
    for (const auto& [e, c] : terms) {
        T t;
        if constexpr (std::is_same_v<T, double>) t = to_double(c);
        else t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}
} // namespace

Rat Poly::eval(const std::vector<Rat>& point) const { return eval_impl(terms_, point, vars_.size()); }
double Poly::eval(const std::vector<double>& point) const { return eval_impl(terms_, point, vars_.size()); }

Poly Poly::substitute_zero(std::size_t v) const {
    if (v >= vars_.size()) throw DomainError("substitute_zero: variable index out of range");
    Poly r = zero(vars_);
    for (const auto& [e, c] : terms_)
        if (e[v] == 0) r.terms_[e] = c;
    return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
    check_same_vars(d);
    if (d.is_zero()) throw DomainError("divide_exact: division by zero polynomial");
    Poly rem = *this;
    Poly quot = zero(vars_);
    const auto& dl = *d.terms_.rbegin(); // leading term in the map order
    while (!rem.terms_.empty()) {
        const auto& rl = *rem.terms_.rbegin();
        Exps q(rl.first.size());
        bool divisible = true;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (rl.first[i] < dl.first[i]) { divisible = false; break; }
            q[i] = rl.first[i] - dl.first[i];
        }
        if (!divisible) return std::nullopt;
        Poly t = monomial(vars_, q, rl.second / dl.second);
        quot += t;
        rem -= t * d;
    }
    return quot;
}

bool Poly::depends_on(std::size_t v) const {
    for (const auto& [e, c] : terms_)
        if (e[v] > 0) return true;
    return false;
}

Poly Poly::restrict_vars(const std::vector<std::size_t>& keep) const {
    std::vector<bool> kept(vars_.size(), false);
    std::vector<std::string> nv;
    for (std::size_t i : keep) {
        if (i >= vars_.size()) throw DomainError("restrict_vars: index out of range");
        kept[i] = true;
        nv.push_back(vars_[i]);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (!kept[i] && depends_on(i))
            throw DomainError("restrict_vars: polynomial depends on dropped variable '" + vars_[i] + "'");
    Poly r = zero(nv);
    for (const auto& [e, c] : terms_) {
        Exps ne(keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k) ne[k] = e[keep[k]];
        r.terms_[ne] = c;
    }
    return r;
}

Poly Poly::extend_vars(std::vector<std::string> new_vars, const std::vector<std::size_t>& positions) const {
    if (positions.size() != vars_.size()) throw DomainError("extend_vars: positions length mismatch");
    Poly r = zero(std::move(new_vars));
    for (const auto& [e, c] : terms_) {
        Exps ne(r.vars_.size(), 0);
        for (std::size_t k = 0; k < positions.size(); ++k) {
            if (positions[k] >= ne.size()) throw DomainError("extend_vars: position out of range");
            ne[positions[k]] = e[k];
        }
        r.terms_[ne] = c;
    }
    return r;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // Iterate in reverse map order so the lexicographically leading term
    // prints first (e.g. "x^2 + y^2" rather than "y^2 + x^2").
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Rat c = it->second;
        const Exps& e = it->first;
        Rat mag = abs(c);
        bool lead_neg = false;
        if (first) {
            // Fold a leading minus into the printed rational ("-1*x", "-2")
            // so the output stays inside the term grammar.
            first = false;
            if (c < 0) { out << "-"; lead_neg = true; }
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        bool has_var = std::any_of(e.begin(), e.end(), [](unsigned k) { return k > 0; });
        bool printed_coeff = false;
        if (!has_var || mag != 1 || lead_neg) {
            out << rat_str(mag);
            printed_coeff = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (printed_coeff) out << "*";
            out << vars_[i];
            if (e[i] > 1) out << "^" << e[i];
            printed_coeff = true;
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Cursor {
public:
    Cursor(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    std::size_t pos() const { return pos_; }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
        }
        return s_.substr(start, pos_ - start);
    }

    Int uint_lit() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected integer", pos_);
        return Int(s_.substr(start, pos_ - start));
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

Poly parse_poly(const std::string& text, std::vector<std::string> vars) {
    Cursor cur(text);
    Poly result = Poly::zero(vars);

    auto var_index = [&](const std::string& name, std::size_t at) -> std::size_t {
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw ParseError("unknown variable '" + name + "'", at);
        return static_cast<std::size_t>(it - vars.begin());
    };

    auto parse_varpow = [&](Exps& e) {
        std::size_t at = cur.pos();
        std::string name = cur.ident();
        if (name.empty()) throw ParseError("expected variable name", cur.pos());
        std::size_t vi = var_index(name, at);
        unsigned k = 1;
        if (cur.accept('^')) k = cur.uint_lit().convert_to<unsigned>();
        e[vi] += k;
    };

    auto parse_term = [&]() -> Poly {
        Exps e(vars.size(), 0);
        Rat coeff(1);
        char c = cur.peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int num = cur.uint_lit();
            Int den = 1;
            if (cur.accept('/')) {
                den = cur.uint_lit();
                if (den == 0) throw ParseError("zero denominator", cur.pos());
            }
            coeff = Rat(num, den);
            while (cur.accept('*')) parse_varpow(e);
        } else {
            parse_varpow(e);
            while (cur.accept('*')) parse_varpow(e);
        }
        return Poly::monomial(vars, e, coeff);
    };

    bool negate = false;
    if (cur.accept('-')) negate = true;
    else cur.accept('+');
    if (cur.done()) throw ParseError("empty expression", cur.pos());

    Poly t = parse_term();
    result = negate ? -t : t;
    while (!cur.done()) {
        bool minus;
        if (cur.accept('+')) minus = false;
        else if (cur.accept('-')) minus = true;
        else throw ParseError("expected '+' or '-'", cur.pos());
        Poly u = parse_term();
        result = minus ? result - u : result + u;
    }
    return result;
}

} // namespace ecalc
