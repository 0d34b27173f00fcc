#include "ecalc/singfunc.hpp"

#include "ecalc/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ecalc {

namespace {

/// Scale to leading coefficient 1 (map-order leading term); returns the
/// scaling applied so callers can compensate.
Poly make_monic(const Poly& p, Rat& lead_out) {
    if (p.is_zero()) throw DomainError("zero polynomial cannot be a denominator factor");
    lead_out = p.terms().rbegin()->second;
    return p * (Rat(1) / lead_out);
}

} // namespace

void SingFunc::normalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    // Fold constant factors into the numerator, make the rest monic.
    std::map<std::string, DenFactor> canon;
    for (auto& df : den_) {
        if (df.power == 0) continue;
        if (df.factor.vars() != num_.vars()) throw DomainError("denominator factor over wrong variables");
        if (df.factor.is_zero()) throw DomainError("zero denominator factor");
        if (df.factor.is_constant()) {
            Rat c = df.factor.constant_value();
            for (unsigned k = 0; k < df.power; ++k) num_ = num_ * (Rat(1) / c);
            continue;
        }
        Rat lead;
        Poly monic = make_monic(df.factor, lead);
        for (unsigned k = 0; k < df.power; ++k) num_ = num_ * (Rat(1) / lead);
        auto [it, fresh] = canon.try_emplace(monic.str(), DenFactor{monic, df.power});
        if (!fresh) it->second.power += df.power;
    }
    den_.clear();
    for (auto& [key, df] : canon) {
        // Cancel against the numerator while the division stays exact.
        while (df.power > 0) {
            auto q = num_.divide_exact(df.factor);
            if (!q) break;
            num_ = std::move(*q);
            --df.power;
        }
        if (df.power > 0) den_.push_back(std::move(df));
    }
}

const Poly& SingFunc::as_poly() const {
    if (!den_.empty()) throw DomainError("quotient is not a polynomial: " + str());
    return num_;
}

SingFunc SingFunc::operator-() const {
    SingFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

SingFunc SingFunc::operator+(const SingFunc& o) const {
    // Union denominator with per-factor maximal powers.
    std::map<std::string, DenFactor> uni;
    for (const auto& df : den_) uni.try_emplace(df.factor.str(), df);
    for (const auto& df : o.den_) {
        auto [it, fresh] = uni.try_emplace(df.factor.str(), df);
        if (!fresh) it->second.power = std::max(it->second.power, df.power);
    }
    auto complement = [&](const std::vector<DenFactor>& own) {
        Poly scale = Poly::constant(num_.vars(), 1);
        for (const auto& [key, df] : uni) {
            unsigned have = 0;
            for (const auto& mine : own)
                if (mine.factor == df.factor) have = mine.power;
            scale *= df.factor.pow(df.power - have);
        }
        return scale;
    };
    Poly n = num_ * complement(den_) + o.num_ * complement(o.den_);
    std::vector<DenFactor> d;
    for (const auto& [key, df] : uni) d.push_back(df);
    return SingFunc(std::move(n), std::move(d));
}

SingFunc SingFunc::operator-(const SingFunc& o) const { return *this + (-o); }

SingFunc SingFunc::operator*(const SingFunc& o) const {
    std::vector<DenFactor> d = den_;
    d.insert(d.end(), o.den_.begin(), o.den_.end());
    return SingFunc(num_ * o.num_, std::move(d));
}

SingFunc SingFunc::operator*(const Rat& c) const {
    if (c == 0) return SingFunc(Poly::zero(num_.vars()));
    SingFunc r = *this;
    r.num_ = r.num_ * c;
    return r;
}

bool SingFunc::operator==(const SingFunc& o) const {
    if (num_ != o.num_ || den_.size() != o.den_.size()) return false;
    for (std::size_t i = 0; i < den_.size(); ++i)
        if (den_[i].power != o.den_[i].power || den_[i].factor != o.den_[i].factor) return false;
    return true;
}

SingFunc SingFunc::divide(const SingFunc& d, const std::vector<Poly>& declared) const {
    if (d.is_zero()) throw DomainError("division by zero");
    // reciprocal of d: (prod of d's denominator factors) / d.num, with d.num
    // required to factor over the declared singular set times a constant.
    Poly recip_num = Poly::constant(num_.vars(), 1);
    for (const auto& df : d.den_)
        recip_num *= df.factor.pow(df.power);
    Poly rem = d.num_;
    std::vector<DenFactor> recip_den;
    for (const Poly& raw : declared) {
        Rat lead;
        Poly f = make_monic(raw, lead);
        unsigned count = 0;
        while (true) {
            auto q = rem.divide_exact(f);
            if (!q) break;
            rem = std::move(*q);
            ++count;
        }
        if (count > 0) recip_den.push_back(DenFactor{f, count});
    }
    if (!rem.is_constant())
        throw DomainError("divisor numerator '" + d.num_.str() +
                          "' does not factor over the declared singular set");
    Rat c = rem.constant_value();
    return *this * SingFunc(recip_num * (Rat(1) / c), std::move(recip_den));
}

SingFunc SingFunc::derivative(std::size_t v) const {
    if (den_.empty()) return SingFunc(num_.derivative(v));
    Poly prod_once = Poly::constant(num_.vars(), 1);
    for (const auto& df : den_) prod_once *= df.factor;
    Poly n = num_.derivative(v) * prod_once;
    for (std::size_t j = 0; j < den_.size(); ++j) {
        Poly rest = Poly::constant(num_.vars(), 1);
        for (std::size_t k = 0; k < den_.size(); ++k)
            if (k != j) rest *= den_[k].factor;
        n -= num_ * Rat(den_[j].power) * den_[j].factor.derivative(v) * rest;
    }
    std::vector<DenFactor> d = den_;
    for (auto& df : d) df.power += 1;
    return SingFunc(std::move(n), std::move(d));
}

Rat SingFunc::eval(const std::vector<Rat>& point) const {
    Rat acc = num_.eval(point);
    for (const auto& df : den_) {
        Rat f = df.factor.eval(point);
        if (f == 0)
            throw SingularEvalError("denominator factor '" + df.factor.str() + "' vanishes at the point");
        for (unsigned k = 0; k < df.power; ++k) acc /= f;
    }
    return acc;
}

double SingFunc::eval(const std::vector<double>& point) const {
    double acc = num_.eval(point);
    for (const auto& df : den_) {
        double f = df.factor.eval(point);
        if (f == 0.0)
            throw SingularEvalError("denominator factor '" + df.factor.str() + "' vanishes at the point");
        for (unsigned k = 0; k < df.power; ++k) acc /= f;
    }
    return acc;
}

SingFunc SingFunc::substitute_zero(std::size_t v) const {
    std::vector<DenFactor> d;
    for (const auto& df : den_) {
        Poly f0 = df.factor.substitute_zero(v);
        if (f0.is_zero())
            throw DomainError("restriction to {" + num_.vars()[v] + " = 0} meets denominator factor '" +
                              df.factor.str() + "'");
        d.push_back(DenFactor{std::move(f0), df.power});
    }
    return SingFunc(num_.substitute_zero(v), std::move(d));
}

SingFunc SingFunc::restrict_vars(const std::vector<std::size_t>& keep) const {
    std::vector<DenFactor> d;
    for (const auto& df : den_) d.push_back(DenFactor{df.factor.restrict_vars(keep), df.power});
    return SingFunc(num_.restrict_vars(keep), std::move(d));
}

SingFunc SingFunc::extend_vars(std::vector<std::string> new_vars, const std::vector<std::size_t>& positions) const {
    std::vector<DenFactor> d;
    for (const auto& df : den_)
        d.push_back(DenFactor{df.factor.extend_vars(new_vars, positions), df.power});
    return SingFunc(num_.extend_vars(std::move(new_vars), positions), std::move(d));
}

std::string SingFunc::str() const {
    if (den_.empty()) return num_.str();
    std::ostringstream out;
    out << "(" << num_.str() << ")/(";
    bool first = true;
    for (const auto& df : den_) {
        if (!first) out << "*";
        first = false;
        out << "(" << df.factor.str() << ")";
        if (df.power > 1) out << "^" << df.power;
    }
    out << ")";
    return out.str();
}

SingFunc parse_singfunc(const std::string& text, std::vector<std::string> vars) {
    // A leading '(' signals the quotient form (the poly grammar itself has
    // no parentheses).
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size() || text[i] != '(') return SingFunc(parse_poly(text, std::move(vars)));

    auto match_paren = [&](std::size_t open) -> std::size_t {
        int depth = 0;
        for (std::size_t k = open; k < text.size(); ++k) {
            if (text[k] == '(') ++depth;
            else if (text[k] == ')' && --depth == 0) return k;
        }
        throw ParseError("unbalanced parentheses", open);
    };

    std::size_t close = match_paren(i);
    Poly num = parse_poly(text.substr(i + 1, close - i - 1), vars);
    std::size_t j = close + 1;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j >= text.size() || text[j] != '/') throw ParseError("expected '/' after numerator", j);
    ++j;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j >= text.size() || text[j] != '(') throw ParseError("expected '(' starting denominator", j);
    std::size_t dclose = match_paren(j);
    std::string den = text.substr(j + 1, dclose - j - 1);
    std::size_t tail = dclose + 1;
    while (tail < text.size() && std::isspace(static_cast<unsigned char>(text[tail]))) ++tail;
    if (tail != text.size()) throw ParseError("trailing characters after denominator", tail);

    // denominator := denfac ("*" denfac)*, denfac := "(" poly ")" ("^" uint)? | ident ("^" uint)?
    std::vector<DenFactor> factors;
    std::size_t k = 0;
    auto skip_ws = [&]() { while (k < den.size() && std::isspace(static_cast<unsigned char>(den[k]))) ++k; };
    while (true) {
        skip_ws();
        if (k >= den.size()) throw ParseError("empty denominator factor", k);
        Poly f = Poly::zero(vars);
        if (den[k] == '(') {
            int depth = 0;
            std::size_t open = k, end = k;
            for (; end < den.size(); ++end) {
                if (den[end] == '(') ++depth;
                else if (den[end] == ')' && --depth == 0) break;
            }
            if (end >= den.size()) throw ParseError("unbalanced parentheses in denominator", open);
            f = parse_poly(den.substr(open + 1, end - open - 1), vars);
            k = end + 1;
        } else {
            std::size_t start = k;
            while (k < den.size() && (std::isalnum(static_cast<unsigned char>(den[k])) || den[k] == '_')) ++k;
            if (k == start) throw ParseError("expected denominator factor", start);
            f = parse_poly(den.substr(start, k - start), vars);
        }
        unsigned power = 1;
        skip_ws();
        if (k < den.size() && den[k] == '^') {
            ++k;
            skip_ws();
            std::size_t start = k;
            while (k < den.size() && std::isdigit(static_cast<unsigned char>(den[k]))) ++k;
            if (k == start) throw ParseError("expected exponent", k);
            power = static_cast<unsigned>(std::stoul(den.substr(start, k - start)));
        }
        factors.push_back(DenFactor{std::move(f), power});
        skip_ws();
        if (k >= den.size()) break;
        if (den[k] != '*') throw ParseError("expected '*' between denominator factors", k);
        ++k;
    }
    return SingFunc(std::move(num), std::move(factors));
}

} // namespace ecalc
