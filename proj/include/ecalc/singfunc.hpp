#pragma once

#include "ecalc/poly.hpp"

#include <string>
#include <vector>

namespace ecalc {

/// One denominator factor with its multiplicity.
struct DenFactor {
    Poly factor;
    unsigned power = 1;
};

/// Quotient num / prod(factor_i ^ power_i).  The factor list is kept
/// canonical: factors are monic (leading coefficient 1), non-constant,
/// pairwise distinct, sorted by their printed form, and the numerator is
/// reduced against them (a factor that divides the numerator exactly is
/// cancelled).  A SingFunc with an empty factor list is an ordinary
/// polynomial.
class SingFunc {
public:
    SingFunc() = default;
    /*implicit*/ SingFunc(Poly num) : num_(std::move(num)) { normalize(); }
    SingFunc(Poly num, std::vector<DenFactor> den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static SingFunc zero(std::vector<std::string> vars) { return SingFunc(Poly::zero(std::move(vars))); }
    static SingFunc constant(std::vector<std::string> vars, const Rat& c) {
        return SingFunc(Poly::constant(std::move(vars), c));
    }

    const Poly& num() const { return num_; }
    const std::vector<DenFactor>& den() const { return den_; }
    const std::vector<std::string>& vars() const { return num_.vars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.empty(); }
    bool is_constant() const { return den_.empty() && num_.is_constant(); }
    Rat constant_value() const { return num_.constant_value(); }
    /// Numerator when the quotient is a genuine polynomial; throws otherwise.
    const Poly& as_poly() const;

    SingFunc operator-() const;
    SingFunc operator+(const SingFunc& o) const;
    SingFunc operator-(const SingFunc& o) const;
    SingFunc operator*(const SingFunc& o) const;
    SingFunc operator*(const Rat& c) const;
    SingFunc& operator+=(const SingFunc& o) { return *this = *this + o; }
    SingFunc& operator-=(const SingFunc& o) { return *this = *this - o; }
    SingFunc& operator*=(const SingFunc& o) { return *this = *this * o; }
    bool operator==(const SingFunc& o) const;
    bool operator!=(const SingFunc& o) const { return !(*this == o); }

    /// Exact quotient by a constant or by a quotient whose numerator factors
    /// completely over `declared` (times a constant).  Throws DomainError
    /// when the division would leave the declared coefficient ring.
    SingFunc divide(const SingFunc& d, const std::vector<Poly>& declared) const;

    /// Partial derivative (quotient rule, result reduced).
    SingFunc derivative(std::size_t v) const;

    /// Throws SingularEvalError when a denominator factor vanishes at the
    /// point; evaluates exactly otherwise.
    Rat eval(const std::vector<Rat>& point) const;
    double eval(const std::vector<double>& point) const;

    /// Substitute variable v := 0.  Requires that no denominator factor
    /// vanishes identically on {x_v = 0}.
    SingFunc substitute_zero(std::size_t v) const;

    SingFunc restrict_vars(const std::vector<std::size_t>& keep) const;
    SingFunc extend_vars(std::vector<std::string> new_vars, const std::vector<std::size_t>& positions) const;

    /// "num" for polynomials, "(num)/(f1^e1*f2^e2)" otherwise.
    std::string str() const;

private:
    void normalize();

    Poly num_;
    std::vector<DenFactor> den_;
};

inline SingFunc operator*(const Rat& c, const SingFunc& f) { return f * c; }

/// Parse "poly" or "(poly)/(factor(^uint)? ("*" factor(^uint)?)*)" where
/// each factor is itself a poly in parentheses or a bare varpow/ident.
SingFunc parse_singfunc(const std::string& text, std::vector<std::string> vars);

} // namespace ecalc
