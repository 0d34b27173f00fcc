#pragma once

#include "ecalc/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecalc {

/// Exponent vector, one entry per variable of the ambient chart.
using Exps = std::vector<unsigned>;

/// Multivariate polynomial with exact rational coefficients over a fixed,
/// ordered variable list.  Terms are kept canonical: no zero coefficients,
/// keys ordered by the map (lexicographic on exponent vectors).  All binary
/// operations require both operands to share the same variable list.
class Poly {
public:
    Poly() = default; // zero polynomial over an empty variable list

    static Poly zero(std::vector<std::string> vars);
    static Poly constant(std::vector<std::string> vars, const Rat& c);
    static Poly variable(std::vector<std::string> vars, const std::string& name);
    static Poly monomial(std::vector<std::string> vars, const Exps& e, const Rat& c);

    const std::vector<std::string>& vars() const { return vars_; }
    const std::map<Exps, Rat>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Value when is_constant(); the zero polynomial yields 0.
    Rat constant_value() const;

    int total_degree() const; ///< -1 for the zero polynomial
    /// Degree if every term has the same total degree; nullopt otherwise.
    /// The zero polynomial reports degree 0.
    std::optional<int> homogeneous_degree() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& c) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    bool operator==(const Poly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(unsigned k) const;

    /// Partial derivative with respect to variable index v.
    Poly derivative(std::size_t v) const;

    Rat eval(const std::vector<Rat>& point) const;
    double eval(const std::vector<double>& point) const;

    /// Substitute variable v := 0 (variable list unchanged).
    Poly substitute_zero(std::size_t v) const;

    /// Exact quotient *this / d, or nullopt when d does not divide exactly.
    std::optional<Poly> divide_exact(const Poly& d) const;

    /// True if variable v appears with positive exponent in some term.
    bool depends_on(std::size_t v) const;

    /// Re-express over a subset of the variables (given by indices into the
    /// current list, in the new order).  Every dropped variable must not
    /// appear in any term.
    Poly restrict_vars(const std::vector<std::size_t>& keep) const;

    /// Re-express over a superset of the variables: `positions[k]` is the
    /// index the current k-th variable takes in `new_vars`.
    Poly extend_vars(std::vector<std::string> new_vars, const std::vector<std::size_t>& positions) const;

    /// Grammar-conforming rendering; parse_poly(str(), vars()) round-trips.
    std::string str() const;

private:
    void prune();
    void check_same_vars(const Poly& o) const;

    std::vector<std::string> vars_;
    std::map<Exps, Rat> terms_;
};

inline Poly operator*(const Rat& c, const Poly& p) { return p * c; }

/// Parse the polynomial grammar:
///   poly    := ["+"|"-"] term (("+"|"-") term)*
///   term    := rational ("*" varpow)* | varpow ("*" varpow)*
///   varpow  := ident ("^" uint)?
///   rational:= int ("/" uint)?
/// Whitespace is insignificant.  Unknown identifiers raise ParseError.
Poly parse_poly(const std::string& text, std::vector<std::string> vars);

} // namespace ecalc
