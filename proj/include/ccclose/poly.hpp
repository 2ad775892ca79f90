#ifndef CCCLOSE_POLY_HPP
#define CCCLOSE_POLY_HPP

#include "ccclose/scalar.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccclose {

using Exponent = std::vector<std::int64_t>;
using VarList = std::vector<std::string>;

/// Graded lexicographic order: total degree first, then lexicographic.
struct GrlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const;
};

std::int64_t total_degree(const Exponent& e);
/// Componentwise a >= b.
bool dominates(const Exponent& a, const Exponent& b);
Exponent exponent_add(const Exponent& a, const Exponent& b);
Exponent exponent_sub(const Exponent& a, const Exponent& b);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Multivariate Laurent polynomial over the Gaussian rationals.
///
/// Terms live in a map keyed by exponent vector in grlex order; zero
/// coefficients are never stored, so structural equality is equality of
/// polynomials.
class LaurentPoly {
public:
    using TermMap = std::map<Exponent, Scalar, GrlexLess>;

    LaurentPoly() = default;
    explicit LaurentPoly(VarList vars) : vars_(std::move(vars)) {}

    static LaurentPoly constant(VarList vars, const Scalar& c);
    static LaurentPoly monomial(VarList vars, Exponent e, const Scalar& c = Scalar(1));
    static LaurentPoly variable(VarList vars, std::size_t index);

    const VarList& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Scalar coeff(const Exponent& e) const;

    /// Adds c*x^e in place.
    void add_term(const Exponent& e, const Scalar& c);

    bool is_polynomial() const;
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_constant() const;
    /// Componentwise minimum over all terms; zero vector for the zero polynomial.
    Exponent min_exponents() const;
    /// Leading term in grlex order. Requires a nonzero polynomial.
    const std::pair<const Exponent, Scalar>& leading() const;

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
    LaurentPoly operator-() const;
    LaurentPoly scaled(const Scalar& c) const;
    LaurentPoly pow(unsigned k) const;

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /// Conjugates every coefficient.
    LaurentPoly conj_coeffs() const;

    Scalar eval(std::span<const Scalar> point) const;
    std::complex<double> eval(std::span<const std::complex<double>> point) const;

    /// Replaces variable k by images[k]; all images share one variable list.
    /// A variable raised to a negative power must map to a monomial.
    LaurentPoly substitute(const std::vector<LaurentPoly>& images) const;
    /// Same terms over a different variable list of equal length.
    LaurentPoly renamed(VarList vars) const;
    /// Sets the listed variables to zero. Terms with a negative exponent in a
    /// zeroed variable make this throw std::domain_error.
    LaurentPoly restrict_zero(const std::vector<bool>& zero) const;

    std::string str() const;

private:
    void check_compatible(const LaurentPoly& o) const;

    VarList vars_;
    TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

/// p / x^m; exact in the Laurent ring.
LaurentPoly monomial_divide(const LaurentPoly& p, const Exponent& m);
LaurentPoly monomial_multiply(const LaurentPoly& p, const Exponent& m);
/// q with q*b == a if one exists in the Laurent ring.
std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b);

LaurentPoly parse_poly(std::string_view text, const VarList& vars);
/// Splits "a, b, c" on top-level commas and parses each piece.
std::vector<LaurentPoly> parse_poly_list(std::string_view text, const VarList& vars);
/// Parses "x,y,z"; rejects duplicates and the reserved name "i".
VarList parse_var_list(std::string_view text);

/// Monomial ideal with its unique minimal generating set.
class MonomialIdeal {
public:
    MonomialIdeal(VarList vars, std::vector<Exponent> gens);

    /// Every piece of the comma separated list must be a monomial.
    static MonomialIdeal parse(std::string_view text, const VarList& vars);

    const VarList& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    const std::vector<Exponent>& gens() const { return gens_; }
    std::size_t rank() const { return gens_.size(); }

    bool contains_monomial(const Exponent& e) const;
    std::vector<LaurentPoly> generator_polys() const;
    std::string str() const;

private:
    VarList vars_;
    std::vector<Exponent> gens_;
};

}  // namespace ccclose

#endif  // CCCLOSE_POLY_HPP
