#ifndef CCCLOSE_WITNESS_HPP
#define CCCLOSE_WITNESS_HPP

#include "ccclose/poly.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ccclose {

enum class ExprOp { Poly, Conj, Add, Sub, Mul, Div, AbsSq };

const char* to_string(ExprOp op);

struct ExprNode;

/// Immutable expression over polynomials, conjugation and |.|^2.
class Expr {
public:
    Expr() = default;
    static Expr poly(const LaurentPoly& p);
    static Expr conj(const Expr& e);
    static Expr abs_sq(const Expr& e);
    static Expr binary(ExprOp op, const Expr& a, const Expr& b);

    friend Expr operator+(const Expr& a, const Expr& b) { return binary(ExprOp::Add, a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return binary(ExprOp::Sub, a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return binary(ExprOp::Mul, a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return binary(ExprOp::Div, a, b); }

    bool valid() const { return node_ != nullptr; }
    const ExprNode& node() const { return *node_; }

    std::complex<double> eval(std::span<const std::complex<double>> point) const;
    std::string str() const;

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    ExprOp op = ExprOp::Poly;
    LaurentPoly poly;
    Expr a;
    Expr b;
};

/// Variables x_1..x_n followed by their formal conjugates "conj(x_j)".
VarList conjugate_extended(const VarList& vars);

/// num/den in the conjugate-extended ring.
struct ClearedForm {
    LaurentPoly num;
    LaurentPoly den;
};

/// Expands an expression over `vars` into the conjugate-extended ring.
ClearedForm clear_denominators(const Expr& e, const VarList& vars);

struct Witness {
    VarList vars;
    std::vector<LaurentPoly> gens;
    LaurentPoly g;
    std::vector<Expr> exprs;
    /// "canonical", "algebraic", "interpolated" or "custom".
    std::string kind;
    /// Polynomial part c_i of each phi_i; the continuous extension of phi_i
    /// to a point v of V(I) is expected to be c_i(v).
    std::vector<LaurentPoly> poly_part;
    /// (sum_i expr_i f_i - g) over its common denominator.
    ClearedForm identity_cleared;

    /// Recomputes the cleared identity; true when its numerator is zero.
    bool identity_holds() const;
};

/// Computes identity_cleared for a hand-built witness.
Witness make_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                     std::vector<Expr> exprs, std::string kind, std::vector<LaurentPoly> poly_part = {});

/// phi_i = conj(f_i) g / sum_j |f_j|^2.
Witness canonical_witness(const MonomialIdeal& ideal, const LaurentPoly& g);
Witness canonical_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g);
/// phi_i = h_i for g = sum h_i f_i.
Witness algebraic_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                          const std::vector<LaurentPoly>& h);
/// phi_i = c_i + conj(f_i) (g - sum_j c_j f_j) / sum_j |f_j|^2 with polynomial c.
Witness interpolated_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                             const std::vector<LaurentPoly>& c);

struct ValidationConfig {
    std::uint64_t seed = 0;
    std::size_t n_points = 200;
    std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::size_t sphere_samples = 48;
    std::size_t centers_per_orbit = 3;
    double residual_tolerance = 1e-10;
    /// Allowed growth between consecutive radii.
    double envelope_factor = 2.0;
    /// The last envelope must be below decay_ratio times the first.
    double decay_ratio = 1e-1;
    /// Envelopes below this count as zero.
    double zero_tolerance = 1e-12;
};

struct Report {
    double residual_max = 0;
    /// Per radius: sup over centers in V(I), sphere samples and i of
    /// |phi_i(p) - c_i(center)|, c_i the polynomial part of phi_i.
    std::vector<double> envelopes;
    bool identity_holds = false;
    bool residual_pass = false;
    bool envelope_pass = false;
    bool pass = false;
    std::uint64_t seed = 0;
    ValidationConfig config;
};

Report validate_witness(const Witness& w, const ValidationConfig& config = {});

}  // namespace ccclose

#endif  // CCCLOSE_WITNESS_HPP
