#ifndef CCCLOSE_LINALG_HPP
#define CCCLOSE_LINALG_HPP

#include "ccclose/poly.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ccclose {

using ScalarMatrix = std::vector<std::vector<Scalar>>;
using PolyMatrix = std::vector<std::vector<LaurentPoly>>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

// ---------------------------------------------------------------------------
// Exact elimination over the Gaussian rationals.

std::size_t rank(ScalarMatrix m);
Scalar determinant(ScalarMatrix m);
/// Indices of a maximal set of linearly independent rows, greedily from the top.
std::vector<std::size_t> independent_rows(const ScalarMatrix& m);
/// Indices of a maximal set of linearly independent columns, greedily from the left.
std::vector<std::size_t> independent_columns(const ScalarMatrix& m);
/// Some x with a*x == b, free variables set to zero.
std::optional<std::vector<Scalar>> solve(const ScalarMatrix& a, const std::vector<Scalar>& b);
ScalarMatrix transpose(const ScalarMatrix& m);

// ---------------------------------------------------------------------------
// Function-field arithmetic for parametric systems.

/// num/den with both Laurent polynomials over the same variables.
struct RationalFunction {
    LaurentPoly num;
    LaurentPoly den;

    static RationalFunction from_poly(const LaurentPoly& p);
    bool is_zero() const { return num.is_zero(); }
    /// The Laurent polynomial num/den when the division is exact.
    std::optional<LaurentPoly> as_laurent() const;
    /// Evaluates at a point where den does not vanish.
    Scalar eval(std::span<const Scalar> point) const;
    std::string str() const;
};

/// Fraction-free (Bareiss) row echelon form over the Laurent ring.
struct BareissResult {
    PolyMatrix matrix;
    std::vector<std::size_t> pivot_cols;
    /// Pivot entries in order; every one is a nonzero Laurent polynomial.
    std::vector<LaurentPoly> pivots;
};

BareissResult bareiss_echelon(PolyMatrix m);
std::size_t rank(const PolyMatrix& m);

/// Solution of a*x == b over the fraction field of the Laurent ring with free
/// variables set to zero; nullopt when inconsistent. `pivots` receives the
/// Bareiss pivots so callers can inspect where the generic rank may drop.
std::optional<std::vector<RationalFunction>> solve_parametric(const PolyMatrix& a, const std::vector<LaurentPoly>& b,
                                                              std::vector<LaurentPoly>* pivots = nullptr);

// ---------------------------------------------------------------------------
// Integer lattices.

/// Row echelon basis of the lattice spanned by `rows`, with positive pivots
/// reduced above (Hermite normal form), plus coordinates of each basis row in
/// terms of the input rows.
struct HermiteResult {
    IntMatrix basis;
    IntMatrix transform;  // basis = transform * rows
    std::vector<std::size_t> pivot_cols;
};

HermiteResult hermite_normal_form(const IntMatrix& rows, std::size_t ncols);

/// Reduces v modulo the lattice with Hermite basis h. Returns the canonical
/// representative and writes the integer coordinates (in the original rows)
/// of v - representative into `coords`.
std::vector<std::int64_t> reduce_modulo(const HermiteResult& h, std::vector<std::int64_t> v,
                                        std::vector<std::int64_t>* coords = nullptr);

/// u * m * v == d with u, v unimodular and d diagonal (d[k][k] > 0 for k < rank,
/// each dividing the next).
struct SmithResult {
    IntMatrix u;
    IntMatrix d;
    IntMatrix v;
    std::size_t rank = 0;
};

SmithResult smith_normal_form(const IntMatrix& m);
std::int64_t determinant(const IntMatrix& m);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix identity_matrix(std::size_t n);

}  // namespace ccclose

#endif  // CCCLOSE_LINALG_HPP
