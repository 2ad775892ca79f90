#ifndef CCCLOSE_FINDET_HPP
#define CCCLOSE_FINDET_HPP

#include "ccclose/descent.hpp"
#include "ccclose/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccclose {

/// Function table behind the columns of a certificate: the rows f and the
/// candidate phi on one chart, with the chart's map to X (empty when the
/// certificate is not tied to X).
struct CertificateChart {
    std::size_t chart = 0;
    VarList coords;
    std::vector<LaurentPoly> map_to_x;
    std::vector<LaurentPoly> funcs;
    LaurentPoly phi;
};

struct CertificatePoint {
    /// Index into WronskianCertificate::charts, or the column index for
    /// certificates built from a finite table.
    std::size_t chart = 0;
    std::vector<Scalar> coords;
};

/// Points y_1..y_m in one fiber where the matrix with rows f_k (k in `rows`)
/// and phi, evaluated at the points, is invertible while the f rows span the
/// evaluated f matrix. Then phi is no constant combination of the f.
struct WronskianCertificate {
    std::vector<CertificateChart> charts;
    std::vector<CertificatePoint> points;
    std::vector<std::size_t> rows;
    ScalarMatrix matrix;
    Scalar det;
    std::uint64_t seed = 0;
    /// Common image of the points in X, when known.
    std::vector<Scalar> base_point;

    /// Recomputes the matrix and determinant from the stored functions.
    bool verify(std::string* why = nullptr) const;
    /// Same check against an explicit table (f: r x columns, phi: columns).
    bool verify_table(const ScalarMatrix& f, const std::vector<Scalar>& phi, std::string* why = nullptr) const;
};

enum class SpanStatus { InSpan, NotInSpan };

const char* to_string(SpanStatus status);

struct SpanResult {
    SpanStatus status = SpanStatus::InSpan;
    /// Variables of the coefficient field (empty over a point base).
    VarList params;
    std::vector<RationalFunction> coeffs;
    std::optional<WronskianCertificate> certificate;
    /// Some elimination pivot vanishes somewhere on the stratum, so the
    /// coefficients may misbehave at special points and a finer split is due.
    bool needs_split = false;
    /// All coefficients are polynomials in the parameters.
    bool polynomial = true;
};

/// Constant-coefficient span test on {u_zero = 0} with the remaining
/// coordinates free. Points are sampled at 1, 2, 3, ... along the first free
/// coordinate, the others drawn from `seed`.
SpanResult wronskian_test(const std::vector<LaurentPoly>& funcs, const LaurentPoly& phi, const ZeroSet& zero,
                          std::uint64_t seed = 0);
SpanResult wronskian_test(const std::vector<LaurentPoly>& funcs, const LaurentPoly& phi, std::uint64_t seed = 0);

/// Finite-table version: columns are evaluation points, f is r x m. Columns
/// may carry different unit scalings; the verdict does not depend on them.
SpanResult wronskian_test_table(const ScalarMatrix& f, const std::vector<Scalar>& phi, std::uint64_t seed = 0);

/// A point of Y in a fiber over an X-orbit.
struct FiberPoint {
    std::size_t chart = 0;
    ZeroSet orbit;
    std::vector<Scalar> coords;
};

/// Fiber points over x* = z^L inside every chart orbit lying over `base`.
/// `z` assigns values to the coordinates not in `base`; L is chosen so that
/// all fiber equations have rational solutions and is reported through
/// `x_star`. Fiber directions take the values 1..count (first direction) and
/// seeded integers (others).
std::vector<FiberPoint> fiber_points(const ChartAtlas& atlas, const ZeroSet& base, const std::vector<Scalar>& z,
                                     std::size_t count, std::uint64_t seed, std::vector<Scalar>* x_star = nullptr);

/// Decides whether g_tilde (one polynomial per chart of a blow-up problem)
/// is a combination of the f_tilde with coefficients constant on the fibers
/// over `base`. Coefficients live in the rational functions of the
/// coordinates not in `base`.
SpanResult fiber_span_test(const DescentProblem& d, const std::vector<LaurentPoly>& g_tilde, const ZeroSet& base,
                           std::uint64_t seed = 0);

/// fiber_span_test for finite models: every point of the fiber over base
/// point `base` contributes its F columns; g gives the phi values per point.
SpanResult fiber_span_test(const DescentProblem& d, const std::vector<std::vector<Scalar>>& g_values,
                           std::size_t base, std::uint64_t seed = 0);

struct StratumReport {
    ZeroSet base;
    std::string label;
    SpanResult result;
};

struct Sci0Result {
    bool member = false;
    std::vector<StratumReport> report;
    /// Set when g does not even pull back to a regular section of O(-E).
    std::optional<std::string> obstruction;
};

/// Stratified span test of g on every X-orbit, most generic first.
Sci0Result sci0_membership(const DescentProblem& d, const LaurentPoly& g, std::uint64_t seed = 0);

}  // namespace ccclose

#endif  // CCCLOSE_FINDET_HPP
