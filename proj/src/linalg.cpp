#include "ccclose/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace ccclose {

// ---------------------------------------------------------------------------
// Scalars

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(ScalarMatrix& m, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < ncols && row < m.size(); ++c) {
        std::size_t p = row;
        while (p < m.size() && m[p][c].is_zero()) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[row]);
        const Scalar inv = Scalar(1) / m[row][c];
        for (std::size_t j = c; j < m[row].size(); ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == row || m[i][c].is_zero()) continue;
            const Scalar factor = m[i][c];
            for (std::size_t j = c; j < m[i].size(); ++j) m[i][j] -= factor * m[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(ScalarMatrix m) {
    if (m.empty()) return 0;
    const std::size_t ncols = m.front().size();
    return rref(m, ncols).size();
}

Scalar determinant(ScalarMatrix m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
    Scalar det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c].is_zero()) ++p;
        if (p == n) return Scalar(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        const Scalar inv = Scalar(1) / m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            const Scalar factor = m[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[i][j] -= factor * m[c][j];
        }
    }
    return det;
}

std::vector<std::size_t> independent_rows(const ScalarMatrix& m) {
    std::vector<std::size_t> chosen;
    ScalarMatrix basis;
    for (std::size_t i = 0; i < m.size(); ++i) {
        ScalarMatrix trial = basis;
        trial.push_back(m[i]);
        if (rank(trial) > basis.size()) {
            basis.push_back(m[i]);
            chosen.push_back(i);
        }
    }
    return chosen;
}

ScalarMatrix transpose(const ScalarMatrix& m) {
    if (m.empty()) return {};
    ScalarMatrix t(m.front().size(), std::vector<Scalar>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

std::vector<std::size_t> independent_columns(const ScalarMatrix& m) { return independent_rows(transpose(m)); }

std::optional<std::vector<Scalar>> solve(const ScalarMatrix& a, const std::vector<Scalar>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("right-hand side length mismatch");
    const std::size_t ncols = a.empty() ? 0 : a.front().size();
    ScalarMatrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    const auto pivots = rref(aug, ncols + 1);
    std::vector<Scalar> x(ncols, Scalar(0));
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        if (pivots[k] == ncols) return std::nullopt;
        x[pivots[k]] = aug[k][ncols];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Rational functions

namespace {

RationalFunction simplify(RationalFunction f) {
    if (f.num.is_zero()) {
        f.den = LaurentPoly::constant(f.num.vars(), Scalar(1));
        return f;
    }
    if (auto q = exact_divide(f.num, f.den)) return {*q, LaurentPoly::constant(f.num.vars(), Scalar(1))};
    if (auto q = exact_divide(f.den, f.num)) return {LaurentPoly::constant(f.num.vars(), Scalar(1)), *q};
    // Normalize the denominator's leading coefficient to one.
    const Scalar lead = f.den.leading().second;
    if (!lead.is_one()) {
        const Scalar inv = Scalar(1) / lead;
        f.num = f.num.scaled(inv);
        f.den = f.den.scaled(inv);
    }
    return f;
}

RationalFunction sub(const RationalFunction& a, const RationalFunction& b) {
    if (a.den == b.den) return simplify({a.num - b.num, a.den});
    return simplify({a.num * b.den - b.num * a.den, a.den * b.den});
}

RationalFunction mul(const RationalFunction& a, const LaurentPoly& p) { return simplify({a.num * p, a.den}); }

RationalFunction div(const RationalFunction& a, const LaurentPoly& p) { return simplify({a.num, a.den * p}); }

}  // namespace

RationalFunction RationalFunction::from_poly(const LaurentPoly& p) {
    return {p, LaurentPoly::constant(p.vars(), Scalar(1))};
}

std::optional<LaurentPoly> RationalFunction::as_laurent() const { return exact_divide(num, den); }

Scalar RationalFunction::eval(std::span<const Scalar> point) const {
    const Scalar d = den.eval(point);
    if (d.is_zero()) throw std::domain_error("rational function evaluated on its polar locus");
    return num.eval(point) / d;
}

std::string RationalFunction::str() const {
    if (den.is_constant() && den.coeff(Exponent(den.nvars(), 0)).is_one()) return num.str();
    return "(" + num.str() + ")/(" + den.str() + ")";
}

// ---------------------------------------------------------------------------
// Bareiss

BareissResult bareiss_echelon(PolyMatrix m) {
    BareissResult out;
    if (m.empty()) return out;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    const VarList vars = m.front().empty() ? VarList{} : m.front().front().vars();
    LaurentPoly prev = LaurentPoly::constant(vars, Scalar(1));
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                LaurentPoly cross = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                auto q = exact_divide(cross, prev);
                if (!q) throw std::logic_error("Bareiss step is not exact");
                m[i][j] = std::move(*q);
            }
            m[i][c] = LaurentPoly(vars);
        }
        prev = m[r][c];
        out.pivot_cols.push_back(c);
        out.pivots.push_back(prev);
        ++r;
    }
    out.matrix = std::move(m);
    return out;
}

std::size_t rank(const PolyMatrix& m) { return bareiss_echelon(m).pivot_cols.size(); }

std::optional<std::vector<RationalFunction>> solve_parametric(const PolyMatrix& a, const std::vector<LaurentPoly>& b,
                                                              std::vector<LaurentPoly>* pivots) {
    if (a.size() != b.size()) throw std::invalid_argument("right-hand side length mismatch");
    if (a.empty()) return std::vector<RationalFunction>{};
    const std::size_t ncols = a.front().size();
    const VarList& vars = b.front().vars();
    PolyMatrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    BareissResult e = bareiss_echelon(std::move(aug));
    if (pivots) *pivots = e.pivots;
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == ncols) return std::nullopt;

    const RationalFunction zero = RationalFunction::from_poly(LaurentPoly(vars));
    std::vector<RationalFunction> x(ncols, zero);
    for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
        const std::size_t pc = e.pivot_cols[k];
        RationalFunction acc = RationalFunction::from_poly(e.matrix[k][ncols]);
        for (std::size_t j = pc + 1; j < ncols; ++j) {
            if (e.matrix[k][j].is_zero() || x[j].is_zero()) continue;
            acc = sub(acc, mul(x[j], e.matrix[k][j]));
        }
        x[pc] = div(acc, e.matrix[k][pc]);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Integer lattices

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void row_axpy(IntMatrix& m, std::size_t dst, std::size_t src, std::int64_t factor) {
    for (std::size_t j = 0; j < m[dst].size(); ++j) m[dst][j] -= factor * m[src][j];
}

void col_axpy(IntMatrix& m, std::size_t dst, std::size_t src, std::int64_t factor) {
    for (auto& row : m) row[dst] -= factor * row[src];
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (auto& row : m) std::swap(row[a], row[b]);
}

}  // namespace

IntMatrix identity_matrix(std::size_t n) {
    IntMatrix id(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t k = 0; k < n; ++k) id[k][k] = 1;
    return id;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    if (a.empty()) return {};
    const std::size_t inner = b.size();
    const std::size_t cols = b.empty() ? 0 : b.front().size();
    IntMatrix out(a.size(), std::vector<std::int64_t>(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k)
            for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

HermiteResult hermite_normal_form(const IntMatrix& rows, std::size_t ncols) {
    IntMatrix a = rows;
    IntMatrix t = identity_matrix(rows.size());
    HermiteResult out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
        for (;;) {
            std::size_t best = a.size();
            for (std::size_t i = r; i < a.size(); ++i)
                if (a[i][c] != 0 && (best == a.size() || std::llabs(a[i][c]) < std::llabs(a[best][c]))) best = i;
            if (best == a.size()) break;
            std::swap(a[best], a[r]);
            std::swap(t[best], t[r]);
            bool clean = true;
            for (std::size_t i = r + 1; i < a.size(); ++i) {
                if (a[i][c] == 0) continue;
                const std::int64_t q = floor_div(a[i][c], a[r][c]);
                row_axpy(a, i, r, q);
                row_axpy(t, i, r, q);
                if (a[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0) {
            for (auto& v : a[r]) v = -v;
            for (auto& v : t[r]) v = -v;
        }
        for (std::size_t i = 0; i < r; ++i) {
            const std::int64_t q = floor_div(a[i][c], a[r][c]);
            row_axpy(a, i, r, q);
            row_axpy(t, i, r, q);
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.basis.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(r));
    out.transform.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(r));
    return out;
}

std::vector<std::int64_t> reduce_modulo(const HermiteResult& h, std::vector<std::int64_t> v,
                                        std::vector<std::int64_t>* coords) {
    std::vector<std::int64_t> in_basis(h.basis.size(), 0);
    for (std::size_t k = 0; k < h.basis.size(); ++k) {
        const std::size_t pc = h.pivot_cols[k];
        const std::int64_t q = floor_div(v[pc], h.basis[k][pc]);
        if (q == 0) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= q * h.basis[k][j];
        in_basis[k] += q;
    }
    if (coords) {
        const std::size_t nrows = h.transform.empty() ? 0 : h.transform.front().size();
        coords->assign(nrows, 0);
        for (std::size_t k = 0; k < in_basis.size(); ++k)
            for (std::size_t j = 0; j < nrows; ++j) (*coords)[j] += in_basis[k] * h.transform[k][j];
    }
    return v;
}

SmithResult smith_normal_form(const IntMatrix& m) {
    SmithResult out;
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m.front().size();
    out.d = m;
    out.u = identity_matrix(rows);
    out.v = identity_matrix(cols);
    IntMatrix& d = out.d;
    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block goes to (t, t).
            std::size_t bi = rows, bj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (d[i][j] != 0 && (bi == rows || std::llabs(d[i][j]) < std::llabs(d[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == rows) break;
            std::swap(d[bi], d[t]);
            std::swap(out.u[bi], out.u[t]);
            swap_cols(d, bj, t);
            swap_cols(out.v, bj, t);
            bool done = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                const std::int64_t q = floor_div(d[i][t], d[t][t]);
                row_axpy(d, i, t, q);
                row_axpy(out.u, i, t, q);
                if (d[i][t] != 0) done = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const std::int64_t q = floor_div(d[t][j], d[t][t]);
                col_axpy(d, j, t, q);
                col_axpy(out.v, j, t, q);
                if (d[t][j] != 0) done = false;
            }
            if (!done) continue;
            // Divisibility of the remaining block.
            bool divisible = true;
            for (std::size_t i = t + 1; i < rows && divisible; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (d[i][j] % d[t][t] != 0) {
                        row_axpy(d, t, i, -1);
                        row_axpy(out.u, t, i, -1);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (t >= rows || t >= cols || d[t][t] == 0) break;
        if (d[t][t] < 0) {
            for (auto& x : d[t]) x = -x;
            for (auto& x : out.u[t]) x = -x;
        }
    }
    out.rank = 0;
    for (std::size_t k = 0; k < std::min(rows, cols); ++k)
        if (d[k][k] != 0) ++out.rank;
    return out;
}

std::int64_t determinant(const IntMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw std::invalid_argument("determinant of a non-square matrix");
        for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(m[i][j]);
    }
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    const mpz_class det = n == 0 ? mpz_class(1) : a[n - 1][n - 1] * sign;
    if (!det.fits_slong_p()) throw std::overflow_error("integer determinant overflow");
    return det.get_si();
}

}  // namespace ccclose
