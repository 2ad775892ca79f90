#include "ccclose/witness.hpp"

#include "ccclose/newton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ccclose {

const char* to_string(ExprOp op) {
    switch (op) {
    case ExprOp::Poly: return "poly";
    case ExprOp::Conj: return "conj";
    case ExprOp::Add: return "add";
    case ExprOp::Sub: return "sub";
    case ExprOp::Mul: return "mul";
    case ExprOp::Div: return "div";
    case ExprOp::AbsSq: return "abs_sq";
    }
    return "?";
}

Expr Expr::poly(const LaurentPoly& p) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Poly;
    n->poly = p;
    return Expr(std::move(n));
}

Expr Expr::conj(const Expr& e) {
    if (!e.valid()) throw std::invalid_argument("conj of an empty expression");
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Conj;
    n->a = e;
    return Expr(std::move(n));
}

Expr Expr::abs_sq(const Expr& e) {
    if (!e.valid()) throw std::invalid_argument("abs_sq of an empty expression");
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::AbsSq;
    n->a = e;
    return Expr(std::move(n));
}

Expr Expr::binary(ExprOp op, const Expr& a, const Expr& b) {
    if (op != ExprOp::Add && op != ExprOp::Sub && op != ExprOp::Mul && op != ExprOp::Div)
        throw std::invalid_argument("not a binary operator");
    if (!a.valid() || !b.valid()) throw std::invalid_argument("empty operand");
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = a;
    n->b = b;
    return Expr(std::move(n));
}

std::complex<double> Expr::eval(std::span<const std::complex<double>> point) const {
    const ExprNode& n = node();
    switch (n.op) {
    case ExprOp::Poly: return n.poly.eval(point);
    case ExprOp::Conj: return std::conj(n.a.eval(point));
    case ExprOp::AbsSq: return std::norm(n.a.eval(point));
    case ExprOp::Add: return n.a.eval(point) + n.b.eval(point);
    case ExprOp::Sub: return n.a.eval(point) - n.b.eval(point);
    case ExprOp::Mul: return n.a.eval(point) * n.b.eval(point);
    case ExprOp::Div: return n.a.eval(point) / n.b.eval(point);
    }
    return {};
}

std::string Expr::str() const {
    const ExprNode& n = node();
    switch (n.op) {
    case ExprOp::Poly: return n.poly.size() > 1 ? "(" + n.poly.str() + ")" : n.poly.str();
    case ExprOp::Conj: return "conj(" + n.a.str() + ")";
    case ExprOp::AbsSq: return "|" + n.a.str() + "|^2";
    case ExprOp::Add: return "(" + n.a.str() + " + " + n.b.str() + ")";
    case ExprOp::Sub: return "(" + n.a.str() + " - " + n.b.str() + ")";
    case ExprOp::Mul: return n.a.str() + "*" + n.b.str();
    case ExprOp::Div: return "(" + n.a.str() + ")/(" + n.b.str() + ")";
    }
    return "?";
}

VarList conjugate_extended(const VarList& vars) {
    VarList out = vars;
    for (const auto& v : vars) out.push_back("conj(" + v + ")");
    return out;
}

namespace {

LaurentPoly lift(const LaurentPoly& p, const VarList& ext) {
    if (p.is_zero() && p.nvars() == 0) return LaurentPoly(ext);
    const std::size_t n = ext.size() / 2;
    if (p.nvars() != n) throw std::invalid_argument("expression polynomial has the wrong variables");
    LaurentPoly out(ext);
    for (const auto& [e, c] : p.terms()) {
        Exponent big(2 * n, 0);
        std::copy(e.begin(), e.end(), big.begin());
        out.add_term(big, c);
    }
    return out;
}

/// Swaps the holomorphic and conjugate halves and conjugates coefficients.
LaurentPoly conjugate(const LaurentPoly& p) {
    const std::size_t n = p.nvars() / 2;
    LaurentPoly out(p.vars());
    for (const auto& [e, c] : p.terms()) {
        Exponent s(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            s[j] = e[n + j];
            s[n + j] = e[j];
        }
        out.add_term(s, c.conj());
    }
    return out;
}

ClearedForm clear(const Expr& e, const VarList& ext) {
    const ExprNode& n = e.node();
    switch (n.op) {
    case ExprOp::Poly: return {lift(n.poly, ext), LaurentPoly::constant(ext, Scalar(1))};
    case ExprOp::Conj: {
        ClearedForm a = clear(n.a, ext);
        return {conjugate(a.num), conjugate(a.den)};
    }
    case ExprOp::AbsSq: {
        ClearedForm a = clear(n.a, ext);
        return {a.num * conjugate(a.num), a.den * conjugate(a.den)};
    }
    case ExprOp::Add:
    case ExprOp::Sub: {
        ClearedForm a = clear(n.a, ext);
        ClearedForm b = clear(n.b, ext);
        const bool add = n.op == ExprOp::Add;
        if (a.den == b.den) return {add ? a.num + b.num : a.num - b.num, a.den};
        LaurentPoly left = a.num * b.den;
        LaurentPoly right = b.num * a.den;
        return {add ? left + right : left - right, a.den * b.den};
    }
    case ExprOp::Mul: {
        ClearedForm a = clear(n.a, ext);
        ClearedForm b = clear(n.b, ext);
        return {a.num * b.num, a.den * b.den};
    }
    case ExprOp::Div: {
        ClearedForm a = clear(n.a, ext);
        ClearedForm b = clear(n.b, ext);
        if (b.num.is_zero()) throw std::domain_error("division by the zero polynomial");
        return {a.num * b.den, a.den * b.num};
    }
    }
    throw std::logic_error("unknown expression node");
}

ClearedForm identity_form(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                          const std::vector<Expr>& exprs) {
    const VarList ext = conjugate_extended(vars);
    ClearedForm sum{-lift(g, ext), LaurentPoly::constant(ext, Scalar(1))};
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        ClearedForm term = clear(exprs[i] * Expr::poly(gens[i]), ext);
        if (term.den == sum.den) {
            sum.num += term.num;
        } else {
            sum = {sum.num * term.den + term.num * sum.den, sum.den * term.den};
        }
    }
    return sum;
}

Expr denominator_expr(const std::vector<LaurentPoly>& gens) {
    Expr s = Expr::abs_sq(Expr::poly(gens.front()));
    for (std::size_t j = 1; j < gens.size(); ++j) s = s + Expr::abs_sq(Expr::poly(gens[j]));
    return s;
}

void check_inputs(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g) {
    if (gens.empty()) throw std::invalid_argument("witness for the zero ideal");
    for (const auto& f : gens)
        if (f.vars() != vars) throw std::invalid_argument("generator over different variables");
    if (g.vars() != vars) throw std::invalid_argument("candidate over different variables");
}

}  // namespace

ClearedForm clear_denominators(const Expr& e, const VarList& vars) {
    return clear(e, conjugate_extended(vars));
}

bool Witness::identity_holds() const {
    if (exprs.size() != gens.size()) return false;
    return identity_form(vars, gens, g, exprs).num.is_zero();
}

Witness make_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                     std::vector<Expr> exprs, std::string kind, std::vector<LaurentPoly> poly_part) {
    if (exprs.size() != gens.size()) throw std::invalid_argument("one expression per generator required");
    if (poly_part.empty()) poly_part.assign(gens.size(), LaurentPoly(vars));
    if (poly_part.size() != gens.size()) throw std::invalid_argument("one polynomial part per generator required");
    Witness w;
    w.vars = vars;
    w.gens = gens;
    w.g = g;
    w.exprs = std::move(exprs);
    w.kind = std::move(kind);
    w.poly_part = std::move(poly_part);
    w.identity_cleared = identity_form(w.vars, w.gens, w.g, w.exprs);
    return w;
}

Witness canonical_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g) {
    check_inputs(vars, gens, g);
    const Expr s = denominator_expr(gens);
    std::vector<Expr> exprs;
    for (const auto& f : gens) exprs.push_back(Expr::conj(Expr::poly(f)) * Expr::poly(g) / s);
    return make_witness(vars, gens, g, std::move(exprs), "canonical");
}

Witness canonical_witness(const MonomialIdeal& ideal, const LaurentPoly& g) {
    return canonical_witness(ideal.vars(), ideal.generator_polys(), g);
}

Witness algebraic_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                          const std::vector<LaurentPoly>& h) {
    check_inputs(vars, gens, g);
    if (h.size() != gens.size()) throw std::invalid_argument("one cofactor per generator required");
    std::vector<Expr> exprs;
    for (const auto& hi : h) exprs.push_back(Expr::poly(hi));
    return make_witness(vars, gens, g, std::move(exprs), "algebraic", h);
}

Witness interpolated_witness(const VarList& vars, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                             const std::vector<LaurentPoly>& c) {
    check_inputs(vars, gens, g);
    if (c.size() != gens.size()) throw std::invalid_argument("one coefficient per generator required");
    LaurentPoly r = g;
    for (std::size_t i = 0; i < gens.size(); ++i) r -= c[i] * gens[i];
    if (r.is_zero()) {
        Witness w = algebraic_witness(vars, gens, g, c);
        return w;
    }
    const Expr s = denominator_expr(gens);
    std::vector<Expr> exprs;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Expr tail = Expr::conj(Expr::poly(gens[i])) * Expr::poly(r) / s;
        exprs.push_back(c[i].is_zero() ? tail : Expr::poly(c[i]) + tail);
    }
    return make_witness(vars, gens, g, std::move(exprs), "interpolated", c);
}

namespace {

using Point = std::vector<std::complex<double>>;

std::complex<double> disc_sample(std::mt19937_64& rng, double rmin, double rmax) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = std::sqrt(rmin * rmin + (rmax * rmax - rmin * rmin) * u(rng));
    const double t = 2 * std::numbers::pi * u(rng);
    return std::polar(r, t);
}

std::vector<Exponent> monomial_exponents(const std::vector<LaurentPoly>& gens) {
    std::vector<Exponent> out;
    for (const auto& f : gens) {
        if (!f.is_monomial()) throw std::invalid_argument("validation needs monomial generators");
        out.push_back(f.leading().first);
    }
    return out;
}

double denominator_value(const std::vector<LaurentPoly>& gens, const Point& p) {
    double s = 0;
    for (const auto& f : gens) s += std::norm(f.eval(std::span<const std::complex<double>>(p)));
    return s;
}

}  // namespace

Report validate_witness(const Witness& w, const ValidationConfig& config) {
    Report rep;
    rep.seed = config.seed;
    rep.config = config;
    rep.identity_holds = w.identity_holds();
    const std::size_t n = w.vars.size();
    const std::vector<Exponent> gens = monomial_exponents(w.gens);
    std::mt19937_64 rng(config.seed);

    for (std::size_t k = 0; k < config.n_points; ++k) {
        Point p(n);
        for (auto& z : p) z = disc_sample(rng, 0.0, 1.0);
        if (denominator_value(w.gens, p) == 0.0) continue;
        const std::span<const std::complex<double>> sp(p);
        const std::complex<double> gv = w.g.eval(sp);
        std::complex<double> sum = 0;
        for (std::size_t i = 0; i < w.gens.size(); ++i) sum += w.exprs[i].eval(sp) * w.gens[i].eval(sp);
        const double res = std::abs(sum - gv) / (1.0 + std::abs(gv));
        if (std::isnan(res)) {
            rep.residual_max = res;
            break;
        }
        rep.residual_max = std::max(rep.residual_max, res);
    }
    rep.residual_pass = !std::isnan(rep.residual_max) && rep.residual_max <= config.residual_tolerance;

    std::vector<Point> centers;
    for (const ZeroSet& zero : vanishing_orbits(gens, n)) {
        const std::size_t copies = orbit_dimension(zero) == 0 ? 1 : config.centers_per_orbit;
        for (std::size_t c = 0; c < copies; ++c) {
            Point p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = zero[j] ? 0.0 : disc_sample(rng, 0.3, 0.7);
            centers.push_back(p);
        }
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    rep.envelopes.assign(config.radii.size(), 0.0);
    for (const Point& c : centers) {
        const std::span<const std::complex<double>> sc(c);
        std::vector<std::complex<double>> limit;
        for (const auto& pp : w.poly_part) limit.push_back(pp.eval(sc));
        for (std::size_t k = 0; k < config.radii.size(); ++k) {
            for (std::size_t s = 0; s < config.sphere_samples; ++s) {
                Point dir(n);
                double norm = 0;
                for (auto& z : dir) {
                    z = {normal(rng), normal(rng)};
                    norm += std::norm(z);
                }
                norm = std::sqrt(norm);
                Point p(n);
                for (std::size_t j = 0; j < n; ++j) p[j] = c[j] + config.radii[k] * dir[j] / norm;
                if (denominator_value(w.gens, p) == 0.0) continue;
                const std::span<const std::complex<double>> sp(p);
                for (std::size_t i = 0; i < w.exprs.size(); ++i) {
                    const double osc = std::abs(w.exprs[i].eval(sp) - limit[i]);
                    rep.envelopes[k] = std::isnan(osc) ? osc : std::max(rep.envelopes[k], osc);
                }
            }
        }
    }
    const auto& e = rep.envelopes;
    bool ok = std::none_of(e.begin(), e.end(), [](double v) { return std::isnan(v); });
    const bool all_zero = ok && std::all_of(e.begin(), e.end(), [&](double v) { return v <= config.zero_tolerance; });
    if (ok && !all_zero && !e.empty()) {
        for (std::size_t k = 0; k + 1 < e.size(); ++k)
            if (e[k + 1] > config.envelope_factor * e[k] + config.zero_tolerance) ok = false;
        if (e.back() > config.decay_ratio * e.front() + config.zero_tolerance) ok = false;
    }
    rep.envelope_pass = ok;
    rep.pass = rep.identity_holds && rep.residual_pass && rep.envelope_pass;
    return rep;
}

}  // namespace ccclose
