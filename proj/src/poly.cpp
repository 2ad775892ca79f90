#include "ccclose/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace ccclose {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("exponent overflow");
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("exponent overflow");
    return out;
}

}  // namespace

bool GrlexLess::operator()(const Exponent& a, const Exponent& b) const {
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

std::int64_t total_degree(const Exponent& e) {
    std::int64_t d = 0;
    for (auto v : e) d = checked_add(d, v);
    return d;
}

bool dominates(const Exponent& a, const Exponent& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] < b[k]) return false;
    return true;
}

Exponent exponent_add(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = checked_add(a[k], b[k]);
    return r;
}

Exponent exponent_sub(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = checked_add(a[k], -b[k]);
    return r;
}

// ---------------------------------------------------------------------------
// LaurentPoly

LaurentPoly LaurentPoly::constant(VarList vars, const Scalar& c) {
    const auto n = vars.size();
    return monomial(std::move(vars), Exponent(n, 0), c);
}

LaurentPoly LaurentPoly::monomial(VarList vars, Exponent e, const Scalar& c) {
    if (e.size() != vars.size()) throw std::invalid_argument("exponent length does not match variables");
    LaurentPoly p(std::move(vars));
    p.add_term(e, c);
    return p;
}

LaurentPoly LaurentPoly::variable(VarList vars, std::size_t index) {
    Exponent e(vars.size(), 0);
    e.at(index) = 1;
    return monomial(std::move(vars), std::move(e));
}

Scalar LaurentPoly::coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void LaurentPoly::add_term(const Exponent& e, const Scalar& c) {
    if (c.is_zero()) return;
    if (e.size() != vars_.size()) throw std::invalid_argument("exponent length does not match variables");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool LaurentPoly::is_polynomial() const {
    for (const auto& [e, c] : terms_)
        for (auto v : e)
            if (v < 0) return false;
    return true;
}

bool LaurentPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    for (auto v : terms_.begin()->first)
        if (v != 0) return false;
    return true;
}

Exponent LaurentPoly::min_exponents() const {
    Exponent m(vars_.size(), 0);
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (first) {
            m = e;
            first = false;
            continue;
        }
        for (std::size_t k = 0; k < m.size(); ++k) m[k] = std::min(m[k], e[k]);
    }
    return m;
}

const std::pair<const Exponent, Scalar>& LaurentPoly::leading() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return *terms_.rbegin();
}

void LaurentPoly::check_compatible(const LaurentPoly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("variable-list mismatch");
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    check_compatible(o);
    LaurentPoly out(vars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) out.add_term(exponent_add(ea, eb), ca * cb);
    terms_ = std::move(out.terms_);
    return *this;
}

LaurentPoly LaurentPoly::operator-() const { return scaled(Scalar(-1)); }

LaurentPoly LaurentPoly::scaled(const Scalar& c) const {
    LaurentPoly out(vars_);
    if (c.is_zero()) return out;
    for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
    return out;
}

LaurentPoly LaurentPoly::pow(unsigned k) const {
    LaurentPoly result = constant(vars_, Scalar(1));
    LaurentPoly base = *this;
    while (k > 0) {
        if (k & 1U) result *= base;
        k >>= 1U;
        if (k > 0) base *= base;
    }
    return result;
}

LaurentPoly LaurentPoly::conj_coeffs() const {
    LaurentPoly out(vars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.conj());
    return out;
}

Scalar LaurentPoly::eval(std::span<const Scalar> point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("point dimension mismatch");
    Scalar total(0);
    for (const auto& [e, c] : terms_) {
        Scalar term = c;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (point[k].is_zero()) {
                if (e[k] < 0) throw std::domain_error("evaluation at a pole of " + vars_[k]);
                term = Scalar(0);
                break;
            }
            term *= point[k].pow(e[k]);
        }
        total += term;
    }
    return total;
}

std::complex<double> LaurentPoly::eval(std::span<const std::complex<double>> point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("point dimension mismatch");
    std::complex<double> total = 0.0;
    for (const auto& [e, c] : terms_) {
        std::complex<double> term = c.to_complex();
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (e[k] < 0 && point[k] == 0.0) throw std::domain_error("evaluation at a pole of " + vars_[k]);
            std::complex<double> base = point[k];
            for (std::int64_t j = 0; j < std::abs(e[k]); ++j) term *= (e[k] > 0 ? base : 1.0 / base);
        }
        total += term;
    }
    return total;
}

LaurentPoly LaurentPoly::substitute(const std::vector<LaurentPoly>& images) const {
    if (images.size() != vars_.size()) throw std::invalid_argument("substitution arity mismatch");
    if (images.empty()) return *this;
    const VarList& target = images.front().vars();
    for (const auto& im : images)
        if (im.vars() != target) throw std::invalid_argument("substitution images disagree on variables");

    // Cache powers per variable as they are requested.
    std::vector<std::map<std::int64_t, LaurentPoly>> cache(vars_.size());
    auto power = [&](std::size_t k, std::int64_t e) -> const LaurentPoly& {
        auto it = cache[k].find(e);
        if (it != cache[k].end()) return it->second;
        LaurentPoly value;
        if (e >= 0) {
            value = images[k].pow(static_cast<unsigned>(e));
        } else {
            if (!images[k].is_monomial())
                throw std::domain_error("negative power of a non-monomial substitution for " + vars_[k]);
            const auto& [me, mc] = *images[k].terms().begin();
            Exponent inv(me.size());
            for (std::size_t j = 0; j < me.size(); ++j) inv[j] = checked_mul(-me[j], -e);
            value = monomial(target, std::move(inv), (Scalar(1) / mc).pow(-e));
        }
        return cache[k].emplace(e, std::move(value)).first->second;
    };

    LaurentPoly out(target);
    for (const auto& [e, c] : terms_) {
        LaurentPoly term = constant(target, c);
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k] != 0) term *= power(k, e[k]);
        out += term;
    }
    return out;
}

LaurentPoly LaurentPoly::renamed(VarList vars) const {
    if (vars.size() != vars_.size()) throw std::invalid_argument("rename arity mismatch");
    LaurentPoly out(std::move(vars));
    out.terms_ = terms_;
    return out;
}

LaurentPoly LaurentPoly::restrict_zero(const std::vector<bool>& zero) const {
    if (zero.size() != vars_.size()) throw std::invalid_argument("restriction arity mismatch");
    LaurentPoly out(vars_);
    for (const auto& [e, c] : terms_) {
        bool vanishes = false;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (!zero[k]) continue;
            if (e[k] < 0) throw std::domain_error("restriction through a pole of " + vars_[k]);
            if (e[k] > 0) vanishes = true;
        }
        if (!vanishes) out.terms_.emplace(e, c);
    }
    return out;
}

namespace {

std::string coefficient_text(const Scalar& c) {
    if (c.is_real()) return c.str();
    return "(" + c.str() + ")";
}

std::string monomial_text(const VarList& vars, const Exponent& e) {
    std::string out;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) continue;
        if (!out.empty()) out += "*";
        out += vars[k];
        if (e[k] != 1) out += "^" + std::to_string(e[k]);
    }
    return out;
}

}  // namespace

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        const std::string mono = monomial_text(vars_, e);
        std::string piece;
        if (mono.empty()) {
            piece = coefficient_text(c);
        } else if (c.is_one()) {
            piece = mono;
        } else if (c == Scalar(-1)) {
            piece = "-" + mono;
        } else {
            piece = coefficient_text(c) + "*" + mono;
        }
        if (out.empty()) {
            out = piece;
        } else if (piece.front() == '-') {
            out += " - " + piece.substr(1);
        } else {
            out += " + " + piece;
        }
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

LaurentPoly monomial_divide(const LaurentPoly& p, const Exponent& m) {
    Exponent neg(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) neg[k] = -m[k];
    return monomial_multiply(p, neg);
}

LaurentPoly monomial_multiply(const LaurentPoly& p, const Exponent& m) {
    if (m.size() != p.nvars()) throw std::invalid_argument("monomial arity mismatch");
    LaurentPoly out(p.vars());
    for (const auto& [e, c] : p.terms()) out.add_term(exponent_add(e, m), c);
    return out;
}

std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.vars() != b.vars()) throw std::invalid_argument("variable-list mismatch");
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    if (a.is_zero()) return LaurentPoly(a.vars());
    // Shift both into the polynomial ring; b's shift leaves it coprime to
    // every variable, so Laurent divisibility equals polynomial divisibility.
    const Exponent ma = a.min_exponents();
    const Exponent mb = b.min_exponents();
    LaurentPoly rem = monomial_divide(a, ma);
    const LaurentPoly div = monomial_divide(b, mb);
    const auto& [lead_e, lead_c] = div.leading();
    LaurentPoly quot(a.vars());
    while (!rem.is_zero()) {
        const auto [re, rc] = rem.leading();
        if (!dominates(re, lead_e)) return std::nullopt;
        const LaurentPoly step = LaurentPoly::monomial(a.vars(), exponent_sub(re, lead_e), rc / lead_c);
        quot += step;
        rem -= step * div;
    }
    return monomial_multiply(quot, exponent_sub(ma, mb));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    Parser(std::string_view text, const VarList& vars) : text_(text), vars_(vars) {}

    LaurentPoly parse_all() {
        LaurentPoly p = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        return p;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    LaurentPoly expr() {
        LaurentPoly acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    LaurentPoly term() {
        LaurentPoly acc = unary();
        while (accept('*')) acc *= unary();
        return acc;
    }

    LaurentPoly unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    LaurentPoly power() {
        LaurentPoly base = atom();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            const mpz_class e = integer_literal();
            if (!e.fits_uint_p() || e > 100000) throw ParseError("exponent too large", start);
            base = base.pow(static_cast<unsigned>(e.get_ui()));
        }
        return base;
    }

    mpz_class integer_literal() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected a nonnegative integer literal", start);
        return mpz_class(std::string(text_.substr(start, pos_ - start)));
    }

    LaurentPoly atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            LaurentPoly inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = integer_literal();
            mpz_class den = 1;
            if (accept('/')) {
                const std::size_t at = pos_;
                den = integer_literal();
                if (den == 0) throw ParseError("zero denominator", at);
            }
            mpq_class q(num, den);
            q.canonicalize();
            return LaurentPoly::constant(vars_, Scalar(q));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            if (name == "i") return LaurentPoly::constant(vars_, Scalar::imaginary_unit());
            auto it = std::find(vars_.begin(), vars_.end(), name);
            if (it == vars_.end()) throw ParseError("unknown variable '" + name + "'", start);
            return LaurentPoly::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    std::string_view text_;
    const VarList& vars_;
    std::size_t pos_ = 0;
};

std::vector<std::string_view> split_top_level(std::string_view text) {
    std::vector<std::string_view> pieces;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (text[k] == '(') ++depth;
        if (text[k] == ')') --depth;
        if (text[k] == ',' && depth == 0) {
            pieces.push_back(text.substr(start, k - start));
            start = k + 1;
        }
    }
    pieces.push_back(text.substr(start));
    return pieces;
}

}  // namespace

LaurentPoly parse_poly(std::string_view text, const VarList& vars) {
    for (const auto& v : vars)
        if (v == "i") throw std::invalid_argument("'i' is reserved for the imaginary unit");
    return Parser(text, vars).parse_all();
}

std::vector<LaurentPoly> parse_poly_list(std::string_view text, const VarList& vars) {
    std::vector<LaurentPoly> out;
    for (auto piece : split_top_level(text)) out.push_back(parse_poly(piece, vars));
    return out;
}

VarList parse_var_list(std::string_view text) {
    VarList vars;
    std::set<std::string> seen;
    for (auto piece : split_top_level(text)) {
        std::string name;
        for (char c : piece)
            if (!std::isspace(static_cast<unsigned char>(c))) name += c;
        if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
            throw std::invalid_argument("bad variable name '" + name + "'");
        for (char c : name)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
                throw std::invalid_argument("bad variable name '" + name + "'");
        if (name == "i") throw std::invalid_argument("'i' is reserved for the imaginary unit");
        if (!seen.insert(name).second) throw std::invalid_argument("duplicate variable '" + name + "'");
        vars.push_back(name);
    }
    return vars;
}

// ---------------------------------------------------------------------------
// MonomialIdeal

MonomialIdeal::MonomialIdeal(VarList vars, std::vector<Exponent> gens) : vars_(std::move(vars)) {
    for (const auto& g : gens) {
        if (g.size() != vars_.size()) throw std::invalid_argument("generator arity mismatch");
        for (auto v : g)
            if (v < 0) throw std::invalid_argument("monomial ideal generators need nonnegative exponents");
    }
    // Keep input order among survivors; drop duplicates and non-minimal ones.
    for (std::size_t a = 0; a < gens.size(); ++a) {
        bool redundant = false;
        for (std::size_t b = 0; b < gens.size() && !redundant; ++b) {
            if (a == b) continue;
            if (gens[a] == gens[b]) {
                redundant = b < a;
            } else if (dominates(gens[a], gens[b])) {
                redundant = true;
            }
        }
        if (!redundant) gens_.push_back(gens[a]);
    }
}

MonomialIdeal MonomialIdeal::parse(std::string_view text, const VarList& vars) {
    std::vector<Exponent> gens;
    for (const auto& p : parse_poly_list(text, vars)) {
        if (!p.is_monomial() || !p.is_polynomial())
            throw std::invalid_argument("ideal generator '" + p.str() + "' is not a monomial");
        gens.push_back(p.terms().begin()->first);
    }
    return MonomialIdeal(vars, std::move(gens));
}

bool MonomialIdeal::contains_monomial(const Exponent& e) const {
    return std::any_of(gens_.begin(), gens_.end(), [&](const Exponent& g) { return dominates(e, g); });
}

std::vector<LaurentPoly> MonomialIdeal::generator_polys() const {
    std::vector<LaurentPoly> out;
    for (const auto& g : gens_) out.push_back(LaurentPoly::monomial(vars_, g));
    return out;
}

std::string MonomialIdeal::str() const {
    std::string out;
    for (const auto& p : generator_polys()) {
        if (!out.empty()) out += ",";
        out += p.str();
    }
    return out;
}

}  // namespace ccclose
