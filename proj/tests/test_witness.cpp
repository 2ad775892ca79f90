#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccclose/witness.hpp"

using namespace ccclose;

namespace {

const VarList xy{"x", "y"};

LaurentPoly P(const std::string& text) { return parse_poly(text, xy); }

/// phi_1 = conj(x) y^2/(|x|^2+|y|^2), phi_2 = conj(y) x^2/(|x|^2+|y|^2).
Witness displayed_witness() {
    const Expr s = Expr::abs_sq(Expr::poly(P("x"))) + Expr::abs_sq(Expr::poly(P("y")));
    std::vector<Expr> phi{Expr::conj(Expr::poly(P("x"))) * Expr::poly(P("y^2")) / s,
                          Expr::conj(Expr::poly(P("y"))) * Expr::poly(P("x^2")) / s};
    return make_witness(xy, {P("x^3"), P("y^3")}, P("x^2*y^2"), std::move(phi), "custom");
}

}  // namespace

TEST_CASE("displayed witness satisfies the identity and stays continuous") {
    const Witness w = displayed_witness();
    CHECK(w.identity_holds());
    CHECK(w.identity_cleared.num.is_zero());
    const Report r = validate_witness(w);
    CHECK(r.residual_max <= 1e-10);
    CHECK(r.envelope_pass);
    CHECK(r.pass);
    REQUIRE(r.envelopes.size() == 6);
    CHECK(r.envelopes.back() < 1e-5);
}

TEST_CASE("canonical witness for x^2y^2 in (x^3,y^3)") {
    const MonomialIdeal ideal = MonomialIdeal::parse("x^3, y^3", xy);
    const Witness w = canonical_witness(ideal, P("x^2*y^2"));
    CHECK(w.kind == "canonical");
    CHECK(w.identity_holds());
    const Report r = validate_witness(w);
    CHECK(r.pass);
    // |phi| behaves like the radius
    CHECK(r.envelopes[5] < r.envelopes[0] * 1e-3);
}

TEST_CASE("canonical witness for xy^2 is bounded but not continuous") {
    const MonomialIdeal ideal = MonomialIdeal::parse("x^3, y^3", xy);
    const Witness w = canonical_witness(ideal, P("x*y^2"));
    CHECK(w.identity_holds());
    const Report r = validate_witness(w);
    CHECK(r.residual_pass);
    CHECK_FALSE(r.envelope_pass);
    CHECK_FALSE(r.pass);
    CHECK(r.envelopes.back() > 0.1);
}

TEST_CASE("zero candidate and algebraic witnesses") {
    const MonomialIdeal ideal = MonomialIdeal::parse("x^3, y^3", xy);
    const Witness zero = canonical_witness(ideal, LaurentPoly(xy));
    const Report rz = validate_witness(zero);
    CHECK(rz.pass);
    for (double e : rz.envelopes) CHECK(e == 0.0);

    const Witness alg = algebraic_witness(xy, ideal.generator_polys(), P("x^4 + 2*y^3*x"), {P("x"), P("2*x")});
    CHECK(alg.identity_holds());
    CHECK(validate_witness(alg).pass);

    const Witness wrong = algebraic_witness(xy, ideal.generator_polys(), P("x^4"), {P("x"), P("1")});
    CHECK_FALSE(wrong.identity_holds());
    CHECK_FALSE(validate_witness(wrong).pass);
}

TEST_CASE("interpolated witness recentres on the polynomial part") {
    // g = x^3 + x^2y^2 with c = (1, 0): the remainder x^2y^2 has a continuous quotient
    const std::vector<LaurentPoly> gens{P("x^3"), P("y^3")};
    const Witness w = interpolated_witness(xy, gens, P("x^3 + x^2*y^2"), {P("1"), P("0")});
    CHECK(w.kind == "interpolated");
    CHECK(w.identity_holds());
    const Report r = validate_witness(w);
    CHECK(r.pass);
    // the canonical witness of the same g tends to nothing at the origin
    CHECK_FALSE(validate_witness(canonical_witness(xy, gens, P("x^3 + x^2*y^2"))).pass);
}

TEST_CASE("symbolic clearing in the conjugate-extended ring") {
    const Expr e = Expr::abs_sq(Expr::poly(P("x + i*y")));
    const ClearedForm c = clear_denominators(e, xy);
    const VarList ext = conjugate_extended(xy);
    CHECK(ext.size() == 4);
    CHECK(c.num == parse_poly("x*a + y*b - i*x*b + i*y*a", {"x", "y", "a", "b"}).renamed(ext));
    CHECK(c.den.is_constant());
    CHECK_THROWS(clear_denominators(Expr::poly(P("1")) / Expr::poly(LaurentPoly(xy)), xy));
}

TEST_CASE("validation is deterministic in the seed") {
    const MonomialIdeal ideal = MonomialIdeal::parse("x^3, y^3", xy);
    const Witness w = canonical_witness(ideal, P("x^2*y^2 + x*y^3"));
    ValidationConfig cfg;
    cfg.seed = 17;
    const Report a = validate_witness(w, cfg);
    const Report b = validate_witness(w, cfg);
    CHECK(a.residual_max == b.residual_max);
    CHECK(a.envelopes == b.envelopes);
    CHECK(a.seed == 17);
    cfg.seed = 18;
    CHECK(validate_witness(w, cfg).envelopes != a.envelopes);
}

TEST_CASE("witness errors") {
    CHECK_THROWS_AS(canonical_witness(xy, {}, P("x")), std::invalid_argument);
    CHECK_THROWS_AS(algebraic_witness(xy, {P("x")}, P("x"), {}), std::invalid_argument);
}
