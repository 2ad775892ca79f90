#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccclose/poly.hpp"
#include "test_support.hpp"

using namespace ccclose;

namespace {

const VarList xy{"x", "y"};

LaurentPoly P(const char* text, const VarList& vars = xy) { return parse_poly(text, vars); }

}  // namespace

TEST_CASE("parse reads terms directly") {
    const LaurentPoly p = P("x^3 + y^3");
    CHECK(p.size() == 2);
    CHECK(p.coeff({3, 0}) == Scalar(1));
    CHECK(p.coeff({0, 3}) == Scalar(1));
    CHECK(P("0").is_zero());
}

TEST_CASE("parse expands products and powers") {
    // (x+y)^2 - x^2 - y^2 expanded by hand is 2xy.
    const LaurentPoly p = P("(x+y)^2 - x^2 - y^2");
    CHECK(p == LaurentPoly::monomial(xy, {1, 1}, Scalar(2)));
    CHECK(P("3/6*x") == LaurentPoly::monomial(xy, {1, 0}, Scalar::rational(1, 2)));
    CHECK(P("-x^2") == LaurentPoly::monomial(xy, {2, 0}, Scalar(-1)));
    CHECK(P("(1+2*i)*y").coeff({0, 1}) == Scalar(mpq_class(1), mpq_class(2)));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(P("x + z"), ParseError);
    try {
        P("x + z");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(P("x^-1"), ParseError);
    CHECK_THROWS_AS(P("x +"), ParseError);
    CHECK_THROWS_AS(P("(x"), ParseError);
    CHECK_THROWS_AS(P("x ** y"), ParseError);
    CHECK_THROWS_AS(P("1/0"), ParseError);
    CHECK_THROWS(parse_var_list("x,i"));
    CHECK_THROWS(parse_var_list("x,x"));
}

TEST_CASE("arith examples") {
    CHECK((P("x") + P("-x")).is_zero());
    CHECK(P("x") * P("y") == P("x*y"));
    // Schoolbook expansion of (x+y)(x-y).
    CHECK(P("x+y") * P("x-y") == P("x^2 - y^2"));
    CHECK_THROWS_AS(P("x") + parse_poly("x", {"x"}), std::invalid_argument);
}

TEST_CASE("monomial_divide") {
    CHECK(monomial_divide(P("x^3*y^2"), {3, 0}) == P("y^2"));
    const LaurentPoly q = monomial_divide(P("x^3 + x^2*y"), {3, 0});
    CHECK(q.coeff({0, 0}) == Scalar(1));
    CHECK(q.coeff({-1, 1}) == Scalar(1));
    CHECK(q.size() == 2);
    CHECK(monomial_divide(P("0"), {1, 1}).is_zero());
    CHECK(monomial_multiply(q, {3, 0}) == P("x^3 + x^2*y"));
}

TEST_CASE("eval") {
    const std::vector<Scalar> one{Scalar(1), Scalar(1)};
    CHECK(P("x^2*y^2").eval(one) == Scalar(1));
    const VarList t{"t"};
    const std::vector<Scalar> two{Scalar(2)};
    CHECK(parse_poly("1 + t^3", t).eval(two) == Scalar(9));
    const LaurentPoly inv = LaurentPoly::monomial(t, {-1});
    const std::vector<Scalar> zero{Scalar(0)};
    CHECK_THROWS_AS(inv.eval(zero), std::domain_error);
}

TEST_CASE("printing") {
    CHECK(P("x^2*y - 3*y + 1/2").str() == "x^2*y - 3*y + 1/2");
    CHECK(P("(2*i)*x - i").str() == "(2*i)*x + (-i)");
    CHECK(P("0").str() == "0");
}

TEST_CASE("exact division in the Laurent ring") {
    const LaurentPoly a = P("x^2 - y^2");
    auto q = exact_divide(a, P("x - y"));
    REQUIRE(q);
    CHECK(*q == P("x + y"));
    CHECK_FALSE(exact_divide(P("x^2 + y^2"), P("x - y")));
    const LaurentPoly shifted = monomial_divide(a, {3, 1});
    auto q2 = exact_divide(shifted, P("x + y"));
    REQUIRE(q2);
    CHECK(*q2 * P("x + y") == shifted);
}

TEST_CASE("monomial ideal keeps the minimal generators") {
    const MonomialIdeal I = MonomialIdeal::parse("x^3, x^3*y, y^3, x^3", xy);
    CHECK(I.gens() == std::vector<Exponent>{{3, 0}, {0, 3}});
    CHECK(I.contains_monomial({4, 1}));
    CHECK_FALSE(I.contains_monomial({2, 2}));
    CHECK_THROWS(MonomialIdeal::parse("x + y", xy));
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937_64 rng(20240611);
    const VarList v{"x", "y", "z"};
    for (int trial = 0; trial < 1000; ++trial) {
        const bool complex = trial % 3 == 0;
        const auto a = testing::random_poly(rng, v, 4, -2, 3, complex);
        const auto b = testing::random_poly(rng, v, 4, -2, 3, complex);
        const auto c = testing::random_poly(rng, v, 4, -2, 3, complex);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE(a * b == b * a);
        REQUIRE(a + b == b + a);
        REQUIRE((a - a).is_zero());
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    std::mt19937_64 rng(7);
    const VarList v{"x", "y"};
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = testing::random_poly(rng, v, 4, -2, 3, true);
        const auto b = testing::random_poly(rng, v, 4, -2, 3, true);
        std::vector<Scalar> pt;
        for (int k = 0; k < 2; ++k) {
            Scalar s(0);
            while (s.is_zero()) s = testing::random_scalar(rng, true);
            pt.push_back(s);
        }
        REQUIRE((a * b).eval(pt) == a.eval(pt) * b.eval(pt));
        REQUIRE((a + b).eval(pt) == a.eval(pt) + b.eval(pt));
    }
}

TEST_CASE("parse after print is the identity on polynomials") {
    std::mt19937_64 rng(99);
    const VarList v{"x", "y", "z"};
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = testing::random_poly(rng, v, 5, 0, 4, trial % 2 == 0);
        REQUIRE(parse_poly(p.str(), v) == p);
    }
}
