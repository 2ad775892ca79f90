#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccclose/closure.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace ccclose;

namespace {

const VarList xy{"x", "y"};
const VarList xyz{"x", "y", "z"};

LaurentPoly P(const std::string& text, const VarList& vars = xy) { return parse_poly(text, vars); }
MonomialIdeal I(const std::string& text, const VarList& vars = xy) { return MonomialIdeal::parse(text, vars); }

VerdictStatus status(const MonomialIdeal& ideal, const LaurentPoly& g, std::uint64_t seed = 0) {
    DecideOptions o;
    o.seed = seed;
    o.validate = false;
    return decide_membership(ideal, g, o).status;
}

}  // namespace

TEST_CASE("x^2y^2 is in the closure of (x^3,y^3)") {
    const Verdict v = decide_membership(I("x^3, y^3"), P("x^2*y^2"));
    CHECK(v.status == VerdictStatus::InClosure);
    REQUIRE(v.witness);
    CHECK(v.witness->identity_holds());
    REQUIRE(v.report);
    CHECK(v.report->pass);
    CHECK(verify_verdict(I("x^3, y^3"), P("x^2*y^2"), v));
}

TEST_CASE("xy^2 and x^2y are refuted with det -22") {
    for (const char* g : {"x*y^2", "x^2*y"}) {
        const Verdict v = decide_membership(I("x^3, y^3"), P(g));
        CHECK(v.status == VerdictStatus::NotInClosure);
        REQUIRE(v.obstruction);
        CHECK(v.obstruction->certificate.det == Scalar(-22));
        std::string why;
        CHECK_MESSAGE(verify_verdict(I("x^3, y^3"), P(g), v, &why), why);
    }
}

TEST_CASE("x^3 + x^2y^2: the lifted part goes into the shift") {
    const Verdict v = decide_membership(I("x^3, y^3"), P("x^3 + x^2*y^2"));
    CHECK(v.status == VerdictStatus::InClosure);
    REQUIRE(v.witness);
    CHECK(v.witness->kind == "interpolated");
    CHECK(v.witness->poly_part[0] == P("1"));
    CHECK(v.witness->poly_part[1].is_zero());
    const Verdict w = decide_membership(I("x^3, y^3"), P("x^3 + 5*x^2*y + x^2*y^2"));
    CHECK(w.status == VerdictStatus::NotInClosure);
    CHECK(verify_verdict(I("x^3, y^3"), P("x^3 + 5*x^2*y + x^2*y^2"), w));
}

TEST_CASE("interpolation with a nonzero constant") {
    // g = x^2y^2 + 2x^3 + y^4: on the exceptional line g = 2 f_1 + (x^2y^2 + y^4)
    const Verdict v = decide_membership(I("x^3, y^3"), P("x^2*y^2 + 2*x^3 + 3*y^4 + x*y^3"));
    CHECK(v.status == VerdictStatus::InClosure);
    CHECK(verify_verdict(I("x^3, y^3"), P("x^2*y^2 + 2*x^3 + 3*y^4 + x*y^3"), v));
    // x^3 + y^3 - x^2y is not: the degree-three part leaves t on the line
    const LaurentPoly bad = P("x^3 + y^3 - x^2*y");
    CHECK(status(I("x^3, y^3"), bad) == VerdictStatus::NotInClosure);
}

TEST_CASE("low order candidates carry a valuation certificate") {
    const Verdict v = decide_membership(I("x^3, y^3"), P("x*y"));
    CHECK(v.status == VerdictStatus::NotInClosure);
    REQUIRE(v.valuation);
    CHECK(v.valuation->g_order < v.valuation->ideal_order);
    CHECK(verify_verdict(I("x^3, y^3"), P("x*y"), v));
    ValuationCertificate bad = *v.valuation;
    bad.g_order = bad.ideal_order;
    CHECK_FALSE(verify_valuation(I("x^3, y^3").gens(), P("x*y"), bad));
}

TEST_CASE("xy is not in the closure of (x^2,y^2)") {
    const Verdict v = decide_membership(I("x^2, y^2"), P("x*y"));
    CHECK(v.status == VerdictStatus::NotInClosure);
    CHECK(verify_verdict(I("x^2, y^2"), P("x*y"), v));
    const auto mons = closure_monomials(I("x^2, y^2"), 3);
    CHECK(std::find(mons.begin(), mons.end(), Exponent{1, 1}) == mons.end());
    CHECK(std::find(mons.begin(), mons.end(), Exponent{2, 1}) != mons.end());
    CHECK(std::find(mons.begin(), mons.end(), Exponent{1, 2}) != mons.end());
}

TEST_CASE("closure monomials of (x^3,y^3)") {
    const auto mons = closure_monomials(I("x^3, y^3"), 6);
    for (const auto& e : mons) CHECK((e[0] >= 3 || e[1] >= 3 || e[0] + e[1] >= 4));
    CHECK(std::is_sorted(mons.begin(), mons.end(), GrlexLess{}));
    CHECK(mons.front() == Exponent{0, 3});
    CHECK_THROWS_AS(closure_monomials(I("x^3, y^3"), 13), std::invalid_argument);
}

TEST_CASE("verifier rejects tampered verdicts") {
    const Verdict v = decide_membership(I("x^3, y^3"), P("x*y^2"));
    Verdict t = v;
    t.obstruction->shift[0] = P("1");
    CHECK_FALSE(verify_verdict(I("x^3, y^3"), P("x*y^2"), t));
    t = v;
    t.obstruction->certificate.det = Scalar(22);
    CHECK_FALSE(verify_verdict(I("x^3, y^3"), P("x*y^2"), t));
    CHECK_FALSE(verify_verdict(I("x^3, y^3"), P("x^2*y^2"), v));

    Verdict in = decide_membership(I("x^3, y^3"), P("x^2*y^2"));
    CHECK_FALSE(verify_verdict(I("x^3, y^3"), P("x*y^2"), in));
    Verdict u;
    CHECK_FALSE(verify_verdict(I("x^3, y^3"), P("x^2*y^2"), u));
}

TEST_CASE("input errors") {
    CHECK_THROWS_AS(decide_membership(I("x^3, y^3"), monomial_divide(P("y^4"), {1, 0})), std::invalid_argument);
    CHECK_THROWS_AS(decide_membership(I("x^3, y^3"), P("x", {"x", "z"})), std::invalid_argument);
    const VarList four{"a", "b", "c", "d"};
    CHECK_THROWS_AS(decide_membership(MonomialIdeal::parse("a, b", four), parse_poly("a", four)),
                    std::invalid_argument);
}

TEST_CASE("I is contained in its closure") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const MonomialIdeal ideal = I("x^3, y^2*x, y^4");
        LaurentPoly g(xy);
        for (const auto& a : ideal.gens()) g += testing::random_poly(rng, xy, 2, 0, 2, true) * LaurentPoly::monomial(xy, a);
        CHECK(status(ideal, g) == VerdictStatus::InClosure);
    }
}

TEST_CASE("ideal property on (x^3,y^3) and (x^2,y^2)") {
    std::mt19937_64 rng(11);
    for (const char* text : {"x^3, y^3", "x^2, y^2"}) {
        const MonomialIdeal ideal = I(text);
        const auto mons = closure_monomials(ideal, 5);
        for (int trial = 0; trial < 10; ++trial) {
            const Exponent a = mons[rng() % mons.size()];
            const Exponent b = mons[rng() % mons.size()];
            const LaurentPoly sum = LaurentPoly::monomial(xy, a, testing::random_scalar(rng, true) + Scalar(7)) +
                                    LaurentPoly::monomial(xy, b, Scalar(2));
            CHECK(status(ideal, sum) == VerdictStatus::InClosure);
            const LaurentPoly prod = testing::random_poly(rng, xy, 3, 0, 2, true) * LaurentPoly::monomial(xy, a);
            CHECK(status(ideal, prod) == VerdictStatus::InClosure);
        }
    }
}

TEST_CASE("invariance under permutation and scaling") {
    std::mt19937_64 rng(23);
    const MonomialIdeal ideal = I("x^3, y^2");
    const MonomialIdeal swapped = I("y^3, x^2");
    for (int trial = 0; trial < 25; ++trial) {
        const LaurentPoly g = testing::random_poly(rng, xy, 3, 0, 4, true);
        const VerdictStatus base = status(ideal, g);
        const LaurentPoly gs = g.substitute({P("y"), P("x")});
        CHECK(status(swapped, gs) == base);
        const Scalar l1 = testing::random_scalar(rng, true) + Scalar(9);
        const Scalar l2 = Scalar(2) + Scalar::imaginary_unit();
        const LaurentPoly scaled = g.substitute({LaurentPoly::monomial(xy, {1, 0}, l1), LaurentPoly::monomial(xy, {0, 1}, l2)});
        CHECK(status(ideal, scaled) == base);
    }
}

TEST_CASE("duplicated generators leave verdicts unchanged") {
    const std::vector<Exponent> gens{{3, 0}, {0, 3}, {3, 0}};
    for (const char* g : {"x^2*y^2", "x*y^2", "x^3 + x^2*y^2", "x*y", "x^2*y^2 + 2*x^3 + 3*y^4 + x*y^3"}) {
        const Verdict v = decide_membership(xy, gens, P(g));
        CHECK(v.status == status(I("x^3, y^3"), P(g)));
        std::string why;
        CHECK_MESSAGE(verify_verdict(xy, gens, P(g), v, &why), why);
    }
}

TEST_CASE("monotonicity in the ideal") {
    const MonomialIdeal small = I("x^4, y^4");
    const MonomialIdeal big = I("x^3, y^3");
    for (const auto& e : closure_monomials(small, 6))
        CHECK(status(big, LaurentPoly::monomial(xy, e)) == VerdictStatus::InClosure);
}

TEST_CASE("three variables: m-primary and non-isolated") {
    const MonomialIdeal cube = I("x^2, y^2, z^2", xyz);
    CHECK(status(cube, P("x*y*z", xyz)) == VerdictStatus::InClosure);
    CHECK(status(cube, P("x*y", xyz)) == VerdictStatus::NotInClosure);
    const MonomialIdeal line = I("x^2, y^2", xyz);
    CHECK(status(line, P("x*y*z", xyz)) == VerdictStatus::NotInClosure);
    CHECK(status(line, P("x^2*y*z + y^2*z^5", xyz)) == VerdictStatus::InClosure);
}

TEST_CASE("relative membership") {
    RelativeProblem rp{I("x^3, y^3"), ClosedSubset::orbit_closure({true, true}), true};
    CHECK(relative_membership(rp, LaurentPoly(xy)).status == VerdictStatus::InClosure);
    CHECK(relative_membership(rp, P("x^2*y^2")).status == VerdictStatus::InClosure);
    CHECK_THROWS_AS(relative_membership(rp, P("x*y^2")), std::invalid_argument);
    rp.vanishing = false;
    CHECK_THROWS_AS(relative_membership(rp, P("x^2*y^2")), std::invalid_argument);
}

TEST_CASE("finite-determinacy scion") {
    const DescentProblem d = from_ideal(I("x^3, y^3"));
    const DescentProblem s = build_fd_scion(d);
    CHECK(s.patches.size() == 8);
    CHECK(fd_scion_certified(d));
    for (const auto& p : s.patches) CHECK(p.f.size() == 2);
    const DescentProblem line = from_ideal(I("x", VarList{"x"}));
    CHECK(build_fd_scion(line).patches.size() == line.patches.size());
    CHECK_FALSE(fd_scion_certified(from_ideal(I("x^2, y^2, x*y*z", xyz))));
}

TEST_CASE("Hochster ideal: decisive verdicts re-verify") {
    const MonomialIdeal h = I("x^2, y^2, x*y*z", xyz);
    for (const char* g : {"x*y", "x*y*z^2", "x^2*z", "x*y^2", "z^3", "x*z^2"}) {
        const LaurentPoly p = P(g, xyz);
        const Verdict v = decide_membership(h, p);
        INFO(g << " -> " << to_string(v.status) << " " << v.explanation);
        if (v.status != VerdictStatus::Undetermined) CHECK(verify_verdict(h, p, v));
    }
}
