#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccclose/linalg.hpp"
#include "ccclose/newton.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace ccclose;

namespace {

const VarList xy{"x", "y"};
const VarList xyz{"x", "y", "z"};

const Chart* chart_with_map(const ChartAtlas& atlas, const std::vector<std::string>& images) {
    for (const auto& c : atlas.charts) {
        bool match = true;
        for (std::size_t j = 0; j < images.size(); ++j)
            if (c.map_to_x[j] != parse_poly(images[j], c.coords)) match = false;
        if (match) return &c;
    }
    return nullptr;
}

std::vector<std::vector<Exponent>> ideals_under_test() {
    return {
        {{3, 0}, {0, 3}},
        {{2, 0}, {0, 2}},
        {{5, 0}, {2, 1}, {0, 4}},
        {{4, 0}, {1, 1}, {0, 3}},
        {{3, 1}, {0, 2}},
        {{2, 0, 0}, {0, 2, 0}, {1, 1, 1}},
        {{3, 0, 0}, {0, 2, 0}, {0, 0, 5}},
        {{2, 1, 0}, {0, 1, 3}, {1, 0, 2}, {0, 3, 0}},
    };
}

VarList vars_for(std::size_t n) { return n == 2 ? xy : xyz; }

}  // namespace

TEST_CASE("Newton polyhedron vertices") {
    CHECK(newton_polyhedron(MonomialIdeal::parse("x^3,y^3", xy)).vertices == std::vector<Exponent>{{3, 0}, {0, 3}});
    CHECK(newton_polyhedron(MonomialIdeal::parse("x", {"x"})).vertices == std::vector<Exponent>{{1}});
    // x*y*z dominates the midpoint of x^2 and y^2.
    CHECK(newton_polyhedron(MonomialIdeal::parse("x^2,y^2,x*y*z", xyz)).vertices ==
          std::vector<Exponent>{{2, 0, 0}, {0, 2, 0}});
    // x*y lies on the segment between x^2 and y^2.
    CHECK(newton_polyhedron(MonomialIdeal::parse("x^2,x*y,y^2", xy)).vertices == std::vector<Exponent>{{2, 0}, {0, 2}});
    CHECK_THROWS(newton_polyhedron(MonomialIdeal(xy, {})));
    CHECK_THROWS(newton_polyhedron(4, {{1, 1, 1, 1}}));
}

TEST_CASE("normal fan examples") {
    const Fan f = normal_fan(newton_polyhedron(MonomialIdeal::parse("x^3,y^3", xy)));
    CHECK(f.rays == std::vector<Exponent>{{1, 0}, {1, 1}, {0, 1}});
    CHECK(f.max_cones.size() == 2);
    const Fan f2 = normal_fan(newton_polyhedron(MonomialIdeal::parse("x^2,y^2", xy)));
    CHECK(f2.rays == std::vector<Exponent>{{1, 0}, {1, 1}, {0, 1}});
    const Fan f1 = normal_fan(newton_polyhedron(MonomialIdeal::parse("x", {"x"})));
    CHECK(f1.rays == std::vector<Exponent>{{1}});
    CHECK(f1.max_cones.size() == 1);
}

TEST_CASE("blow-up charts of (x^3, y^3)") {
    const ChartAtlas atlas = blowup_charts(MonomialIdeal::parse("x^3,y^3", xy));
    REQUIRE(atlas.charts.size() == 2);
    const Chart* c1 = chart_with_map(atlas, {"u1", "u1*u2"});
    REQUIRE(c1);
    CHECK(c1->e_generator == Exponent{3, 0});
    CHECK(c1->e_pullback == Exponent{3, 0});
    CHECK(c1->f_tilde[0] == parse_poly("1", c1->coords));
    CHECK(c1->f_tilde[1] == parse_poly("u2^3", c1->coords));
    const Chart* c2 = chart_with_map(atlas, {"u1*u2", "u2"});
    REQUIRE(c2);
    CHECK(c2->f_tilde[0] == parse_poly("u1^3", c2->coords));
    CHECK(c2->f_tilde[1] == parse_poly("1", c2->coords));
    // x^2 y^2 pulls back to u1^4 u2^2 / u1^3.
    CHECK(c1->pullback(parse_poly("x^2*y^2", xy)) == parse_poly("u1*u2^2", c1->coords));
}

TEST_CASE("principal ideal has the identity chart") {
    const ChartAtlas atlas = blowup_charts(MonomialIdeal::parse("x", {"x"}));
    REQUIRE(atlas.charts.size() == 1);
    CHECK(atlas.charts[0].map_to_x[0] == parse_poly("u1", atlas.charts[0].coords));
    CHECK(atlas.charts[0].f_tilde[0] == parse_poly("1", atlas.charts[0].coords));
}

TEST_CASE("strata of (x^3, y^3) and (x)") {
    const ChartAtlas atlas = blowup_charts(MonomialIdeal::parse("x^3,y^3", xy));
    const auto strata = exceptional_strata(atlas);
    CHECK(strata.size() == 8);
    const std::size_t c1 = static_cast<std::size_t>(chart_with_map(atlas, {"u1", "u1*u2"}) - atlas.charts.data());
    for (const auto& s : strata) {
        if (s.chart != c1) continue;
        // u1 = 0 maps to the origin; u2 = 0 alone maps to the x-axis.
        if (s.zero_set == ZeroSet{true, false} || s.zero_set == ZeroSet{true, true}) {
            CHECK(s.exceptional);
            CHECK(s.image_stratum == ZeroSet{true, true});
        } else {
            CHECK_FALSE(s.exceptional);
        }
    }
    const ChartAtlas line = blowup_charts(MonomialIdeal::parse("x", {"x"}));
    const auto ls = exceptional_strata(line);
    REQUIRE(ls.size() == 2);
    CHECK_FALSE(ls[0].exceptional);
    CHECK(ls[1].exceptional);
}

TEST_CASE("Hochster's ideal has the z-axis as a vanishing orbit") {
    const MonomialIdeal I = MonomialIdeal::parse("x^2,y^2,x*y*z", xyz);
    const auto orbits = vanishing_orbits(I.gens(), 3);
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0] == ZeroSet{true, true, false});
    CHECK(orbit_dimension(orbits[0]) == 1);
    CHECK(orbit_label(xyz, orbits[0]) == "x=y=0");
    const ChartAtlas atlas = blowup_charts(I);
    bool seen = false;
    for (const auto& s : exceptional_strata(atlas))
        if (s.exceptional && s.image_stratum == ZeroSet{true, true, false}) seen = true;
    CHECK(seen);
}

TEST_CASE("fan completeness, unimodularity and face intersections") {
    std::mt19937_64 rng(17);
    for (const auto& gens : ideals_under_test()) {
        const std::size_t n = gens.front().size();
        const Fan fan = normal_fan(newton_polyhedron(n, gens));
        for (const auto& cone : fan.max_cones) {
            IntMatrix m;
            for (auto k : cone) m.push_back(fan.rays[k]);
            REQUIRE(std::llabs(determinant(m)) == 1);
        }
        for (int trial = 0; trial < 1000; ++trial) {
            Exponent w(n);
            for (auto& x : w) x = testing::uniform(rng, 0, 9);
            std::vector<std::size_t> holders;
            for (std::size_t c = 0; c < fan.max_cones.size(); ++c)
                if (fan.cone_contains(c, w)) holders.push_back(c);
            REQUIRE(!holders.empty());
            // A vector in several cones lies on a face they share: it is a
            // combination of their common rays only.
            if (holders.size() > 1) {
                std::vector<std::size_t> common = fan.max_cones[holders[0]];
                for (auto h : holders) {
                    std::vector<std::size_t> next;
                    std::set_intersection(common.begin(), common.end(), fan.max_cones[h].begin(),
                                          fan.max_cones[h].end(), std::back_inserter(next));
                    common = next;
                }
                ScalarMatrix a(n, std::vector<Scalar>(common.size()));
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < common.size(); ++k)
                        a[j][k] = Scalar(static_cast<long>(fan.rays[common[k]][j]));
                std::vector<Scalar> b;
                for (auto x : w) b.emplace_back(static_cast<long>(x));
                if (common.empty()) {
                    REQUIRE(std::all_of(w.begin(), w.end(), [](auto x) { return x == 0; }));
                } else {
                    REQUIRE(solve(a, b).has_value());
                }
            }
        }
    }
}

TEST_CASE("principality and regularity of chart expressions") {
    for (const auto& gens : ideals_under_test()) {
        const std::size_t n = gens.front().size();
        const VarList vars = vars_for(n);
        const ChartAtlas atlas = blowup_charts(vars, gens);
        for (const auto& chart : atlas.charts) {
            bool has_unit = false;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                const LaurentPoly f = LaurentPoly::monomial(vars, gens[i]);
                REQUIRE(chart.f_tilde[i].is_polynomial());
                REQUIRE(monomial_multiply(chart.f_tilde[i], chart.e_pullback) == f.substitute(chart.map_to_x));
                if (chart.f_tilde[i].is_constant()) has_unit = true;
            }
            REQUIRE(has_unit);
        }
        // Every exceptional stratum sees some nonzero f_tilde.
        for (const auto& s : exceptional_strata(atlas)) {
            if (!s.exceptional) continue;
            const auto& chart = atlas.charts[s.chart];
            REQUIRE(std::any_of(chart.f_tilde.begin(), chart.f_tilde.end(),
                                [&](const LaurentPoly& f) { return !f.restrict_zero(s.zero_set).is_zero(); }));
        }
    }
}

TEST_CASE("chart gluing via monomial transitions") {
    // On the overlap torus u_tau = u_sigma^T with T = W_sigma W_tau^{-1};
    // the trivializations differ by the unit x^{a_sigma - a_tau}.
    for (const auto& gens : ideals_under_test()) {
        const std::size_t n = gens.front().size();
        const ChartAtlas atlas = blowup_charts(vars_for(n), gens);
        for (const auto& s : atlas.charts)
            for (const auto& t : atlas.charts) {
                if (&s == &t) continue;
                // Express tau's coordinates through sigma's: solve W_tau^T log u_tau = W_sigma^T log u_sigma.
                ScalarMatrix wt(n, std::vector<Scalar>(n));
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) wt[j][k] = Scalar(static_cast<long>(t.rays[k][j]));
                std::vector<LaurentPoly> images;
                for (std::size_t k = 0; k < n; ++k) {
                    Exponent e(n);
                    for (std::size_t l = 0; l < n; ++l) {
                        std::vector<Scalar> rhs(n);
                        for (std::size_t j = 0; j < n; ++j) rhs[j] = Scalar(static_cast<long>(s.rays[l][j]));
                        auto sol = solve(wt, rhs);
                        REQUIRE(sol);
                        REQUIRE((*sol)[k].re().get_den() == 1);
                        e[l] = (*sol)[k].re().get_num().get_si();
                    }
                    images.push_back(LaurentPoly::monomial(s.coords, e));
                }
                const Exponent unit = exponent_sub(t.e_generator, s.e_generator);
                LaurentPoly transition = LaurentPoly::monomial(atlas.x_vars, unit).substitute(s.map_to_x);
                for (std::size_t i = 0; i < gens.size(); ++i)
                    REQUIRE(t.f_tilde[i].substitute(images) * transition == s.f_tilde[i]);
            }
    }
}
