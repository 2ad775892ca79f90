#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccclose/linalg.hpp"
#include "test_support.hpp"

using namespace ccclose;

TEST_CASE("scalar determinant of the t in {1,2,3} evaluation matrix") {
    // Rows 1, t^3, t^2 at t = 1, 2, 3; cofactor expansion gives -22.
    ScalarMatrix m{{1, 1, 1}, {1, 8, 27}, {1, 4, 9}};
    CHECK(determinant(m) == Scalar(-22));
    CHECK(rank(m) == 3);
}

TEST_CASE("scalar solve and independence") {
    ScalarMatrix a{{1, 2}, {2, 4}, {0, 1}};
    auto x = solve(a, {Scalar(3), Scalar(6), Scalar(1)});
    REQUIRE(x);
    CHECK((*x)[0] == Scalar(1));
    CHECK((*x)[1] == Scalar(1));
    CHECK_FALSE(solve(a, {Scalar(3), Scalar(7), Scalar(1)}));
    CHECK(independent_rows(a) == std::vector<std::size_t>{0, 2});
    CHECK(independent_columns(a) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("Bareiss solve over a function field") {
    const VarList s{"s"};
    auto P = [&](const char* t) { return parse_poly(t, s); };
    // [s 1; 1 s] x = [1; 1]  ->  x = (1/(s+1), 1/(s+1))
    PolyMatrix a{{P("s"), P("1")}, {P("1"), P("s")}};
    auto x = solve_parametric(a, {P("1"), P("1")});
    REQUIRE(x);
    for (const auto& xi : *x) {
        CHECK(xi.num * P("s + 1") == xi.den);
    }
    // Inconsistent: rows proportional, right side not.
    PolyMatrix b{{P("s"), P("s^2")}, {P("1"), P("s")}};
    CHECK_FALSE(solve_parametric(b, {P("1"), P("1")}));
    CHECK(rank(b) == 1);
}

TEST_CASE("Bareiss agrees with specialization on random systems") {
    std::mt19937_64 rng(5);
    const VarList v{"s", "t"};
    for (int trial = 0; trial < 60; ++trial) {
        const int rows = static_cast<int>(testing::uniform(rng, 1, 4));
        const int cols = static_cast<int>(testing::uniform(rng, 1, 3));
        PolyMatrix a(rows, std::vector<LaurentPoly>(cols));
        std::vector<LaurentPoly> b(rows);
        for (auto& row : a)
            for (auto& e : row) e = testing::random_poly(rng, v, 2, -1, 2);
        for (auto& e : b) e = testing::random_poly(rng, v, 2, -1, 2);
        auto x = solve_parametric(a, b);
        if (!x) continue;
        // Every equation must hold identically: a*x - b == 0 after clearing.
        for (int i = 0; i < rows; ++i) {
            RationalFunction acc = RationalFunction::from_poly(b[i].scaled(Scalar(-1)));
            LaurentPoly num = acc.num;
            LaurentPoly den = acc.den;
            for (int j = 0; j < cols; ++j) {
                num = num * (*x)[j].den + a[i][j] * (*x)[j].num * den;
                den = den * (*x)[j].den;
            }
            REQUIRE(num.is_zero());
        }
    }
}

TEST_CASE("Hermite reduction gives canonical class representatives") {
    IntMatrix rows{{2, 0, 1}, {0, 3, 1}};
    const auto h = hermite_normal_form(rows, 3);
    CHECK(h.basis.size() == 2);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> v(3);
        for (auto& e : v) e = testing::uniform(rng, -6, 6);
        const std::int64_t a = testing::uniform(rng, -3, 3);
        const std::int64_t b = testing::uniform(rng, -3, 3);
        std::vector<std::int64_t> w = v;
        for (int j = 0; j < 3; ++j) w[j] += a * rows[0][j] + b * rows[1][j];
        std::vector<std::int64_t> coords;
        const auto rv = reduce_modulo(h, v);
        const auto rw = reduce_modulo(h, w, &coords);
        REQUIRE(rv == rw);
        for (int j = 0; j < 3; ++j) REQUIRE(w[j] - rw[j] == coords[0] * rows[0][j] + coords[1] * rows[1][j]);
    }
}

TEST_CASE("Smith normal form with transforms") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = static_cast<std::size_t>(testing::uniform(rng, 1, 3));
        const std::size_t c = static_cast<std::size_t>(testing::uniform(rng, 1, 3));
        IntMatrix m(r, std::vector<std::int64_t>(c));
        for (auto& row : m)
            for (auto& e : row) e = testing::uniform(rng, -4, 4);
        const auto s = smith_normal_form(m);
        REQUIRE(multiply(multiply(s.u, m), s.v) == s.d);
        REQUIRE(std::llabs(determinant(s.u)) == 1);
        REQUIRE(std::llabs(determinant(s.v)) == 1);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j) REQUIRE(s.d[i][j] == 0);
        for (std::size_t k = 0; k + 1 < s.rank; ++k) REQUIRE(s.d[k + 1][k + 1] % s.d[k][k] == 0);
    }
}
