#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccclose/findet.hpp"
#include "test_support.hpp"

using namespace ccclose;

namespace {

const VarList xy{"x", "y"};
const VarList xyz{"x", "y", "z"};
const VarList t{"t"};

LaurentPoly P(const std::string& text, const VarList& vars) { return parse_poly(text, vars); }

std::vector<LaurentPoly> pullbacks(const DescentProblem& d, const LaurentPoly& g) {
    std::vector<LaurentPoly> out;
    for (const auto& c : d.atlas->charts) out.push_back(c.pullback(g));
    return out;
}

Scalar constant_of(const RationalFunction& rf) { return rf.eval(std::vector<Scalar>{}); }

bool in_row_span(const ScalarMatrix& f, const std::vector<Scalar>& phi) {
    ScalarMatrix stacked = f;
    stacked.push_back(phi);
    return rank(stacked) == rank(f);
}

ScalarMatrix random_table(std::mt19937_64& rng, std::size_t r, std::size_t m, std::vector<Scalar>& phi) {
    // Low-rank tables make the span question non-trivial.
    const std::size_t k = static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(r)));
    ScalarMatrix basis(k, std::vector<Scalar>(m));
    for (auto& row : basis)
        for (auto& c : row) c = Scalar(testing::uniform(rng, -3, 3));
    ScalarMatrix f(r, std::vector<Scalar>(m, Scalar(0)));
    for (auto& row : f)
        for (const auto& b : basis) {
            const Scalar s(testing::uniform(rng, -2, 2));
            for (std::size_t c = 0; c < m; ++c) row[c] += s * b[c];
        }
    phi.assign(m, Scalar(0));
    if (testing::uniform(rng, 0, 1) == 0) {
        for (auto& c : phi) c = Scalar(testing::uniform(rng, -3, 3));
    } else {
        for (const auto& row : f) {
            const Scalar s(testing::uniform(rng, -2, 2));
            for (std::size_t c = 0; c < m; ++c) phi[c] += s * row[c];
        }
    }
    return f;
}

}  // namespace

TEST_CASE("wronskian_test examples") {
    const std::vector<LaurentPoly> funcs{P("1", t), P("t^3", t)};
    const SpanResult in = wronskian_test(funcs, P("1 + 2*t^3", t));
    REQUIRE(in.status == SpanStatus::InSpan);
    CHECK(constant_of(in.coeffs[0]) == Scalar(1));
    CHECK(constant_of(in.coeffs[1]) == Scalar(2));

    const SpanResult out = wronskian_test(funcs, P("t^2", t));
    REQUIRE(out.status == SpanStatus::NotInSpan);
    REQUIRE(out.certificate);
    const auto& cert = *out.certificate;
    CHECK(cert.matrix == ScalarMatrix{{Scalar(1), Scalar(1), Scalar(1)},
                                      {Scalar(1), Scalar(8), Scalar(27)},
                                      {Scalar(1), Scalar(4), Scalar(9)}});
    CHECK(cert.det == Scalar(-22));
    CHECK(cert.points.size() == 3);
    CHECK(cert.verify());

    const SpanResult zero = wronskian_test({P("t", t)}, P("0", t));
    REQUIRE(zero.status == SpanStatus::InSpan);
    CHECK(constant_of(zero.coeffs[0]) == Scalar(0));
}

TEST_CASE("tampered certificates are rejected") {
    auto cert = *wronskian_test({P("1", t), P("t^3", t)}, P("t^2", t)).certificate;
    auto bad = cert;
    bad.det = Scalar(-21);
    CHECK_FALSE(bad.verify());
    bad = cert;
    bad.points[2].coords[0] = Scalar(2);
    std::string why;
    CHECK_FALSE(bad.verify(&why));
    CHECK_FALSE(why.empty());
    bad = cert;
    bad.charts[0].phi = P("1 + t^3", t);
    CHECK_FALSE(bad.verify());
}

TEST_CASE("fiber span test over the origin of (x^3, y^3)") {
    const DescentProblem d = from_ideal(MonomialIdeal::parse("x^3,y^3", xy));
    const ZeroSet origin{true, true};

    const SpanResult member = fiber_span_test(d, pullbacks(d, P("x^2*y^2", xy)), origin);
    REQUIRE(member.status == SpanStatus::InSpan);
    CHECK(constant_of(member.coeffs[0]) == Scalar(0));
    CHECK(constant_of(member.coeffs[1]) == Scalar(0));

    const SpanResult non = fiber_span_test(d, pullbacks(d, P("x*y^2", xy)), origin);
    REQUIRE(non.status == SpanStatus::NotInSpan);
    REQUIRE(non.certificate);
    CHECK(non.certificate->det == Scalar(-22));
    CHECK(non.certificate->matrix.size() == 3);
    CHECK(non.certificate->verify());
    CHECK(non.certificate->base_point == std::vector<Scalar>{Scalar(0), Scalar(0)});

    // Off V(I) the fiber is a point: always in the span.
    const SpanResult off = fiber_span_test(d, pullbacks(d, P("x*y^2", xy)), ZeroSet{false, true});
    CHECK(off.status == SpanStatus::InSpan);
}

TEST_CASE("sci0 membership examples") {
    const DescentProblem d = from_ideal(MonomialIdeal::parse("x^3,y^3", xy));
    CHECK(sci0_membership(d, P("x^2*y^2", xy)).member);
    const Sci0Result non = sci0_membership(d, P("x*y^2", xy));
    CHECK_FALSE(non.member);
    std::vector<std::string> failing;
    for (const auto& rep : non.report)
        if (rep.result.status == SpanStatus::NotInSpan) failing.push_back(rep.label);
    CHECK(failing == std::vector<std::string>{"x=y=0"});
    const Sci0Result alg = sci0_membership(d, P("x^3", xy));
    CHECK(alg.member);
    CHECK(alg.report.size() == 4);
    // A pole in the pullback is reported as an obstruction.
    const Sci0Result pole = sci0_membership(d, P("x*y", xy));
    CHECK_FALSE(pole.member);
    CHECK(pole.obstruction);
}

TEST_CASE("table wronskian agrees with brute-force rank comparison") {
    std::mt19937_64 rng(23);
    int refuted = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        const std::size_t r = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
        const std::size_t m = static_cast<std::size_t>(testing::uniform(rng, 1, 8));
        std::vector<Scalar> phi;
        const ScalarMatrix f = random_table(rng, r, m, phi);
        const SpanResult res = wronskian_test_table(f, phi, 99);
        REQUIRE((res.status == SpanStatus::InSpan) == in_row_span(f, phi));
        if (res.status == SpanStatus::NotInSpan) {
            ++refuted;
            REQUIRE(res.certificate);
            REQUIRE(res.certificate->points.size() <= r + 1);
            REQUIRE(res.certificate->verify_table(f, phi));
        } else {
            for (std::size_t c = 0; c < m; ++c) {
                Scalar acc;
                for (std::size_t i = 0; i < r; ++i) acc += constant_of(res.coeffs[i]) * f[i][c];
                REQUIRE(acc == phi[c]);
            }
        }
    }
    CHECK(refuted > 100);
}

TEST_CASE("subsets of size at most r+1 decide the span question") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t r = static_cast<std::size_t>(testing::uniform(rng, 1, 3));
        const std::size_t m = static_cast<std::size_t>(testing::uniform(rng, 1, 7));
        std::vector<Scalar> phi;
        const ScalarMatrix f = random_table(rng, r, m, phi);
        bool small_ok = true, all_ok = true;
        for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
            ScalarMatrix fs(r);
            std::vector<Scalar> ps;
            for (std::size_t c = 0; c < m; ++c)
                if ((mask >> c) & 1U) {
                    for (std::size_t i = 0; i < r; ++i) fs[i].push_back(f[i][c]);
                    ps.push_back(phi[c]);
                }
            const bool ok = in_row_span(fs, ps);
            all_ok = all_ok && ok;
            if (ps.size() <= r + 1) small_ok = small_ok && ok;
        }
        REQUIRE(small_ok == all_ok);
        REQUIRE(all_ok == (wronskian_test_table(f, phi).status == SpanStatus::InSpan));
    }
}

TEST_CASE("finite-model fiber span test") {
    FiniteModel m;
    m.base_points = {{Scalar(0), Scalar(0)}};
    for (long k = 1; k <= 3; ++k) m.points.push_back({"y" + std::to_string(k), 0, {{Scalar(1)}, {Scalar(k * k * k)}}});
    const DescentProblem d = from_finite_model(xy, 2, m);
    const SpanResult non = fiber_span_test(d, {{Scalar(1)}, {Scalar(4)}, {Scalar(9)}}, 0);
    REQUIRE(non.status == SpanStatus::NotInSpan);
    CHECK(non.certificate->det == Scalar(-22));
    const SpanResult in = fiber_span_test(d, {{Scalar(3)}, {Scalar(17)}, {Scalar(55)}}, 0);
    REQUIRE(in.status == SpanStatus::InSpan);
    CHECK(constant_of(in.coeffs[1]) == Scalar(2));
}

TEST_CASE("fiber points lie over x*") {
    for (const auto& [vars, text] : std::vector<std::pair<VarList, std::string>>{
             {xy, "x^3,y^3"}, {xy, "x^5,x^2*y,y^4"}, {xyz, "x^2,y^2,x*y*z"}, {xyz, "x^3,y^2*z,z^4"}}) {
        const DescentProblem d = from_ideal(MonomialIdeal::parse(text, vars));
        for (const auto& base : vanishing_orbits(d.atlas->gens, vars.size())) {
            std::vector<Scalar> z;
            for (bool b : base)
                if (!b) z.push_back(Scalar(2));
            std::vector<Scalar> x_star;
            const auto pts = fiber_points(*d.atlas, base, z, 4, 1, &x_star);
            REQUIRE(!pts.empty());
            for (const auto& p : pts) {
                std::vector<Scalar> image;
                for (const auto& m : d.atlas->charts[p.chart].map_to_x) image.push_back(m.eval(p.coords));
                REQUIRE(image == x_star);
            }
        }
    }
}

TEST_CASE("parametric coefficients specialize correctly; certificates re-verify") {
    std::mt19937_64 rng(41);
    const std::vector<std::pair<VarList, std::string>> ideals = {
        {xyz, "x^2,y^2,x*y*z"}, {xyz, "x^3,y^2*z,z^4"}, {xyz, "x^2*z,y^3"}, {xy, "x^2*y,y^3"}, {xy, "x^4,x*y^2"}};
    int parametric = 0, refutations = 0;
    for (const auto& [vars, text] : ideals) {
        const DescentProblem d = from_ideal(MonomialIdeal::parse(text, vars));
        for (int trial = 0; trial < 30; ++trial) {
            Exponent e(vars.size());
            Exponent e2(vars.size());
            for (auto& x : e) x = testing::uniform(rng, 0, 4);
            for (auto& x : e2) x = testing::uniform(rng, 0, 4);
            const LaurentPoly g = LaurentPoly::monomial(vars, e) + LaurentPoly::monomial(vars, e2, Scalar(trial % 3));
            const auto gt = pullbacks(d, g);
            if (!std::all_of(gt.begin(), gt.end(), [](const LaurentPoly& p) { return p.is_polynomial(); })) continue;
            for (const auto& base : vanishing_orbits(d.atlas->gens, vars.size())) {
                const SpanResult res = fiber_span_test(d, gt, base, 7);
                if (res.status == SpanStatus::NotInSpan) {
                    ++refutations;
                    REQUIRE(res.certificate->verify());
                    REQUIRE(res.certificate->points.size() <= d.rank_e + 1);
                    continue;
                }
                if (res.params.empty()) continue;
                ++parametric;
                int checked = 0;
                for (int s = 0; s < 50 && checked < 5; ++s) {
                    std::vector<Scalar> z;
                    for (std::size_t j = 0; j < res.params.size(); ++j) z.push_back(Scalar(testing::uniform(rng, 2, 5)));
                    std::vector<Scalar> x_star;
                    const auto pts = fiber_points(*d.atlas, base, z, 3, 3, &x_star);
                    std::vector<Scalar> pv;
                    for (std::size_t j = 0; j < base.size(); ++j)
                        if (!base[j]) pv.push_back(x_star[j]);
                    std::vector<Scalar> c;
                    try {
                        for (const auto& rf : res.coeffs) c.push_back(rf.eval(pv));
                    } catch (const std::domain_error&) {
                        continue;
                    }
                    for (const auto& p : pts) {
                        Scalar acc;
                        for (std::size_t i = 0; i < c.size(); ++i)
                            acc += c[i] * d.patches[p.chart].f[i][0].eval(p.coords);
                        REQUIRE(acc == gt[p.chart].eval(p.coords));
                    }
                    ++checked;
                }
                REQUIRE(checked == 5);
            }
        }
    }
    CHECK(parametric > 0);
    CHECK(refutations > 0);
}
