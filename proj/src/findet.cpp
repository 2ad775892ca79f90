#include "ccclose/findet.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ccclose {

namespace {

struct Column {
    std::vector<Scalar> f;
    Scalar g;
    CertificatePoint point;
};

ScalarMatrix columns_matrix(const std::vector<Column>& cols, const std::vector<std::size_t>& pick, std::size_t r) {
    ScalarMatrix m(r, std::vector<Scalar>(pick.size()));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < pick.size(); ++k) m[i][k] = cols[pick[k]].f[i];
    return m;
}

// Greedy search for a refuting point set. `target_rank` must be the rank of
// f over all columns the stream can produce.
std::optional<WronskianCertificate> greedy_certificate(const std::function<std::optional<Column>()>& next,
                                                       std::size_t r, std::size_t target_rank,
                                                       std::size_t max_columns) {
    std::vector<Column> seen;
    std::vector<std::size_t> basis;
    std::vector<Scalar> c(r, Scalar(0));
    bool have_c = target_rank == 0;
    auto fails = [&](const Column& col) {
        Scalar acc;
        for (std::size_t i = 0; i < r; ++i) acc += c[i] * col.f[i];
        return acc != col.g;
    };
    std::optional<std::size_t> failing;
    for (std::size_t count = 0; count < max_columns && !failing; ++count) {
        auto col = next();
        if (!col) break;
        seen.push_back(std::move(*col));
        const std::size_t idx = seen.size() - 1;
        if (!have_c) {
            auto trial = basis;
            trial.push_back(idx);
            if (rank(columns_matrix(seen, trial, r)) == trial.size()) basis = trial;
            if (basis.size() == target_rank) {
                // c * F_K = g_K
                ScalarMatrix sys = transpose(columns_matrix(seen, basis, r));
                std::vector<Scalar> rhs;
                for (auto k : basis) rhs.push_back(seen[k].g);
                auto sol = solve(sys, rhs);
                if (!sol) throw std::logic_error("independent columns gave an inconsistent system");
                c = *sol;
                have_c = true;
                for (std::size_t k = 0; k < seen.size() && !failing; ++k)
                    if (fails(seen[k])) failing = k;
            }
        } else if (fails(seen[idx])) {
            failing = idx;
        }
    }
    if (!failing) return std::nullopt;

    WronskianCertificate cert;
    const ScalarMatrix fk = columns_matrix(seen, basis, r);
    cert.rows = basis.empty() ? std::vector<std::size_t>{} : independent_rows(fk);
    std::vector<std::size_t> cols = basis;
    cols.push_back(*failing);
    for (auto i : cert.rows) {
        std::vector<Scalar> row;
        for (auto k : cols) row.push_back(seen[k].f[i]);
        cert.matrix.push_back(std::move(row));
    }
    std::vector<Scalar> grow;
    for (auto k : cols) grow.push_back(seen[k].g);
    cert.matrix.push_back(std::move(grow));
    for (auto k : cols) cert.points.push_back(seen[k].point);
    cert.det = determinant(cert.matrix);
    if (cert.det.is_zero()) throw std::logic_error("greedy certificate has a vanishing determinant");
    return cert;
}

std::int64_t nonzero_int(std::mt19937_64& rng, std::int64_t bound) {
    std::uniform_int_distribution<std::int64_t> dist(1, bound);
    const std::int64_t v = dist(rng);
    return (rng() & 1U) ? v : -v;
}

RationalFunction constant_rf(const Scalar& s) { return RationalFunction::from_poly(LaurentPoly::constant({}, s)); }

bool check_matrix(const WronskianCertificate& cert, const ScalarMatrix& f, const std::vector<Scalar>& phi,
                  std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t r = f.size();
    const std::size_t m = phi.size();
    if (cert.points.size() != m) return fail("point count mismatch");
    if (cert.rows.size() + 1 != m) return fail("certificate is not square");
    if (rank(f) != cert.rows.size()) return fail("f rows do not span the evaluated f matrix");
    ScalarMatrix mat;
    for (auto i : cert.rows) {
        if (i >= r) return fail("row index out of range");
        mat.push_back(f[i]);
    }
    mat.push_back(phi);
    if (mat != cert.matrix) return fail("stored matrix differs from the recomputed one");
    const Scalar det = determinant(mat);
    if (det != cert.det) return fail("stored determinant differs from the recomputed one");
    if (det.is_zero()) return fail("determinant vanishes");
    return true;
}

// X-orbits ordered by decreasing dimension.
std::vector<ZeroSet> orbits_by_dimension(std::size_t n) {
    std::vector<ZeroSet> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        ZeroSet z(n);
        for (std::size_t j = 0; j < n; ++j) z[j] = (mask >> j) & 1U;
        out.push_back(z);
    }
    std::stable_sort(out.begin(), out.end(), [](const ZeroSet& a, const ZeroSet& b) {
        const auto ca = std::count(a.begin(), a.end(), true);
        const auto cb = std::count(b.begin(), b.end(), true);
        if (ca != cb) return ca < cb;
        return a > b;
    });
    return out;
}

// A chart orbit over an X-orbit with the Smith form of its fiber equations.
struct OrbitFrame {
    std::size_t chart = 0;
    ZeroSet orbit;
    std::vector<std::size_t> free;  // chart coordinates not in the orbit's zero set
    IntMatrix m;                    // free x base-free exponent matrix
    SmithResult snf;
};

std::vector<OrbitFrame> frames_over(const ChartAtlas& atlas, const ZeroSet& base) {
    std::vector<std::size_t> base_free;
    for (std::size_t j = 0; j < base.size(); ++j)
        if (!base[j]) base_free.push_back(j);
    std::vector<OrbitFrame> out;
    for (const auto& s : exceptional_strata(atlas)) {
        if (s.image_stratum != base) continue;
        OrbitFrame f;
        f.chart = s.chart;
        f.orbit = s.zero_set;
        f.free = s.torus_coords;
        const Chart& chart = atlas.charts[s.chart];
        for (auto k : f.free) {
            std::vector<std::int64_t> row;
            for (auto j : base_free) row.push_back(chart.rays[k][j]);
            f.m.push_back(std::move(row));
        }
        f.snf = smith_normal_form(f.m);
        if (f.snf.rank != base_free.size()) throw std::logic_error("chart orbit does not dominate its image");
        out.push_back(std::move(f));
    }
    return out;
}

std::int64_t frames_lcm(const std::vector<OrbitFrame>& frames) {
    std::int64_t l = 1;
    for (const auto& f : frames)
        for (std::size_t k = 0; k < f.snf.rank; ++k) l = std::lcm(l, f.snf.d[k][k]);
    return l;
}

std::vector<Scalar> frame_point(const ChartAtlas& atlas, const OrbitFrame& f, const std::vector<Scalar>& z,
                                std::int64_t l, const std::vector<Scalar>& fiber_values) {
    const std::size_t nf = f.free.size();
    const std::size_t nb = z.size();
    std::vector<Scalar> eta(nf);
    for (std::size_t k = 0; k < f.snf.rank; ++k) {
        Scalar base(1);
        for (std::size_t j = 0; j < nb; ++j) base *= z[j].pow(f.snf.v[j][k]);
        eta[k] = base.pow(l / f.snf.d[k][k]);
    }
    for (std::size_t k = f.snf.rank; k < nf; ++k) eta[k] = fiber_values[k - f.snf.rank];
    std::vector<Scalar> coords(atlas.dim(), Scalar(0));
    for (std::size_t t = 0; t < nf; ++t) {
        Scalar u(1);
        for (std::size_t k = 0; k < nf; ++k) u *= eta[k].pow(f.snf.u[k][t]);
        coords[f.free[t]] = u;
    }
    return coords;
}

std::vector<Scalar> x_star_of(const ZeroSet& base, const std::vector<Scalar>& z, std::int64_t l) {
    std::vector<Scalar> x(base.size(), Scalar(0));
    std::size_t k = 0;
    for (std::size_t j = 0; j < base.size(); ++j)
        if (!base[j]) x[j] = z[k++].pow(l);
    return x;
}

// Columns over the fiber of x* = z^L, orbit-major, `count` samples per orbit.
std::vector<FiberPoint> sample_fiber(const ChartAtlas& atlas, const std::vector<OrbitFrame>& frames,
                                     const std::vector<Scalar>& z, std::int64_t l, std::size_t count,
                                     std::size_t start, std::mt19937_64& rng) {
    std::vector<FiberPoint> out;
    for (const auto& f : frames) {
        const std::size_t nfib = f.free.size() - f.snf.rank;
        const std::size_t reps = nfib == 0 ? (start == 0 ? 1 : 0) : count;
        for (std::size_t k = 0; k < reps; ++k) {
            std::vector<Scalar> vals;
            for (std::size_t a = 0; a < nfib; ++a)
                vals.push_back(a == 0 ? Scalar(static_cast<long>(start + k + 1)) : Scalar(nonzero_int(rng, 9)));
            out.push_back({f.chart, f.orbit, frame_point(atlas, f, z, l, vals)});
        }
    }
    return out;
}

SpanResult in_span_constants(const std::vector<Scalar>& c) {
    SpanResult res;
    for (const auto& x : c) res.coeffs.push_back(constant_rf(x));
    return res;
}

}  // namespace

const char* to_string(SpanStatus status) { return status == SpanStatus::InSpan ? "InSpan" : "NotInSpan"; }

// ---------------------------------------------------------------------------
// Certificates

bool WronskianCertificate::verify(std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (charts.empty()) return fail("certificate carries no function table");
    const std::size_t r = charts.front().funcs.size();
    ScalarMatrix f(r);
    std::vector<Scalar> phi;
    std::optional<std::vector<Scalar>> image;
    for (const auto& p : points) {
        if (p.chart >= charts.size()) return fail("point names a missing chart");
        const CertificateChart& ch = charts[p.chart];
        if (p.coords.size() != ch.coords.size()) return fail("point has the wrong arity");
        if (ch.funcs.size() != r) return fail("charts disagree on the number of functions");
        try {
            for (std::size_t i = 0; i < r; ++i) f[i].push_back(ch.funcs[i].eval(p.coords));
            phi.push_back(ch.phi.eval(p.coords));
            if (!ch.map_to_x.empty()) {
                std::vector<Scalar> x;
                for (const auto& m : ch.map_to_x) x.push_back(m.eval(p.coords));
                if (image && *image != x) return fail("points lie in different fibers");
                image = x;
            }
        } catch (const std::domain_error&) {
            return fail("point hits a pole");
        }
    }
    if (image && !base_point.empty() && *image != base_point) return fail("fiber differs from the stated base point");
    return check_matrix(*this, f, phi, why);
}

bool WronskianCertificate::verify_table(const ScalarMatrix& f, const std::vector<Scalar>& phi, std::string* why) const {
    ScalarMatrix fc(f.size());
    std::vector<Scalar> pc;
    for (const auto& p : points) {
        if (p.chart >= phi.size()) {
            if (why) *why = "column out of range";
            return false;
        }
        for (std::size_t i = 0; i < f.size(); ++i) fc[i].push_back(f[i][p.chart]);
        pc.push_back(phi[p.chart]);
    }
    return check_matrix(*this, fc, pc, why);
}

// ---------------------------------------------------------------------------
// Wronskian tests

SpanResult wronskian_test(const std::vector<LaurentPoly>& funcs, const LaurentPoly& phi, std::uint64_t seed) {
    return wronskian_test(funcs, phi, ZeroSet(phi.nvars(), false), seed);
}

SpanResult wronskian_test(const std::vector<LaurentPoly>& funcs, const LaurentPoly& phi, const ZeroSet& zero,
                          std::uint64_t seed) {
    if (zero.size() != phi.nvars()) throw std::invalid_argument("domain does not match the function variables");
    for (const auto& f : funcs)
        if (f.vars() != phi.vars()) throw std::invalid_argument("variable-list mismatch");
    const std::size_t r = funcs.size();
    std::vector<LaurentPoly> rf;
    for (const auto& f : funcs) rf.push_back(f.restrict_zero(zero));
    const LaurentPoly rphi = phi.restrict_zero(zero);

    // Coefficient matching.
    std::map<Exponent, std::size_t, GrlexLess> mono;
    auto index = [&](const Exponent& e) { return mono.emplace(e, mono.size()).first->second; };
    for (const auto& f : rf)
        for (const auto& [e, c] : f.terms()) index(e);
    for (const auto& [e, c] : rphi.terms()) index(e);
    ScalarMatrix a(mono.size(), std::vector<Scalar>(r));
    std::vector<Scalar> b(mono.size());
    for (std::size_t i = 0; i < r; ++i)
        for (const auto& [e, c] : rf[i].terms()) a[mono.at(e)][i] = c;
    for (const auto& [e, c] : rphi.terms()) b[mono.at(e)] = c;
    if (mono.empty()) return in_span_constants(std::vector<Scalar>(r, Scalar(0)));
    if (auto sol = solve(a, b)) return in_span_constants(*sol);

    const std::size_t target = rank(a);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < zero.size(); ++k)
        if (!zero[k]) free.push_back(k);
    std::size_t k = 0;
    auto next = [&]() -> std::optional<Column> {
        ++k;
        std::vector<Scalar> pt(zero.size(), Scalar(0));
        for (std::size_t t = 0; t < free.size(); ++t) {
            if (t == 0 && k <= 64) pt[free[t]] = Scalar(static_cast<long>(k));
            else pt[free[t]] = Scalar(nonzero_int(rng, 50));
        }
        Column col;
        for (const auto& f : funcs) col.f.push_back(f.eval(pt));
        col.g = phi.eval(pt);
        col.point = {0, pt};
        return col;
    };
    auto cert = greedy_certificate(next, r, target, 4096);
    if (!cert) throw std::runtime_error("no refuting point set found");
    cert->charts.push_back({0, phi.vars(), {}, funcs, phi});
    cert->seed = seed;
    SpanResult res;
    res.status = SpanStatus::NotInSpan;
    res.certificate = std::move(cert);
    return res;
}

SpanResult wronskian_test_table(const ScalarMatrix& f, const std::vector<Scalar>& phi, std::uint64_t seed) {
    const std::size_t r = f.size();
    const std::size_t m = phi.size();
    for (const auto& row : f)
        if (row.size() != m) throw std::invalid_argument("table rows have different lengths");
    if (auto sol = solve(transpose(f), phi); sol || m == 0) {
        return in_span_constants(sol ? *sol : std::vector<Scalar>(r, Scalar(0)));
    }
    std::size_t k = 0;
    auto next = [&]() -> std::optional<Column> {
        if (k >= m) return std::nullopt;
        Column col;
        for (std::size_t i = 0; i < r; ++i) col.f.push_back(f[i][k]);
        col.g = phi[k];
        col.point = {k, {}};
        ++k;
        return col;
    };
    auto cert = greedy_certificate(next, r, rank(f), m);
    if (!cert) throw std::logic_error("inconsistent table without a refuting column set");
    cert->seed = seed;
    SpanResult res;
    res.status = SpanStatus::NotInSpan;
    res.certificate = std::move(cert);
    return res;
}

// ---------------------------------------------------------------------------
// Fiber span tests

std::vector<FiberPoint> fiber_points(const ChartAtlas& atlas, const ZeroSet& base, const std::vector<Scalar>& z,
                                     std::size_t count, std::uint64_t seed, std::vector<Scalar>* x_star) {
    const auto frames = frames_over(atlas, base);
    const std::int64_t l = frames_lcm(frames);
    if (x_star) *x_star = x_star_of(base, z, l);
    std::mt19937_64 rng(seed);
    return sample_fiber(atlas, frames, z, l, count, 0, rng);
}

SpanResult fiber_span_test(const DescentProblem& d, const std::vector<LaurentPoly>& g_tilde, const ZeroSet& base,
                           std::uint64_t seed) {
    if (d.finite || !d.atlas || d.patches.size() != d.atlas->charts.size())
        throw std::invalid_argument("fiber span test needs the blow-up problem of an ideal");
    const ChartAtlas& atlas = *d.atlas;
    if (g_tilde.size() != atlas.charts.size()) throw std::invalid_argument("one chart expression per chart expected");
    if (base.size() != atlas.dim()) throw std::invalid_argument("base orbit of the wrong dimension");
    const std::size_t r = d.rank_e;

    VarList params;
    for (std::size_t j = 0; j < base.size(); ++j)
        if (!base[j]) params.push_back(atlas.x_vars[j]);
    const auto frames = frames_over(atlas, base);

    // Rows: (frame, class representative).
    std::map<std::pair<std::size_t, Exponent>, std::size_t> row_of;
    PolyMatrix a;
    std::vector<LaurentPoly> b;
    auto row = [&](std::size_t frame, const Exponent& rep) -> std::size_t {
        auto [it, fresh] = row_of.emplace(std::make_pair(frame, rep), a.size());
        if (fresh) {
            a.emplace_back(r, LaurentPoly(params));
            b.emplace_back(params);
        }
        return it->second;
    };
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
        const OrbitFrame& fr = frames[fi];
        IntMatrix gens(fr.m.empty() ? 0 : fr.m.front().size(), std::vector<std::int64_t>(fr.free.size()));
        for (std::size_t t = 0; t < fr.free.size(); ++t)
            for (std::size_t j = 0; j < gens.size(); ++j) gens[j][t] = fr.m[t][j];
        const HermiteResult h = hermite_normal_form(gens, fr.free.size());
        auto add = [&](const LaurentPoly& p, std::optional<std::size_t> column) {
            const LaurentPoly restricted = p.restrict_zero(fr.orbit);
            for (const auto& [e, c] : restricted.terms()) {
                std::vector<std::int64_t> ef;
                for (auto t : fr.free) ef.push_back(e[t]);
                std::vector<std::int64_t> v;
                const Exponent rep = reduce_modulo(h, ef, &v);
                v.resize(params.size(), 0);
                const LaurentPoly term = LaurentPoly::monomial(params, v, c);
                const std::size_t ri = row(fi, rep);
                if (column) a[ri][*column] += term;
                else b[ri] += term;
            }
        };
        for (std::size_t i = 0; i < r; ++i) add(d.patches[fr.chart].f[i][0], i);
        add(g_tilde[fr.chart], std::nullopt);
    }

    SpanResult res;
    res.params = params;
    const RationalFunction zero = RationalFunction::from_poly(LaurentPoly(params));
    if (a.empty()) {
        res.coeffs.assign(r, zero);
        return res;
    }
    std::vector<LaurentPoly> pivots;
    auto full = solve_parametric(a, b, &pivots);
    if (full) {
        for (const auto& p : pivots)
            if (!p.is_monomial()) res.needs_split = true;
        // Minimal support, then lexicographic; a polynomial solution wins.
        auto is_polynomial = [](const std::vector<RationalFunction>& c) {
            return std::all_of(c.begin(), c.end(), [](const RationalFunction& x) {
                auto l = x.as_laurent();
                return l && l->is_polynomial();
            });
        };
        std::optional<std::vector<RationalFunction>> first_consistent;
        std::optional<std::vector<RationalFunction>> chosen;
        if (r <= 12) {
            std::vector<std::vector<std::size_t>> supports;
            for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
                std::vector<std::size_t> s;
                for (std::size_t i = 0; i < r; ++i)
                    if ((mask >> i) & 1U) s.push_back(i);
                supports.push_back(std::move(s));
            }
            std::sort(supports.begin(), supports.end(), [](const auto& x, const auto& y) {
                return x.size() != y.size() ? x.size() < y.size() : x < y;
            });
            for (const auto& s : supports) {
                std::vector<RationalFunction> c(r, zero);
                bool consistent;
                if (s.empty()) {
                    consistent = std::all_of(b.begin(), b.end(), [](const LaurentPoly& p) { return p.is_zero(); });
                } else {
                    PolyMatrix as;
                    for (const auto& arow : a) {
                        std::vector<LaurentPoly> sub;
                        for (auto i : s) sub.push_back(arow[i]);
                        as.push_back(std::move(sub));
                    }
                    auto sol = solve_parametric(as, b);
                    consistent = sol.has_value();
                    if (sol)
                        for (std::size_t k = 0; k < s.size(); ++k) c[s[k]] = (*sol)[k];
                }
                if (!consistent) continue;
                if (!first_consistent) first_consistent = c;
                if (is_polynomial(c)) {
                    chosen = c;
                    break;
                }
            }
        }
        res.coeffs = chosen ? *chosen : (first_consistent ? *first_consistent : *full);
        res.polynomial = is_polynomial(res.coeffs);
        return res;
    }

    // Not in the span over the function field: specialize the base and refute
    // on an actual fiber.
    res.status = SpanStatus::NotInSpan;
    const std::size_t ra = rank(a);
    PolyMatrix ab = a;
    for (std::size_t i = 0; i < ab.size(); ++i) ab[i].push_back(b[i]);
    const std::int64_t l = frames_lcm(frames);
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Scalar> z;
        for (std::size_t j = 0; j < params.size(); ++j)
            z.push_back(attempt == 0 ? Scalar(static_cast<long>(j + 2)) : Scalar(nonzero_int(rng, 7)));
        const std::vector<Scalar> x_star = x_star_of(base, z, l);
        std::vector<Scalar> pv;
        for (std::size_t j = 0; j < base.size(); ++j)
            if (!base[j]) pv.push_back(x_star[j]);
        auto eval_matrix = [&](const PolyMatrix& m) {
            ScalarMatrix out;
            for (const auto& mr : m) {
                std::vector<Scalar> sr;
                for (const auto& e : mr) sr.push_back(e.eval(pv));
                out.push_back(std::move(sr));
            }
            return out;
        };
        if (rank(eval_matrix(a)) != ra || rank(eval_matrix(ab)) != ra + 1) continue;

        auto build = [&](const std::vector<OrbitFrame>& use, std::size_t target,
                         std::mt19937_64& gen) -> std::optional<WronskianCertificate> {
            std::map<std::size_t, std::size_t> chart_slot;
            std::vector<FiberPoint> pool;
            std::size_t pos = 0, round = 0;
            const std::size_t per_round = r + 2;
            auto next = [&]() -> std::optional<Column> {
                while (pos >= pool.size()) {
                    if (round >= 8) return std::nullopt;
                    pool = sample_fiber(atlas, use, z, l, per_round, round * per_round, gen);
                    pos = 0;
                    ++round;
                }
                const FiberPoint& fp = pool[pos++];
                Column col;
                for (std::size_t i = 0; i < r; ++i) col.f.push_back(d.patches[fp.chart].f[i][0].eval(fp.coords));
                col.g = g_tilde[fp.chart].eval(fp.coords);
                auto [it, fresh] = chart_slot.emplace(fp.chart, chart_slot.size());
                col.point = {it->second, fp.coords};
                return col;
            };
            auto cert = greedy_certificate(next, r, target, 100000);
            if (!cert) return cert;
            std::vector<std::pair<std::size_t, std::size_t>> slots(chart_slot.begin(), chart_slot.end());
            std::sort(slots.begin(), slots.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
            for (const auto& [chart, slot] : slots) {
                std::vector<LaurentPoly> funcs;
                for (std::size_t i = 0; i < r; ++i) funcs.push_back(d.patches[chart].f[i][0]);
                cert->charts.push_back(
                    {chart, d.patches[chart].coords, d.patches[chart].map_to_x, funcs, g_tilde[chart]});
            }
            cert->seed = seed;
            cert->base_point = x_star;
            return cert;
        };

        // Certificates on a single chart orbit, trivializing row first; the
        // largest |det| wins so that relabelling the variables relabels the
        // certificate.
        std::optional<WronskianCertificate> best;
        for (std::size_t fi = 0; fi < frames.size(); ++fi) {
            PolyMatrix sa, sab;
            for (const auto& [key, row] : row_of) {
                if (key.first != fi) continue;
                sa.push_back(a[row]);
                sab.push_back(ab[row]);
            }
            if (sa.empty()) continue;
            const std::size_t rs = rank(eval_matrix(sa));
            if (rank(eval_matrix(sab)) != rs + 1) continue;
            std::mt19937_64 local(seed + 7919 * (fi + 1));
            auto cert = build({frames[fi]}, rs, local);
            if (!cert) continue;
            const std::size_t unit = atlas.charts[frames[fi].chart].e_index;
            auto it = std::find(cert->rows.begin(), cert->rows.end(), unit);
            if (it != cert->rows.end() && it != cert->rows.begin()) {
                const auto k = static_cast<std::size_t>(it - cert->rows.begin());
                std::rotate(cert->rows.begin(), it, it + 1);
                std::rotate(cert->matrix.begin(), cert->matrix.begin() + static_cast<std::ptrdiff_t>(k),
                            cert->matrix.begin() + static_cast<std::ptrdiff_t>(k) + 1);
                cert->det = determinant(cert->matrix);
            }
            if (!best || cert->det.norm() > best->det.norm()) best = std::move(cert);
        }
        if (!best) best = build(frames, ra, rng);
        if (!best) continue;
        res.certificate = std::move(best);
        return res;
    }
    throw std::runtime_error("could not specialize the base to refute the span condition");
}

SpanResult fiber_span_test(const DescentProblem& d, const std::vector<std::vector<Scalar>>& g_values, std::size_t base,
                           std::uint64_t seed) {
    if (!d.finite) throw std::invalid_argument("finite-model span test needs a finite model");
    if (g_values.size() != d.model.points.size()) throw std::invalid_argument("one value vector per point expected");
    ScalarMatrix f(d.rank_e);
    std::vector<Scalar> phi;
    for (auto k : d.model.fiber(base)) {
        const FinitePoint& pt = d.model.points[k];
        const std::size_t s = pt.f.empty() ? 0 : pt.f.front().size();
        if (g_values[k].size() != s) throw std::invalid_argument("value vector of the wrong length at " + pt.label);
        for (std::size_t c = 0; c < s; ++c) {
            for (std::size_t i = 0; i < d.rank_e; ++i) f[i].push_back(pt.f[i][c]);
            phi.push_back(g_values[k][c]);
        }
    }
    return wronskian_test_table(f, phi, seed);
}

Sci0Result sci0_membership(const DescentProblem& d, const LaurentPoly& g, std::uint64_t seed) {
    if (d.finite || !d.atlas) throw std::invalid_argument("Sci0 membership needs the blow-up problem of an ideal");
    if (g.vars() != d.x_vars) throw std::invalid_argument("variable-list mismatch");
    Sci0Result out;
    std::vector<LaurentPoly> g_tilde;
    for (std::size_t c = 0; c < d.atlas->charts.size(); ++c) {
        LaurentPoly gt = d.atlas->charts[c].pullback(g);
        if (!gt.is_polynomial()) {
            out.obstruction = "g/x^" + LaurentPoly::monomial(d.x_vars, d.atlas->charts[c].e_generator).str() +
                              " has a pole on chart " + std::to_string(c + 1);
            return out;
        }
        g_tilde.push_back(std::move(gt));
    }
    out.member = true;
    for (const auto& z : orbits_by_dimension(d.dim())) {
        StratumReport rep{z, orbit_label(d.x_vars, z), fiber_span_test(d, g_tilde, z, seed)};
        if (rep.result.status == SpanStatus::NotInSpan) out.member = false;
        out.report.push_back(std::move(rep));
    }
    return out;
}

}  // namespace ccclose
