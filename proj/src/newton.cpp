#include "ccclose/newton.hpp"

#include "ccclose/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccclose {

namespace {

std::int64_t dot(const Exponent& a, const Exponent& b) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

Exponent primitive(Exponent v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, std::llabs(x));
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

// Generalized cross product: a vector orthogonal to the n-1 given rows.
Exponent kernel_vector(const std::vector<Exponent>& rows, std::size_t n) {
    Exponent k(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        IntMatrix minor;
        for (const auto& r : rows) {
            std::vector<std::int64_t> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(r[c]);
            minor.push_back(row);
        }
        const std::int64_t d = minor.empty() ? 1 : determinant(minor);
        k[j] = (j % 2 == 0) ? d : -d;
    }
    return k;
}

// Extreme rays of {w : <h, w> >= 0 for all h in normals}, a pointed cone.
std::vector<Exponent> cone_rays(const std::vector<Exponent>& normals, std::size_t n) {
    std::vector<Exponent> rays;
    const std::size_t m = normals.size();
    std::vector<std::size_t> pick(n - 1);
    // Enumerate (n-1)-subsets of the constraint normals.
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(m, n - 1)), true);
    if (m < n - 1) return rays;
    do {
        std::vector<Exponent> rows;
        for (std::size_t k = 0; k < m; ++k)
            if (mask[k]) rows.push_back(normals[k]);
        const Exponent kv = kernel_vector(rows, n);
        if (std::all_of(kv.begin(), kv.end(), [](auto x) { return x == 0; })) continue;
        for (int sign : {1, -1}) {
            Exponent w = kv;
            for (auto& x : w) x *= sign;
            const bool feasible =
                std::all_of(normals.begin(), normals.end(), [&](const Exponent& h) { return dot(h, w) >= 0; });
            if (!feasible) continue;
            w = primitive(w);
            if (std::find(rays.begin(), rays.end(), w) == rays.end()) rays.push_back(w);
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return rays;
}

std::size_t integer_rank(const std::vector<Exponent>& vs) {
    ScalarMatrix m;
    for (const auto& v : vs) {
        std::vector<Scalar> row;
        for (auto x : v) row.emplace_back(static_cast<long>(x));
        m.push_back(row);
    }
    return rank(m);
}

// Orders the rays of a 3-dimensional pointed cone cyclically.
std::vector<Exponent> cyclic_order(std::vector<Exponent> rays) {
    double c[3] = {0, 0, 0};
    for (const auto& r : rays) {
        const double len = std::sqrt(static_cast<double>(dot(r, r)));
        for (int k = 0; k < 3; ++k) c[k] += static_cast<double>(r[k]) / len;
    }
    const double cl = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    for (auto& x : c) x /= cl;
    auto project = [&](const Exponent& r, double out[3]) {
        const double d = r[0] * c[0] + r[1] * c[1] + r[2] * c[2];
        for (int k = 0; k < 3; ++k) out[k] = static_cast<double>(r[k]) - d * c[k];
    };
    double e1[3];
    project(rays.front(), e1);
    const double l1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto& x : e1) x /= l1;
    const double e2[3] = {c[1] * e1[2] - c[2] * e1[1], c[2] * e1[0] - c[0] * e1[2], c[0] * e1[1] - c[1] * e1[0]};
    auto angle = [&](const Exponent& r) {
        double p[3];
        project(r, p);
        double a = std::atan2(p[0] * e2[0] + p[1] * e2[1] + p[2] * e2[2], p[0] * e1[0] + p[1] * e1[1] + p[2] * e1[2]);
        if (a < -1e-12) a += 2 * M_PI;
        return a;
    };
    std::stable_sort(rays.begin(), rays.end(), [&](const Exponent& a, const Exponent& b) { return angle(a) < angle(b); });
    return rays;
}

IntMatrix cone_matrix(const std::vector<Exponent>& rays, const std::vector<std::size_t>& cone) {
    IntMatrix m;
    for (auto k : cone) m.push_back(rays[k]);
    return m;
}

// Coordinates of w in the basis of the cone's rays, exactly.
std::vector<Scalar> cone_coordinates(const std::vector<Exponent>& rays, const std::vector<std::size_t>& cone,
                                     const Exponent& w) {
    const std::size_t n = w.size();
    ScalarMatrix a(n, std::vector<Scalar>(cone.size()));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < cone.size(); ++k) a[j][k] = Scalar(static_cast<long>(rays[cone[k]][j]));
    std::vector<Scalar> b;
    for (auto x : w) b.emplace_back(static_cast<long>(x));
    auto x = solve(a, b);
    if (!x) throw std::logic_error("point outside the span of a full-dimensional cone");
    return *x;
}

bool nonnegative(const std::vector<Scalar>& lambda) {
    return std::all_of(lambda.begin(), lambda.end(), [](const Scalar& s) { return sgn(s.re()) >= 0; });
}

// Smallest (grlex) nonzero lattice point in the half-open fundamental
// parallelepiped of a simplicial cone.
Exponent parallelepiped_point(const std::vector<Exponent>& rays, const std::vector<std::size_t>& cone) {
    const std::size_t n = rays.front().size();
    Exponent upper(n, 0);
    for (auto k : cone)
        for (std::size_t j = 0; j < n; ++j) upper[j] += rays[k][j];
    Exponent best;
    Exponent p(n, 0);
    for (;;) {
        std::size_t j = 0;
        while (j < n && p[j] == upper[j]) p[j++] = 0;
        if (j == n) break;
        ++p[j];
        if (!best.empty() && GrlexLess{}(best, p)) continue;
        const auto lambda = cone_coordinates(rays, cone, p);
        const bool inside = std::all_of(lambda.begin(), lambda.end(), [](const Scalar& s) {
            return sgn(s.re()) >= 0 && s.re() < 1;
        });
        if (inside) best = p;
    }
    if (best.empty()) throw std::logic_error("non-unimodular cone without interior lattice point");
    return best;
}

// Normalized-coordinate key used to order rays: w / |w|_1, descending.
bool ray_before(const Exponent& a, const Exponent& b) {
    const auto sa = total_degree(a);
    const auto sb = total_degree(b);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const mpq_class qa(static_cast<long>(a[k]), static_cast<unsigned long>(sa));
        const mpq_class qb(static_cast<long>(b[k]), static_cast<unsigned long>(sb));
        if (qa != qb) return qa > qb;
    }
    return false;
}

}  // namespace

NewtonPolyhedron newton_polyhedron(const MonomialIdeal& ideal) {
    return newton_polyhedron(ideal.nvars(), ideal.gens());
}

NewtonPolyhedron newton_polyhedron(std::size_t dim, const std::vector<Exponent>& gens) {
    if (gens.empty()) throw std::invalid_argument("the zero ideal has no Newton polyhedron");
    if (dim == 0 || dim > kMaxDimension)
        throw std::invalid_argument("dimension " + std::to_string(dim) + " outside the supported range 1.." +
                                    std::to_string(kMaxDimension));
    NewtonPolyhedron P;
    P.dim = dim;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Exponent& a = gens[i];
        if (a.size() != dim) throw std::invalid_argument("generator arity mismatch");
        if (std::find(P.vertices.begin(), P.vertices.end(), a) != P.vertices.end()) continue;
        std::vector<Exponent> normals;
        for (std::size_t j = 0; j < dim; ++j) {
            Exponent e(dim, 0);
            e[j] = 1;
            normals.push_back(e);
        }
        for (const auto& b : gens)
            if (b != a) normals.push_back(exponent_sub(b, a));
        const auto rays = cone_rays(normals, dim);
        if (integer_rank(rays) == dim) {
            P.vertices.push_back(a);
            P.vertex_generators.push_back(i);
        }
    }
    return P;
}

bool Fan::cone_contains(std::size_t cone, const Exponent& w) const {
    return nonnegative(cone_coordinates(rays, max_cones.at(cone), w));
}

Fan normal_fan(const NewtonPolyhedron& polyhedron) {
    const std::size_t n = polyhedron.dim;
    Fan fan;
    fan.dim = n;
    auto ray_index = [&](const Exponent& r) {
        auto it = std::find(fan.rays.begin(), fan.rays.end(), r);
        if (it != fan.rays.end()) return static_cast<std::size_t>(it - fan.rays.begin());
        fan.rays.push_back(r);
        return fan.rays.size() - 1;
    };

    for (std::size_t v = 0; v < polyhedron.vertices.size(); ++v) {
        const Exponent& a = polyhedron.vertices[v];
        std::vector<Exponent> normals;
        for (std::size_t j = 0; j < n; ++j) {
            Exponent e(n, 0);
            e[j] = 1;
            normals.push_back(e);
        }
        for (const auto& b : polyhedron.vertices)
            if (b != a) normals.push_back(exponent_sub(b, a));
        auto rays = cone_rays(normals, n);
        std::sort(rays.begin(), rays.end(), ray_before);
        if (n == 3 && rays.size() > 3) rays = cyclic_order(rays);
        // Fan triangulation from the first ray; new walls pass through the interior.
        if (rays.size() == n) {
            std::vector<std::size_t> cone;
            for (const auto& r : rays) cone.push_back(ray_index(r));
            fan.max_cones.push_back(cone);
            fan.cone_vertex.push_back(v);
        } else {
            for (std::size_t k = 1; k + 1 < rays.size(); ++k) {
                fan.max_cones.push_back({ray_index(rays[0]), ray_index(rays[k]), ray_index(rays[k + 1])});
                fan.cone_vertex.push_back(v);
            }
        }
    }

    // Stellar subdivision until every cone is unimodular.
    for (;;) {
        std::size_t bad = fan.max_cones.size();
        for (std::size_t c = 0; c < fan.max_cones.size(); ++c)
            if (std::llabs(determinant(cone_matrix(fan.rays, fan.max_cones[c]))) != 1) {
                bad = c;
                break;
            }
        if (bad == fan.max_cones.size()) break;
        const Exponent p = primitive(parallelepiped_point(fan.rays, fan.max_cones[bad]));
        const std::size_t pi = ray_index(p);
        std::vector<std::vector<std::size_t>> cones;
        std::vector<std::size_t> owners;
        for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
            const auto& cone = fan.max_cones[c];
            const auto lambda = cone_coordinates(fan.rays, cone, p);
            if (!nonnegative(lambda)) {
                cones.push_back(cone);
                owners.push_back(fan.cone_vertex[c]);
                continue;
            }
            for (std::size_t k = 0; k < cone.size(); ++k) {
                if (lambda[k].is_zero()) continue;
                auto sub = cone;
                sub[k] = pi;
                cones.push_back(sub);
                owners.push_back(fan.cone_vertex[c]);
            }
        }
        fan.max_cones = std::move(cones);
        fan.cone_vertex = std::move(owners);
    }

    // Canonical numbering.
    std::vector<std::size_t> order(fan.rays.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ray_before(fan.rays[a], fan.rays[b]); });
    std::vector<std::size_t> renumber(fan.rays.size());
    std::vector<Exponent> rays;
    for (std::size_t k = 0; k < order.size(); ++k) {
        renumber[order[k]] = k;
        rays.push_back(fan.rays[order[k]]);
    }
    fan.rays = std::move(rays);
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> keyed;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        auto cone = fan.max_cones[c];
        for (auto& k : cone) k = renumber[k];
        std::sort(cone.begin(), cone.end());
        keyed.emplace_back(fan.cone_vertex[c], cone);
    }
    std::sort(keyed.begin(), keyed.end());
    fan.max_cones.clear();
    fan.cone_vertex.clear();
    for (auto& [v, cone] : keyed) {
        fan.cone_vertex.push_back(v);
        fan.max_cones.push_back(std::move(cone));
    }
    return fan;
}

LaurentPoly Chart::pullback(const LaurentPoly& g) const {
    return monomial_divide(g.substitute(map_to_x), e_pullback);
}

ZeroSet Chart::image_zero_set(const ZeroSet& zero) const {
    const std::size_t n = map_to_x.size();
    ZeroSet out(n, false);
    for (std::size_t k = 0; k < zero.size(); ++k)
        if (zero[k])
            for (std::size_t j = 0; j < n; ++j)
                if (rays[k][j] > 0) out[j] = true;
    return out;
}

ChartAtlas blowup_charts(const MonomialIdeal& ideal) { return blowup_charts(ideal.vars(), ideal.gens()); }

ChartAtlas blowup_charts(const VarList& vars, const std::vector<Exponent>& gens) {
    ChartAtlas atlas;
    atlas.x_vars = vars;
    atlas.gens = gens;
    atlas.polyhedron = newton_polyhedron(vars.size(), gens);
    atlas.fan = normal_fan(atlas.polyhedron);
    const std::size_t n = vars.size();
    VarList coords;
    for (std::size_t k = 0; k < n; ++k) coords.push_back("u" + std::to_string(k + 1));

    for (std::size_t c = 0; c < atlas.fan.max_cones.size(); ++c) {
        Chart chart;
        chart.cone = c;
        chart.coords = coords;
        for (auto k : atlas.fan.max_cones[c]) chart.rays.push_back(atlas.fan.rays[k]);
        for (std::size_t j = 0; j < n; ++j) {
            Exponent e(n);
            for (std::size_t k = 0; k < n; ++k) e[k] = chart.rays[k][j];
            chart.map_to_x.push_back(LaurentPoly::monomial(coords, e));
        }
        const std::size_t v = atlas.fan.cone_vertex[c];
        chart.e_generator = atlas.polyhedron.vertices[v];
        chart.e_index = atlas.polyhedron.vertex_generators[v];
        chart.e_pullback.resize(n);
        for (std::size_t k = 0; k < n; ++k) chart.e_pullback[k] = dot(chart.e_generator, chart.rays[k]);
        for (const auto& a : gens) {
            Exponent e(n);
            for (std::size_t k = 0; k < n; ++k) {
                e[k] = dot(exponent_sub(a, chart.e_generator), chart.rays[k]);
                if (e[k] < 0) throw std::logic_error("selected vertex is not minimal on its cone");
            }
            chart.f_tilde.push_back(LaurentPoly::monomial(coords, e));
        }
        atlas.charts.push_back(std::move(chart));
    }
    return atlas;
}

bool in_vanishing_locus(const std::vector<Exponent>& gens, const ZeroSet& zero) {
    for (const auto& a : gens) {
        bool vanishes = false;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (zero[j] && a[j] > 0) vanishes = true;
        if (!vanishes) return false;
    }
    return true;
}

std::size_t orbit_dimension(const ZeroSet& zero) {
    return static_cast<std::size_t>(std::count(zero.begin(), zero.end(), false));
}

bool orbit_in_closure(const ZeroSet& inner, const ZeroSet& outer) {
    for (std::size_t j = 0; j < outer.size(); ++j)
        if (outer[j] && !inner[j]) return false;
    return true;
}

namespace {

std::vector<ZeroSet> all_zero_sets(std::size_t n) {
    std::vector<ZeroSet> out;
    for (std::size_t size = 0; size <= n; ++size)
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcountll(mask)) != size) continue;
            ZeroSet z(n);
            for (std::size_t j = 0; j < n; ++j) z[j] = (mask >> j) & 1U;
            out.push_back(z);
        }
    // Within a size, order by the earliest zero coordinate first.
    std::stable_sort(out.begin(), out.end(), [](const ZeroSet& a, const ZeroSet& b) {
        const auto ca = std::count(a.begin(), a.end(), true);
        const auto cb = std::count(b.begin(), b.end(), true);
        if (ca != cb) return ca < cb;
        return a > b;
    });
    return out;
}

}  // namespace

std::vector<ZeroSet> vanishing_orbits(const std::vector<Exponent>& gens, std::size_t dim) {
    std::vector<ZeroSet> out;
    for (const auto& z : all_zero_sets(dim))
        if (in_vanishing_locus(gens, z)) out.push_back(z);
    return out;
}

std::vector<Stratum> exceptional_strata(const ChartAtlas& atlas) {
    std::vector<Stratum> out;
    for (std::size_t c = 0; c < atlas.charts.size(); ++c) {
        const Chart& chart = atlas.charts[c];
        for (const auto& z : all_zero_sets(chart.coords.size())) {
            Stratum s;
            s.chart = c;
            s.zero_set = z;
            for (std::size_t k = 0; k < z.size(); ++k)
                if (!z[k]) s.torus_coords.push_back(k);
            s.image_stratum = chart.image_zero_set(z);
            s.exceptional = in_vanishing_locus(atlas.gens, s.image_stratum);
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::string orbit_label(const VarList& vars, const ZeroSet& zero) {
    std::string out;
    for (std::size_t j = 0; j < zero.size(); ++j)
        if (zero[j]) out += (out.empty() ? "" : "=") + vars[j];
    return out.empty() ? "torus" : out + "=0";
}

}  // namespace ccclose
