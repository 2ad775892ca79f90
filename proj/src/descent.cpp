#include "ccclose/descent.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ccclose {

namespace {

LaurentPoly substitute_into(const LaurentPoly& p, const std::vector<LaurentPoly>& images, const VarList& target) {
    if (images.empty()) return LaurentPoly::constant(target, p.coeff(Exponent{}));
    return p.substitute(images);
}

std::vector<LaurentPoly> substitute_all(const std::vector<LaurentPoly>& ps, const std::vector<LaurentPoly>& images,
                                        const VarList& target) {
    std::vector<LaurentPoly> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(substitute_into(p, images, target));
    return out;
}

PolyMatrix substitute_matrix(const PolyMatrix& m, const std::vector<LaurentPoly>& images, const VarList& target) {
    PolyMatrix out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(substitute_all(row, images, target));
    return out;
}

std::vector<LaurentPoly> variables(const VarList& vars) {
    std::vector<LaurentPoly> out;
    for (std::size_t k = 0; k < vars.size(); ++k) out.push_back(LaurentPoly::variable(vars, k));
    return out;
}

PatchMap compose(const PatchMap& outer, const PatchMap& inner, const VarList& coords) {
    // inner: new -> parent, outer: parent -> root.
    return {outer.target, substitute_all(outer.images, inner.images, coords)};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
    return out;
}

std::string poly_list_text(const std::vector<LaurentPoly>& ps) {
    std::vector<std::string> parts;
    for (const auto& p : ps) parts.push_back(p.str());
    return "(" + join(parts, ", ") + ")";
}

std::string matrix_text(const PolyMatrix& m) {
    std::vector<std::string> rows;
    for (const auto& r : m) rows.push_back(poly_list_text(r));
    return "[" + join(rows, "; ") + "]";
}

std::string matrix_text(const ScalarMatrix& m) {
    std::vector<std::string> rows;
    for (const auto& r : m) {
        std::vector<std::string> cells;
        for (const auto& c : r) cells.push_back(c.str());
        rows.push_back("(" + join(cells, ", ") + ")");
    }
    return "[" + join(rows, "; ") + "]";
}

std::string chart_map_text(const ChartMap& m) {
    std::vector<std::string> parts;
    for (std::size_t q = 0; q < m.maps.size(); ++q) {
        std::string s = m.labels[q] + "{" + join(m.coords[q], ",") + "}";
        if (!m.relations[q].empty()) s += " rel " + poly_list_text(m.relations[q]);
        s += " -> " + std::to_string(m.maps[q].target) + " " + poly_list_text(m.maps[q].images);
        parts.push_back(s);
    }
    return join(parts, " | ");
}

std::string finite_map_text(const FiniteMap& m) {
    std::vector<std::string> parts;
    for (auto t : m) parts.push_back(std::to_string(t));
    return "[" + join(parts, ",") + "]";
}

std::string map_text(const std::variant<ChartMap, FiniteMap>& m) {
    if (const auto* c = std::get_if<ChartMap>(&m)) return chart_map_text(*c);
    return finite_map_text(std::get<FiniteMap>(m));
}

void check_regular(const Patch& p) {
    for (const auto& row : p.f)
        for (const auto& e : row)
            if (!e.is_polynomial()) throw DescentError("f has a pole on patch " + p.label);
}

void validate_chart_map(const DescentProblem& d, const ChartMap& m) {
    if (m.labels.size() != m.maps.size() || m.coords.size() != m.maps.size() || m.relations.size() != m.maps.size())
        throw DescentError("chart map has inconsistent sizes");
    for (std::size_t q = 0; q < m.maps.size(); ++q) {
        const PatchMap& pm = m.maps[q];
        if (pm.target >= d.patches.size()) throw DescentError("chart map targets a missing patch");
        const Patch& target = d.patches[pm.target];
        if (pm.images.size() != target.coords.size())
            throw DescentError("chart map has the wrong arity for patch " + target.label);
        for (const auto& im : pm.images) {
            if (im.vars() != m.coords[q]) throw DescentError("chart map images use foreign coordinates");
            if (!im.is_polynomial()) throw DescentError("chart map is not regular");
        }
        for (const auto& rel : m.relations[q])
            if (rel.vars() != m.coords[q]) throw DescentError("relation uses foreign coordinates");
        // The image must satisfy the target's equations.
        for (const auto& rel : target.relations) {
            const LaurentPoly pulled = substitute_into(rel, pm.images, m.coords[q]);
            if (pulled.is_zero()) continue;
            bool declared = false;
            for (const auto& own : m.relations[q]) {
                if (own.is_zero()) continue;
                const Scalar ratio = pulled.leading().second / own.leading().second;
                if (own.scaled(ratio) == pulled) declared = true;
            }
            if (!declared) throw DescentError("chart map does not land in patch " + target.label);
        }
    }
}

bool covers(std::size_t targets, const std::vector<std::size_t>& hits) {
    std::vector<bool> seen(targets, false);
    for (auto t : hits)
        if (t < targets) seen[t] = true;
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::vector<std::size_t> chart_targets(const ChartMap& m) {
    std::vector<std::size_t> out;
    for (const auto& pm : m.maps) out.push_back(pm.target);
    return out;
}

ZeroSet zero_pattern(const std::vector<Scalar>& point) {
    ZeroSet z;
    for (const auto& c : point) z.push_back(c.is_zero());
    return z;
}

std::shared_ptr<const ScionNode> make_node(const DescentProblem& parent, ScionKind kind, ScionArgs args,
                                           bool surjective, std::string justification, std::string witness = {}) {
    auto node = std::make_shared<ScionNode>();
    node->kind = kind;
    node->parent = parent.provenance;
    node->args = std::move(args);
    node->structure_map_surjective = surjective;
    node->justification = std::move(justification);
    node->witness = std::move(witness);
    return node;
}

std::string base_label(const std::string& label) { return label.substr(0, label.find('|')); }

// Minimal coordinate sets B such that setting u_B = 0 sends the patch into the
// closure of the X-orbit with zero set `a`.
std::vector<std::vector<bool>> minimal_hitting_sets(const Patch& p, const ZeroSet& a) {
    const std::size_t m = p.coords.size();
    if (m > 20) throw DescentError("too many coordinates to restrict patch " + p.label);
    std::vector<std::vector<bool>> supports;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (!a[j]) continue;
        const LaurentPoly& xj = p.map_to_x[j];
        if (xj.is_zero()) continue;
        if (!xj.is_monomial()) throw DescentError("restriction needs monomial maps to X on patch " + p.label);
        const Exponent& e = xj.terms().begin()->first;
        std::vector<bool> s(m, false);
        bool any = false;
        for (std::size_t k = 0; k < m; ++k)
            if (e[k] > 0) s[k] = any = true;
        if (!any) return {};  // a nonzero constant never vanishes
        supports.push_back(std::move(s));
    }
    std::vector<std::vector<bool>> found;
    for (std::size_t size = 0; size <= m; ++size)
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcountll(mask)) != size) continue;
            bool contains_found = false;
            for (const auto& f : found) {
                bool sub = true;
                for (std::size_t k = 0; k < m; ++k)
                    if (f[k] && !((mask >> k) & 1U)) sub = false;
                if (sub) contains_found = true;
            }
            if (contains_found) continue;
            bool hits = true;
            for (const auto& s : supports) {
                bool h = false;
                for (std::size_t k = 0; k < m; ++k)
                    if (s[k] && ((mask >> k) & 1U)) h = true;
                if (!h) hits = false;
            }
            if (!hits) continue;
            std::vector<bool> b(m);
            for (std::size_t k = 0; k < m; ++k) b[k] = (mask >> k) & 1U;
            found.push_back(std::move(b));
        }
    return found;
}

}  // namespace

// ---------------------------------------------------------------------------
// ClosedSubset

ClosedSubset ClosedSubset::parse(std::string_view equations, const VarList& vars) {
    ClosedSubset out = whole(vars.size());
    for (const auto& eq : parse_poly_list(equations, vars)) {
        if (eq.is_zero()) continue;
        if (!eq.is_monomial() || !eq.is_polynomial())
            throw DescentError("closed subset is not orbit-closed: " + eq.str());
        const Exponent& e = eq.terms().begin()->first;
        ClosedSubset next;
        for (const auto& a : out.orbits)
            for (std::size_t j = 0; j < e.size(); ++j)
                if (e[j] > 0) {
                    ZeroSet b = a;
                    b[j] = true;
                    next.orbits.push_back(std::move(b));
                }
        out = next.normalized();
    }
    return out;
}

bool ClosedSubset::contains(const ZeroSet& point_zero) const {
    return std::any_of(orbits.begin(), orbits.end(),
                       [&](const ZeroSet& a) { return orbit_in_closure(point_zero, a); });
}

ClosedSubset ClosedSubset::intersect(const ClosedSubset& other) const {
    ClosedSubset out;
    for (const auto& a : orbits)
        for (const auto& b : other.orbits) {
            if (a.size() != b.size()) throw DescentError("closed subsets of different spaces");
            ZeroSet c(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) c[j] = a[j] || b[j];
            out.orbits.push_back(std::move(c));
        }
    return out.normalized();
}

ClosedSubset ClosedSubset::normalized() const {
    ClosedSubset out;
    for (std::size_t k = 0; k < orbits.size(); ++k) {
        bool dominated = false;
        for (std::size_t l = 0; l < orbits.size(); ++l) {
            if (l == k) continue;
            // Orbit l's closure contains orbit k's when l's zeros are a subset.
            if (orbit_in_closure(orbits[k], orbits[l]) && (orbits[k] != orbits[l] || l < k)) dominated = true;
        }
        if (!dominated) out.orbits.push_back(orbits[k]);
    }
    std::sort(out.orbits.begin(), out.orbits.end());
    return out;
}

std::string ClosedSubset::str(const VarList& vars) const {
    if (orbits.empty()) return "empty";
    std::vector<std::string> parts;
    for (const auto& a : orbits) parts.push_back(std::count(a.begin(), a.end(), true) ? orbit_label(vars, a) : "X");
    return join(parts, " u ");
}

std::vector<std::size_t> FiniteModel::fiber(std::size_t base) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < points.size(); ++k)
        if (points[k].base == base) out.push_back(k);
    return out;
}

const char* to_string(ScionKind kind) {
    switch (kind) {
        case ScionKind::Root: return "root";
        case ScionKind::Pullback: return "pullback";
        case ScionKind::Diagonal: return "diagonal";
        case ScionKind::Factor: return "factor";
        case ScionKind::Restrict: return "restrict";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Roots

DescentProblem from_ideal(const MonomialIdeal& ideal) { return from_ideal(ideal.vars(), ideal.gens()); }

DescentProblem from_ideal(const VarList& vars, const std::vector<Exponent>& gens) {
    if (vars.empty() || vars.size() > kMaxDimension)
        throw DescentError("ambient dimension " + std::to_string(vars.size()) + " is outside 1.." +
                           std::to_string(kMaxDimension));
    if (gens.empty()) throw DescentError("the zero ideal has no blow-up");
    auto atlas = std::make_shared<ChartAtlas>(blowup_charts(vars, gens));
    DescentProblem d;
    d.x_vars = vars;
    d.rank_e = gens.size();
    d.z = ClosedSubset::whole(vars.size());
    for (std::size_t c = 0; c < atlas->charts.size(); ++c) {
        const Chart& chart = atlas->charts[c];
        Patch p;
        p.label = "chart" + std::to_string(c + 1);
        p.coords = chart.coords;
        p.map_to_x = chart.map_to_x;
        for (const auto& ft : chart.f_tilde) p.f.push_back({ft});
        p.frames = {chart.e_generator};
        p.to_parent = {c, variables(chart.coords)};
        p.to_root = p.to_parent;
        p.lineage = c;
        p.dropped.assign(chart.coords.size(), false);
        d.patches.push_back(std::move(p));
    }
    d.atlas = atlas;
    auto node = std::make_shared<ScionNode>();
    node->args = RootIdealArgs{vars, gens};
    node->justification = "blow-up of the ideal, proper and birational";
    d.provenance = node;
    return d;
}

DescentProblem from_finite_model(const VarList& vars, std::size_t rank_e, FiniteModel model) {
    for (std::size_t k = 0; k < model.points.size(); ++k) {
        auto& pt = model.points[k];
        if (pt.base >= model.base_points.size()) throw DescentError("point " + pt.label + " has no base point");
        if (pt.f.size() != rank_e) throw DescentError("point " + pt.label + " has the wrong number of f rows");
        for (const auto& row : pt.f)
            if (row.size() != pt.f.front().size()) throw DescentError("ragged f matrix at " + pt.label);
        pt.parent = pt.root = k;
    }
    for (const auto& b : model.base_points)
        if (b.size() != vars.size()) throw DescentError("base point of the wrong dimension");
    DescentProblem d;
    d.x_vars = vars;
    d.rank_e = rank_e;
    d.z = ClosedSubset::whole(vars.size());
    d.finite = true;
    d.model = model;
    auto node = std::make_shared<ScionNode>();
    node->args = RootFiniteArgs{vars, rank_e, std::move(model)};
    node->justification = "finite model";
    d.provenance = node;
    return d;
}

// ---------------------------------------------------------------------------
// Scion operations

DescentProblem scion_pullback(const DescentProblem& d, const std::variant<ChartMap, FiniteMap>& map) {
    DescentProblem out = d;
    if (!d.finite) {
        const auto* m = std::get_if<ChartMap>(&map);
        if (!m) throw DescentError("chart model needs a chart map");
        validate_chart_map(d, *m);
        if (!covers(d.patches.size(), chart_targets(*m))) throw DescentError("map does not cover every target patch");
        out.patches.clear();
        for (std::size_t q = 0; q < m->maps.size(); ++q) {
            const Patch& t = d.patches[m->maps[q].target];
            const VarList& coords = m->coords[q];
            Patch p;
            p.label = m->labels[q];
            p.coords = coords;
            p.relations = m->relations[q];
            p.map_to_x = substitute_all(t.map_to_x, m->maps[q].images, coords);
            p.f = substitute_matrix(t.f, m->maps[q].images, coords);
            p.frames = t.frames;
            p.to_parent = m->maps[q];
            p.to_root = compose(t.to_root, m->maps[q], coords);
            p.lineage = q;
            p.dropped.assign(coords.size(), false);
            check_regular(p);
            out.patches.push_back(std::move(p));
        }
    } else {
        const auto* m = std::get_if<FiniteMap>(&map);
        if (!m) throw DescentError("finite model needs a point map");
        if (!covers(d.model.points.size(), *m)) throw DescentError("map is not surjective onto the points");
        out.model.points.clear();
        for (auto t : *m) {
            FinitePoint pt = d.model.points[t];
            pt.parent = t;
            out.model.points.push_back(std::move(pt));
        }
    }
    out.provenance =
        make_node(d, ScionKind::Pullback, PullbackArgs{map}, true, d.finite ? "surjective on points" : "covers every patch");
    return out;
}

DescentProblem scion_diagonal(const DescentProblem& d, const std::vector<std::variant<ChartMap, FiniteMap>>& maps) {
    if (maps.empty()) throw DescentError("diagonal needs at least one map");
    DescentProblem out = d;
    bool surjective = false;
    if (!d.finite) {
        std::vector<const ChartMap*> ms;
        for (const auto& v : maps) {
            const auto* m = std::get_if<ChartMap>(&v);
            if (!m) throw DescentError("chart model needs chart maps");
            validate_chart_map(d, *m);
            if (m->maps.size() != std::get<ChartMap>(maps[0]).maps.size() ||
                m->coords != std::get<ChartMap>(maps[0]).coords)
                throw DescentError("diagonal maps must share their source");
            ms.push_back(m);
        }
        surjective = covers(d.patches.size(), chart_targets(*ms[0]));
        out.patches.clear();
        const ChartMap& first = *ms[0];
        for (std::size_t q = 0; q < first.maps.size(); ++q) {
            const VarList& coords = first.coords[q];
            Patch p;
            p.label = first.labels[q];
            p.coords = coords;
            p.relations = first.relations[q];
            for (std::size_t a = 0; a < ms.size(); ++a) {
                const PatchMap& pm = ms[a]->maps[q];
                const Patch& t = d.patches[pm.target];
                auto to_x = substitute_all(t.map_to_x, pm.images, coords);
                if (a == 0) {
                    p.map_to_x = to_x;
                } else if (to_x != p.map_to_x) {
                    throw DescentError("composite mismatch on patch " + p.label);
                }
                auto fa = substitute_matrix(t.f, pm.images, coords);
                if (p.f.empty()) p.f.resize(fa.size());
                for (std::size_t i = 0; i < fa.size(); ++i)
                    p.f[i].insert(p.f[i].end(), fa[i].begin(), fa[i].end());
                p.frames.insert(p.frames.end(), t.frames.begin(), t.frames.end());
            }
            const Patch& t0 = d.patches[first.maps[q].target];
            p.to_parent = first.maps[q];
            p.to_root = compose(t0.to_root, first.maps[q], coords);
            p.lineage = q;
            p.dropped.assign(coords.size(), false);
            check_regular(p);
            out.patches.push_back(std::move(p));
        }
    } else {
        std::vector<const FiniteMap*> ms;
        for (const auto& v : maps) {
            const auto* m = std::get_if<FiniteMap>(&v);
            if (!m) throw DescentError("finite model needs point maps");
            if (m->size() != std::get<FiniteMap>(maps[0]).size()) throw DescentError("diagonal maps must share their source");
            for (auto t : *m)
                if (t >= d.model.points.size()) throw DescentError("point map targets a missing point");
            ms.push_back(m);
        }
        surjective = covers(d.model.points.size(), *ms[0]);
        out.model.points.clear();
        for (std::size_t q = 0; q < ms[0]->size(); ++q) {
            FinitePoint pt;
            std::vector<std::string> labels;
            for (std::size_t a = 0; a < ms.size(); ++a) {
                const FinitePoint& t = d.model.points[(*ms[a])[q]];
                if (a == 0) {
                    pt.base = t.base;
                    pt.f.resize(t.f.size());
                    pt.parent = (*ms[a])[q];
                    pt.root = t.root;
                } else if (t.base != pt.base) {
                    throw DescentError("composite mismatch at new point " + std::to_string(q));
                }
                for (std::size_t i = 0; i < t.f.size(); ++i) pt.f[i].insert(pt.f[i].end(), t.f[i].begin(), t.f[i].end());
                labels.push_back(t.label);
            }
            pt.label = "(" + join(labels, ",") + ")";
            out.model.points.push_back(std::move(pt));
        }
    }
    out.provenance = make_node(d, ScionKind::Diagonal, DiagonalArgs{maps}, surjective,
                               surjective ? "first projection is surjective" : "first projection misses pieces");
    return out;
}

DescentProblem scion_factor(const DescentProblem& d, const FactorData& data) {
    DescentProblem out = d;
    std::string witness;
    if (!d.finite) {
        if (data.patch_j.size() != d.patches.size()) throw DescentError("factor needs one embedding per patch");
        if (data.witness_piece >= d.patches.size()) throw DescentError("rank witness names a missing patch");
        for (std::size_t q = 0; q < d.patches.size(); ++q) {
            const Patch& p = d.patches[q];
            const PolyMatrix& j = data.patch_j[q];
            const std::size_t s = p.rank_f();
            for (const auto& row : j) {
                if (row.size() != s) throw DescentError("embedding has the wrong shape on patch " + p.label);
                for (const auto& e : row)
                    if (e.vars() != p.coords || !e.is_polynomial())
                        throw DescentError("embedding is not regular on patch " + p.label);
            }
            const std::size_t sp = j.size();
            if (rank(j) != sp) throw DescentError("embedding is not injective on patch " + p.label);
            PolyMatrix jt(s, std::vector<LaurentPoly>(sp, LaurentPoly(p.coords)));
            for (std::size_t a = 0; a < sp; ++a)
                for (std::size_t b = 0; b < s; ++b) jt[b][a] = j[a][b];
            PolyMatrix q_matrix;
            for (const auto& frow : p.f) {
                auto sol = solve_parametric(jt, frow);
                if (!sol) throw DescentError("f does not factor through the embedding on patch " + p.label);
                std::vector<LaurentPoly> qrow;
                for (const auto& rf : *sol) {
                    auto l = rf.as_laurent();
                    if (!l || !l->is_polynomial())
                        throw DescentError("factored map is not regular on patch " + p.label);
                    qrow.push_back(*l);
                }
                for (std::size_t b = 0; b < s; ++b) {
                    LaurentPoly acc(p.coords);
                    for (std::size_t a = 0; a < sp; ++a) acc += qrow[a] * j[a][b];
                    if (acc != frow[b]) throw DescentError("factorization fails on patch " + p.label);
                }
                q_matrix.push_back(std::move(qrow));
            }
            out.patches[q].f = std::move(q_matrix);
            out.patches[q].frames.clear();
        }
        const Patch& wp = d.patches[data.witness_piece];
        if (data.witness_point.size() != wp.coords.size()) throw DescentError("rank witness has the wrong arity");
        for (const auto& rel : wp.relations)
            if (!rel.eval(data.witness_point).is_zero()) throw DescentError("rank witness is not on the patch");
        if (std::any_of(data.witness_point.begin(), data.witness_point.end(), [](const Scalar& c) { return c.is_zero(); }))
            throw DescentError("rank witness is not in the dense torus");
        const PolyMatrix& j = data.patch_j[data.witness_piece];
        ScalarMatrix jv;
        for (const auto& row : j) {
            std::vector<Scalar> r;
            for (const auto& e : row) r.push_back(e.eval(data.witness_point));
            jv.push_back(std::move(r));
        }
        if (rank(jv) != j.size()) throw DescentError("rank witness invalid");
        std::vector<std::string> cells;
        for (const auto& c : data.witness_point) cells.push_back(c.str());
        witness = wp.label + " at (" + join(cells, ", ") + ")";
    } else {
        if (data.point_j.size() != d.model.points.size()) throw DescentError("factor needs one embedding per point");
        if (data.witness_piece >= d.model.points.size()) throw DescentError("rank witness names a missing point");
        for (std::size_t q = 0; q < d.model.points.size(); ++q) {
            const FinitePoint& pt = d.model.points[q];
            const ScalarMatrix& j = data.point_j[q];
            const std::size_t s = pt.f.empty() ? 0 : pt.f.front().size();
            for (const auto& row : j)
                if (row.size() != s) throw DescentError("embedding has the wrong shape at " + pt.label);
            if (rank(j) != j.size()) throw DescentError("embedding is not injective at " + pt.label);
            const ScalarMatrix jt = transpose(j);
            ScalarMatrix q_matrix;
            for (const auto& frow : pt.f) {
                auto sol = j.empty() ? std::optional<std::vector<Scalar>>(std::vector<Scalar>{}) : solve(jt, frow);
                if (!sol) throw DescentError("f does not factor through the embedding at " + pt.label);
                for (std::size_t b = 0; b < s; ++b) {
                    Scalar acc;
                    for (std::size_t a = 0; a < j.size(); ++a) acc += (*sol)[a] * j[a][b];
                    if (acc != frow[b]) throw DescentError("factorization fails at " + pt.label);
                }
                q_matrix.push_back(*sol);
            }
            out.model.points[q].f = std::move(q_matrix);
        }
        witness = "point " + d.model.points[data.witness_piece].label;
    }
    out.provenance = make_node(d, ScionKind::Factor, FactorArgs{data}, true, "structure map is the identity", witness);
    return out;
}

DescentProblem restrict_to(const DescentProblem& d, const ClosedSubset& z) {
    for (const auto& a : z.orbits)
        if (a.size() != d.dim()) throw DescentError("closed subset lives in a different space");
    const ClosedSubset zn = z.normalized();
    DescentProblem out = d;
    out.z = d.z.intersect(zn);
    if (!d.finite) {
        struct Candidate {
            std::size_t lineage;
            ZeroSet dropped;
            std::size_t source;
            std::vector<bool> local;
        };
        std::vector<Candidate> cands;
        for (std::size_t q = 0; q < d.patches.size(); ++q) {
            const Patch& p = d.patches[q];
            for (const auto& a : zn.orbits)
                for (const auto& b : minimal_hitting_sets(p, a)) {
                    Candidate c{p.lineage, p.dropped, q, b};
                    std::size_t k = 0;
                    for (std::size_t t = 0; t < c.dropped.size(); ++t)
                        if (!c.dropped[t]) {
                            if (b[k]) c.dropped[t] = true;
                            ++k;
                        }
                    cands.push_back(std::move(c));
                }
        }
        std::vector<Candidate> kept;
        for (std::size_t k = 0; k < cands.size(); ++k) {
            bool dominated = false;
            for (std::size_t l = 0; l < cands.size() && !dominated; ++l) {
                if (l == k || cands[l].lineage != cands[k].lineage) continue;
                const bool sub = orbit_in_closure(cands[k].dropped, cands[l].dropped);
                if (sub && (cands[l].dropped != cands[k].dropped || l < k)) dominated = true;
            }
            if (!dominated) kept.push_back(cands[k]);
        }
        std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
            return std::tie(a.lineage, a.dropped) < std::tie(b.lineage, b.dropped);
        });
        out.patches.clear();
        for (const auto& c : kept) {
            const Patch& p = d.patches[c.source];
            VarList coords;
            for (std::size_t k = 0; k < p.coords.size(); ++k)
                if (!c.local[k]) coords.push_back(p.coords[k]);
            std::vector<LaurentPoly> images;
            std::size_t next = 0;
            for (std::size_t k = 0; k < p.coords.size(); ++k)
                images.push_back(c.local[k] ? LaurentPoly(coords) : LaurentPoly::variable(coords, next++));
            Patch np;
            np.coords = coords;
            bool empty = false;
            for (const auto& rel : p.relations) {
                LaurentPoly r = substitute_into(rel, images, coords);
                if (r.is_zero()) continue;
                if (r.is_constant()) empty = true;
                np.relations.push_back(std::move(r));
            }
            if (empty) continue;
            np.map_to_x = substitute_all(p.map_to_x, images, coords);
            np.f = substitute_matrix(p.f, images, coords);
            np.frames = p.frames;
            np.to_parent = {c.source, images};
            np.to_root = compose(p.to_root, np.to_parent, coords);
            np.lineage = c.lineage;
            np.dropped = c.dropped;
            // Names of the dropped coordinates come from the lineage patch,
            // which keeps them in order around the surviving ones.
            std::vector<std::string> zero_names;
            {
                std::size_t k = 0;
                for (std::size_t t = 0; t < p.dropped.size(); ++t) {
                    if (p.dropped[t]) continue;
                    if (c.local[k]) zero_names.push_back(p.coords[k]);
                    ++k;
                }
            }
            const auto bar = p.label.find('|');
            std::vector<std::string> all_zero;
            if (bar != std::string::npos) {
                std::string rest = p.label.substr(bar + 1);
                std::stringstream ss(rest);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) all_zero.push_back(item);
            }
            all_zero.insert(all_zero.end(), zero_names.begin(), zero_names.end());
            std::sort(all_zero.begin(), all_zero.end());
            np.label = base_label(p.label) + (all_zero.empty() ? "" : "|" + join(all_zero, ","));
            out.patches.push_back(std::move(np));
        }
    } else {
        out.model.points.clear();
        for (std::size_t q = 0; q < d.model.points.size(); ++q) {
            const FinitePoint& pt = d.model.points[q];
            if (!zn.contains(zero_pattern(d.model.base_points[pt.base]))) continue;
            FinitePoint np = pt;
            np.parent = q;
            out.model.points.push_back(std::move(np));
        }
    }
    out.provenance = make_node(d, ScionKind::Restrict, RestrictArgs{zn}, true, "reduced preimage of the subset");
    return out;
}

// ---------------------------------------------------------------------------
// Helpers building maps

std::variant<ChartMap, FiniteMap> identity_map(const DescentProblem& d) {
    if (d.finite) {
        FiniteMap m(d.model.points.size());
        std::iota(m.begin(), m.end(), std::size_t{0});
        return m;
    }
    ChartMap m;
    for (std::size_t q = 0; q < d.patches.size(); ++q) {
        const Patch& p = d.patches[q];
        m.labels.push_back(p.label);
        m.coords.push_back(p.coords);
        m.relations.push_back(p.relations);
        m.maps.push_back({q, variables(p.coords)});
    }
    return m;
}

std::vector<std::variant<ChartMap, FiniteMap>> fiber_power_projections(const DescentProblem& d, std::size_t m) {
    if (m == 0) throw DescentError("fiber power needs m >= 1");
    std::vector<std::vector<std::size_t>> tuples;
    if (d.finite) {
        for (std::size_t b = 0; b < d.model.base_points.size(); ++b) {
            const auto fib = d.model.fiber(b);
            if (fib.empty()) continue;
            std::vector<std::size_t> idx(m, 0);
            while (true) {
                std::vector<std::size_t> t;
                for (auto k : idx) t.push_back(fib[k]);
                tuples.push_back(std::move(t));
                std::size_t pos = m;
                while (pos > 0 && ++idx[pos - 1] == fib.size()) idx[--pos] = 0;
                if (pos == 0) break;
            }
        }
        std::vector<std::variant<ChartMap, FiniteMap>> out;
        for (std::size_t a = 0; a < m; ++a) {
            FiniteMap fm;
            for (const auto& t : tuples) fm.push_back(t[a]);
            out.emplace_back(std::move(fm));
        }
        return out;
    }
    for (const auto& p : d.patches)
        for (const auto& x : p.map_to_x)
            if (!x.is_zero() && !x.is_constant())
                throw DescentError("fiber powers of chart models need a point base; patch " + p.label + " moves");
    auto base_of = [&](const Patch& p) {
        std::vector<Scalar> v;
        for (const auto& x : p.map_to_x) v.push_back(x.coeff(Exponent(p.coords.size(), 0)));
        return v;
    };
    const std::size_t np = d.patches.size();
    if (np == 0) return std::vector<std::variant<ChartMap, FiniteMap>>(m, ChartMap{});
    std::vector<std::size_t> idx(m, 0);
    while (true) {
        bool same = true;
        for (std::size_t a = 1; a < m; ++a)
            if (base_of(d.patches[idx[a]]) != base_of(d.patches[idx[0]])) same = false;
        if (same) tuples.push_back(idx);
        std::size_t pos = m;
        while (pos > 0 && ++idx[pos - 1] == np) idx[--pos] = 0;
        if (pos == 0) break;
    }
    std::vector<ChartMap> maps(m);
    for (const auto& t : tuples) {
        VarList coords;
        std::vector<std::string> labels;
        for (std::size_t a = 0; a < m; ++a) {
            for (const auto& c : d.patches[t[a]].coords) coords.push_back(c + "_" + std::to_string(a + 1));
            labels.push_back(d.patches[t[a]].label);
        }
        std::vector<LaurentPoly> relations;
        std::vector<std::vector<LaurentPoly>> blocks;
        std::size_t offset = 0;
        for (std::size_t a = 0; a < m; ++a) {
            std::vector<LaurentPoly> block;
            for (std::size_t k = 0; k < d.patches[t[a]].coords.size(); ++k)
                block.push_back(LaurentPoly::variable(coords, offset + k));
            offset += d.patches[t[a]].coords.size();
            for (const auto& rel : d.patches[t[a]].relations) relations.push_back(substitute_into(rel, block, coords));
            blocks.push_back(std::move(block));
        }
        for (std::size_t a = 0; a < m; ++a) {
            maps[a].labels.push_back("(" + join(labels, ",") + ")");
            maps[a].coords.push_back(coords);
            maps[a].relations.push_back(relations);
            maps[a].maps.push_back({t[a], blocks[a]});
        }
    }
    return {maps.begin(), maps.end()};
}

DescentProblem fiber_power(const DescentProblem& d, std::size_t m) {
    return scion_diagonal(d, fiber_power_projections(d, m));
}

FactorData rank_one_factorization(const DescentProblem& d) {
    if (!d.finite) throw DescentError("rank-one detection runs on finite models");
    FactorData data;
    std::optional<std::size_t> witness;
    for (const auto& pt : d.model.points) {
        const std::size_t s = pt.f.empty() ? 0 : pt.f.front().size();
        std::optional<std::vector<Scalar>> line;
        for (const auto& row : pt.f)
            if (std::any_of(row.begin(), row.end(), [](const Scalar& c) { return !c.is_zero(); })) {
                line = row;
                break;
            }
        for (std::size_t a = 0; a < pt.f.size(); ++a)
            for (std::size_t b = a + 1; b < pt.f.size(); ++b)
                for (std::size_t k = 0; k < s; ++k)
                    for (std::size_t l = k + 1; l < s; ++l)
                        if (pt.f[a][k] * pt.f[b][l] != pt.f[a][l] * pt.f[b][k])
                            throw DescentError("f has rank above one at " + pt.label);
        if (!line) {
            if (s == 0) throw DescentError("no line inside a zero-dimensional fiber at " + pt.label);
            line = std::vector<Scalar>(s, Scalar(0));
            (*line)[0] = 1;
        } else if (!witness) {
            witness = data.point_j.size();
        }
        data.point_j.push_back({*line});
    }
    data.witness_piece = witness.value_or(0);
    return data;
}

DescentProblem flat_pullback(const DescentProblem& d, const std::vector<std::size_t>& base_map) {
    if (!d.finite) throw DescentError("flat base change is implemented for finite models");
    FiniteModel m;
    for (std::size_t b = 0; b < base_map.size(); ++b) {
        if (base_map[b] >= d.model.base_points.size()) throw DescentError("base map targets a missing base point");
        m.base_points.push_back(d.model.base_points[base_map[b]]);
        for (auto k : d.model.fiber(base_map[b])) {
            FinitePoint pt = d.model.points[k];
            pt.base = b;
            m.points.push_back(std::move(pt));
        }
    }
    DescentProblem out = from_finite_model(d.x_vars, d.rank_e, std::move(m));
    out.z = d.z;
    return out;
}

bool same_data(const DescentProblem& a, const DescentProblem& b) {
    if (a.x_vars != b.x_vars || a.rank_e != b.rank_e || a.finite != b.finite || a.z != b.z) return false;
    if (a.finite) {
        if (a.model.base_points != b.model.base_points || a.model.points.size() != b.model.points.size()) return false;
        for (std::size_t k = 0; k < a.model.points.size(); ++k)
            if (a.model.points[k].base != b.model.points[k].base || a.model.points[k].f != b.model.points[k].f)
                return false;
        return true;
    }
    if (a.patches.size() != b.patches.size()) return false;
    for (std::size_t k = 0; k < a.patches.size(); ++k) {
        const Patch& p = a.patches[k];
        const Patch& q = b.patches[k];
        if (p.coords != q.coords || p.relations != q.relations || p.map_to_x != q.map_to_x || p.f != q.f ||
            p.frames != q.frames)
            return false;
    }
    return true;
}

DescentProblem replay(const ScionNode& node) {
    return std::visit(
        [&](const auto& args) -> DescentProblem {
            using T = std::decay_t<decltype(args)>;
            if constexpr (std::is_same_v<T, RootIdealArgs>) {
                return from_ideal(args.vars, args.gens);
            } else if constexpr (std::is_same_v<T, RootFiniteArgs>) {
                return from_finite_model(args.vars, args.rank_e, args.model);
            } else {
                if (!node.parent) throw DescentError("provenance node without parent");
                const DescentProblem parent = replay(*node.parent);
                if constexpr (std::is_same_v<T, PullbackArgs>) return scion_pullback(parent, args.map);
                if constexpr (std::is_same_v<T, DiagonalArgs>) return scion_diagonal(parent, args.maps);
                if constexpr (std::is_same_v<T, FactorArgs>) return scion_factor(parent, args.data);
                if constexpr (std::is_same_v<T, RestrictArgs>) return restrict_to(parent, args.z);
            }
        },
        node.args);
}

std::string provenance_dump(const ScionNode& node) {
    std::vector<const ScionNode*> chain;
    for (const ScionNode* n = &node; n; n = n->parent.get()) chain.push_back(n);
    std::reverse(chain.begin(), chain.end());
    VarList vars;
    std::ostringstream out;
    for (std::size_t depth = 0; depth < chain.size(); ++depth) {
        const ScionNode& n = *chain[depth];
        out << depth << ' ' << to_string(n.kind) << ' ';
        std::visit(
            [&](const auto& args) {
                using T = std::decay_t<decltype(args)>;
                if constexpr (std::is_same_v<T, RootIdealArgs>) {
                    vars = args.vars;
                    std::vector<std::string> gens;
                    for (const auto& g : args.gens) gens.push_back(LaurentPoly::monomial(args.vars, g).str());
                    out << "ideal vars=" << join(args.vars, ",") << " gens=" << join(gens, ",");
                } else if constexpr (std::is_same_v<T, RootFiniteArgs>) {
                    vars = args.vars;
                    out << "finite vars=" << join(args.vars, ",") << " r=" << args.rank_e << " base=";
                    std::vector<std::string> bases;
                    for (const auto& b : args.model.base_points) {
                        std::vector<std::string> cells;
                        for (const auto& c : b) cells.push_back(c.str());
                        bases.push_back("(" + join(cells, ",") + ")");
                    }
                    out << join(bases, ",") << " points=";
                    std::vector<std::string> pts;
                    for (const auto& p : args.model.points)
                        pts.push_back(p.label + "@" + std::to_string(p.base) + matrix_text(p.f));
                    out << join(pts, " ");
                } else if constexpr (std::is_same_v<T, PullbackArgs>) {
                    out << map_text(args.map);
                } else if constexpr (std::is_same_v<T, DiagonalArgs>) {
                    std::vector<std::string> parts;
                    for (const auto& m : args.maps) parts.push_back("<" + map_text(m) + ">");
                    out << join(parts, " ");
                } else if constexpr (std::is_same_v<T, FactorArgs>) {
                    std::vector<std::string> parts;
                    for (const auto& j : args.data.patch_j) parts.push_back(matrix_text(j));
                    for (const auto& j : args.data.point_j) parts.push_back(matrix_text(j));
                    out << "j=" << join(parts, " ") << " witness=" << n.witness;
                } else if constexpr (std::is_same_v<T, RestrictArgs>) {
                    out << "Z=" << args.z.str(vars);
                }
            },
            n.args);
        out << " [" << (n.structure_map_surjective ? "surjective" : "not surjective") << ": " << n.justification
            << "]\n";
    }
    return out.str();
}

Exponent transition_exponent(const DescentProblem& d, std::size_t a, std::size_t b, std::size_t k) {
    if (d.finite || a >= d.patches.size() || b >= d.patches.size()) throw DescentError("no such patches");
    const auto& fa = d.patches[a].frames;
    const auto& fb = d.patches[b].frames;
    if (k >= fa.size() || k >= fb.size()) throw DescentError("F summand has no monomial frame");
    return exponent_sub(fa[k], fb[k]);
}

}  // namespace ccclose
