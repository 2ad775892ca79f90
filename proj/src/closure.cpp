#include "ccclose/closure.hpp"

#include "ccclose/newton.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace ccclose {

const char* to_string(VerdictStatus status) {
    switch (status) {
    case VerdictStatus::InClosure: return "InClosure";
    case VerdictStatus::NotInClosure: return "NotInClosure";
    case VerdictStatus::Undetermined: return "Undetermined";
    }
    return "?";
}

namespace {

std::int64_t pairing(const Exponent& a, const Exponent& w) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * w[j];
    return s;
}

std::vector<LaurentPoly> generator_polys(const VarList& vars, const std::vector<Exponent>& gens) {
    std::vector<LaurentPoly> out;
    for (const auto& a : gens) out.push_back(LaurentPoly::monomial(vars, a));
    return out;
}

/// Cofactors h with g = sum h_i f_i, each term going to the first generator
/// that divides it.
std::optional<std::vector<LaurentPoly>> ideal_cofactors(const VarList& vars, const std::vector<Exponent>& gens,
                                                        const LaurentPoly& g) {
    std::vector<LaurentPoly> h(gens.size(), LaurentPoly(vars));
    for (const auto& [e, c] : g.terms()) {
        bool placed = false;
        for (std::size_t i = 0; i < gens.size() && !placed; ++i) {
            if (dominates(e, gens[i])) {
                h[i].add_term(exponent_sub(e, gens[i]), c);
                placed = true;
            }
        }
        if (!placed) return std::nullopt;
    }
    return h;
}

std::optional<ValuationCertificate> find_valuation(const ChartAtlas& atlas, const LaurentPoly& g) {
    for (const Chart& chart : atlas.charts) {
        const LaurentPoly gt = chart.pullback(g);
        const Exponent m = gt.min_exponents();
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] >= 0) continue;
            ValuationCertificate v;
            v.weight = chart.rays[k];
            v.g_order = std::numeric_limits<std::int64_t>::max();
            for (const auto& [e, c] : g.terms()) v.g_order = std::min(v.g_order, pairing(e, v.weight));
            v.ideal_order = std::numeric_limits<std::int64_t>::max();
            for (const auto& a : atlas.gens) v.ideal_order = std::min(v.ideal_order, pairing(a, v.weight));
            return v;
        }
    }
    return std::nullopt;
}

/// First exceptional chart orbit on which the pullback of r is not zero.
std::optional<std::string> exceptional_residue(const ChartAtlas& atlas, const LaurentPoly& r) {
    std::vector<LaurentPoly> pulled;
    for (const Chart& chart : atlas.charts) pulled.push_back(chart.pullback(r));
    for (const Stratum& s : exceptional_strata(atlas)) {
        if (!s.exceptional) continue;
        if (!pulled[s.chart].restrict_zero(s.zero_set).is_zero())
            return "remainder survives on " + orbit_label(atlas.charts[s.chart].coords, s.zero_set) + " of chart " +
                   std::to_string(s.chart + 1);
    }
    return std::nullopt;
}

/// Parameter polynomial over x_{A^c} as a polynomial on X.
LaurentPoly embed(const LaurentPoly& p, const VarList& x_vars, const ZeroSet& base) {
    LaurentPoly out(x_vars);
    for (const auto& [e, c] : p.terms()) {
        Exponent big(x_vars.size(), 0);
        std::size_t k = 0;
        for (std::size_t j = 0; j < base.size(); ++j)
            if (!base[j]) big[j] = e[k++];
        out.add_term(big, c);
    }
    return out;
}

enum class Outcome { Solved, Refuted, Stuck };

struct Run {
    Outcome outcome = Outcome::Stuck;
    std::vector<LaurentPoly> shift;
    LaurentPoly remainder;
    std::optional<SpanObstruction> obstruction;
    std::string why;
};

/// Visits the strata in order; on each, the fiber test either refutes the
/// current remainder or yields coefficients that are subtracted off.
Run interpolate(const DescentProblem& d, const std::vector<LaurentPoly>& gens, const LaurentPoly& g,
                const std::vector<ZeroSet>& strata, std::uint64_t seed, const std::string& pass,
                std::vector<TraceEntry>& trace) {
    const ChartAtlas& atlas = *d.atlas;
    Run run;
    run.shift.assign(gens.size(), LaurentPoly(d.x_vars));
    run.remainder = g;
    for (const ZeroSet& base : strata) {
        const std::string label = orbit_label(d.x_vars, base);
        std::vector<LaurentPoly> rt;
        for (const Chart& chart : atlas.charts) rt.push_back(chart.pullback(run.remainder));
        SpanResult res = fiber_span_test(d, rt, base, seed);
        if (res.status == SpanStatus::NotInSpan) {
            trace.push_back({label, pass + ": not in span, det " + res.certificate->det.str(), {}});
            run.outcome = Outcome::Refuted;
            run.obstruction = SpanObstruction{base, run.shift, run.remainder, *res.certificate};
            return run;
        }
        std::vector<LaurentPoly> c;
        for (const auto& rf : res.coeffs) {
            const auto lp = rf.as_laurent();
            if (!lp || !lp->is_polynomial()) {
                trace.push_back({label, pass + ": coefficient " + rf.str() + " is not a polynomial", {}});
                run.why = "coefficient " + rf.str() + " on " + label + " does not extend as a polynomial";
                return run;
            }
            c.push_back(embed(*lp, d.x_vars, base));
        }
        const bool zero = std::all_of(c.begin(), c.end(), [](const LaurentPoly& p) { return p.is_zero(); });
        TraceEntry entry{label, pass + ": in span", {}};
        if (res.needs_split) entry.result += " (pivots vanish at special points)";
        if (!zero)
            for (const auto& p : c) entry.coeffs.push_back(p.str());
        trace.push_back(std::move(entry));
        if (zero) continue;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            run.remainder -= c[i] * gens[i];
            run.shift[i] += c[i];
        }
    }
    if (auto residue = exceptional_residue(atlas, run.remainder)) {
        trace.push_back({"", pass + ": " + *residue, {}});
        run.why = *residue;
        return run;
    }
    trace.push_back({"", pass + ": remainder vanishes on the exceptional locus", {}});
    run.outcome = Outcome::Solved;
    return run;
}

std::size_t dimension_levels(const std::vector<ZeroSet>& strata) {
    std::set<std::size_t> dims;
    for (const auto& z : strata) dims.insert(orbit_dimension(z));
    return dims.size();
}

void check_candidate(const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g) {
    if (vars.empty() || vars.size() > kMaxDimension)
        throw std::invalid_argument("between 1 and " + std::to_string(kMaxDimension) + " variables are supported");
    for (const auto& a : gens)
        if (a.size() != vars.size() || std::any_of(a.begin(), a.end(), [](std::int64_t v) { return v < 0; }))
            throw std::invalid_argument("generators must be monomials in the given variables");
    if (g.vars() != vars) throw std::invalid_argument("candidate and ideal use different variables");
    if (!g.is_polynomial()) throw std::invalid_argument("candidate must be a polynomial");
}

void finish_in_closure(Verdict& v, const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g,
                       const std::vector<LaurentPoly>& shift, const DecideOptions& options) {
    v.status = VerdictStatus::InClosure;
    v.witness = interpolated_witness(vars, generator_polys(vars, gens), g, shift);
    if (options.validate) {
        ValidationConfig cfg = options.validation;
        cfg.seed = options.seed;
        v.report = validate_witness(*v.witness, cfg);
        if (!v.report->pass) v.trace.push_back({"", "witness validation did not pass; verdict rests on the exact check", {}});
    }
}

void finish_refuted(Verdict& v, Run& run) {
    v.status = VerdictStatus::NotInClosure;
    v.obstruction = std::move(run.obstruction);
    v.explanation = "no constant combination of the f matches the remainder on a fiber over " +
                    std::string(v.obstruction->base.empty() ? "X" : "the stratum");
}

DescentProblem fd_base(const DescentProblem& d) {
    FactorData fd;
    for (const Patch& p : d.patches) {
        if (p.rank_f() != 1) throw DescentError("line bundle factorization needs F of rank one");
        fd.patch_j.push_back(PolyMatrix{{LaurentPoly::constant(p.coords, Scalar(1))}});
    }
    if (d.patches.empty()) throw DescentError("no patches to factor");
    fd.witness_piece = 0;
    fd.witness_point.assign(d.patches.front().coords.size(), Scalar(1));
    DescentProblem factored = scion_factor(d, fd);
    const ZeroSet origin(d.dim(), true);
    if (!d.atlas || !in_vanishing_locus(d.atlas->gens, origin)) return factored;
    return restrict_to(factored, ClosedSubset::orbit_closure(origin));
}

ScionCache& fd_cache() {
    static ScionCache cache;
    return cache;
}

void trace_fd_scion(const DescentProblem& d, std::vector<TraceEntry>& trace) {
    if (d.rank_e < 2) return;
    const DescentProblem base = fd_base(d);
    std::size_t count = 1;
    for (std::size_t k = 0; k <= d.rank_e && count <= 4096; ++k) count *= base.patches.size();
    const std::string certified = fd_scion_certified(d) ? "certified" : "uncertified off the origin";
    if (count > 4096) {
        trace.push_back({"", "finite-determinacy scion: skipped, " + std::to_string(base.patches.size()) +
                                 " patches over the origin", {}});
        return;
    }
    const DescentProblem scion = fd_cache().get_or_build(provenance_dump(*base.provenance) + "fiber power", [&] {
        return fiber_power(base, d.rank_e + 1);
    });
    trace.push_back({"", "finite-determinacy scion: " + std::to_string(scion.patches.size()) + " patches, " +
                             std::to_string(d.rank_e + 1) + "-fold fiber power (" + certified + ")", {}});
}

}  // namespace

Verdict decide_membership(const MonomialIdeal& ideal, const LaurentPoly& g, const DecideOptions& options) {
    return decide_membership(ideal.vars(), ideal.gens(), g, options);
}

Verdict decide_membership(const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g,
                          const DecideOptions& options) {
    check_candidate(vars, gens, g);
    Verdict v;
    v.seed = options.seed;
    const std::vector<LaurentPoly> fs = generator_polys(vars, gens);

    if (gens.empty()) {
        if (g.is_zero()) {
            v.status = VerdictStatus::InClosure;
            v.explanation = "g is zero";
            return v;
        }
        SpanResult res = wronskian_test({}, g, options.seed);
        v.status = VerdictStatus::NotInClosure;
        v.obstruction = SpanObstruction{ZeroSet(vars.size(), false), {}, g, *res.certificate};
        v.explanation = "g is not zero and the ideal is";
        return v;
    }

    if (auto h = ideal_cofactors(vars, gens, g)) {
        v.status = VerdictStatus::InClosure;
        v.explanation = "g lies in I";
        v.trace.push_back({"", "every term of g is divisible by a generator", {}});
        v.witness = algebraic_witness(vars, fs, g, *h);
        if (options.validate) {
            ValidationConfig cfg = options.validation;
            cfg.seed = options.seed;
            v.report = validate_witness(*v.witness, cfg);
        }
        return v;
    }

    const DescentProblem d = from_ideal(vars, gens);
    const ChartAtlas& atlas = *d.atlas;
    v.trace.push_back({"", "blow-up: " + std::to_string(atlas.charts.size()) + " charts", {}});

    if (auto val = find_valuation(atlas, g)) {
        v.status = VerdictStatus::NotInClosure;
        v.valuation = *val;
        v.explanation = "order of g along the weight is below the order of I";
        v.trace.push_back({"", "pullback of g has a pole along an exceptional divisor", {}});
        return v;
    }
    trace_fd_scion(d, v.trace);

    const std::vector<ZeroSet> strata = vanishing_orbits(gens, vars.size());
    if (dimension_levels(strata) > options.max_depth) {
        v.explanation = "V(I) has more levels than the depth limit";
        return v;
    }
    const std::vector<ZeroSet> reversed(strata.rbegin(), strata.rend());
    std::vector<std::string> reasons;
    for (const auto& [order, pass] : {std::pair{&strata, "generic-first"}, std::pair{&reversed, "deepest-first"}}) {
        Run run = interpolate(d, fs, g, *order, options.seed, pass, v.trace);
        if (run.outcome == Outcome::Refuted) {
            finish_refuted(v, run);
            return v;
        }
        if (run.outcome == Outcome::Solved) {
            finish_in_closure(v, vars, gens, g, run.shift, options);
            v.explanation = "remainder after polynomial interpolation vanishes on the exceptional locus";
            return v;
        }
        reasons.push_back(run.why);
    }
    v.explanation = "fiber tests pass but no polynomial interpolation was found: " + reasons[0] + "; " + reasons[1];
    return v;
}

bool verify_valuation(const std::vector<Exponent>& gens, const LaurentPoly& g, const ValuationCertificate& cert) {
    if (g.is_zero() || gens.empty() || cert.weight.size() != g.nvars()) return false;
    if (std::any_of(cert.weight.begin(), cert.weight.end(), [](std::int64_t w) { return w < 0; })) return false;
    if (std::all_of(cert.weight.begin(), cert.weight.end(), [](std::int64_t w) { return w == 0; })) return false;
    std::int64_t go = std::numeric_limits<std::int64_t>::max();
    for (const auto& [e, c] : g.terms()) go = std::min(go, pairing(e, cert.weight));
    std::int64_t io = std::numeric_limits<std::int64_t>::max();
    for (const auto& a : gens) io = std::min(io, pairing(a, cert.weight));
    return go == cert.g_order && io == cert.ideal_order && go < io;
}

bool verify_verdict(const MonomialIdeal& ideal, const LaurentPoly& g, const Verdict& verdict, std::string* why) {
    return verify_verdict(ideal.vars(), ideal.gens(), g, verdict, why);
}

bool verify_verdict(const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g,
                    const Verdict& verdict, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (g.vars() != vars) return fail("candidate over different variables");
    const std::vector<LaurentPoly> fs = generator_polys(vars, gens);
    switch (verdict.status) {
    case VerdictStatus::Undetermined: return fail("an undetermined verdict carries nothing to verify");
    case VerdictStatus::InClosure: {
        if (gens.empty()) return g.is_zero() ? true : fail("nonzero g over the zero ideal");
        if (!verdict.witness) return fail("missing witness");
        const Witness& w = *verdict.witness;
        if (w.vars != vars || w.gens != fs || w.g != g) return fail("witness belongs to another problem");
        if (!w.identity_holds()) return fail("sum phi_i f_i differs from g");
        if (w.kind == "algebraic") return true;
        if (w.kind == "interpolated") {
            if (w.poly_part.size() != fs.size()) return fail("polynomial part has the wrong length");
            LaurentPoly r = g;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                if (!w.poly_part[i].is_polynomial()) return fail("polynomial part has poles");
                r -= w.poly_part[i] * fs[i];
            }
            // phi_i - c_i = conj(f_i) r / sum |f_j|^2 extends continuously by zero
            // over V(I) when r pulls back to a section vanishing on the
            // exceptional locus.
            const ChartAtlas atlas = blowup_charts(vars, gens);
            for (const Chart& chart : atlas.charts)
                if (!chart.pullback(r).is_polynomial()) return fail("remainder has a pole on the blow-up");
            if (auto residue = exceptional_residue(atlas, r)) return fail(*residue);
            return true;
        }
        ValidationConfig cfg;
        cfg.seed = verdict.seed;
        if (!validate_witness(w, cfg).pass) return fail("numeric validation failed");
        return true;
    }
    case VerdictStatus::NotInClosure: {
        if (verdict.valuation) {
            return verify_valuation(gens, g, *verdict.valuation) ? true : fail("valuation inequality fails");
        }
        if (!verdict.obstruction) return fail("missing certificate");
        const SpanObstruction& ob = *verdict.obstruction;
        if (ob.shift.size() != fs.size()) return fail("shift has the wrong length");
        LaurentPoly r = g;
        for (std::size_t i = 0; i < ob.shift.size(); ++i) {
            if (ob.shift[i].vars() != vars || !ob.shift[i].is_polynomial()) return fail("shift is not a polynomial");
            r -= ob.shift[i] * fs[i];
        }
        if (r != ob.remainder) return fail("remainder does not match g and the shift");
        const WronskianCertificate& cert = ob.certificate;
        if (gens.empty()) {
            if (cert.charts.size() != 1 || cert.charts[0].phi != r || !cert.charts[0].funcs.empty())
                return fail("certificate does not evaluate g");
            return cert.verify(why);
        }
        const ChartAtlas atlas = blowup_charts(vars, gens);
        for (const CertificateChart& cc : cert.charts) {
            if (cc.chart >= atlas.charts.size()) return fail("certificate names an unknown chart");
            const Chart& chart = atlas.charts[cc.chart];
            if (cc.coords != chart.coords || cc.map_to_x != chart.map_to_x) return fail("chart data differ");
            if (cc.funcs != chart.f_tilde) return fail("certificate rows are not the pulled-back generators");
            if (cc.phi != chart.pullback(r)) return fail("certificate target is not the pulled-back remainder");
        }
        return cert.verify(why);
    }
    }
    return fail("unknown status");
}

Verdict relative_membership(const RelativeProblem& problem, const LaurentPoly& g, const DecideOptions& options) {
    const MonomialIdeal& ideal = problem.ideal;
    check_candidate(ideal.vars(), ideal.gens(), g);
    if (!problem.vanishing) throw std::invalid_argument("relative problem needs g vanishing on the preimage of Z");
    if (ideal.rank() == 0) throw std::invalid_argument("relative problem needs a nonzero ideal");
    const DescentProblem d = from_ideal(ideal);
    const ChartAtlas& atlas = *d.atlas;
    for (const Stratum& s : exceptional_strata(atlas)) {
        if (!problem.z.contains(s.image_stratum)) continue;
        const LaurentPoly gt = atlas.charts[s.chart].pullback(g);
        if (!gt.is_polynomial() || !gt.restrict_zero(s.zero_set).is_zero())
            throw std::invalid_argument("g does not vanish on the preimage of Z");
    }
    Verdict v;
    v.seed = options.seed;
    const std::vector<LaurentPoly> fs = ideal.generator_polys();
    std::vector<ZeroSet> strata;
    for (const ZeroSet& a : vanishing_orbits(ideal.gens(), ideal.nvars()))
        if (!problem.z.contains(a)) strata.push_back(a);

    auto vanishes_on_z = [&](const std::vector<LaurentPoly>& c) {
        for (const auto& p : c)
            for (const auto& orbit : problem.z.orbits)
                if (!p.restrict_zero(orbit).is_zero()) return false;
        return true;
    };
    std::vector<std::string> reasons;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<ZeroSet> order = strata;
        if (attempt == 1) std::reverse(order.begin(), order.end());
        Run run = interpolate(d, fs, g, order, options.seed, attempt == 0 ? "generic-first" : "deepest-first",
                              v.trace);
        if (run.outcome == Outcome::Refuted) {
            finish_refuted(v, run);
            return v;
        }
        if (run.outcome == Outcome::Solved) {
            if (vanishes_on_z(run.shift)) {
                finish_in_closure(v, ideal.vars(), ideal.gens(), g, run.shift, options);
                v.explanation = "solution vanishing on Z found";
                return v;
            }
            reasons.push_back("interpolant does not vanish on Z");
        } else {
            reasons.push_back(run.why);
        }
    }
    v.explanation = "no solution vanishing on Z was found: " + reasons[0] + "; " + reasons[1];
    return v;
}

namespace {

std::vector<Exponent> monomials_up_to(std::size_t n, unsigned bound) {
    std::vector<Exponent> out;
    Exponent e(n, 0);
    auto rec = [&](auto&& self, std::size_t j, std::int64_t left) -> void {
        if (j == n) {
            out.push_back(e);
            return;
        }
        for (std::int64_t a = 0; a <= left; ++a) {
            e[j] = a;
            self(self, j + 1, left - a);
        }
        e[j] = 0;
    };
    rec(rec, 0, bound);
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

}  // namespace

std::vector<TabulatedMonomial> tabulate_monomials(const MonomialIdeal& ideal, unsigned bound, std::uint64_t seed) {
    if (bound > 12) throw std::invalid_argument("degree bound above 12");
    DecideOptions opts;
    opts.seed = seed;
    opts.validate = false;
    std::vector<TabulatedMonomial> out;
    for (const Exponent& e : monomials_up_to(ideal.nvars(), bound)) {
        const Verdict v = decide_membership(ideal, LaurentPoly::monomial(ideal.vars(), e), opts);
        out.push_back({e, v.status});
    }
    return out;
}

std::vector<Exponent> closure_monomials(const MonomialIdeal& ideal, unsigned bound, std::uint64_t seed) {
    std::vector<Exponent> out;
    for (const auto& t : tabulate_monomials(ideal, bound, seed))
        if (t.status == VerdictStatus::InClosure) out.push_back(t.exponent);
    return out;
}

DescentProblem build_fd_scion(const DescentProblem& d) {
    if (d.rank_e <= 1) return d;
    if (d.finite) throw DescentError("finite-determinacy scion needs a chart model");
    const DescentProblem base = fd_base(d);
    bool point_base = true;
    for (const Patch& p : base.patches)
        for (const auto& m : p.map_to_x)
            if (!m.is_constant() && !m.is_zero()) point_base = false;
    if (!point_base) return base;
    return fiber_power(base, d.rank_e + 1);
}

bool fd_scion_certified(const DescentProblem& d) {
    if (!d.atlas) return false;
    for (const ZeroSet& z : vanishing_orbits(d.atlas->gens, d.dim()))
        if (orbit_dimension(z) != 0) return false;
    return true;
}

}  // namespace ccclose
