#include "ccclose/json_io.hpp"

#include <stdexcept>

namespace ccclose::io {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

Json poly_list(const std::vector<LaurentPoly>& ps) {
    Json out = Json::array();
    for (const auto& p : ps) out.push_back(to_json(p));
    return out;
}

std::vector<LaurentPoly> polys_from_json(const Json& j, const VarList& vars) {
    std::vector<LaurentPoly> out;
    for (const auto& e : j) out.push_back(poly_from_json(e, vars));
    return out;
}

Json scalar_list(const std::vector<Scalar>& v) {
    Json out = Json::array();
    for (const auto& s : v) out.push_back(to_json(s));
    return out;
}

std::vector<Scalar> scalars_from_json(const Json& j) {
    std::vector<Scalar> out;
    for (const auto& e : j) out.push_back(scalar_from_json(e));
    return out;
}

VarList vars_from_json(const Json& j) {
    VarList out;
    for (const auto& e : j) out.push_back(e.get<std::string>());
    return out;
}

VerdictStatus status_from_string(const std::string& s) {
    if (s == "InClosure") return VerdictStatus::InClosure;
    if (s == "NotInClosure") return VerdictStatus::NotInClosure;
    if (s == "Undetermined") return VerdictStatus::Undetermined;
    throw std::invalid_argument("unknown status " + s);
}

ExprOp op_from_string(const std::string& s) {
    for (ExprOp op : {ExprOp::Poly, ExprOp::Conj, ExprOp::Add, ExprOp::Sub, ExprOp::Mul, ExprOp::Div, ExprOp::AbsSq})
        if (s == to_string(op)) return op;
    throw std::invalid_argument("unknown expression operator " + s);
}

Json config_to_json(const ValidationConfig& c) {
    return Json{{"residual", c.residual_tolerance},
                {"envelope_factor", c.envelope_factor},
                {"decay_ratio", c.decay_ratio},
                {"zero", c.zero_tolerance},
                {"radii", c.radii},
                {"n_points", c.n_points},
                {"sphere_samples", c.sphere_samples},
                {"centers_per_orbit", c.centers_per_orbit}};
}

ValidationConfig config_from_json(const Json& j, std::uint64_t seed) {
    ValidationConfig c;
    c.seed = seed;
    c.residual_tolerance = field(j, "residual").get<double>();
    c.envelope_factor = field(j, "envelope_factor").get<double>();
    c.decay_ratio = field(j, "decay_ratio").get<double>();
    c.zero_tolerance = field(j, "zero").get<double>();
    c.radii = field(j, "radii").get<std::vector<double>>();
    c.n_points = field(j, "n_points").get<std::size_t>();
    c.sphere_samples = field(j, "sphere_samples").get<std::size_t>();
    c.centers_per_orbit = field(j, "centers_per_orbit").get<std::size_t>();
    return c;
}

}  // namespace

std::vector<Exponent> monomial_list(const std::vector<LaurentPoly>& gens) {
    std::vector<Exponent> out;
    for (const auto& f : gens) {
        if (!f.is_monomial() || !f.leading().second.is_one() || !f.is_polynomial())
            throw std::invalid_argument("generator " + f.str() + " is not a monic monomial");
        out.push_back(f.leading().first);
    }
    return out;
}

Json to_json(const Scalar& s) {
    if (s.is_real()) return rational_to_string(s.re());
    return Json{{"re", rational_to_string(s.re())}, {"im", rational_to_string(s.im())}};
}

Scalar scalar_from_json(const Json& j) {
    if (j.is_string()) return Scalar(rational_from_string(j.get<std::string>()));
    if (j.is_object())
        return Scalar(rational_from_string(field(j, "re").get<std::string>()),
                      rational_from_string(field(j, "im").get<std::string>()));
    throw std::invalid_argument("scalar must be a string or {re, im}");
}

Json to_json(const LaurentPoly& p) {
    if (p.is_polynomial()) return p.str();
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back(Json::array({e, to_json(c)}));
    return Json{{"terms", terms}};
}

LaurentPoly poly_from_json(const Json& j, const VarList& vars) {
    if (j.is_string()) return parse_poly(j.get<std::string>(), vars);
    LaurentPoly p(vars);
    for (const auto& t : field(j, "terms")) {
        const Exponent e = t.at(0).get<Exponent>();
        if (e.size() != vars.size()) throw std::invalid_argument("term exponent of the wrong length");
        p.add_term(e, scalar_from_json(t.at(1)));
    }
    return p;
}

Json to_json(const Expr& e) {
    const ExprNode& n = e.node();
    Json out{{"op", to_string(n.op)}};
    switch (n.op) {
    case ExprOp::Poly: out["p"] = to_json(n.poly); break;
    case ExprOp::Conj:
    case ExprOp::AbsSq: out["a"] = to_json(n.a); break;
    default:
        out["a"] = to_json(n.a);
        out["b"] = to_json(n.b);
    }
    return out;
}

Expr expr_from_json(const Json& j, const VarList& vars) {
    const ExprOp op = op_from_string(field(j, "op").get<std::string>());
    switch (op) {
    case ExprOp::Poly: return Expr::poly(poly_from_json(field(j, "p"), vars));
    case ExprOp::Conj: return Expr::conj(expr_from_json(field(j, "a"), vars));
    case ExprOp::AbsSq: return Expr::abs_sq(expr_from_json(field(j, "a"), vars));
    default: return Expr::binary(op, expr_from_json(field(j, "a"), vars), expr_from_json(field(j, "b"), vars));
    }
}

Json to_json(const WronskianCertificate& c) {
    Json charts = Json::array();
    for (const auto& ch : c.charts)
        charts.push_back(Json{{"chart", ch.chart},
                              {"coords", ch.coords},
                              {"map_to_x", poly_list(ch.map_to_x)},
                              {"funcs", poly_list(ch.funcs)},
                              {"phi", to_json(ch.phi)}});
    Json points = Json::array();
    for (const auto& p : c.points) points.push_back(Json{{"chart", p.chart}, {"coords", scalar_list(p.coords)}});
    Json matrix = Json::array();
    for (const auto& row : c.matrix) matrix.push_back(scalar_list(row));
    return Json{{"points", points},     {"matrix", matrix}, {"det", to_json(c.det)},
                {"seed", c.seed},       {"rows", c.rows},   {"base_point", scalar_list(c.base_point)},
                {"charts", charts}};
}

WronskianCertificate certificate_from_json(const Json& j) {
    WronskianCertificate c;
    for (const auto& ch : field(j, "charts")) {
        CertificateChart cc;
        cc.chart = field(ch, "chart").get<std::size_t>();
        cc.coords = vars_from_json(field(ch, "coords"));
        cc.map_to_x = polys_from_json(field(ch, "map_to_x"), cc.coords);
        cc.funcs = polys_from_json(field(ch, "funcs"), cc.coords);
        cc.phi = poly_from_json(field(ch, "phi"), cc.coords);
        c.charts.push_back(std::move(cc));
    }
    for (const auto& p : field(j, "points"))
        c.points.push_back({field(p, "chart").get<std::size_t>(), scalars_from_json(field(p, "coords"))});
    c.rows = field(j, "rows").get<std::vector<std::size_t>>();
    for (const auto& row : field(j, "matrix")) c.matrix.push_back(scalars_from_json(row));
    c.det = scalar_from_json(field(j, "det"));
    c.seed = field(j, "seed").get<std::uint64_t>();
    c.base_point = scalars_from_json(field(j, "base_point"));
    return c;
}

Json to_json(const Report& r) {
    return Json{{"residual_max", r.residual_max},
                {"envelopes", r.envelopes},
                {"pass", r.pass},
                {"identity_holds", r.identity_holds},
                {"residual_pass", r.residual_pass},
                {"envelope_pass", r.envelope_pass},
                {"seed", r.seed},
                {"thresholds", config_to_json(r.config)}};
}

Json to_json(const Witness& w) {
    Json exprs = Json::array();
    for (const auto& e : w.exprs) exprs.push_back(to_json(e));
    return Json{{"kind", w.kind},
                {"vars", w.vars},
                {"gens", poly_list(w.gens)},
                {"candidate", to_json(w.g)},
                {"exprs", exprs},
                {"poly_part", poly_list(w.poly_part)},
                {"identity_holds", w.identity_cleared.num.is_zero()}};
}

Witness witness_from_json(const Json& j) {
    const VarList vars = vars_from_json(field(j, "vars"));
    std::vector<Expr> exprs;
    for (const auto& e : field(j, "exprs")) exprs.push_back(expr_from_json(e, vars));
    return make_witness(vars, polys_from_json(field(j, "gens"), vars), poly_from_json(field(j, "candidate"), vars),
                        std::move(exprs), field(j, "kind").get<std::string>(),
                        polys_from_json(field(j, "poly_part"), vars));
}

Json verdict_document(const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g,
                      const Verdict& v) {
    Json ideal = Json::array();
    for (const auto& a : gens) ideal.push_back(LaurentPoly::monomial(vars, a).str());
    Json doc{{"status", to_string(v.status)},
             {"problem", Json{{"vars", vars}, {"ideal", ideal}, {"candidate", to_json(g)}}}};
    if (v.obstruction) {
        Json cert{{"kind", "wronskian"},
                  {"base", orbit_label(vars, v.obstruction->base)},
                  {"base_zero", v.obstruction->base},
                  {"shift", poly_list(v.obstruction->shift)},
                  {"remainder", to_json(v.obstruction->remainder)}};
        const Json body = to_json(v.obstruction->certificate);
        for (const auto& [k, val] : body.items()) cert[k] = val;
        doc["certificate"] = cert;
    } else if (v.valuation) {
        doc["certificate"] = Json{{"kind", "valuation"},
                                  {"weight", v.valuation->weight},
                                  {"g_order", v.valuation->g_order},
                                  {"ideal_order", v.valuation->ideal_order}};
    }
    if (v.witness) {
        doc["witness"] = to_json(*v.witness);
        if (v.report) doc["witness"]["report"] = to_json(*v.report);
    }
    doc["explanation"] = v.explanation;
    Json trace = Json::array();
    for (const auto& t : v.trace) trace.push_back(Json{{"stratum", t.stratum}, {"result", t.result}, {"coeffs", t.coeffs}});
    doc["trace"] = trace;
    doc["seed"] = v.seed;
    doc["version"] = kVersion;
    return doc;
}

ParsedVerdict verdict_from_document(const Json& doc) {
    ParsedVerdict out;
    const Json& problem = field(doc, "problem");
    out.vars = vars_from_json(field(problem, "vars"));
    out.gens = monomial_list(polys_from_json(field(problem, "ideal"), out.vars));
    out.g = poly_from_json(field(problem, "candidate"), out.vars);
    Verdict& v = out.verdict;
    v.status = status_from_string(field(doc, "status").get<std::string>());
    v.seed = field(doc, "seed").get<std::uint64_t>();
    if (doc.contains("explanation")) v.explanation = doc.at("explanation").get<std::string>();
    if (doc.contains("certificate")) {
        const Json& c = doc.at("certificate");
        const std::string kind = field(c, "kind").get<std::string>();
        if (kind == "wronskian") {
            SpanObstruction ob;
            ob.base = field(c, "base_zero").get<std::vector<bool>>();
            ob.shift = polys_from_json(field(c, "shift"), out.vars);
            ob.remainder = poly_from_json(field(c, "remainder"), out.vars);
            ob.certificate = certificate_from_json(c);
            v.obstruction = std::move(ob);
        } else if (kind == "valuation") {
            v.valuation = ValuationCertificate{field(c, "weight").get<Exponent>(),
                                               field(c, "g_order").get<std::int64_t>(),
                                               field(c, "ideal_order").get<std::int64_t>()};
        } else {
            throw std::invalid_argument("unknown certificate kind " + kind);
        }
    }
    if (doc.contains("witness")) v.witness = witness_from_json(doc.at("witness"));
    if (doc.contains("trace"))
        for (const auto& t : doc.at("trace"))
            v.trace.push_back({field(t, "stratum").get<std::string>(), field(t, "result").get<std::string>(),
                               field(t, "coeffs").get<std::vector<std::string>>()});
    return out;
}

Json validation_document(const Witness& w, const Report& r) {
    return Json{{"witness", to_json(w)}, {"report", to_json(r)}, {"version", kVersion}};
}

bool verify_document(const Json& doc, std::string* why) {
    if (doc.contains("status")) {
        const ParsedVerdict p = verdict_from_document(doc);
        return verify_verdict(p.vars, p.gens, p.g, p.verdict, why);
    }
    if (doc.contains("witness") && doc.contains("report")) {
        const Witness w = witness_from_json(doc.at("witness"));
        if (!w.identity_holds()) {
            if (why) *why = "cleared identity does not vanish";
            return false;
        }
        const Json& rep = doc.at("report");
        const ValidationConfig cfg = config_from_json(field(rep, "thresholds"), field(rep, "seed").get<std::uint64_t>());
        const Report again = validate_witness(w, cfg);
        if (again.pass != field(rep, "pass").get<bool>()) {
            if (why) *why = "recomputed report disagrees with the document";
            return false;
        }
        if (!again.pass && why) *why = "witness does not validate";
        return again.pass;
    }
    throw std::invalid_argument("document is neither a verdict nor a validation report");
}

}  // namespace ccclose::io
