#include "ccclose/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ccclose;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240917;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kUndetermined = 2;
constexpr int kRejected = 3;

struct Inputs {
    std::string vars;
    std::string ideal;
    std::string candidate;
    std::uint64_t seed = kDefaultSeed;
    unsigned degree_bound = 4;
    std::size_t max_depth = 4;
    std::size_t samples = 200;
    bool json = false;
    std::string file;
};

std::uint64_t effective_seed(const Inputs& in) {
    if (const char* env = std::getenv("CCCLOSE_SEED")) return std::stoull(env);
    return in.seed;
}

struct Problem {
    VarList vars;
    std::vector<Exponent> gens;
};

Problem parse_problem(const Inputs& in) {
    Problem p;
    p.vars = parse_var_list(in.vars);
    p.gens = io::monomial_list(parse_poly_list(in.ideal, p.vars));
    return p;
}

void print_trace(const Verdict& v) {
    for (const auto& t : v.trace) {
        std::cout << "  " << (t.stratum.empty() ? "" : "[" + t.stratum + "] ") << t.result;
        if (!t.coeffs.empty()) {
            std::cout << "; c = (";
            for (std::size_t i = 0; i < t.coeffs.size(); ++i) std::cout << (i ? ", " : "") << t.coeffs[i];
            std::cout << ")";
        }
        std::cout << "\n";
    }
}

void print_report(const Report& r) {
    std::cout << "residual_max " << r.residual_max << (r.residual_pass ? " (ok)" : " (too large)") << "\n";
    std::cout << "envelopes";
    for (double e : r.envelopes) std::cout << " " << e;
    std::cout << (r.envelope_pass ? " (decaying)" : " (not decaying)") << "\n";
    std::cout << "validation " << (r.pass ? "passed" : "failed") << ", seed " << r.seed << "\n";
}

int run_decide(const Inputs& in) {
    const Problem p = parse_problem(in);
    const LaurentPoly g = parse_poly(in.candidate, p.vars);
    DecideOptions opts;
    opts.seed = effective_seed(in);
    opts.max_depth = in.max_depth;
    opts.validation.n_points = in.samples;
    const Verdict v = decide_membership(p.vars, p.gens, g, opts);
    if (in.json) {
        std::cout << io::verdict_document(p.vars, p.gens, g, v).dump(2) << "\n";
    } else {
        std::cout << to_string(v.status) << ": " << v.explanation << "\n";
        print_trace(v);
        if (v.obstruction) {
            const auto& c = v.obstruction->certificate;
            std::cout << "certificate: " << c.points.size() << " points, det " << c.det << "\n";
        }
        if (v.valuation) {
            std::cout << "certificate: weight (";
            for (std::size_t j = 0; j < v.valuation->weight.size(); ++j)
                std::cout << (j ? "," : "") << v.valuation->weight[j];
            std::cout << "), ord g = " << v.valuation->g_order << " < ord I = " << v.valuation->ideal_order << "\n";
        }
        if (v.witness)
            for (std::size_t i = 0; i < v.witness->exprs.size(); ++i)
                std::cout << "phi_" << i + 1 << " = " << v.witness->exprs[i].str() << "\n";
        if (v.report) print_report(*v.report);
        std::cout << "seed " << v.seed << "\n";
    }
    return v.status == VerdictStatus::Undetermined ? kUndetermined : kOk;
}

int run_tabulate(const Inputs& in) {
    const Problem p = parse_problem(in);
    const MonomialIdeal ideal(p.vars, p.gens);
    const std::uint64_t seed = effective_seed(in);
    const auto table = tabulate_monomials(ideal, in.degree_bound, seed);
    bool undetermined = false;
    io::Json rows = io::Json::array();
    for (const auto& t : table) {
        undetermined = undetermined || t.status == VerdictStatus::Undetermined;
        const std::string mono = LaurentPoly::monomial(p.vars, t.exponent).str();
        if (in.json)
            rows.push_back(io::Json{{"monomial", mono}, {"exponent", t.exponent}, {"status", to_string(t.status)}});
        else
            std::cout << mono << "\t" << to_string(t.status) << "\n";
    }
    if (in.json) {
        io::Json doc{{"problem", io::Json{{"vars", p.vars}, {"ideal", in.ideal}, {"degree_bound", in.degree_bound}}},
                     {"monomials", rows},
                     {"seed", seed},
                     {"version", kVersion}};
        std::cout << doc.dump(2) << "\n";
    }
    return undetermined ? kUndetermined : kOk;
}

int run_validate(const Inputs& in) {
    const Problem p = parse_problem(in);
    const LaurentPoly g = parse_poly(in.candidate, p.vars);
    std::vector<LaurentPoly> fs;
    for (const auto& a : p.gens) fs.push_back(LaurentPoly::monomial(p.vars, a));
    const Witness w = canonical_witness(p.vars, fs, g);
    ValidationConfig cfg;
    cfg.seed = effective_seed(in);
    cfg.n_points = in.samples;
    const Report r = validate_witness(w, cfg);
    if (in.json) {
        std::cout << io::validation_document(w, r).dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < w.exprs.size(); ++i)
            std::cout << "phi_" << i + 1 << " = " << w.exprs[i].str() << "\n";
        std::cout << "identity " << (r.identity_holds ? "exact" : "FAILS") << "\n";
        print_report(r);
    }
    return r.pass ? kOk : kRejected;
}

int run_verify(const Inputs& in) {
    std::stringstream text;
    if (in.file == "-") {
        text << std::cin.rdbuf();
    } else {
        std::ifstream f(in.file);
        if (!f) {
            std::cerr << "cannot open " << in.file << "\n";
            return kUsage;
        }
        text << f.rdbuf();
    }
    io::Json doc;
    try {
        doc = io::Json::parse(text.str());
    } catch (const std::exception& e) {
        std::cerr << "not a JSON document: " << e.what() << "\n";
        return kUsage;
    }
    std::string why;
    const bool ok = io::verify_document(doc, &why);
    if (in.json) {
        io::Json out{{"verified", ok}};
        if (!ok) out["reason"] = why;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (ok ? "verified" : "rejected: " + why) << "\n";
    }
    return ok ? kOk : kRejected;
}

int run_selftest(const Inputs& in) {
    const VarList xy{"x", "y"};
    const MonomialIdeal ideal = MonomialIdeal::parse("x^3, y^3", xy);
    DecideOptions opts;
    opts.seed = effective_seed(in);
    struct Case {
        const char* g;
        VerdictStatus expected;
    };
    bool all = true;
    for (const Case& c : {Case{"x^2*y^2", VerdictStatus::InClosure}, Case{"x*y^2", VerdictStatus::NotInClosure},
                          Case{"x^2*y", VerdictStatus::NotInClosure}, Case{"x^3 + x^2*y^2", VerdictStatus::InClosure}}) {
        const LaurentPoly g = parse_poly(c.g, xy);
        const Verdict v = decide_membership(ideal, g, opts);
        const io::Json doc = io::verdict_document(xy, ideal.gens(), g, v);
        const bool ok = v.status == c.expected && io::verify_document(io::Json::parse(doc.dump()));
        all = all && ok;
        std::cout << (ok ? "PASS " : "FAIL ") << c.g << " -> " << to_string(v.status) << "\n";
    }
    return all ? kOk : kRejected;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous closure membership for monomial ideals"};
    app.require_subcommand(1);
    Inputs in;

    auto problem_flags = [&](CLI::App* sub, bool candidate) {
        sub->add_option("--vars", in.vars, "Variables, e.g. x,y")->required();
        sub->add_option("--ideal", in.ideal, "Monomial generators, e.g. \"x^3,y^3\"")->required();
        if (candidate) sub->add_option("--candidate", in.candidate, "Polynomial g")->required();
        sub->add_option("--seed", in.seed, "Random seed (CCCLOSE_SEED overrides)");
        sub->add_flag("--json", in.json, "Emit one JSON document");
    };
    CLI::App* decide = app.add_subcommand("decide", "Decide g in I^C");
    problem_flags(decide, true);
    decide->add_option("--max-depth", in.max_depth, "Recursion cap")->check(CLI::PositiveNumber);
    decide->add_option("--samples", in.samples, "Numeric validation samples")->check(CLI::PositiveNumber);

    CLI::App* tabulate = app.add_subcommand("tabulate", "Classify all monomials up to a degree");
    problem_flags(tabulate, false);
    tabulate->add_option("--degree-bound", in.degree_bound, "Largest total degree (at most 12)")->required();

    CLI::App* validate = app.add_subcommand("validate", "Validate the canonical witness numerically");
    problem_flags(validate, true);
    validate->add_option("--samples", in.samples, "Residual samples")->check(CLI::PositiveNumber);

    CLI::App* verify = app.add_subcommand("verify", "Re-check a JSON verdict or validation document");
    verify->add_option("file", in.file, "Document path, or - for stdin")->required();
    verify->add_flag("--json", in.json, "Emit one JSON document");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in worked examples");
    selftest->add_option("--seed", in.seed, "Random seed (CCCLOSE_SEED overrides)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*decide) return run_decide(in);
        if (*tabulate) return run_tabulate(in);
        if (*validate) return run_validate(in);
        if (*verify) return run_verify(in);
        if (*selftest) return run_selftest(in);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
