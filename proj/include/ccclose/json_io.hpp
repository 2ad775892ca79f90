#ifndef CCCLOSE_JSON_IO_HPP
#define CCCLOSE_JSON_IO_HPP

#include "ccclose/closure.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ccclose {

inline constexpr const char* kVersion = "1.0.0";

namespace io {

using Json = nlohmann::ordered_json;

/// Real scalars become "p/q"; others {"re": "p/q", "im": "p/q"}.
Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);

/// Polynomials are written in the parser's syntax; Laurent polynomials fall
/// back to {"terms": [[exponent, scalar], ...]}.
Json to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const Json& j, const VarList& vars);

Json to_json(const Expr& e);
Expr expr_from_json(const Json& j, const VarList& vars);

Json to_json(const WronskianCertificate& c);
WronskianCertificate certificate_from_json(const Json& j);

Json to_json(const Report& r);

/// The witness together with its problem; reading it back recomputes the
/// cleared identity.
Json to_json(const Witness& w);
Witness witness_from_json(const Json& j);

/// {status, problem, certificate | witness, explanation, trace, seed, version}.
Json verdict_document(const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g,
                      const Verdict& v);

struct ParsedVerdict {
    VarList vars;
    std::vector<Exponent> gens;
    LaurentPoly g;
    Verdict verdict;
};

ParsedVerdict verdict_from_document(const Json& doc);

/// Document produced by `validate`: a witness plus its report.
Json validation_document(const Witness& w, const Report& r);

/// Re-checks a verdict or validation document using nothing but its
/// contents. Throws std::invalid_argument on malformed documents.
bool verify_document(const Json& doc, std::string* why = nullptr);

/// Generator strings as exponents, keeping repeats and order.
std::vector<Exponent> monomial_list(const std::vector<LaurentPoly>& gens);

}  // namespace io
}  // namespace ccclose

#endif  // CCCLOSE_JSON_IO_HPP
