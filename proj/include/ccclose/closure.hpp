#ifndef CCCLOSE_CLOSURE_HPP
#define CCCLOSE_CLOSURE_HPP

#include "ccclose/descent.hpp"
#include "ccclose/findet.hpp"
#include "ccclose/witness.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccclose {

enum class VerdictStatus { InClosure, NotInClosure, Undetermined };

const char* to_string(VerdictStatus status);

/// A monomial valuation w >= 0 with ord_w(g) < ord_w(I). Then |g| is not
/// bounded by a multiple of max |f_i| along the curve t -> (c_j t^{w_j}), so
/// g is not even in the integral closure of I.
struct ValuationCertificate {
    Exponent weight;
    std::int64_t g_order = 0;
    std::int64_t ideal_order = 0;
};

/// For NotInClosure from a fiber test: the refuted target is
/// remainder = g - sum_i shift_i f_i with polynomial shift, and the
/// certificate refutes it on the fibers over base.
struct SpanObstruction {
    ZeroSet base;
    std::vector<LaurentPoly> shift;
    LaurentPoly remainder;
    WronskianCertificate certificate;
};

/// One step of the decision: the stratum visited (empty for global steps),
/// what happened, and the coefficients subtracted there.
struct TraceEntry {
    std::string stratum;
    std::string result;
    std::vector<std::string> coeffs;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::Undetermined;
    std::optional<SpanObstruction> obstruction;
    std::optional<ValuationCertificate> valuation;
    std::optional<Witness> witness;
    std::optional<Report> report;
    std::string explanation;
    std::vector<TraceEntry> trace;
    std::uint64_t seed = 0;
};

struct DecideOptions {
    std::uint64_t seed = 0;
    /// Largest number of distinct stratum dimensions in V(I) the
    /// interpolation may walk through.
    std::size_t max_depth = 4;
    bool validate = true;
    ValidationConfig validation;
};

/// Decides g in I^C for a monomial ideal I in at most three variables and a
/// polynomial g. NotInClosure carries a certificate; InClosure carries a
/// witness whose validation report is attached.
Verdict decide_membership(const MonomialIdeal& ideal, const LaurentPoly& g, const DecideOptions& options = {});
/// Same over an explicit generator list, kept as given: repeated and
/// redundant generators change the rank of E but not the closure.
Verdict decide_membership(const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g,
                          const DecideOptions& options = {});

/// Re-checks a decisive verdict from its certificate or witness alone.
bool verify_verdict(const MonomialIdeal& ideal, const LaurentPoly& g, const Verdict& verdict,
                    std::string* why = nullptr);
bool verify_verdict(const VarList& vars, const std::vector<Exponent>& gens, const LaurentPoly& g,
                    const Verdict& verdict, std::string* why = nullptr);
bool verify_valuation(const std::vector<Exponent>& gens, const LaurentPoly& g, const ValuationCertificate& cert);

/// Relative question: solutions phi that vanish on Z, for a g whose
/// pullback already vanishes on the preimage of Z.
struct RelativeProblem {
    MonomialIdeal ideal;
    ClosedSubset z;
    /// Caller's claim that g vanishes on the preimage of Z; checked.
    bool vanishing = true;
};

Verdict relative_membership(const RelativeProblem& problem, const LaurentPoly& g, const DecideOptions& options = {});

/// Exponents of the monomials of degree <= bound in I^C, grlex ascending.
std::vector<Exponent> closure_monomials(const MonomialIdeal& ideal, unsigned bound, std::uint64_t seed = 0);

struct TabulatedMonomial {
    Exponent exponent;
    VerdictStatus status;
};

/// Verdict for every monomial of degree <= bound, grlex ascending.
std::vector<TabulatedMonomial> tabulate_monomials(const MonomialIdeal& ideal, unsigned bound, std::uint64_t seed = 0);

/// The scion on which finite determinacy is checked: factor through the
/// line bundle, restrict to the origin and take the (r+1)-fold fiber power.
/// Rank-one problems are returned unchanged.
DescentProblem build_fd_scion(const DescentProblem& d);

/// Whether every stratum of V(I) is a point, so the fiber power above
/// covers every fiber test.
bool fd_scion_certified(const DescentProblem& d);

}  // namespace ccclose

#endif  // CCCLOSE_CLOSURE_HPP
