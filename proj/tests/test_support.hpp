#ifndef CCCLOSE_TEST_SUPPORT_HPP
#define CCCLOSE_TEST_SUPPORT_HPP

#include "ccclose/poly.hpp"

#include <cstdint>
#include <random>

namespace ccclose::testing {

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Scalar random_scalar(std::mt19937_64& rng, bool complex = false) {
    const long den = static_cast<long>(uniform(rng, 1, 4));
    Scalar s = Scalar::rational(static_cast<long>(uniform(rng, -5, 5)), den);
    if (complex) s += Scalar(mpq_class(0), mpq_class(static_cast<long>(uniform(rng, -3, 3)), den));
    return s;
}

/// Random Laurent polynomial with up to `terms` terms and exponents in [lo, hi].
inline LaurentPoly random_poly(std::mt19937_64& rng, const VarList& vars, int terms, std::int64_t lo,
                               std::int64_t hi, bool complex = false) {
    LaurentPoly p(vars);
    const int count = static_cast<int>(uniform(rng, 0, terms));
    for (int t = 0; t < count; ++t) {
        Exponent e(vars.size());
        for (auto& v : e) v = uniform(rng, lo, hi);
        p.add_term(e, random_scalar(rng, complex));
    }
    return p;
}

}  // namespace ccclose::testing

#endif  // CCCLOSE_TEST_SUPPORT_HPP
