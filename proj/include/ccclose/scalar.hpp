#ifndef CCCLOSE_SCALAR_HPP
#define CCCLOSE_SCALAR_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace ccclose {

/// Exact Gaussian rational re + im*i. Both parts are kept canonical by GMP.
class Scalar {
public:
    Scalar() = default;
    Scalar(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
    explicit Scalar(mpq_class re, mpq_class im = 0);

    static Scalar rational(long num, long den);
    static Scalar imaginary_unit() { return Scalar(mpq_class(0), mpq_class(1)); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

    Scalar conj() const { return Scalar(re_, -im_); }
    /// re^2 + im^2
    mpq_class norm() const { return re_ * re_ + im_ * im_; }
    Scalar pow(std::int64_t e) const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    Scalar operator-() const { return Scalar(-re_, -im_); }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    /// Lexicographic on (re, im); only used for deterministic ordering.
    friend bool operator<(const Scalar& a, const Scalar& b) {
        return a.re_ != b.re_ ? a.re_ < b.re_ : a.im_ < b.im_;
    }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    /// Human form: "3", "-2/5", "1/2+3/4*i", "-i".
    std::string str() const;

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// "p/q" with the denominator always present ("-22/1").
std::string rational_to_string(const mpq_class& q);
/// Accepts "p/q" or "p"; throws std::invalid_argument otherwise.
mpq_class rational_from_string(std::string_view text);

}  // namespace ccclose

#endif  // CCCLOSE_SCALAR_HPP
