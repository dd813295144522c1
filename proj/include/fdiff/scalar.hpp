#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

namespace fdiff {

/// Arbitrary-precision rational number. GMP keeps it canonical after every
/// arithmetic operation (coprime parts, positive denominator).
using Rational = mpq_class;

/// Parses "p" or "p/q"; throws PreconditionError on malformed input or a
/// zero denominator.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

/// Exact Gaussian rational re + im*i.
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
    Scalar(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
    Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return sgn(im_) == 0 && re_ == 1; }

    Scalar conj() const { return Scalar(re_, -im_); }
    /// Squared modulus re^2 + im^2.
    Rational norm() const { return re_ * re_ + im_ * im_; }
    Scalar inverse() const;

    Scalar operator-() const { return Scalar(-re_, -im_); }
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Integer power; negative exponents invert.
    Scalar pow(long e) const;

    std::size_t hash() const;

    /// Canonical text, parseable by the document grammar: "3/2", "-i",
    /// "(1/2+3*i)".
    std::string str() const;

private:
    Rational re_{0};
    Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Generalized binomial coefficient C(alpha, j) = alpha(alpha-1)...(alpha-j+1)/j!.
Rational binomial(const Rational& alpha, unsigned j);

}  // namespace fdiff
