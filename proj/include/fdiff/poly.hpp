#pragma once

#include "fdiff/jet.hpp"

#include <optional>
#include <vector>

namespace fdiff {

/// Polynomial in k variables over Q(i), stored recursively: a dense vector
/// of coefficients in the first variable, each a polynomial in the other
/// k-1 variables. Level 0 is a scalar.
class Poly {
public:
    Poly() = default;
    static Poly constant(std::size_t nvars, const Scalar& c);
    /// All stored terms of the jet, read as an exact polynomial.
    static Poly from_jet(const Jet& j);

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const;
    /// Degree in the main variable; -1 for zero.
    int degree() const;
    /// True iff the polynomial is a nonzero constant.
    bool is_constant() const;
    const Poly& lead() const { return co_.back(); }
    const Poly& coeff(std::size_t e) const { return co_[e]; }
    const Scalar& scalar() const { return c_; }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    /// Multiply by the main variable to the power e.
    Poly shifted(unsigned e) const;
    /// Embed a level k-1 polynomial as a coefficient of x^e.
    static Poly from_coeff(const Poly& c, unsigned e);

    /// Exact quotient, empty when the division leaves a remainder.
    std::optional<Poly> divide(const Poly& d) const;

    bool operator==(const Poly& o) const;

private:
    void trim();

    std::size_t nvars_ = 0;
    Scalar c_;
    std::vector<Poly> co_;
};

/// Greatest common divisor, normalized so the innermost leading scalar is 1.
Poly gcd(const Poly& a, const Poly& b);

/// Whether two homogeneous polynomials (given as jets holding exact
/// polynomials) have no common non-constant factor. Two zero inputs or a
/// zero paired with a non-unit are not coprime.
bool homogeneous_coprime(const Jet& a, const Jet& b);

}  // namespace fdiff
