#pragma once

#include "fdiff/multi_index.hpp"
#include "fdiff/scalar.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fdiff {

/// Variable names used when rendering; index i names z_{i+1}.
using VarNames = std::vector<std::string>;

/// Default names: x, y for two variables, z1..zn otherwise.
VarNames default_var_names(std::size_t n_vars);

/// A multivariate power series in n variables truncated at total degree N
/// (an element of C[[z]]/m^{N+1}), with exact Gaussian rational
/// coefficients. Zero coefficients are never stored.
///
/// Jets of different n_vars or order never mix: every binary operation
/// throws MismatchError instead of coercing.
class Jet {
public:
    using Terms = std::map<MultiIndex, Scalar>;

    Jet() = default;
    Jet(std::size_t n_vars, unsigned order);

    static Jet constant(std::size_t n_vars, unsigned order, const Scalar& c);
    static Jet variable(std::size_t n_vars, unsigned order, std::size_t var);
    static Jet monomial(std::size_t n_vars, unsigned order, const MultiIndex& m,
                        const Scalar& c = Scalar(1));

    std::size_t n_vars() const { return n_; }
    unsigned order() const { return order_; }
    const Terms& terms() const { return terms_; }

    Scalar coeff(const MultiIndex& m) const;
    Scalar constant_term() const;
    bool is_zero() const { return terms_.empty(); }

    /// Adds c*z^m in place; terms above the order are dropped.
    void add_term(const MultiIndex& m, const Scalar& c);

    /// Least degree with a nonzero coefficient; empty for the zero jet.
    std::optional<unsigned> order_of_vanishing() const;
    /// Largest degree present; empty for the zero jet.
    std::optional<unsigned> max_degree() const;

    Jet homogeneous_part(unsigned degree) const;
    /// Same order, all terms of degree > max_degree removed.
    Jet truncated(unsigned max_degree) const;
    /// Re-declares the jet at a new order; lowering truncates, raising keeps
    /// the stored terms (meaningful for polynomials only).
    Jet with_order(unsigned order) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Scalar& c);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator*(Jet a, const Scalar& c) { return a *= c; }
    friend Jet operator*(const Scalar& c, Jet a) { return a *= c; }

    Jet pow(unsigned e) const;
    /// Exact division by z^m; throws PreconditionError if some term is not
    /// divisible.
    Jet divide_by_monomial(const MultiIndex& m) const;
    /// Multiplication by z^m, truncated.
    Jet times_monomial(const MultiIndex& m) const;

    friend bool operator==(const Jet& a, const Jet& b) {
        return a.n_ == b.n_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    std::size_t hash() const;

    /// Canonical text such as "x + 3/2*x^2*y - i*y^3" (terms in graded-lex
    /// order); "0" for the zero jet.
    std::string str(const VarNames& names) const;
    std::string str() const { return str(default_var_names(n_)); }

private:
    void check_compatible(const Jet& o) const;

    std::size_t n_ = 0;
    unsigned order_ = 0;
    Terms terms_;
};

/// Throws MismatchError unless both jets share n_vars and order.
void require_compatible(const Jet& a, const Jet& b);

/// Formal partial derivative. The result keeps order N although its degree-N
/// coefficient is not determined by the truncated input.
Jet partial(const Jet& g, std::size_t var);

/// g(s_1, ..., s_n) truncated at order N. Every substituted jet must have a
/// zero constant term.
Jet compose(const Jet& g, std::span<const Jet> subst);

/// (1 + u)^alpha as a truncated binomial series; u(0) must vanish.
Jet binomial_power(const Jet& u, const Rational& alpha);

/// Multiplicative inverse of a unit (u(0) != 0).
Jet invert_unit(const Jet& u);

/// Identity tuple (z_1, ..., z_n).
std::vector<Jet> coordinate_jets(std::size_t n_vars, unsigned order);

}  // namespace fdiff
