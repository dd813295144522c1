#pragma once

#include "fdiff/jet.hpp"
#include "fdiff/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fdiff {

/// Formal vector field sum_i a_i d/dz_i; component i is a_i.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(std::vector<Jet> comps);
    static VectorField zero(std::size_t n_vars, unsigned order);
    /// sum_i z_i d/dz_i
    static VectorField radial(std::size_t n_vars, unsigned order);
    /// The coordinate field d/dz_var.
    static VectorField coordinate(std::size_t n_vars, unsigned order, std::size_t var);

    std::size_t n_vars() const { return c_.size(); }
    unsigned order() const { return c_.front().order(); }
    const std::vector<Jet>& comps() const { return c_; }
    const Jet& operator[](std::size_t i) const { return c_[i]; }

    bool is_zero() const;
    /// min over components; empty for the zero field.
    std::optional<unsigned> order_of_vanishing() const;
    VectorField homogeneous_part(unsigned degree) const;
    VectorField truncated(unsigned max_degree) const;
    /// Degree-1 coefficients as an n x n matrix (row i = component i).
    Matrix linear_part() const;

    VectorField operator-() const;
    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField operator*(const Scalar& c) const;
    /// Multiply every component by a function.
    VectorField times(const Jet& f) const;

    bool operator==(const VectorField& o) const { return c_ == o.c_; }
    std::size_t hash() const;

    /// "(a_1) d/dx + (a_2) d/dy", zero components omitted.
    std::string str(const VarNames& names) const;
    std::string str() const { return str(default_var_names(n_vars())); }

private:
    std::vector<Jet> c_;
};

/// Formal diffeomorphism z -> (f_1(z), ..., f_n(z)) with f(0) = 0 and an
/// invertible linear part.
class Diffeo {
public:
    Diffeo() = default;
    /// Validates zero constant terms and invertibility of the linear part.
    explicit Diffeo(std::vector<Jet> comps);
    static Diffeo identity(std::size_t n_vars, unsigned order);
    static Diffeo linear(const Matrix& m, unsigned order);
    static Diffeo homothety(std::size_t n_vars, unsigned order, const Scalar& lambda);

    std::size_t n_vars() const { return c_.size(); }
    unsigned order() const { return c_.front().order(); }
    const std::vector<Jet>& comps() const { return c_; }
    const Jet& operator[](std::size_t i) const { return c_[i]; }

    Matrix linear_part() const;
    bool is_identity() const;
    /// f - Id as a field, handy for leading-term inspection.
    VectorField displacement() const;

    bool operator==(const Diffeo& o) const { return c_ == o.c_; }
    std::size_t hash() const;

    /// "(f_1, f_2)"
    std::string str(const VarNames& names) const;
    std::string str() const { return str(default_var_names(n_vars())); }

private:
    std::vector<Jet> c_;
};

struct DiffeoHash {
    std::size_t operator()(const Diffeo& f) const { return f.hash(); }
};

struct TangencyOrder {
    enum class Kind { Order, Identity, NotTangent };
    Kind kind = Kind::Identity;
    unsigned k = 0;

    bool is_order() const { return kind == Kind::Order; }
    std::string str() const;
    bool operator==(const TangencyOrder&) const = default;
};

/// sum_i X_i dg/dz_i
Jet apply_derivation(const VectorField& X, const Jet& g);

/// Component i equals Y(X_i) - X(Y_i). With this sign the bracket of
/// f R and g R (f, g homogeneous of degrees k, s) is (k - s) f g R, and the
/// leading term of the group commutator of exp(X), exp(Y) is [X, Y].
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

/// Time-1 flow, exp(X)(z_i) = sum_j X^j(z_i) / j!.
Diffeo exp(const VectorField& X);
/// Time-t flow exp(tX).
Diffeo exp_t(const VectorField& X, const Scalar& t);
/// Infinitesimal generator of a unipotent diffeomorphism.
VectorField log(const Diffeo& f);

/// f o g
Diffeo compose(const Diffeo& f, const Diffeo& g);
Diffeo inverse(const Diffeo& f);
/// f o g o f^-1 o g^-1
Diffeo commutator(const Diffeo& f, const Diffeo& g);
/// f^e for any integer e.
Diffeo power(const Diffeo& f, long e);

/// (Dg . X) o g^-1. When X(0) != 0 the top degree is not determined by
/// the input and is dropped.
VectorField pushforward(const Diffeo& g, const VectorField& X);

TangencyOrder tangency_order(const Diffeo& f);

/// Whether the leading homogeneous part of X is f(z) R for a homogeneous f.
/// Fields of order < 2 are reported as not dicritic.
bool is_dicritic(const VectorField& X);
/// The radial factor f of a dicritic field; empty if X is not dicritic.
std::optional<Jet> dicritic_factor(const VectorField& X);
/// Dicritic with the coprimality condition between f and
/// z_j p_i - z_i p_j for the next homogeneous part p, for some i < j.
/// Throws PreconditionError when the jet order is too low to see p.
bool is_regular_dicritic(const VectorField& X);
bool is_dicritic(const Diffeo& f);
/// Regular dicritic test on log(f); f must be tangent to the identity.
bool is_regular_dicritic(const Diffeo& f);

/// c with Y = c X if one exists. Throws PreconditionError for X = 0.
std::optional<Scalar> proportionality(const VectorField& Y, const VectorField& X);

/// c with pushforward(g, X) = c X if one exists.
std::optional<Scalar> projective_factor(const Diffeo& g, const VectorField& X);

/// r with g = exp(r X) if one exists.
std::optional<Scalar> flow_membership(const Diffeo& g, const VectorField& X);

/// z^{k+1} / (1 + lambda z^k) d/dz in one variable.
VectorField normal_form_1d(unsigned k, const Scalar& lambda, unsigned order);

}  // namespace fdiff
