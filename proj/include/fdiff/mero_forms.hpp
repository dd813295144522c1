#pragma once

#include "fdiff/formal_maps.hpp"
#include "fdiff/jet.hpp"
#include "fdiff/matrix.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fdiff {

/// Formal quotient num / (z^shift den).
///
/// The monomial part of the denominator is kept as an exponent vector so it
/// never falls off the truncation; den itself has no monomial factor and num
/// shares no monomial factor with z^shift. `precision` is the degree through
/// which num and den are known exactly. Equality is cross-multiplication
/// through that degree.
class MeroJet {
public:
    MeroJet() = default;
    explicit MeroJet(Jet num);
    MeroJet(Jet num, Jet den);
    MeroJet(Jet num, Jet den, unsigned precision);
    static MeroJet constant(std::size_t n_vars, unsigned order, const Scalar& c);

    std::size_t n_vars() const { return num_.n_vars(); }
    unsigned order() const { return num_.order(); }
    const Jet& num() const { return num_; }
    const Jet& den() const { return den_; }
    const MultiIndex& shift() const { return shift_; }
    unsigned precision() const { return prec_; }

    bool is_zero() const;
    /// den = c z^a, as (a, c).
    std::optional<std::pair<MultiIndex, Scalar>> monomial_denominator() const;

    MeroJet operator-() const;
    MeroJet operator+(const MeroJet& o) const;
    MeroJet operator-(const MeroJet& o) const;
    MeroJet operator*(const MeroJet& o) const;
    MeroJet operator/(const MeroJet& o) const;
    MeroJet operator*(const Scalar& c) const;

    friend bool operator==(const MeroJet& a, const MeroJet& b);

    /// "num" when the denominator is 1, else "(num)/(den)/(z^shift)" with
    /// the trivial parts left out.
    std::string str(const VarNames& names) const;
    std::string str() const { return str(default_var_names(n_vars())); }

    /// num z^exp / den for a signed exponent vector, normalized.
    static MeroJet from_parts(Jet num, Jet den, const std::vector<int>& exp, unsigned precision);

private:
    /// from_parts for a den that is a product of reduced denominators: its
    /// monomial content is 1 and any apparent content is a truncation effect.
    /// An exact zero with the given precision.
    MeroJet zero_like(unsigned precision) const;
    static MeroJet assemble(Jet num, Jet den, const std::vector<int>& exp, unsigned precision, bool den_reduced);
    /// Degree through which den is exact; a constant den is exact everywhere.
    unsigned den_precision() const {
        return den_.terms().size() == 1 && den_.terms().begin()->first.degree() == 0 ? order() : prec_;
    }

    Jet num_;
    Jet den_;
    MultiIndex shift_;
    unsigned prec_ = 0;
};

MeroJet partial(const MeroJet& t, std::size_t var);
/// t o g
MeroJet compose(const MeroJet& t, const Diffeo& g);

/// Laurent expansion in two variables of a quotient whose denominator is
/// x^a y^b times a unit. Coefficients are exact for a + b <= max_total.
struct Laurent {
    std::map<std::pair<int, int>, Scalar> terms;
    int max_total = 0;
    Scalar coeff(int a, int b) const;
};

/// Throws PreconditionError when the denominator is not a monomial times a
/// unit (poles off the coordinate axes).
Laurent laurent_expansion(const MeroJet& t);

/// Vector field with quotient coefficients.
class MeroField {
public:
    MeroField() = default;
    explicit MeroField(std::vector<MeroJet> comps);
    explicit MeroField(const VectorField& X);

    std::size_t n_vars() const { return c_.size(); }
    const std::vector<MeroJet>& comps() const { return c_; }
    const MeroJet& operator[](std::size_t i) const { return c_[i]; }
    bool is_zero() const;
    bool operator==(const MeroField& o) const { return c_ == o.c_; }
    std::string str(const VarNames& names) const;

private:
    std::vector<MeroJet> c_;
};

MeroJet apply_derivation(const MeroField& X, const MeroJet& t);
/// Same sign convention as the polynomial bracket.
MeroField lie_bracket(const MeroField& X, const MeroField& Y);

/// sum_j R_j dz_j
class OneForm {
public:
    OneForm() = default;
    explicit OneForm(std::vector<MeroJet> coeffs);

    std::size_t n_vars() const { return c_.size(); }
    unsigned order() const { return c_.front().order(); }
    const std::vector<MeroJet>& coeffs() const { return c_; }
    const MeroJet& operator[](std::size_t i) const { return c_[i]; }

    OneForm operator+(const OneForm& o) const;
    OneForm operator-(const OneForm& o) const;
    OneForm operator*(const Scalar& c) const;
    bool operator==(const OneForm& o) const { return c_ == o.c_; }

    /// omega(X)
    MeroJet evaluate(const MeroField& X) const;
    MeroJet evaluate(const VectorField& X) const { return evaluate(MeroField(X)); }

    /// "(R_1) dx + (R_2) dy", zero coefficients omitted.
    std::string str(const VarNames& names) const;
    std::string str() const { return str(default_var_names(n_vars())); }

private:
    std::vector<MeroJet> c_;
};

/// dT
OneForm exterior_derivative(const MeroJet& t);
/// dz_var / z_var
OneForm log_form(std::size_t n_vars, unsigned order, std::size_t var);
/// dz_var
OneForm coordinate_form(std::size_t n_vars, unsigned order, std::size_t var);

bool is_closed(const OneForm& w);
OneForm pullback(const Diffeo& g, const OneForm& w);

/// The pair of closed forms dual to two commuting independent plane fields.
/// Throws PreconditionError when A1 B2 - A2 B1 vanishes or the bracket is
/// nonzero.
std::pair<OneForm, OneForm> dual_closed_forms(const VectorField& X1, const VectorField& X2);
/// Dual basis of two plane one-forms.
std::pair<MeroField, MeroField> dual_frame(const OneForm& w1, const OneForm& w2);

/// Residue of a closed plane form along the axis {z_axis = 0}.
Scalar residue_along_axis(const OneForm& w, std::size_t axis);

struct IntegrationResult {
    Scalar lambda;
    Scalar mu;
    unsigned pole_x = 0;
    unsigned pole_y = 0;
    /// f with w = lambda dx/x + mu dy/y + d(f / (x^pole_x y^pole_y)); the
    /// coefficient of x^pole_x y^pole_y is normalized to 0.
    Jet primitive;
    /// Degree through which the primitive is exact.
    unsigned precision = 0;
};

/// lambda dx/x + mu dy/y + d(f / (x^n y^m))
OneForm log_exact_form(const Scalar& lambda, const Scalar& mu, unsigned n, unsigned m, const Jet& f);

IntegrationResult integrate_closed(const OneForm& w);

enum class NormalFamily { A, B, C };

struct NormalFormParams {
    NormalFamily family = NormalFamily::A;
    unsigned n = 1;
    unsigned m = 1;
    /// second exponent pair, family A only
    unsigned p = 1;
    unsigned q = 2;
    Scalar k1;
    Scalar k2;
    /// linear coefficient a (family B) or b (family C)
    Scalar scale = Scalar(1);
    /// the companion root: r with r^m a^n = 1 (B), s with s^n b^m = 1 (C)
    Scalar root = Scalar(1);
};

Diffeo normal_form_generator(const NormalFormParams& params, unsigned order);
/// The two closed forms preserved by the family.
std::pair<OneForm, OneForm> normal_form_invariants(const NormalFormParams& params, unsigned order);

/// d(1 / (x^n y^m))
OneForm polar_form(unsigned n, unsigned m, unsigned order);

/// The generator (x u, y v) with 1/(u^n v^m) = a1 + k1 x^n y^m and
/// 1/(u^p v^q) = a2 + k2 x^p y^q. Non-integer exponents need a1 = a2 = 1.
Diffeo pure_polar_generator(unsigned n, unsigned m, unsigned p, unsigned q, const Scalar& a1,
                            const Scalar& a2, const Scalar& k1, const Scalar& k2, unsigned order);

/// Whether g^* w_j = A(j,0) w1 + A(j,1) w2 for every generator and its law.
bool verify_remark_6_3(const std::vector<Diffeo>& gens, const OneForm& w1, const OneForm& w2,
                       const std::vector<Matrix>& laws);

/// X(T) = 0 at the verifiable degree.
bool verify_first_integral(const VectorField& X, const MeroJet& t);

}  // namespace fdiff
