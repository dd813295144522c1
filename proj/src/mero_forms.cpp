#include "fdiff/mero_forms.hpp"

#include "fdiff/error.hpp"

#include <algorithm>
#include <climits>

namespace fdiff {

namespace {

Jet one_like(const Jet& j) { return Jet::constant(j.n_vars(), j.order(), Scalar(1)); }

MultiIndex monomial_lcm(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a.n_vars());
    for (std::size_t i = 0; i < a.n_vars(); ++i) r.set(i, std::max(a[i], b[i]));
    return r;
}

/// Largest monomial dividing every term; zero exponents for the zero jet.
MultiIndex monomial_content(const Jet& j) {
    MultiIndex r(j.n_vars());
    if (j.is_zero()) return r;
    for (std::size_t v = 0; v < j.n_vars(); ++v) {
        unsigned lo = UINT_MAX;
        for (const auto& [m, c] : j.terms()) lo = std::min(lo, m[v]);
        r.set(v, lo);
    }
    return r;
}

unsigned drop(unsigned prec, unsigned by) { return prec >= by ? prec - by : 0; }

void require_plane(std::size_t n, const char* what) {
    if (n != 2) throw PreconditionError(std::string(what) + " is only defined for two variables");
}

}  // namespace

// -------------------------------------------------------------------- MeroJet

MeroJet MeroJet::from_parts(Jet num, Jet den, const std::vector<int>& exp, unsigned precision) {
    return assemble(std::move(num), std::move(den), exp, precision, false);
}

MeroJet MeroJet::assemble(Jet num, Jet den, const std::vector<int>& exp, unsigned precision, bool den_reduced) {
    require_compatible(num, den);
    if (den.is_zero()) throw PreconditionError("zero denominator at this jet order");
    const std::size_t n = num.n_vars();
    const unsigned N = num.order();
    std::vector<int> e = exp;
    e.resize(n, 0);
    unsigned prec = std::min(precision, N);

    MultiIndex dc = den_reduced ? MultiIndex(n) : monomial_content(den);
    if (dc.degree() > 0) {
        if (den.terms().size() != 1) prec = drop(prec, dc.degree());
        den = den.divide_by_monomial(dc);
        for (std::size_t v = 0; v < n; ++v) e[v] -= static_cast<int>(dc[v]);
    }
    MeroJet out;
    if (num.is_zero()) {
        // a vanishing num over z^-e den is only known to vanish through
        // prec minus the pole order
        unsigned pole = *den.order_of_vanishing();
        for (std::size_t v = 0; v < n; ++v) {
            if (e[v] < 0) pole += static_cast<unsigned>(-e[v]);
        }
        prec = drop(prec, pole);
        out.num_ = num;
        out.den_ = one_like(num);
        out.shift_ = MultiIndex(n);
        out.prec_ = prec;
        return out;
    }
    MultiIndex up(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (e[v] > 0) up.set(v, static_cast<unsigned>(e[v]));
    }
    if (up.degree() > 0) {
        num = num.times_monomial(up);
        prec = std::min(prec + up.degree(), N);
    }
    MultiIndex nc = monomial_content(num), cancel(n), shift(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (e[v] >= 0) continue;
        unsigned c = std::min(static_cast<unsigned>(-e[v]), nc[v]);
        cancel.set(v, c);
        shift.set(v, static_cast<unsigned>(-e[v]) - c);
    }
    if (cancel.degree() > 0) {
        num = num.divide_by_monomial(cancel);
        prec = drop(prec, cancel.degree());
    }
    // lowest term of the denominator has coefficient 1
    const Scalar lead = den.terms().begin()->second;
    if (!lead.is_one()) {
        num *= lead.inverse();
        den *= lead.inverse();
    }
    out.num_ = std::move(num);
    out.den_ = std::move(den);
    out.shift_ = shift;
    out.prec_ = prec;
    return out;
}

MeroJet::MeroJet(Jet num)
    : num_(std::move(num)), den_(one_like(num_)), shift_(num_.n_vars()), prec_(num_.order()) {}

MeroJet::MeroJet(Jet num, Jet den) : MeroJet(std::move(num), std::move(den), UINT_MAX) {}

MeroJet::MeroJet(Jet num, Jet den, unsigned precision) {
    *this = from_parts(std::move(num), std::move(den), {}, precision);
}

MeroJet MeroJet::zero_like(unsigned precision) const {
    MeroJet z = constant(n_vars(), order(), Scalar());
    z.prec_ = std::min(precision, order());
    return z;
}

MeroJet MeroJet::constant(std::size_t n_vars, unsigned order, const Scalar& c) {
    return MeroJet(Jet::constant(n_vars, order, c));
}

bool MeroJet::is_zero() const { return num_.truncated(prec_).is_zero(); }

std::optional<std::pair<MultiIndex, Scalar>> MeroJet::monomial_denominator() const {
    if (den_.terms().size() != 1) return std::nullopt;
    return std::make_pair(shift_, den_.terms().begin()->second);
}

namespace {

std::vector<int> negated(const MultiIndex& m) {
    std::vector<int> e(m.n_vars());
    for (std::size_t v = 0; v < m.n_vars(); ++v) e[v] = -static_cast<int>(m[v]);
    return e;
}

}  // namespace

MeroJet MeroJet::operator-() const {
    MeroJet r = *this;
    r.num_ = -num_;
    return r;
}

MeroJet MeroJet::operator+(const MeroJet& o) const {
    require_compatible(num_, o.num_);
    MultiIndex l = monomial_lcm(shift_, o.shift_);
    MultiIndex da = *l.minus(shift_), db = *l.minus(o.shift_);
    Jet a = num_.times_monomial(da);
    Jet b = o.num_.times_monomial(db);
    const unsigned p = std::min({std::min(prec_, o.den_precision()) + da.degree(),
                                 std::min(o.prec_, den_precision()) + db.degree(), order()});
    if (den_ == o.den_) return assemble(a + b, den_, negated(l), p, true);
    return assemble(a * o.den_ + b * den_, den_ * o.den_, negated(l), p, true);
}

MeroJet MeroJet::operator-(const MeroJet& o) const { return *this + (-o); }

MeroJet MeroJet::operator*(const MeroJet& o) const {
    require_compatible(num_, o.num_);
    if (num_.is_zero() || o.num_.is_zero()) return zero_like(std::min(prec_, o.prec_));
    return assemble(num_ * o.num_, den_ * o.den_, negated(shift_ + o.shift_), std::min(prec_, o.prec_), true);
}

MeroJet MeroJet::operator/(const MeroJet& o) const {
    require_compatible(num_, o.num_);
    if (o.is_zero()) throw PreconditionError("division by a zero quotient");
    if (num_.is_zero()) return zero_like(std::min(prec_, o.prec_));
    // the monomial factor of the divisor goes to the exponent, not the truncated product
    const MultiIndex c = monomial_content(o.num_);
    const Jet divisor = o.num_.divide_by_monomial(c);
    unsigned prec = std::min(prec_, o.prec_);
    if (o.num_.terms().size() != 1) prec = drop(prec, c.degree());
    std::vector<int> e(n_vars());
    for (std::size_t v = 0; v < n_vars(); ++v) {
        e[v] = static_cast<int>(o.shift_[v]) - static_cast<int>(shift_[v]) - static_cast<int>(c[v]);
    }
    return assemble(num_ * o.den_, den_ * divisor, e, prec, true);
}

MeroJet MeroJet::operator*(const Scalar& c) const {
    if (c.is_zero()) return MeroJet::constant(n_vars(), order(), Scalar());
    MeroJet r = *this;
    r.num_ = num_ * c;
    return r;
}

bool operator==(const MeroJet& a, const MeroJet& b) {
    if (a.n_vars() != b.n_vars() || a.order() != b.order()) return false;
    MultiIndex l = monomial_lcm(a.shift_, b.shift_);
    MultiIndex da = *l.minus(a.shift_), db = *l.minus(b.shift_);
    const unsigned p = std::min({std::min(a.prec_, b.den_precision()) + da.degree(),
                                 std::min(b.prec_, a.den_precision()) + db.degree(), a.order()});
    Jet lhs = (a.num_ * b.den_).times_monomial(da);
    Jet rhs = (b.num_ * a.den_).times_monomial(db);
    return (lhs - rhs).truncated(p).is_zero();
}

std::string MeroJet::str(const VarNames& names) const {
    const bool unit_den = den_ == one_like(den_);
    if (shift_.degree() == 0 && unit_den) return num_.str(names);
    std::string out = "(" + num_.str(names) + ")";
    if (!unit_den) out += "/(" + den_.str(names) + ")";
    if (shift_.degree() == 0) return out;
    if (shift_.degree() <= order()) return out + "/(" + Jet::monomial(n_vars(), order(), shift_).str(names) + ")";
    // a pole above the jet order is written with negative powers
    for (std::size_t v = 0; v < n_vars(); ++v) {
        if (shift_[v] > 0) out += "*" + names.at(v) + "^-" + std::to_string(shift_[v]);
    }
    return out;
}

MeroJet partial(const MeroJet& t, std::size_t var) {
    // d/dz (a / (z^s b)) = (z (a' b - a b') - s_z a b) / (z^{s + e} b^2)
    const std::size_t n = t.n_vars();
    Jet z = Jet::variable(n, t.order(), var);
    const Scalar s(static_cast<long>(t.shift()[var]));
    std::vector<int> e = negated(t.shift() + MultiIndex::unit(n, var));
    if (t.den().terms().size() == 1 && t.den().constant_term() != Scalar()) {
        Jet num = z * partial(t.num(), var) - t.num() * s;
        return MeroJet::from_parts(num, t.den(), e, t.precision());
    }
    const Jet &a = t.num(), &b = t.den();
    Jet num = z * (partial(a, var) * b - a * partial(b, var)) - a * b * s;
    return MeroJet::from_parts(num, b * b, e, t.precision());
}

MeroJet compose(const MeroJet& t, const Diffeo& g) {
    if (g.n_vars() != t.n_vars()) throw MismatchError("composition in different dimensions");
    const std::size_t n = t.n_vars();
    const unsigned N = t.order();
    unsigned prec = t.precision();
    Jet den = compose(t.den(), g.comps());
    std::vector<int> e(n, 0);
    // (g_v)^{s_v} = z^{s_v c_v} h_v^{s_v} with c_v the monomial content of g_v
    for (std::size_t v = 0; v < n; ++v) {
        const unsigned s = t.shift()[v];
        if (s == 0) continue;
        MultiIndex c = monomial_content(g[v]);
        Jet h = g[v].divide_by_monomial(c);
        if (g[v].terms().size() != 1) prec = std::min(prec, drop(N, c.degree()));
        den = den * h.pow(s);
        for (std::size_t w = 0; w < n; ++w) e[w] -= static_cast<int>(s * c[w]);
    }
    return MeroJet::from_parts(compose(t.num(), g.comps()), den, e, prec);
}

// -------------------------------------------------------------------- Laurent

Scalar Laurent::coeff(int a, int b) const {
    auto it = terms.find({a, b});
    return it == terms.end() ? Scalar() : it->second;
}

Laurent laurent_expansion(const MeroJet& t) {
    require_plane(t.n_vars(), "Laurent expansion");
    if (t.den().constant_term().is_zero()) {
        throw PreconditionError("denominator " + t.den().str() + " has poles off the coordinate axes");
    }
    const MultiIndex& s = t.shift();
    const int exact_deg = static_cast<int>(t.precision());
    Jet series = t.num() * invert_unit(t.den());
    Laurent out;
    out.max_total = exact_deg - static_cast<int>(s.degree());
    for (const auto& [m, c] : series.terms()) {
        if (static_cast<int>(m.degree()) > exact_deg) break;
        out.terms[{static_cast<int>(m[0]) - static_cast<int>(s[0]),
                   static_cast<int>(m[1]) - static_cast<int>(s[1])}] = c;
    }
    return out;
}

// ------------------------------------------------------------------ MeroField

MeroField::MeroField(std::vector<MeroJet> comps) : c_(std::move(comps)) {
    if (c_.empty()) throw PreconditionError("field needs at least one component");
    for (const auto& c : c_) {
        require_compatible(c.num(), c_.front().num());
        if (c.n_vars() != c_.size()) throw MismatchError("field arity differs from dimension");
    }
}

MeroField::MeroField(const VectorField& X) {
    for (const Jet& j : X.comps()) c_.emplace_back(j);
}

bool MeroField::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const MeroJet& c) { return c.is_zero(); });
}

std::string MeroField::str(const VarNames& names) const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + c_[i].str(names) + ") d/d" + names.at(i);
    }
    return out.empty() ? "0 d/d" + names.at(0) : out;
}

MeroJet apply_derivation(const MeroField& X, const MeroJet& t) {
    if (X.n_vars() != t.n_vars()) throw MismatchError("field and function in different dimensions");
    MeroJet acc = MeroJet::constant(t.n_vars(), t.order(), Scalar());
    for (std::size_t i = 0; i < X.n_vars(); ++i) {
        if (X[i].is_zero()) continue;
        acc = acc + X[i] * partial(t, i);
    }
    return acc;
}

MeroField lie_bracket(const MeroField& X, const MeroField& Y) {
    if (X.n_vars() != Y.n_vars()) throw MismatchError("fields in different dimensions");
    std::vector<MeroJet> c;
    for (std::size_t i = 0; i < X.n_vars(); ++i) {
        c.push_back(apply_derivation(Y, X[i]) - apply_derivation(X, Y[i]));
    }
    return MeroField(std::move(c));
}

// -------------------------------------------------------------------- OneForm

OneForm::OneForm(std::vector<MeroJet> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw PreconditionError("one-form needs at least one coefficient");
    for (const auto& c : c_) {
        require_compatible(c.num(), c_.front().num());
        if (c.n_vars() != c_.size()) throw MismatchError("one-form arity differs from dimension");
    }
}

OneForm OneForm::operator+(const OneForm& o) const {
    if (n_vars() != o.n_vars()) throw MismatchError("one-forms in different dimensions");
    std::vector<MeroJet> c;
    for (std::size_t i = 0; i < c_.size(); ++i) c.push_back(c_[i] + o.c_[i]);
    return OneForm(std::move(c));
}

OneForm OneForm::operator-(const OneForm& o) const { return *this + o * Scalar(-1); }

OneForm OneForm::operator*(const Scalar& s) const {
    std::vector<MeroJet> c;
    for (const auto& v : c_) c.push_back(v * s);
    return OneForm(std::move(c));
}

MeroJet OneForm::evaluate(const MeroField& X) const {
    if (X.n_vars() != n_vars()) throw MismatchError("form and field in different dimensions");
    MeroJet acc = MeroJet::constant(n_vars(), order(), Scalar());
    for (std::size_t i = 0; i < c_.size(); ++i) acc = acc + c_[i] * X[i];
    return acc;
}

std::string OneForm::str(const VarNames& names) const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + c_[i].str(names) + ") d" + names.at(i);
    }
    return out.empty() ? "0 d" + names.at(0) : out;
}

OneForm exterior_derivative(const MeroJet& t) {
    std::vector<MeroJet> c;
    for (std::size_t i = 0; i < t.n_vars(); ++i) c.push_back(partial(t, i));
    return OneForm(std::move(c));
}

OneForm log_form(std::size_t n_vars, unsigned order, std::size_t var) {
    std::vector<MeroJet> c(n_vars, MeroJet::constant(n_vars, order, Scalar()));
    c.at(var) = MeroJet(Jet::constant(n_vars, order, Scalar(1)), Jet::variable(n_vars, order, var));
    return OneForm(std::move(c));
}

OneForm coordinate_form(std::size_t n_vars, unsigned order, std::size_t var) {
    std::vector<MeroJet> c(n_vars, MeroJet::constant(n_vars, order, Scalar()));
    c.at(var) = MeroJet::constant(n_vars, order, Scalar(1));
    return OneForm(std::move(c));
}

bool is_closed(const OneForm& w) {
    for (std::size_t i = 0; i < w.n_vars(); ++i) {
        for (std::size_t j = i + 1; j < w.n_vars(); ++j) {
            if (!(partial(w[i], j) == partial(w[j], i))) return false;
        }
    }
    return true;
}

OneForm pullback(const Diffeo& g, const OneForm& w) {
    if (g.n_vars() != w.n_vars()) throw MismatchError("pullback in different dimensions");
    require_compatible(g[0], w[0].num());
    const std::size_t n = g.n_vars();
    const unsigned order = g.order();
    std::vector<MeroJet> moved;
    for (const auto& c : w.coeffs()) moved.push_back(compose(c, g));
    std::vector<MeroJet> out;
    for (std::size_t i = 0; i < n; ++i) {
        MeroJet acc = MeroJet::constant(n, order, Scalar());
        for (std::size_t j = 0; j < n; ++j) {
            MeroJet dg(partial(g[j], i), Jet::constant(n, order, Scalar(1)), order - 1);
            acc = acc + moved[j] * dg;
        }
        out.push_back(acc);
    }
    return OneForm(std::move(out));
}

std::pair<OneForm, OneForm> dual_closed_forms(const VectorField& X1, const VectorField& X2) {
    require_plane(X1.n_vars(), "dual_closed_forms");
    const Jet &A1 = X1[0], &B1 = X1[1], &A2 = X2[0], &B2 = X2[1];
    Jet Q = A1 * B2 - A2 * B1;
    if (Q.is_zero()) throw PreconditionError("fields are linearly dependent (A1 B2 - A2 B1 = 0)");
    if (!lie_bracket(X1, X2).is_zero()) throw PreconditionError("fields do not commute");
    OneForm w1({MeroJet(B2, Q), MeroJet(-A2, Q)});
    OneForm w2({MeroJet(-B1, Q), MeroJet(A1, Q)});
    return {w1, w2};
}

std::pair<MeroField, MeroField> dual_frame(const OneForm& w1, const OneForm& w2) {
    require_plane(w1.n_vars(), "dual_frame");
    const MeroJet &C1 = w1[0], &D1 = w1[1], &C2 = w2[0], &D2 = w2[1];
    MeroJet delta = C1 * D2 - C2 * D1;
    if (delta.is_zero()) throw PreconditionError("coefficient matrix of the forms is singular");
    MeroField X1({D2 / delta, -C2 / delta});
    MeroField X2({-D1 / delta, C1 / delta});
    return {X1, X2};
}

Scalar residue_along_axis(const OneForm& w, std::size_t axis) {
    require_plane(w.n_vars(), "residue_along_axis");
    if (axis > 1) throw PreconditionError("axis index out of range");
    if (!is_closed(w)) throw PreconditionError("residues need a closed form");
    Laurent L = laurent_expansion(w[axis]);
    if (L.max_total < -1) throw PreconditionError("jet order too low to read the residue");
    Scalar res;
    for (const auto& [ab, c] : L.terms) {
        int own = axis == 0 ? ab.first : ab.second;
        int other = axis == 0 ? ab.second : ab.first;
        if (own != -1) continue;
        if (other == 0) {
            res = c;
        } else {
            throw ConsistencyError("closed form has a nonzero Laurent coefficient on the residue line");
        }
    }
    return res;
}

OneForm log_exact_form(const Scalar& lambda, const Scalar& mu, unsigned n, unsigned m, const Jet& f) {
    require_plane(f.n_vars(), "log_exact_form");
    const unsigned N = f.order();
    MeroJet F(f, Jet::monomial(2, N, MultiIndex{n, m}));
    OneForm exact = exterior_derivative(F);
    return log_form(2, N, 0) * lambda + log_form(2, N, 1) * mu + exact;
}

IntegrationResult integrate_closed(const OneForm& w) {
    require_plane(w.n_vars(), "integrate_closed");
    IntegrationResult out;
    out.lambda = residue_along_axis(w, 0);
    out.mu = residue_along_axis(w, 1);
    Laurent P = laurent_expansion(w[0]);
    Laurent Q = laurent_expansion(w[1]);
    P.terms.erase({-1, 0});
    Q.terms.erase({0, -1});
    const int T = std::min(P.max_total, Q.max_total);

    using Key = std::pair<int, int>;
    std::map<Key, Scalar> F;
    for (const auto& [ab, c] : P.terms) {
        auto [a, b] = ab;
        if (a + b > T) continue;
        if (a == -1) throw ConsistencyError("unexpected x^-1 term after residue removal");
        F[{a + 1, b}] += c / Scalar(a + 1);
    }
    std::map<Key, Scalar> rest;
    for (const auto& [ab, c] : Q.terms) {
        if (ab.first + ab.second <= T) rest[ab] += c;
    }
    for (const auto& [ab, c] : F) {
        auto [a, b] = ab;
        if (b != 0 && a + b - 1 <= T) rest[{a, b - 1}] -= c * Scalar(b);
    }
    for (const auto& [ab, c] : rest) {
        if (c.is_zero()) continue;
        auto [a, b] = ab;
        if (a != 0) throw ConsistencyError("dx and dy parts of the form do not integrate consistently");
        if (b == -1) throw ConsistencyError("unexpected y^-1 term after residue removal");
        F[{0, b + 1}] += c / Scalar(b + 1);
    }

    int min_a = 0, min_b = 0;
    for (const auto& [ab, c] : F) {
        if (c.is_zero()) continue;
        min_a = std::min(min_a, ab.first);
        min_b = std::min(min_b, ab.second);
    }
    out.pole_x = static_cast<unsigned>(-min_a);
    out.pole_y = static_cast<unsigned>(-min_b);
    const unsigned N = w.order();
    const int prec = T + 1 + static_cast<int>(out.pole_x + out.pole_y);
    if (prec < 0) throw PreconditionError("jet order too low to integrate the form");
    out.precision = std::min<unsigned>(static_cast<unsigned>(prec), N);
    out.primitive = Jet(2, N);
    for (const auto& [ab, c] : F) {
        MultiIndex m{static_cast<unsigned>(ab.first - min_a), static_cast<unsigned>(ab.second - min_b)};
        if (m.degree() <= out.precision) out.primitive.add_term(m, c);
    }
    return out;
}

// ---------------------------------------------------------------- normal forms

OneForm polar_form(unsigned n, unsigned m, unsigned order) {
    if (n + m == 0) throw PreconditionError("polar form needs a nonconstant monomial");
    Jet one = Jet::constant(2, order, Scalar(1));
    return exterior_derivative(MeroJet(one, Jet::monomial(2, order, MultiIndex{n, m})));
}

namespace {

// (a + k w)^alpha
Jet unit_power(const Scalar& a, const Scalar& k, const Jet& w, const Rational& alpha) {
    if (a.is_zero()) throw PreconditionError("constant term of a unit factor must be nonzero");
    if (a.is_one()) return binomial_power(w * k, alpha);
    if (alpha.get_den() != 1) {
        throw PreconditionError("fractional power of a non-unit constant; supply the root explicitly");
    }
    return binomial_power(w * (k / a), alpha) * a.pow(alpha.get_num().get_si());
}

}  // namespace

Diffeo pure_polar_generator(unsigned n, unsigned m, unsigned p, unsigned q, const Scalar& a1,
                            const Scalar& a2, const Scalar& k1, const Scalar& k2, unsigned order) {
    const long D = static_cast<long>(n) * q - static_cast<long>(p) * m;
    if (D == 0) throw PreconditionError("exponent pairs are proportional (nq - pm = 0)");
    if (n + m == 0 || p + q == 0) throw PreconditionError("monomials must be nonconstant");
    Jet x = Jet::variable(2, order, 0), y = Jet::variable(2, order, 1);
    Jet w1 = Jet::monomial(2, order, MultiIndex{n, m});
    Jet w2 = Jet::monomial(2, order, MultiIndex{p, q});
    auto frac = [D](long num) {
        Rational r(num, D);
        r.canonicalize();
        return r;
    };
    Jet u = unit_power(a2, k2, w2, frac(m)) * unit_power(a1, k1, w1, frac(-static_cast<long>(q)));
    Jet v = unit_power(a1, k1, w1, frac(p)) * unit_power(a2, k2, w2, frac(-static_cast<long>(n)));
    return Diffeo({x * u, y * v});
}

Diffeo normal_form_generator(const NormalFormParams& P, unsigned order) {
    Jet x = Jet::variable(2, order, 0), y = Jet::variable(2, order, 1);
    switch (P.family) {
        case NormalFamily::A:
            return pure_polar_generator(P.n, P.m, P.p, P.q, Scalar(1), Scalar(1), P.k1, P.k2, order);
        case NormalFamily::B: {
            if (P.m == 0) throw PreconditionError("family B needs m >= 1");
            if (P.scale.is_zero()) throw PreconditionError("family B needs a nonzero scale");
            if (!(P.root.pow(P.m) * P.scale.pow(P.n)).is_one()) {
                throw PreconditionError("family B root must satisfy r^m a^n = 1");
            }
            Jet w = Jet::monomial(2, order, MultiIndex{P.n, P.m});
            Rational alpha(-1, static_cast<long>(P.m));
            alpha.canonicalize();
            return Diffeo({x * P.scale, y * binomial_power(w * P.k1, alpha) * P.root});
        }
        case NormalFamily::C: {
            if (P.n == 0) throw PreconditionError("family C needs n >= 1");
            if (P.scale.is_zero()) throw PreconditionError("family C needs a nonzero scale");
            if (!(P.root.pow(P.n) * P.scale.pow(P.m)).is_one()) {
                throw PreconditionError("family C root must satisfy s^n b^m = 1");
            }
            Jet w = Jet::monomial(2, order, MultiIndex{P.n, P.m});
            Rational alpha(-1, static_cast<long>(P.n));
            alpha.canonicalize();
            return Diffeo({x * binomial_power(w * P.k1, alpha) * P.root, y * P.scale});
        }
    }
    throw PreconditionError("unknown normal-form family");
}

std::pair<OneForm, OneForm> normal_form_invariants(const NormalFormParams& P, unsigned order) {
    switch (P.family) {
        case NormalFamily::A: return {polar_form(P.n, P.m, order), polar_form(P.p, P.q, order)};
        case NormalFamily::B: return {polar_form(P.n, P.m, order), log_form(2, order, 0)};
        case NormalFamily::C: return {polar_form(P.n, P.m, order), log_form(2, order, 1)};
    }
    throw PreconditionError("unknown normal-form family");
}

bool verify_remark_6_3(const std::vector<Diffeo>& gens, const OneForm& w1, const OneForm& w2,
                       const std::vector<Matrix>& laws) {
    require_plane(w1.n_vars(), "verify_remark_6_3");
    if (gens.size() != laws.size()) throw MismatchError("one transformation law per generator");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Matrix& A = laws[i];
        if (A.rows() != 2 || A.cols() != 2) throw MismatchError("transformation laws are 2x2");
        if (!(pullback(gens[i], w1) == w1 * A(0, 0) + w2 * A(0, 1))) return false;
        if (!(pullback(gens[i], w2) == w1 * A(1, 0) + w2 * A(1, 1))) return false;
    }
    return true;
}

bool verify_first_integral(const VectorField& X, const MeroJet& t) {
    return apply_derivation(MeroField(X), t).is_zero();
}

}  // namespace fdiff
