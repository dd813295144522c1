#include "fdiff/formal_maps.hpp"

#include "fdiff/error.hpp"
#include "fdiff/poly.hpp"

namespace fdiff {

namespace {

bool has_constant_term(const VectorField& X) {
    for (const Jet& c : X.comps()) {
        if (!c.constant_term().is_zero()) return true;
    }
    return false;
}

void require_same_shape(const std::vector<Jet>& a, const std::vector<Jet>& b) {
    if (a.size() != b.size()) throw MismatchError("maps in different dimensions");
    require_compatible(a.front(), b.front());
}

std::vector<Jet> apply_matrix(const Matrix& m, const std::vector<Jet>& v) {
    std::vector<Jet> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Jet acc(v.front().n_vars(), v.front().order());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_zero()) acc += v[j] * m(i, j);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

Matrix linear_coefficients(const std::vector<Jet>& comps) {
    const std::size_t n = comps.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = comps[i].coeff(MultiIndex::unit(n, j));
    }
    return m;
}

bool is_nilpotent(const Matrix& m) {
    Matrix p = m;
    for (std::size_t k = 1; k < m.rows(); ++k) p = p * m;
    return p.is_zero();
}

}  // namespace

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(std::vector<Jet> comps) : c_(std::move(comps)) {
    if (c_.empty()) throw PreconditionError("vector field needs at least one component");
    for (const Jet& j : c_) {
        require_compatible(j, c_.front());
        if (j.n_vars() != c_.size()) throw MismatchError("vector field arity differs from dimension");
    }
}

VectorField VectorField::zero(std::size_t n_vars, unsigned order) {
    return VectorField(std::vector<Jet>(n_vars, Jet(n_vars, order)));
}

VectorField VectorField::radial(std::size_t n_vars, unsigned order) {
    return VectorField(coordinate_jets(n_vars, order));
}

VectorField VectorField::coordinate(std::size_t n_vars, unsigned order, std::size_t var) {
    std::vector<Jet> c(n_vars, Jet(n_vars, order));
    c.at(var) = Jet::constant(n_vars, order, Scalar(1));
    return VectorField(std::move(c));
}

bool VectorField::is_zero() const {
    for (const Jet& j : c_) {
        if (!j.is_zero()) return false;
    }
    return true;
}

std::optional<unsigned> VectorField::order_of_vanishing() const {
    std::optional<unsigned> best;
    for (const Jet& j : c_) {
        auto o = j.order_of_vanishing();
        if (o && (!best || *o < *best)) best = o;
    }
    return best;
}

VectorField VectorField::homogeneous_part(unsigned degree) const {
    std::vector<Jet> c;
    for (const Jet& j : c_) c.push_back(j.homogeneous_part(degree));
    return VectorField(std::move(c));
}

VectorField VectorField::truncated(unsigned max_degree) const {
    std::vector<Jet> c;
    for (const Jet& j : c_) c.push_back(j.truncated(max_degree));
    return VectorField(std::move(c));
}

Matrix VectorField::linear_part() const { return linear_coefficients(c_); }

VectorField VectorField::operator-() const {
    std::vector<Jet> c;
    for (const Jet& j : c_) c.push_back(-j);
    return VectorField(std::move(c));
}

VectorField VectorField::operator+(const VectorField& o) const {
    require_same_shape(c_, o.c_);
    std::vector<Jet> c;
    for (std::size_t i = 0; i < c_.size(); ++i) c.push_back(c_[i] + o.c_[i]);
    return VectorField(std::move(c));
}

VectorField VectorField::operator-(const VectorField& o) const { return *this + (-o); }

VectorField VectorField::operator*(const Scalar& s) const {
    std::vector<Jet> c;
    for (const Jet& j : c_) c.push_back(j * s);
    return VectorField(std::move(c));
}

VectorField VectorField::times(const Jet& f) const {
    std::vector<Jet> c;
    for (const Jet& j : c_) c.push_back(j * f);
    return VectorField(std::move(c));
}

std::size_t VectorField::hash() const {
    std::size_t h = 7;
    for (const Jet& j : c_) h = h * 1000003u ^ j.hash();
    return h;
}

std::string VectorField::str(const VarNames& names) const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + c_[i].str(names) + ") d/d" + names.at(i);
    }
    return out.empty() ? "0 d/d" + names.at(0) : out;
}

// --------------------------------------------------------------------- Diffeo

Diffeo::Diffeo(std::vector<Jet> comps) : c_(std::move(comps)) {
    if (c_.empty()) throw PreconditionError("diffeomorphism needs at least one component");
    for (const Jet& j : c_) {
        require_compatible(j, c_.front());
        if (j.n_vars() != c_.size()) throw MismatchError("diffeomorphism arity differs from dimension");
        if (!j.constant_term().is_zero()) {
            throw PreconditionError("diffeomorphism components must vanish at the origin");
        }
    }
    if (!linear_part().inverse()) throw PreconditionError("linear part is not invertible");
}

Diffeo Diffeo::identity(std::size_t n_vars, unsigned order) {
    return Diffeo(coordinate_jets(n_vars, order));
}

Diffeo Diffeo::linear(const Matrix& m, unsigned order) {
    return Diffeo(apply_matrix(m, coordinate_jets(m.rows(), order)));
}

Diffeo Diffeo::homothety(std::size_t n_vars, unsigned order, const Scalar& lambda) {
    return linear(Matrix::identity(n_vars).scaled(lambda), order);
}

Matrix Diffeo::linear_part() const { return linear_coefficients(c_); }

bool Diffeo::is_identity() const { return *this == identity(n_vars(), order()); }

VectorField Diffeo::displacement() const {
    std::vector<Jet> d;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        d.push_back(c_[i] - Jet::variable(n_vars(), order(), i));
    }
    return VectorField(std::move(d));
}

std::size_t Diffeo::hash() const {
    std::size_t h = 11;
    for (const Jet& j : c_) h = h * 1000003u ^ j.hash();
    return h;
}

std::string Diffeo::str(const VarNames& names) const {
    std::string out = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) out += (i ? ", " : "") + c_[i].str(names);
    return out + ")";
}

std::string TangencyOrder::str() const {
    switch (kind) {
        case Kind::Identity: return "identity";
        case Kind::NotTangent: return "not tangent to the identity";
        case Kind::Order: break;
    }
    return std::to_string(k);
}

// ----------------------------------------------------------------- operations

Jet apply_derivation(const VectorField& X, const Jet& g) {
    if (X.n_vars() != g.n_vars()) throw MismatchError("field and function in different dimensions");
    require_compatible(X[0], g);
    Jet acc(g.n_vars(), g.order());
    for (std::size_t i = 0; i < X.n_vars(); ++i) {
        if (!X[i].is_zero()) acc += X[i] * partial(g, i);
    }
    return has_constant_term(X) ? acc.truncated(g.order() - 1) : acc;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    require_same_shape(X.comps(), Y.comps());
    std::vector<Jet> c;
    for (std::size_t i = 0; i < X.n_vars(); ++i) {
        c.push_back(apply_derivation(Y, X[i]) - apply_derivation(X, Y[i]));
    }
    return VectorField(std::move(c));
}

Diffeo exp(const VectorField& X) { return exp_t(X, Scalar(1)); }

Diffeo exp_t(const VectorField& X, const Scalar& t) {
    if (has_constant_term(X)) throw PreconditionError("exp: field does not vanish at the origin");
    if (!is_nilpotent(X.linear_part())) {
        throw PreconditionError("exp: linear part is not nilpotent (exp undefined in unipotent calculus)");
    }
    const std::size_t n = X.n_vars();
    const unsigned order = X.order();
    const unsigned cap = (order + 1) * static_cast<unsigned>(n) + 2;
    std::vector<Jet> out;
    for (std::size_t i = 0; i < n; ++i) {
        Jet term = Jet::variable(n, order, i);
        Jet sum = term;
        unsigned j = 1;
        for (; j <= cap && !term.is_zero() && !t.is_zero(); ++j) {
            term = apply_derivation(X, term) * (t / Scalar(static_cast<long>(j)));
            sum += term;
        }
        if (j > cap) throw ConsistencyError("exp series failed to terminate");
        out.push_back(std::move(sum));
    }
    return Diffeo(std::move(out));
}

VectorField log(const Diffeo& f) {
    const std::size_t n = f.n_vars();
    if (!is_nilpotent(f.linear_part() - Matrix::identity(n))) {
        throw PreconditionError("log: linear part is not unipotent");
    }
    const unsigned order = f.order();
    const unsigned cap = (order + 1) * static_cast<unsigned>(n) + 2;
    std::vector<Jet> out;
    for (std::size_t i = 0; i < n; ++i) {
        // (C_f - I)^j z_i with C_f g = g o f
        Jet v = Jet::variable(n, order, i);
        Jet sum(n, order);
        unsigned j = 1;
        for (; j <= cap; ++j) {
            v = compose(v, f.comps()) - v;
            if (v.is_zero()) break;
            Rational w(j % 2 ? 1 : -1, j);
            sum += v * Scalar(w);
        }
        if (j > cap) throw ConsistencyError("log series failed to terminate");
        out.push_back(std::move(sum));
    }
    return VectorField(std::move(out));
}

Diffeo compose(const Diffeo& f, const Diffeo& g) {
    require_same_shape(f.comps(), g.comps());
    std::vector<Jet> out;
    for (const Jet& c : f.comps()) out.push_back(compose(c, g.comps()));
    return Diffeo(std::move(out));
}

Diffeo inverse(const Diffeo& f) {
    const std::size_t n = f.n_vars();
    const unsigned order = f.order();
    Matrix linv = *f.linear_part().inverse();
    const std::vector<Jet> z = coordinate_jets(n, order);
    std::vector<Jet> nonlinear;
    for (std::size_t i = 0; i < n; ++i) nonlinear.push_back(f[i] - f[i].homogeneous_part(1));
    // h <- L^-1 (z - F(h)) gains one correct degree per step
    std::vector<Jet> h = apply_matrix(linv, z);
    for (unsigned step = 1; step < order; ++step) {
        std::vector<Jet> rhs;
        for (std::size_t i = 0; i < n; ++i) rhs.push_back(z[i] - compose(nonlinear[i], h));
        h = apply_matrix(linv, rhs);
    }
    return Diffeo(std::move(h));
}

Diffeo commutator(const Diffeo& f, const Diffeo& g) {
    return compose(compose(f, g), compose(inverse(f), inverse(g)));
}

Diffeo power(const Diffeo& f, long e) {
    if (e < 0) return power(inverse(f), -e);
    Diffeo result = Diffeo::identity(f.n_vars(), f.order());
    Diffeo base = f;
    while (e > 0) {
        if (e & 1) result = compose(result, base);
        e >>= 1;
        if (e > 0) base = compose(base, base);
    }
    return result;
}

VectorField pushforward(const Diffeo& g, const VectorField& X) {
    require_same_shape(g.comps(), X.comps());
    const std::size_t n = g.n_vars();
    const Diffeo ginv = inverse(g);
    const bool drop_top = has_constant_term(X);
    std::vector<Jet> out;
    for (std::size_t i = 0; i < n; ++i) {
        Jet acc(n, g.order());
        for (std::size_t j = 0; j < n; ++j) {
            if (!X[j].is_zero()) acc += partial(g[i], j) * X[j];
        }
        if (drop_top) acc = acc.truncated(g.order() - 1);
        Jet moved = compose(acc, ginv.comps());
        out.push_back(drop_top ? moved.truncated(g.order() - 1) : moved);
    }
    return VectorField(std::move(out));
}

TangencyOrder tangency_order(const Diffeo& f) {
    if (f.linear_part() != Matrix::identity(f.n_vars())) return {TangencyOrder::Kind::NotTangent, 0};
    auto o = f.displacement().order_of_vanishing();
    if (!o) return {TangencyOrder::Kind::Identity, 0};
    return {TangencyOrder::Kind::Order, *o - 1};
}

std::optional<Jet> dicritic_factor(const VectorField& X) {
    auto o = X.order_of_vanishing();
    if (!o || *o < 2) return std::nullopt;
    const std::size_t n = X.n_vars();
    const unsigned deg = *o;
    // exact products of the leading parts need room for degree deg + 1
    std::vector<Jet> p;
    for (const Jet& c : X.comps()) p.push_back(c.homogeneous_part(deg).with_order(deg + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Jet zi = Jet::variable(n, deg + 1, i);
            Jet zj = Jet::variable(n, deg + 1, j);
            if (zj * p[i] != zi * p[j]) return std::nullopt;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i].is_zero()) continue;
        return p[i].divide_by_monomial(MultiIndex::unit(n, i)).with_order(X.order());
    }
    return std::nullopt;
}

bool is_dicritic(const VectorField& X) { return dicritic_factor(X).has_value(); }

bool is_regular_dicritic(const VectorField& X) {
    auto f = dicritic_factor(X);
    if (!f) return false;
    const std::size_t n = X.n_vars();
    const unsigned next = *X.order_of_vanishing() + 1;
    if (next > X.order()) {
        throw PreconditionError("jet order too low to inspect the homogeneous part of degree " +
                                std::to_string(next));
    }
    std::vector<Jet> p;
    for (const Jet& c : X.comps()) p.push_back(c.homogeneous_part(next).with_order(next + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Jet q = Jet::variable(n, next + 1, j) * p[i] - Jet::variable(n, next + 1, i) * p[j];
            if (!q.is_zero() && homogeneous_coprime(*f, q)) return true;
        }
    }
    return false;
}

bool is_dicritic(const Diffeo& f) {
    if (!tangency_order(f).is_order()) return false;
    return is_dicritic(f.displacement());
}

bool is_regular_dicritic(const Diffeo& f) {
    if (!tangency_order(f).is_order()) return false;
    return is_regular_dicritic(log(f));
}

std::optional<Scalar> proportionality(const VectorField& Y, const VectorField& X) {
    require_same_shape(Y.comps(), X.comps());
    if (X.is_zero()) throw PreconditionError("proportionality against the zero field");
    const MultiIndex* best = nullptr;
    std::size_t best_comp = 0;
    for (std::size_t i = 0; i < X.n_vars(); ++i) {
        if (X[i].is_zero()) continue;
        const MultiIndex& m = X[i].terms().begin()->first;
        if (!best || m < *best) {
            best = &m;
            best_comp = i;
        }
    }
    Scalar c = Y[best_comp].coeff(*best) / X[best_comp].coeff(*best);
    if (Y == X * c) return c;
    return std::nullopt;
}

std::optional<Scalar> projective_factor(const Diffeo& g, const VectorField& X) {
    if (X.is_zero()) throw PreconditionError("projective factor of the zero field");
    VectorField moved = pushforward(g, X);
    const VectorField target = has_constant_term(X) ? X.truncated(X.order() - 1) : X;
    if (target.is_zero()) throw PreconditionError("field vanishes below the verifiable degree");
    return proportionality(moved, target);
}

std::optional<Scalar> flow_membership(const Diffeo& g, const VectorField& X) {
    auto o = X.order_of_vanishing();
    if (!o || *o < 2) throw PreconditionError("flow membership needs a nonzero field of order >= 2");
    TangencyOrder t = tangency_order(g);
    if (t.kind == TangencyOrder::Kind::NotTangent) {
        throw PreconditionError("flow membership needs a diffeomorphism tangent to the identity");
    }
    if (t.kind == TangencyOrder::Kind::Identity) return Scalar(0);
    auto r = proportionality(log(g), X);
    if (!r || exp_t(X, *r) != g) return std::nullopt;
    return r;
}

VectorField normal_form_1d(unsigned k, const Scalar& lambda, unsigned order) {
    if (k == 0) throw PreconditionError("normal form needs k >= 1");
    Jet z = Jet::variable(1, order, 0);
    Jet unit = Jet::constant(1, order, Scalar(1)) + z.pow(k) * lambda;
    return VectorField({z.pow(k + 1) * invert_unit(unit)});
}

}  // namespace fdiff
