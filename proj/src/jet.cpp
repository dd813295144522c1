#include "fdiff/jet.hpp"

#include "fdiff/error.hpp"

#include <algorithm>
#include <sstream>

namespace fdiff {

VarNames default_var_names(std::size_t n_vars) {
    if (n_vars == 2) return {"x", "y"};
    VarNames names;
    for (std::size_t i = 0; i < n_vars; ++i) names.push_back("z" + std::to_string(i + 1));
    return names;
}

Jet::Jet(std::size_t n_vars, unsigned order) : n_(n_vars), order_(order) {
    if (n_vars == 0 || n_vars > kMaxVars) {
        throw PreconditionError("number of variables must be in 1.." + std::to_string(kMaxVars));
    }
    if (order == 0) throw PreconditionError("jet order must be positive");
}

Jet Jet::constant(std::size_t n_vars, unsigned order, const Scalar& c) {
    Jet j(n_vars, order);
    j.add_term(MultiIndex(n_vars), c);
    return j;
}

Jet Jet::variable(std::size_t n_vars, unsigned order, std::size_t var) {
    Jet j(n_vars, order);
    j.add_term(MultiIndex::unit(n_vars, var), Scalar(1));
    return j;
}

Jet Jet::monomial(std::size_t n_vars, unsigned order, const MultiIndex& m, const Scalar& c) {
    Jet j(n_vars, order);
    j.add_term(m, c);
    return j;
}

Scalar Jet::coeff(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar() : it->second;
}

Scalar Jet::constant_term() const { return coeff(MultiIndex(n_)); }

void Jet::add_term(const MultiIndex& m, const Scalar& c) {
    if (m.n_vars() != n_) throw MismatchError("monomial arity does not match jet");
    if (m.degree() > order_ || c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

std::optional<unsigned> Jet::order_of_vanishing() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.degree();
}

std::optional<unsigned> Jet::max_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first.degree();
}

Jet Jet::homogeneous_part(unsigned degree) const {
    Jet r(n_, order_);
    for (const auto& [m, c] : terms_) {
        if (m.degree() == degree) r.terms_.emplace_hint(r.terms_.end(), m, c);
    }
    return r;
}

Jet Jet::truncated(unsigned max_degree) const {
    Jet r(n_, order_);
    for (const auto& [m, c] : terms_) {
        if (m.degree() > max_degree) break;
        r.terms_.emplace_hint(r.terms_.end(), m, c);
    }
    return r;
}

Jet Jet::with_order(unsigned order) const {
    Jet r(n_, order);
    for (const auto& [m, c] : terms_) {
        if (m.degree() > order) break;
        r.terms_.emplace_hint(r.terms_.end(), m, c);
    }
    return r;
}

void Jet::check_compatible(const Jet& o) const {
    if (n_ != o.n_) {
        throw MismatchError("jets in " + std::to_string(n_) + " and " + std::to_string(o.n_) +
                            " variables");
    }
    if (order_ != o.order_) {
        throw MismatchError("jets of order " + std::to_string(order_) + " and " +
                            std::to_string(o.order_));
    }
}

void require_compatible(const Jet& a, const Jet& b) {
    if (a.n_vars() != b.n_vars() || a.order() != b.order()) {
        throw MismatchError("jet mismatch: (" + std::to_string(a.n_vars()) + " vars, order " +
                            std::to_string(a.order()) + ") vs (" + std::to_string(b.n_vars()) +
                            " vars, order " + std::to_string(b.order()) + ")");
    }
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Jet& Jet::operator*=(const Scalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet r(a.n_, a.order_);
    const unsigned order = a.order_;
    for (const auto& [ma, ca] : a.terms_) {
        const unsigned room = order - ma.degree();
        for (const auto& [mb, cb] : b.terms_) {
            if (mb.degree() > room) break;
            r.add_term(ma + mb, ca * cb);
        }
    }
    return r;
}

Jet Jet::pow(unsigned e) const {
    Jet result = constant(n_, order_, Scalar(1));
    Jet base = *this;
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

Jet Jet::divide_by_monomial(const MultiIndex& m) const {
    Jet r(n_, order_);
    for (const auto& [t, c] : terms_) {
        auto q = t.minus(m);
        if (!q) throw PreconditionError("jet is not divisible by the requested monomial");
        r.add_term(*q, c);
    }
    return r;
}

Jet Jet::times_monomial(const MultiIndex& m) const {
    Jet r(n_, order_);
    for (const auto& [t, c] : terms_) r.add_term(t + m, c);
    return r;
}

std::size_t Jet::hash() const {
    std::size_t h = n_ * 1000003u + order_;
    for (const auto& [m, c] : terms_) h = h * 1099511628211u ^ (m.hash() * 31u + c.hash());
    return h;
}

namespace {

std::string monomial_str(const MultiIndex& m, const VarNames& names) {
    std::string out;
    for (std::size_t i = 0; i < m.n_vars(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += names.at(i);
        if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
    return out;
}

}  // namespace

std::string Jet::str(const VarNames& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string mono = monomial_str(m, names);
        Scalar coef = c;
        // leading sign is pulled out: negative real part, or purely negative imaginary
        const bool negative =
            sgn(coef.re()) < 0 || (sgn(coef.re()) == 0 && sgn(coef.im()) < 0);
        if (negative) coef = -coef;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        if (mono.empty()) {
            out += coef.str();
        } else if (coef.is_one()) {
            out += mono;
        } else {
            out += coef.str() + "*" + mono;
        }
    }
    return out;
}

Jet partial(const Jet& g, std::size_t var) {
    if (var >= g.n_vars()) throw PreconditionError("variable index out of range");
    Jet r(g.n_vars(), g.order());
    for (const auto& [m, c] : g.terms()) {
        if (m[var] == 0) continue;
        MultiIndex d = m;
        d.set(var, m[var] - 1);
        r.add_term(d, c * Scalar(static_cast<long>(m[var])));
    }
    return r;
}

namespace {

// Horner-style evaluation over the variables var..n-1 of the monomials in
// [first, last), all sharing exponents for variables before `var`.
using TermVec = std::vector<std::pair<MultiIndex, Scalar>>;

Jet eval_group(TermVec::const_iterator first, TermVec::const_iterator last, std::size_t var,
               const std::vector<std::vector<Jet>>& powers, std::size_t n, unsigned order) {
    Jet acc(n, order);
    if (var + 1 == n) {
        for (auto it = first; it != last; ++it) acc += powers[var][it->first[var]] * it->second;
        return acc;
    }
    auto it = first;
    while (it != last) {
        unsigned e = it->first[var];
        auto end = std::find_if(it, last, [&](const auto& t) { return t.first[var] != e; });
        Jet inner = eval_group(it, end, var + 1, powers, n, order);
        acc += e == 0 ? inner : powers[var][e] * inner;
        it = end;
    }
    return acc;
}

}  // namespace

Jet compose(const Jet& g, std::span<const Jet> subst) {
    const std::size_t n = g.n_vars();
    if (subst.size() != n) throw MismatchError("substitution arity does not match jet");
    if (subst.empty()) return g;
    const std::size_t m = subst.front().n_vars();
    const unsigned order = subst.front().order();
    for (const Jet& s : subst) {
        if (s.n_vars() != m || s.order() != order) throw MismatchError("substituted jets disagree");
        if (!s.constant_term().is_zero()) {
            throw PreconditionError("substituted series must have zero constant term");
        }
    }
    if (g.order() != order) throw MismatchError("composition of jets of different order");

    unsigned max_deg = g.max_degree().value_or(0);
    std::vector<std::vector<Jet>> powers(n);
    for (std::size_t v = 0; v < n; ++v) {
        unsigned top = 0;
        for (const auto& [mi, c] : g.terms()) top = std::max(top, mi[v]);
        top = std::min(top, max_deg);
        powers[v].push_back(Jet::constant(m, order, Scalar(1)));
        for (unsigned e = 1; e <= top; ++e) powers[v].push_back(powers[v].back() * subst[v]);
    }
    TermVec terms(g.terms().begin(), g.terms().end());
    std::sort(terms.begin(), terms.end(), [n](const auto& a, const auto& b) {
        for (std::size_t v = 0; v < n; ++v) {
            if (a.first[v] != b.first[v]) return a.first[v] < b.first[v];
        }
        return false;
    });
    return eval_group(terms.cbegin(), terms.cend(), 0, powers, m, order);
}

Jet binomial_power(const Jet& u, const Rational& alpha) {
    if (!u.constant_term().is_zero()) {
        throw PreconditionError("binomial_power expects a series without constant term");
    }
    Jet result = Jet::constant(u.n_vars(), u.order(), Scalar(1));
    Jet term = result;
    for (unsigned j = 1; j <= u.order(); ++j) {
        term = term * u;
        if (term.is_zero()) break;
        result += term * Scalar(binomial(alpha, j));
    }
    return result;
}

Jet invert_unit(const Jet& u) {
    Scalar c0 = u.constant_term();
    if (c0.is_zero()) throw PreconditionError("invert_unit: series is not a unit (u(0) = 0)");
    Scalar inv0 = c0.inverse();
    // u = c0 (1 + w), 1/u = c0^{-1} sum (-w)^j
    Jet w = u * inv0 - Jet::constant(u.n_vars(), u.order(), Scalar(1));
    Jet result = Jet::constant(u.n_vars(), u.order(), Scalar(1));
    Jet term = result;
    Jet neg_w = -w;
    for (unsigned j = 1; j <= u.order(); ++j) {
        term = term * neg_w;
        if (term.is_zero()) break;
        result += term;
    }
    return result * inv0;
}

std::vector<Jet> coordinate_jets(std::size_t n_vars, unsigned order) {
    std::vector<Jet> out;
    for (std::size_t i = 0; i < n_vars; ++i) out.push_back(Jet::variable(n_vars, order, i));
    return out;
}

}  // namespace fdiff
