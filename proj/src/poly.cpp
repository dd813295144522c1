#include "fdiff/poly.hpp"

#include "fdiff/error.hpp"

#include <algorithm>

namespace fdiff {

Poly Poly::constant(std::size_t nvars, const Scalar& c) {
    Poly p;
    p.nvars_ = nvars;
    if (nvars == 0) {
        p.c_ = c;
    } else if (!c.is_zero()) {
        p.co_.push_back(constant(nvars - 1, c));
    }
    return p;
}

Poly Poly::from_coeff(const Poly& c, unsigned e) {
    Poly p;
    p.nvars_ = c.nvars_ + 1;
    if (c.is_zero()) return p;
    p.co_.assign(e + 1, constant(c.nvars_, Scalar()));
    p.co_[e] = c;
    return p;
}

namespace {

Poly monomial_poly(const MultiIndex& m, std::size_t from, std::size_t nvars, const Scalar& c) {
    if (from == nvars) return Poly::constant(0, c);
    return Poly::from_coeff(monomial_poly(m, from + 1, nvars, c), m[from]);
}

}  // namespace

Poly Poly::from_jet(const Jet& j) {
    Poly p = constant(j.n_vars(), Scalar());
    for (const auto& [m, c] : j.terms()) p = p + monomial_poly(m, 0, j.n_vars(), c);
    return p;
}

bool Poly::is_zero() const { return nvars_ == 0 ? c_.is_zero() : co_.empty(); }

int Poly::degree() const {
    if (nvars_ == 0) return c_.is_zero() ? -1 : 0;
    return static_cast<int>(co_.size()) - 1;
}

bool Poly::is_constant() const {
    if (nvars_ == 0) return !c_.is_zero();
    return co_.size() == 1 && co_[0].is_constant();
}

void Poly::trim() {
    while (!co_.empty() && co_.back().is_zero()) co_.pop_back();
}

Poly Poly::operator-() const {
    Poly r = *this;
    if (nvars_ == 0) {
        r.c_ = -c_;
    } else {
        for (auto& c : r.co_) c = -c;
    }
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    if (nvars_ != o.nvars_) throw MismatchError("polynomials in different numbers of variables");
    Poly r = *this;
    if (nvars_ == 0) {
        r.c_ += o.c_;
        return r;
    }
    if (r.co_.size() < o.co_.size()) r.co_.resize(o.co_.size(), constant(nvars_ - 1, Scalar()));
    for (std::size_t i = 0; i < o.co_.size(); ++i) r.co_[i] = r.co_[i] + o.co_[i];
    r.trim();
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (nvars_ != o.nvars_) throw MismatchError("polynomials in different numbers of variables");
    Poly r;
    r.nvars_ = nvars_;
    if (nvars_ == 0) {
        r.c_ = c_ * o.c_;
        return r;
    }
    if (is_zero() || o.is_zero()) return r;
    r.co_.assign(co_.size() + o.co_.size() - 1, constant(nvars_ - 1, Scalar()));
    for (std::size_t i = 0; i < co_.size(); ++i) {
        if (co_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.co_.size(); ++j) r.co_[i + j] = r.co_[i + j] + co_[i] * o.co_[j];
    }
    r.trim();
    return r;
}

Poly Poly::shifted(unsigned e) const {
    if (is_zero() || e == 0) return *this;
    Poly r = *this;
    r.co_.insert(r.co_.begin(), e, constant(nvars_ - 1, Scalar()));
    return r;
}

std::optional<Poly> Poly::divide(const Poly& d) const {
    if (d.is_zero()) throw PreconditionError("polynomial division by zero");
    if (nvars_ == 0) return constant(0, c_ / d.c_);
    Poly q = constant(nvars_, Scalar());
    Poly r = *this;
    while (!r.is_zero()) {
        int shift = r.degree() - d.degree();
        if (shift < 0) return std::nullopt;
        auto c = r.lead().divide(d.lead());
        if (!c) return std::nullopt;
        Poly t = from_coeff(*c, static_cast<unsigned>(shift));
        q = q + t;
        r = r - t * d;
    }
    return q;
}

bool Poly::operator==(const Poly& o) const {
    if (nvars_ != o.nvars_) return false;
    if (nvars_ == 0) return c_ == o.c_;
    return co_ == o.co_;
}

namespace {

// Innermost leading scalar.
Scalar base_lead(const Poly& p) {
    const Poly* q = &p;
    while (q->nvars() > 0) q = &q->lead();
    return q->scalar();
}

Poly monic(const Poly& p) {
    if (p.is_zero()) return p;
    return p * Poly::constant(p.nvars(), base_lead(p).inverse());
}

Poly content(const Poly& p) {
    Poly g = Poly::constant(p.nvars() - 1, Scalar());
    for (int e = 0; e <= p.degree(); ++e) {
        g = gcd(g, p.coeff(static_cast<std::size_t>(e)));
        if (g.is_constant()) break;
    }
    return g;
}

Poly primitive_part(const Poly& p) {
    if (p.is_zero()) return p;
    return *p.divide(Poly::from_coeff(content(p), 0));
}

Poly pseudo_remainder(Poly a, const Poly& b) {
    const int db = b.degree();
    const Poly lb = Poly::from_coeff(b.lead(), 0);
    while (!a.is_zero() && a.degree() >= db) {
        Poly la = Poly::from_coeff(a.lead(), 0);
        a = lb * a - (la * b).shifted(static_cast<unsigned>(a.degree() - db));
    }
    return a;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
    if (a.nvars() != b.nvars()) throw MismatchError("gcd of polynomials in different variables");
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    if (a.nvars() == 0) return Poly::constant(0, Scalar(1));
    Poly ca = content(a);
    Poly cb = content(b);
    Poly c = gcd(ca, cb);
    Poly p = primitive_part(a);
    Poly q = primitive_part(b);
    if (p.degree() < q.degree()) std::swap(p, q);
    while (!q.is_zero()) {
        Poly r = pseudo_remainder(p, q);
        p = q;
        q = primitive_part(r);
    }
    if (p.degree() == 0) p = Poly::constant(p.nvars(), Scalar(1));
    return monic(Poly::from_coeff(c, 0) * primitive_part(p));
}

bool homogeneous_coprime(const Jet& a, const Jet& b) {
    if (a.is_zero() || b.is_zero()) {
        const Jet& other = a.is_zero() ? b : a;
        return !other.is_zero() && other.max_degree() == 0u;
    }
    const std::size_t n = a.n_vars();
    const std::size_t last = n - 1;
    // a common factor of z_n is invisible after dehomogenization
    auto min_last = [last](const Jet& j) {
        unsigned lo = ~0u;
        for (const auto& [m, c] : j.terms()) lo = std::min(lo, m[last]);
        return lo;
    };
    if (min_last(a) > 0 && min_last(b) > 0) return false;
    if (n == 1) return a.max_degree() == 0u || b.max_degree() == 0u;
    auto dehomogenize = [n, last](const Jet& j) {
        Jet d(n - 1, std::max(1u, *j.max_degree()));
        for (const auto& [m, c] : j.terms()) {
            MultiIndex r(n - 1);
            for (std::size_t v = 0; v < last; ++v) r.set(v, m[v]);
            d.add_term(r, c);
        }
        return Poly::from_jet(d);
    };
    return gcd(dehomogenize(a), dehomogenize(b)).is_constant();
}

}  // namespace fdiff
