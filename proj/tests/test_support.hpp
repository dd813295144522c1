#pragma once

// Random generators shared by the unit and acceptance tests.

#include "fdiff/formal_maps.hpp"
#include "fdiff/jet.hpp"

#include <functional>
#include <random>

namespace fdiff::test {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }

private:
    std::mt19937_64 eng_;
};

/// Small rational, optionally forced nonzero.
inline Rational random_rational(Rng& rng, bool nonzero = false) {
    for (;;) {
        Rational q(rng.uniform(-6, 6), rng.uniform(1, 4));
        q.canonicalize();
        if (!nonzero || sgn(q) != 0) return q;
    }
}

inline Scalar random_scalar(Rng& rng, bool nonzero = false) {
    return Scalar(random_rational(rng, nonzero));
}

/// Random jet with terms of degree in [min_deg, max_deg], each present with
/// probability `density`.
inline Jet random_jet(Rng& rng, std::size_t n, unsigned order, unsigned min_deg, unsigned max_deg,
                      double density = 0.4) {
    Jet j(n, order);
    // enumerate monomials of degree <= max_deg
    std::vector<MultiIndex> all;
    std::function<void(MultiIndex, std::size_t, unsigned)> rec = [&](MultiIndex m, std::size_t v,
                                                                     unsigned left) {
        if (v == n) {
            all.push_back(m);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            MultiIndex next = m;
            next.set(v, e);
            rec(next, v + 1, left - e);
        }
    };
    rec(MultiIndex(n), 0, max_deg);
    for (const auto& m : all) {
        if (m.degree() < min_deg || !rng.coin(density)) continue;
        j.add_term(m, random_scalar(rng));
    }
    return j;
}

/// Random homogeneous polynomial of the given degree, nonzero.
inline Jet random_homogeneous(Rng& rng, std::size_t n, unsigned order, unsigned degree) {
    for (;;) {
        Jet j = random_jet(rng, n, order, degree, degree, 0.6);
        if (!j.is_zero()) return j;
    }
}

/// Random field with component terms of degree in [min_deg, max_deg].
inline VectorField random_field(Rng& rng, std::size_t n, unsigned order, unsigned min_deg,
                                unsigned max_deg, double density = 0.4) {
    std::vector<Jet> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(random_jet(rng, n, order, min_deg, max_deg, density));
    return VectorField(std::move(c));
}

/// Random nonzero field vanishing to order exactly min_deg.
inline VectorField random_field_of_order(Rng& rng, std::size_t n, unsigned order, unsigned min_deg,
                                         unsigned max_deg, double density = 0.4) {
    for (;;) {
        VectorField X = random_field(rng, n, order, min_deg, max_deg, density);
        if (X.order_of_vanishing() == min_deg) return X;
    }
}

/// Identity plus random terms of degree in [min_deg, max_deg].
inline Diffeo random_near_identity(Rng& rng, std::size_t n, unsigned order, unsigned min_deg,
                                   unsigned max_deg, double density = 0.3) {
    std::vector<Jet> c;
    for (std::size_t i = 0; i < n; ++i) {
        c.push_back(Jet::variable(n, order, i) + random_jet(rng, n, order, min_deg, max_deg, density));
    }
    return Diffeo(std::move(c));
}

/// Random diffeomorphism with an invertible (not necessarily unipotent)
/// linear part.
inline Diffeo random_diffeo(Rng& rng, std::size_t n, unsigned order, unsigned max_deg) {
    for (;;) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) m(i, j) = Scalar(rng.uniform(-2, 2));
        }
        if (!m.inverse()) continue;
        std::vector<Jet> c = Diffeo::linear(m, order).comps();
        for (auto& j : c) j += random_jet(rng, n, order, 2, max_deg, 0.3);
        return Diffeo(std::move(c));
    }
}

}  // namespace fdiff::test
