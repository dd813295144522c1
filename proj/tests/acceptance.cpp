// Acceptance suite: one PASS/FAIL line per criterion.
//
// A criterion that cannot hold as stated records a known gap: its line reads
// FAIL with the reason, but only unexpected failures make the exit status 1.

#include "fdiff/cli.hpp"
#include "fdiff/document.hpp"
#include "fdiff/error.hpp"
#include "fdiff/group_analysis.hpp"
#include "fdiff/mero_forms.hpp"
#include "test_support.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <unistd.h>

#ifndef FDIFF_FIXTURE_DIR
#define FDIFF_FIXTURE_DIR "fixtures"
#endif

using namespace fdiff;
namespace fs = std::filesystem;

namespace {

class Checks {
public:
    void operator()(bool ok, const std::string& what) {
        ++total_;
        if (ok) return;
        if (failures_.size() < 4) failures_.push_back(what);
        ++failed_;
    }
    // Runs body; an escaping exception counts as one failed check.
    void guard(const std::string& what, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            (*this)(false, what + " threw: " + e.what());
        }
    }
    // A requirement that cannot be met; reported, but not an unexpected failure.
    void gap(const std::string& why) { gaps_.push_back(why); }
    bool ok() const { return failed_ == 0 && gaps_.empty(); }
    bool unexpected() const { return failed_ > 0; }
    std::size_t total() const { return total_; }
    std::string summary() const {
        std::string s = failed_ == 0 ? std::to_string(total_) + " checks"
                                     : std::to_string(failed_) + "/" + std::to_string(total_) + " checks failed";
        for (const auto& f : failures_) s += "; " + f;
        for (const auto& g : gaps_) s += "; known gap: " + g;
        return s;
    }

private:
    std::size_t total_ = 0, failed_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> gaps_;
};

struct Plane {
    unsigned N;
    Jet x, y, one, zero;
    explicit Plane(unsigned order)
        : N(order),
          x(Jet::variable(2, order, 0)),
          y(Jet::variable(2, order, 1)),
          one(Jet::constant(2, order, Scalar(1))),
          zero(2, order) {}
    VectorField field(const Jet& a, const Jet& b) const { return VectorField({a, b}); }
    Diffeo map(const Jet& a, const Jet& b) const { return Diffeo({a, b}); }
    VectorField R() const { return VectorField::radial(2, N); }
    Jet mono(unsigned a, unsigned b) const { return Jet::monomial(2, N, MultiIndex{a, b}); }
};

std::string str(unsigned k) { return std::to_string(k); }

// Identity plus a nonzero homogeneous part of degree lead and random terms
// of degree lead+1..N.
Diffeo random_with_leading(test::Rng& rng, const std::vector<Jet>& lead, unsigned N) {
    std::vector<Jet> c;
    for (std::size_t i = 0; i < lead.size(); ++i) {
        unsigned d = *lead[i].order_of_vanishing();
        Jet higher = d < N ? test::random_jet(rng, 2, N, d + 1, N, 0.3) : Jet(2, N);
        c.push_back(Jet::variable(2, N, i) + lead[i] + higher);
    }
    return Diffeo(std::move(c));
}

// Component i of D(F) G, computed with partial derivatives.
std::vector<Jet> jacobian_times(const std::vector<Jet>& F, const std::vector<Jet>& G) {
    std::vector<Jet> out;
    for (const auto& Fi : F) {
        Jet s(Fi.n_vars(), Fi.order());
        for (std::size_t j = 0; j < G.size(); ++j) s += partial(Fi, j) * G[j];
        out.push_back(s);
    }
    return out;
}

// Pushforward of (p(x) d/dx, q(y) d/dy) by a random tangent-to-identity map.
std::pair<VectorField, VectorField> random_commuting_pair(test::Rng& rng, unsigned N) {
    Jet x = Jet::variable(2, N, 0), y = Jet::variable(2, N, 1), zero(2, N);
    Jet px = x * x, qy = y * y;
    for (unsigned d = 3; d <= 4; ++d) {
        px += x.pow(d) * test::random_scalar(rng);
        qy += y.pow(d) * test::random_scalar(rng);
    }
    Diffeo phi = test::random_near_identity(rng, 2, N, 2, 3, 0.4);
    return {pushforward(phi, VectorField({px, zero})), pushforward(phi, VectorField({zero, qy}))};
}

// f with a nonzero constant term (unless n = m = 0) and no x^n y^m term.
Jet random_primitive(test::Rng& rng, unsigned N, unsigned n, unsigned m) {
    Jet f = test::random_jet(rng, 2, N, 1, N, 0.4);
    Jet out(2, N);
    for (const auto& [mi, c] : f.terms()) {
        if (mi != MultiIndex{n, m}) out.add_term(mi, c);
    }
    if (n + m > 0) out.add_term(MultiIndex{0, 0}, test::random_scalar(rng, true));
    return out;
}

// ---------------------------------------------------------------------------

void exp_log_bijection(Checks& check) {
    test::Rng rng(101);
    const unsigned N = 8;
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned k = 1 + trial % 3;
        check.guard("trial " + std::to_string(trial), [&] {
            VectorField X = test::random_field_of_order(rng, 2, N, k + 1, N);
            Diffeo f = exp(X);
            check(log(f) == X, "log(exp(X)) != X at k=" + str(k));
            check(tangency_order(f) == TangencyOrder{TangencyOrder::Kind::Order, k}, "tangency of exp(X)");
            Diffeo g = random_with_leading(rng, {test::random_homogeneous(rng, 2, N, k + 1),
                                                 test::random_homogeneous(rng, 2, N, k + 1)}, N);
            check(exp(log(g)) == g, "exp(log(g)) != g at k=" + str(k));
        });
    }
}

void invariant_fields_and_bracket_pairs(Checks& check) {
    Plane P(8);
    const Jet &x = P.x, &y = P.y;
    VectorField X = P.field(P.zero, x * x);
    check(exp(X) == P.map(x, y + x * x), "exp(x^2 d/dy) = (x, y + x^2)");
    Diffeo f = P.map(x * Scalar(2), y * Scalar(4)), g = P.map(x, x + y);
    GroupSpec fg({f, g});
    Certificate c = is_abelian(fg);
    check(c.verdict == Verdict::Refuted && c.witness && !c.witness->value.is_identity(), "(2x,4y),(x,x+y) refuted");
    check(!(compose(f, g) == compose(g, f)), "f o g != g o f");
    check(pushforward(f, X) == X && pushforward(g, X) == X, "x^2 d/dy invariant by f and g");

    Diffeo a = exp(P.field(x * x * y, P.zero)), b = exp(P.field(x.pow(3) * y * y, P.zero));
    Certificate ab = is_abelian(GroupSpec({a, b}));
    check(ab.verdict == Verdict::Refuted, "exp(x^2y d/dx), exp(x^3y^2 d/dx) refuted");
    check(!commutator(a, b).is_identity(), "commutator of the exp pair visible at order 8");
    VectorField Z = P.field(-(x * y), y * y);
    check(pushforward(a, Z) == Z && pushforward(b, Z) == Z, "-xy d/dx + y^2 d/dy invariant");

    Scalar s(Rational(3, 2));
    check(lie_bracket(P.field(x * y, -(y * y)), P.field(x * x * y * y * s, -(x * y.pow(3)) * s)).is_zero(),
          "bracket pair (a)");
    VectorField Xb = P.field(x * x + x * y * Scalar(3), x * y * Scalar(3) + y * y);
    VectorField Yb = P.field(x.pow(3) * Scalar(3) - x * x * y * Scalar(5) + x * y * y + y.pow(3),
                             x.pow(3) + x * x * y - x * y * y * Scalar(5) + y.pow(3) * Scalar(3));
    check(lie_bracket(Xb, Yb).is_zero(), "bracket pair (b)");
    for (unsigned k = 1; k <= 3; ++k) {
        check(lie_bracket(P.field(x.pow(k + 1), x.pow(k) * y), P.field(y.pow(k) * x, y.pow(k + 1))).is_zero(),
              "bracket pair (c) k=" + str(k));
    }
    check(lie_bracket(P.R().times(x), P.R().times(y)).is_zero(), "bracket pair (d)");
}

void radial_bracket_identity(Checks& check) {
    test::Rng rng(103);
    const unsigned N = 8;
    VectorField R = VectorField::radial(2, N);
    for (int trial = 0; trial < 100; ++trial) {
        unsigned k = static_cast<unsigned>(rng.uniform(1, 3));
        unsigned s = trial % 4 == 0 ? k : static_cast<unsigned>(rng.uniform(1, 3));
        Jet f = test::random_homogeneous(rng, 2, N, k), g = test::random_homogeneous(rng, 2, N, s);
        Scalar diff(static_cast<long>(k) - static_cast<long>(s));
        Jet h = f * g * diff;
        VectorField expected({h * Jet::variable(2, N, 0), h * Jet::variable(2, N, 1)});
        check(lie_bracket(R.times(f), R.times(g)) == expected, "k=" + str(k) + " s=" + str(s));
    }
}

void commutator_leading_terms(Checks& check) {
    test::Rng rng(104);
    const unsigned N = 8;
    for (int trial = 0; trial < 100; ++trial) {
        unsigned r = static_cast<unsigned>(rng.uniform(1, 3)), s = static_cast<unsigned>(rng.uniform(1, 3));
        const unsigned deg = r + s + 1;
        check.guard("general pair", [&] {
            std::vector<Jet> F = {test::random_homogeneous(rng, 2, N, r + 1), test::random_homogeneous(rng, 2, N, r + 1)};
            std::vector<Jet> G = {test::random_homogeneous(rng, 2, N, s + 1), test::random_homogeneous(rng, 2, N, s + 1)};
            Diffeo f = random_with_leading(rng, F, N), g = random_with_leading(rng, G, N);
            Diffeo fg = compose(f, g), gf = compose(g, f);
            std::vector<Jet> dfg = jacobian_times(F, G), dgf = jacobian_times(G, F);
            for (std::size_t i = 0; i < 2; ++i) {
                Jet diff = fg[i] - gf[i];
                auto v = diff.order_of_vanishing();
                check(!v || *v >= deg, "f o g - g o f starts below degree r+s+1");
                check(diff.homogeneous_part(deg) == (dfg[i] - dgf[i]).homogeneous_part(deg),
                      "leading part r=" + str(r) + " s=" + str(s));
            }
        });
        if (r == s) continue;
        check.guard("dicritic pair", [&] {
            Jet a = test::random_homogeneous(rng, 2, N, r), b = test::random_homogeneous(rng, 2, N, s);
            Jet x = Jet::variable(2, N, 0), y = Jet::variable(2, N, 1);
            Diffeo f = random_with_leading(rng, {a * x, a * y}, N), g = random_with_leading(rng, {b * x, b * y}, N);
            VectorField disp = commutator(f, g).displacement();
            Jet c = a * b * Scalar(static_cast<long>(r) - static_cast<long>(s));
            check(disp.order_of_vanishing() == deg, "dicritic commutator order r+s+1");
            check(disp.homogeneous_part(deg) == VectorField({c * x, c * y}),
                  "dicritic leading part r=" + str(r) + " s=" + str(s));
        });
    }
}

// The fields of bracket pair (c) are proportional over the quotient field,
// so no dual forms exist for them: a known gap.
void dual_forms_pipeline(Checks& check) {
    test::Rng rng(105);
    const unsigned N = 11;
    for (int trial = 0; trial < 50; ++trial) {
        check.guard("random pair", [&] {
            auto [X1, X2] = random_commuting_pair(rng, N);
            check(lie_bracket(X1, X2).is_zero(), "pair commutes");
            auto [w1, w2] = dual_closed_forms(X1, X2);
            // the same forms built from the coefficient determinant
            MeroJet Q(X1[0] * X2[1] - X1[1] * X2[0]);
            OneForm v1({MeroJet(X2[1]) / Q, -MeroJet(X2[0]) / Q});
            OneForm v2({-MeroJet(X1[1]) / Q, MeroJet(X1[0]) / Q});
            check(w1 == v1 && w2 == v2, "forms match the determinant formula");
            check(is_closed(w1) && is_closed(w2), "closed");
            MeroJet curl1 = partial(w1[1], 0) - partial(w1[0], 1), curl2 = partial(w2[1], 0) - partial(w2[0], 1);
            check(curl1.is_zero() && curl2.is_zero(), "curl vanishes to the last coefficient");
            MeroJet one = MeroJet::constant(2, N, Scalar(1)), zero = MeroJet::constant(2, N, Scalar());
            check(w1.evaluate(X1) == one && w1.evaluate(X2) == zero && w2.evaluate(X1) == zero &&
                      w2.evaluate(X2) == one,
                  "duality");
            auto [Y1, Y2] = dual_frame(w1, w2);
            check(Y1 == MeroField(X1) && Y2 == MeroField(X2), "dual frame round trip");
            Diffeo g = compose(exp_t(X1, test::random_scalar(rng)), exp_t(X2, test::random_scalar(rng)));
            check(pushforward(g, X1) == X1 && pushforward(g, X2) == X2, "g preserves both fields");
            check(pullback(g, w1) == w1 && pullback(g, w2) == w2, "forms invariant");
        });
    }
    Plane P(N);
    // without the bracket condition the determinant forms need not be closed:
    // x d/dx and (y + x^2) d/dy give dx/x and dy/(y + x^2)
    check.guard("non-commuting pair", [&] {
        VectorField A = P.field(P.x, P.zero), B = P.field(P.zero, P.y + P.x * P.x);
        check(!lie_bracket(A, B).is_zero(), "control pair does not commute");
        MeroJet Q(A[0] * B[1] - A[1] * B[0]);
        OneForm u1({MeroJet(B[1]) / Q, -MeroJet(B[0]) / Q}), u2({-MeroJet(A[1]) / Q, MeroJet(A[0]) / Q});
        check(u1 == log_form(2, N, 0) && is_closed(u1), "first control form is dx/x");
        check(u2 == OneForm({MeroJet::constant(2, N, Scalar()), MeroJet(P.one, P.y + P.x * P.x)}) && !is_closed(u2),
              "second control form dy/(y + x^2) is not closed");
    });
    for (unsigned k = 1; k <= 3; ++k) {
        VectorField X = P.field(P.x.pow(k + 1), P.x.pow(k) * P.y), Y = P.field(P.y.pow(k) * P.x, P.y.pow(k + 1));
        bool degenerate = (X[0] * Y[1] - X[1] * Y[0]).is_zero();
        bool rejected = false;
        try {
            dual_closed_forms(X, Y);
        } catch (const PreconditionError&) {
            rejected = true;
        }
        check(degenerate && rejected, "bracket pair (c) k=" + str(k) + " is rejected as dependent");
    }
    check.gap("bracket pair (c) has A1 B2 - A2 B1 = 0 identically, so it has no dual forms");
}

void integration_round_trip(Checks& check) {
    test::Rng rng(106);
    const unsigned N = 10;
    for (int trial = 0; trial < 100; ++trial) {
        check.guard("trial " + std::to_string(trial), [&] {
            Scalar l = test::random_scalar(rng), mu = test::random_scalar(rng);
            unsigned n = static_cast<unsigned>(rng.uniform(0, 3)), m = static_cast<unsigned>(rng.uniform(0, 3));
            Jet f = random_primitive(rng, N, n, m);
            OneForm w = log_exact_form(l, mu, n, m, f);
            IntegrationResult r = integrate_closed(w);
            check(r.lambda == l && r.mu == mu, "residues recovered");
            check(r.pole_x == n && r.pole_y == m, "pole orders recovered");
            check(r.primitive == f.truncated(r.precision), "primitive recovered");
            check(log_exact_form(r.lambda, r.mu, r.pole_x, r.pole_y, r.primitive) == w, "rebuild");
            OneForm exact = log_exact_form(Scalar(), Scalar(), n, m, f);
            check(residue_along_axis(exact, 0).is_zero() && residue_along_axis(exact, 1).is_zero(),
                  "exact forms have no residue");
        });
    }
    const unsigned M = 8;
    OneForm dx = coordinate_form(2, M, 0), dy = coordinate_form(2, M, 1);
    check(pullback(Diffeo::identity(2, M), dx) == dx, "identity preserves dx");
    for (int trial = 0; trial < 20; ++trial) {
        Diffeo g = test::random_near_identity(rng, 2, M, 2, 5);
        if (g.is_identity()) continue;
        check(!(pullback(g, dx) == dx && pullback(g, dy) == dy), "tangent map preserving dx and dy");
    }
}

void normal_form_families(Checks& check) {
    test::Rng rng(107);
    const unsigned N = 8;
    Plane P(N);
    auto family = [&](NormalFormParams base, const std::function<void(NormalFormParams&)>& randomize) {
        std::vector<Diffeo> gens;
        auto [w1, w2] = normal_form_invariants(base, N);
        for (int i = 0; i < 3; ++i) {
            NormalFormParams p = base;
            randomize(p);
            Diffeo g = normal_form_generator(p, N);
            check(pullback(g, w1) == w1 && pullback(g, w2) == w2, "generator preserves the family forms");
            // 1/(x^n y^m) o g - 1/(x^n y^m) is the constant k1
            MeroJet T(P.one, P.mono(p.n, p.m));
            check(compose(T, g) - T == MeroJet::constant(2, N, p.k1), "first polar function shifts by k1");
            gens.push_back(g);
        }
        for (std::size_t i = 0; i < gens.size(); ++i) {
            for (std::size_t j = i + 1; j < gens.size(); ++j) {
                check(commutator(gens[i], gens[j]).is_identity(), "generators commute");
            }
        }
    };
    check.guard("family (a)", [&] {
        family(NormalFormParams{NormalFamily::A, 1, 1, 1, 2}, [&](NormalFormParams& p) {
            p.k1 = test::random_scalar(rng);
            p.k2 = test::random_scalar(rng);
        });
    });
    check.guard("family (b)", [&] {
        family(NormalFormParams{NormalFamily::B, 1, 2}, [&](NormalFormParams& p) {
            p.k1 = test::random_scalar(rng);
            p.root = test::random_scalar(rng, true);
            p.scale = p.root.pow(2).inverse();
        });
    });
    check.guard("family (c)", [&] {
        family(NormalFormParams{NormalFamily::C, 2, 1}, [&](NormalFormParams& p) {
            p.k1 = test::random_scalar(rng);
            p.root = test::random_scalar(rng, true);
            p.scale = p.root.pow(2).inverse();
        });
    });
}

void flow_commutation(Checks& check) {
    test::Rng rng(108);
    const unsigned N = 7;
    for (int trial = 0; trial < 50; ++trial) {
        check.guard("trial " + std::to_string(trial), [&] {
            auto [X, Y] = random_commuting_pair(rng, N);
            // f commutes with exp(X): a product of flows of X and a commuting Y
            Diffeo f = compose(exp_t(Y, test::random_scalar(rng)), exp_t(X, test::random_scalar(rng)));
            check(commutator(f, exp(X)).is_identity(), "engineered f commutes with exp(X)");
            std::set<std::string> seen;
            for (unsigned j = 0; j <= N; ++j) {
                Scalar t(Rational(static_cast<long>(j) * 3 - 7, 2));
                seen.insert(t.str());
                check(commutator(f, exp_t(X, t)).is_identity(), "commutes with exp(tX) at t=" + t.str());
            }
            check(seen.size() == N + 1, "N+1 distinct times");
        });
    }
}

void dicritic_rigidity(Checks& check) {
    test::Rng rng(109);
    const unsigned N = 8;
    Plane P(N);
    int built = 0;
    while (built < 20) {
        unsigned k = static_cast<unsigned>(rng.uniform(1, 2));
        Jet a = test::random_homogeneous(rng, 2, N, k);
        VectorField p({test::random_homogeneous(rng, 2, N, k + 2), test::random_homogeneous(rng, 2, N, k + 2)});
        VectorField X = P.R().times(a) + p;
        if (!is_regular_dicritic(X)) continue;
        ++built;
        check(dicritic_factor(X) == a, "radial factor");
        Scalar c1 = test::random_scalar(rng, true), c2 = test::random_scalar(rng);
        if ((c1 + c2).is_zero()) c2 = c2 + Scalar(1);
        // a commuting field of the same order built through the group
        VectorField Y = log(compose(exp_t(X, c1), exp_t(X, c2)));
        check(lie_bracket(X, Y).is_zero(), "Y commutes with X");
        check(is_dicritic(Y) && Y.order_of_vanishing() == X.order_of_vanishing(), "Y dicritic of the same order");
        auto c = proportionality(Y, X);
        check(c && *c == c1 + c2 && X * *c == Y, "Y = c X with c = c1 + c2");
    }
    VectorField U = P.R().times(P.x), V = P.R().times(P.y);
    check(lie_bracket(U, V).is_zero(), "x R and y R commute");
    check(is_dicritic(U) && is_dicritic(V), "x R and y R dicritic");
    check(!is_regular_dicritic(U) && !is_regular_dicritic(V), "x R and y R not regular");
    check(!proportionality(V, U).has_value(), "x R and y R not proportional");
}

void dicritic_commutator_orders(Checks& check) {
    const unsigned N = 10;
    Plane P(N);
    Diffeo a = exp(P.R().times(P.x)), b = exp(P.R().times(P.y * P.y));
    std::vector<unsigned> fib = {1, 2};
    while (fib[fib.size() - 1] + fib[fib.size() - 2] <= N) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
    check(fib == std::vector<unsigned>{1, 2, 3, 5, 8}, "frozen order sequence");
    auto chain = commutator_chain(a, b);
    std::vector<unsigned> orders;
    for (const auto& s : chain) {
        if (s.order.is_order()) orders.push_back(s.order.k);
    }
    check(orders == fib, "chain orders follow p_n = p_{n-1} + p_{n-2}");
    check(chain.back().order.kind == TangencyOrder::Kind::Identity, "chain ends past the jet order");

    GroupSpec spec({a, b}, 2, 3);
    spec.level_cap = 12;
    unsigned last = 0;
    std::size_t refuted = 0;
    for (const auto& c : derived_series_probe(spec)) {
        if (c.verdict != Verdict::Refuted) break;
        ++refuted;
        TangencyOrder t = tangency_order(c.witness->value);
        check(t.is_order() && t.k > last, "derived witness orders strictly increase");
        check(evaluate_word(spec, c.witness->word) == c.witness->value, "witness word evaluates");
        last = t.k;
    }
    check(refuted >= 2, "at least two derived witnesses");
    Certificate d = theorem_d_check(spec);
    check(d.verdict == Verdict::Proved && d.get("abelian") == "false" && d.get("uniform_order") == "false",
          "mixed pair: both sides false");

    VectorField X = P.R().times(P.x + P.y);
    GroupSpec flows({exp(X), exp_t(X, Scalar(-2)), exp_t(X, Scalar(Rational(1, 3)))}, 3);
    check(is_abelian(flows).verdict == Verdict::Proved, "flow group abelian");
    for (const auto& e : enumerate_words(flows)) {
        check(tangency_order(e.value) == TangencyOrder{TangencyOrder::Kind::Order, 1}, "uniform order 1: " + e.word);
    }
    Certificate u = theorem_d_check(flows);
    check(u.verdict == Verdict::Proved && u.get("abelian") == "true" && u.get("k") == "1", "flow group: both sides true");
}

void solvable_not_metabelian(Checks& check) {
    const unsigned N = 8;
    Plane P(N);
    Diffeo h = P.map(P.x * invert_unit(P.one - P.x), P.y);
    Diffeo a = P.map(P.x, P.y + P.x.pow(3));
    Diffeo b = P.map(P.x, (P.one + P.x) * P.y);
    GroupSpec spec({h, a, b}, 6, 3);
    auto probe = derived_series_probe(spec);
    check(probe.size() == 3, "three depths probed");
    if (probe.size() != 3) return;
    check(probe[0].verdict == Verdict::Refuted, "depth 1 witness");
    check(probe[1].verdict == Verdict::Refuted, "depth 2 witness: not metabelian");
    check(probe[2].verdict == Verdict::Inconclusive, "no depth 3 witness within L = 6");
    if (probe[1].witness) {
        const Diffeo& w = probe[1].witness->value;
        check(evaluate_word(spec, probe[1].witness->word) == w, "witness word evaluates");
        check(!w.is_identity() && w[0] == P.x && w.linear_part() == Matrix::identity(2), "witness is (x, y + ...)");
    }
}

void nilpotent_derived_length(Checks& check) {
    test::Rng rng(112);
    const unsigned N = 7;
    Plane P(N);
    VectorField A = P.field(P.y, P.zero), B = P.field(P.x * P.y * Scalar(-2), -(P.y * P.y));
    std::vector<std::vector<VectorField>> plane = {
        {A, B},
        {P.field(P.y.pow(2), P.zero), P.field(P.y.pow(3) * Scalar(2), P.zero), A},
    };
    for (int trial = 0; trial < 6; ++trial) {
        Diffeo phi = test::random_near_identity(rng, 2, N, 2, 3, 0.4);
        std::vector<VectorField> gens;
        for (const auto& X : plane[trial % 2]) gens.push_back(pushforward(phi, X));
        plane.push_back(gens);
    }
    std::size_t tested = 0;
    for (const auto& gens : plane) {
        check.guard("plane span", [&] {
            LieSpan s = lie_closure(gens);
            check(lie_derived_length(s) <= 2, "plane span of dimension " + std::to_string(s.basis.size()));
            ++tested;
        });
    }

    Jet x = Jet::variable(3, N, 0), y = Jet::variable(3, N, 1), z = Jet::variable(3, N, 2), zero(3, N);
    std::vector<std::vector<VectorField>> space = {{VectorField({y, zero, zero}), VectorField({zero, z, zero})}};
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<VectorField> gens;
        for (int k = 0; k < 3; ++k) {
            Jet p(3, N), q(3, N);
            for (unsigned i = 0; i <= 3; ++i) {
                for (unsigned j = 1; i + j <= 4; ++j) {
                    if (rng.coin(0.5)) p.add_term(MultiIndex{0, i, j}, test::random_scalar(rng));
                }
            }
            for (unsigned j = 1; j <= 3; ++j) {
                if (rng.coin(0.5)) q.add_term(MultiIndex{0, 0, j}, test::random_scalar(rng));
            }
            gens.push_back(VectorField({p, q, zero}));
        }
        if (trial % 2 == 1) {
            std::vector<Jet> c;
            for (std::size_t i = 0; i < 3; ++i) {
                c.push_back(Jet::variable(3, N, i) + test::random_jet(rng, 3, N, 2, 2, 0.3));
            }
            Diffeo phi(std::move(c));
            for (auto& X : gens) X = pushforward(phi, X);
        }
        space.push_back(gens);
    }
    for (const auto& gens : space) {
        check.guard("space span", [&] {
            LieSpan s = lie_closure(gens);
            check(lie_derived_length(s) <= 3, "space span of dimension " + std::to_string(s.basis.size()));
            ++tested;
        });
    }
    check(tested == plane.size() + space.size(), "every span tested");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void cli_corpus(Checks& check) {
    const fs::path dir(FDIFF_FIXTURE_DIR);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".fd") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    check(!files.empty(), "fixture corpus present");
    for (const auto& f : files) {
        check.guard(f.filename().string(), [&] {
            SourceDocument doc = parse(read_file(f));
            const std::string printed = print(doc);
            SourceDocument again = parse(printed);
            check(same_document(doc, again), "parse(print(doc)) = doc for " + f.filename().string());
            check(print(again) == printed, "print idempotent for " + f.filename().string());
            for (const auto& d : doc.decls) {
                check(values_equal(evaluate_expression(doc, print(d.value, doc.vars)), d.value),
                      "value round trip " + d.name);
            }
        });
    }
    const fs::path tmp = fs::temp_directory_path() / ("fdiff_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    // each run compares every directive report byte for byte with its golden
    std::ostringstream out, err;
    int c1 = run_cli({"verify-paper", "--machine-output", (tmp / "a.json").string()}, out, err);
    int c2 = run_cli({"verify-paper", "--machine-output", (tmp / "b.json").string()}, out, err);
    check(c1 == 0 && c2 == 0, "verify-paper exits 0");
    const std::string a = read_file(tmp / "a.json");
    check(!a.empty() && a == read_file(tmp / "b.json"), "verify-paper reports byte-identical");
    fs::remove_all(tmp);
}

struct Criterion {
    int id;
    std::string title;
    std::function<void(Checks&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "exp/log bijection on random fields of order k+1", exp_log_bijection},
        {2, "invariant-field pairs and commuting bracket pairs", invariant_fields_and_bracket_pairs},
        {3, "bracket of f R and g R equals (k - s) f g R", radial_bracket_identity},
        {4, "commutator leading terms, general and dicritic", commutator_leading_terms},
        {5, "dual closed forms: closed, dual, invariant, frame round trip", dual_forms_pipeline},
        {6, "integration round trip, residues, dx and dy rigidity", integration_round_trip},
        {7, "normal-form families preserve their forms and commute", normal_form_families},
        {8, "flow commutation at N+1 times", flow_commutation},
        {9, "regular dicritic rigidity", dicritic_rigidity},
        {10, "dicritic commutator orders and uniform-order flows", dicritic_commutator_orders},
        {11, "solvable non-metabelian group: depth-2 witness only", solvable_not_metabelian},
        {12, "derived length of nilpotent spans", nilpotent_derived_length},
        {13, "fixture round trip, verify-paper, deterministic reports", cli_corpus},
    };
    bool unexpected = false;
    for (const auto& c : criteria) {
        Checks checks;
        auto start = std::chrono::steady_clock::now();
        checks.guard("criterion", [&] { c.run(checks); });
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line.precision(2);
        line << (checks.ok() ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << checks.summary()
             << ", " << std::fixed << secs << " s)";
        std::cout << line.str() << std::endl;
        unexpected = unexpected || checks.unexpected();
    }
    return unexpected ? 1 : 0;
}
