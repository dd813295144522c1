#include "fdiff/error.hpp"
#include "fdiff/formal_maps.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace fdiff;

namespace {

struct Plane {
    unsigned N;
    Jet x, y, one;
    explicit Plane(unsigned order)
        : N(order),
          x(Jet::variable(2, order, 0)),
          y(Jet::variable(2, order, 1)),
          one(Jet::constant(2, order, Scalar(1))) {}
    VectorField field(const Jet& a, const Jet& b) const { return VectorField({a, b}); }
    Diffeo map(const Jet& a, const Jet& b) const { return Diffeo({a, b}); }
    VectorField R() const { return VectorField::radial(2, N); }
};

}  // namespace

TEST(Derivation, Examples) {
    Plane P(6);
    VectorField X = P.field(Jet(2, 6), P.x * P.x);
    EXPECT_EQ(apply_derivation(X, P.y), P.x * P.x);
    EXPECT_TRUE(apply_derivation(X, P.one).is_zero());
    Jet f = P.x * P.x + P.x * P.y * Scalar(3);
    EXPECT_EQ(apply_derivation(P.R(), f), f * Scalar(2));
}

TEST(Bracket, PlaneExamples) {
    Plane P(9);
    Jet x = P.x, y = P.y;
    VectorField Xa = P.field(x * y, -(y * y));
    EXPECT_TRUE(lie_bracket(Xa, Xa).is_zero());
    Scalar a(Rational(5, 3));
    VectorField Ya = P.field(x * x * y * y * a, -(x * y.pow(3)) * a);
    EXPECT_TRUE(lie_bracket(Xa, Ya).is_zero());

    VectorField Xb = P.field(x * x + x * y * Scalar(3), x * y * Scalar(3) + y * y);
    // the commuting partner has -5 x y^2 in its second component
    VectorField Yb = P.field(x.pow(3) * Scalar(3) - x * x * y * Scalar(5) + x * y * y + y.pow(3),
                             x.pow(3) + x * x * y - x * y * y * Scalar(5) + y.pow(3) * Scalar(3));
    EXPECT_TRUE(lie_bracket(Xb, Yb).is_zero());
    VectorField Yb_printed = Yb + P.field(Jet(2, 9), x * y * y * Scalar(3));
    EXPECT_FALSE(lie_bracket(Xb, Yb_printed).is_zero());

    for (unsigned k = 1; k <= 3; ++k) {
        VectorField Xc = P.field(x.pow(k + 1), x.pow(k) * y);
        VectorField Yc = P.field(y.pow(k) * x, y.pow(k + 1));
        EXPECT_TRUE(lie_bracket(Xc, Yc).is_zero());
    }
    VectorField Xd = P.field(x * x, x * y);
    VectorField Yd = P.field(x * y, y * y);
    EXPECT_TRUE(lie_bracket(Xd, Yd).is_zero());

    // [x R, y^2 R] = (1 - 2) x y^2 R
    EXPECT_EQ(lie_bracket(P.R().times(x), P.R().times(y * y)), P.R().times(x * y * y * Scalar(-1)));
}

TEST(BracketProperty, AntisymmetryAndJacobi) {
    test::Rng rng(21);
    for (int trial = 0; trial < 15; ++trial) {
        VectorField X = test::random_field(rng, 2, 7, 1, 4);
        VectorField Y = test::random_field(rng, 2, 7, 1, 4);
        VectorField Z = test::random_field(rng, 2, 7, 1, 4);
        EXPECT_EQ(lie_bracket(X, Y), -lie_bracket(Y, X));
        VectorField jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) +
                          lie_bracket(Z, lie_bracket(X, Y));
        EXPECT_TRUE(jac.is_zero());
    }
}

TEST(Exp, Examples) {
    Plane P(5);
    VectorField X = P.field(Jet(2, 5), P.x * P.x);
    EXPECT_EQ(exp(X), P.map(P.x, P.y + P.x * P.x));
    EXPECT_TRUE(exp(VectorField::zero(2, 5)).is_identity());
    EXPECT_THROW(exp(P.field(P.x, Jet(2, 5))), PreconditionError);
    EXPECT_THROW(exp(VectorField::coordinate(2, 5, 0)), PreconditionError);
    // nilpotent linear part is allowed
    Diffeo shear = exp(P.field(P.y, Jet(2, 5)));
    EXPECT_EQ(shear, P.map(P.x + P.y, P.y));
}

TEST(Exp, OneParameterGroup) {
    Plane P(8);
    VectorField X = P.field(P.x * P.x * P.y, Jet(2, 8));
    test::Rng rng(22);
    for (int trial = 0; trial < 5; ++trial) {
        Scalar s = test::random_scalar(rng), t = test::random_scalar(rng);
        EXPECT_EQ(compose(exp_t(X, s), exp_t(X, t)), exp_t(X, s + t));
    }
}

TEST(Log, Examples) {
    Plane P(7);
    EXPECT_TRUE(log(Diffeo::identity(2, 7)).is_zero());
    EXPECT_EQ(log(P.map(P.x, P.y + P.x * P.x)), P.field(Jet(2, 7), P.x * P.x));
    VectorField X = P.field(P.x.pow(3) * P.y * P.y, Jet(2, 7));
    EXPECT_EQ(log(exp(X)), X);
    EXPECT_THROW(log(Diffeo::homothety(2, 7, Scalar(2))), PreconditionError);
}

TEST(ExpLogProperty, Bijection) {
    test::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        VectorField X = test::random_field(rng, 2, 7, 2, 7);
        EXPECT_EQ(log(exp(X)), X);
        Diffeo f = test::random_near_identity(rng, 2, 7, 2, 5);
        EXPECT_EQ(exp(log(f)), f);
    }
}

TEST(Group, InverseAndCommutator) {
    Plane P(6);
    Diffeo f = P.map(P.x, P.y + P.x * P.x);
    EXPECT_EQ(inverse(f), P.map(P.x, P.y - P.x * P.x));
    EXPECT_TRUE(compose(f, inverse(f)).is_identity());
    EXPECT_TRUE(commutator(f, f).is_identity());
    Diffeo a = P.map(P.x * Scalar(2), P.y * Scalar(4));
    Diffeo b = P.map(P.x, P.x + P.y);
    EXPECT_FALSE(commutator(a, b).is_identity());
    EXPECT_EQ(power(b, -3), P.map(P.x, P.y - P.x * Scalar(3)));
}

TEST(GroupProperty, InverseRoundTrip) {
    test::Rng rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        Diffeo f = test::random_diffeo(rng, 2, 6, 4);
        EXPECT_TRUE(compose(f, inverse(f)).is_identity());
        EXPECT_TRUE(compose(inverse(f), f).is_identity());
    }
}

TEST(Pushforward, Examples) {
    Plane P(6);
    VectorField X = P.field(Jet(2, 6), P.x * P.x);
    EXPECT_EQ(pushforward(Diffeo::identity(2, 6), X), X);
    EXPECT_EQ(pushforward(P.map(P.x, P.x + P.y), X), X);
    EXPECT_EQ(pushforward(P.map(P.x * Scalar(2), P.y * Scalar(4)), X), X);
}

TEST(PushforwardProperty, FunctorialAndConjugation) {
    test::Rng rng(25);
    for (int trial = 0; trial < 8; ++trial) {
        Diffeo g = test::random_diffeo(rng, 2, 6, 3);
        Diffeo h = test::random_diffeo(rng, 2, 6, 3);
        VectorField X = test::random_field(rng, 2, 6, 2, 4);
        EXPECT_EQ(pushforward(compose(g, h), X), pushforward(g, pushforward(h, X)));
        EXPECT_EQ(exp(pushforward(g, X)), compose(compose(g, exp(X)), inverse(g)));
    }
}

TEST(Tangency, Orders) {
    Plane P(8);
    EXPECT_EQ(tangency_order(P.map(P.x, P.y + P.x * P.x)).k, 1u);
    EXPECT_EQ(tangency_order(Diffeo::identity(2, 8)).kind, TangencyOrder::Kind::Identity);
    EXPECT_EQ(tangency_order(Diffeo::homothety(2, 8, Scalar(3))).kind,
              TangencyOrder::Kind::NotTangent);
    // dicritic orders r+1 = 2 and s+1 = 3 give a commutator of order r+s+1
    Diffeo f = exp(P.R().times(P.x + P.y));
    Diffeo g = exp(P.R().times(P.x * P.y));
    TangencyOrder t = tangency_order(commutator(f, g));
    EXPECT_EQ(t.kind, TangencyOrder::Kind::Order);
    EXPECT_EQ(t.k, 3u);
}

TEST(Dicritic, Predicates) {
    Plane P(8);
    Jet x = P.x, y = P.y;
    EXPECT_TRUE(is_dicritic(P.R().times(x + y)));
    VectorField Xd = P.field(x * x, x * y);
    EXPECT_TRUE(is_dicritic(Xd));
    EXPECT_EQ(*dicritic_factor(Xd), x);
    EXPECT_FALSE(is_dicritic(P.field(x * x * y, Jet(2, 8))));

    // z2 p1 - z1 p2 = x^4 for p = (0, -x^3)
    VectorField reg = P.R().times(x + y) + P.field(Jet(2, 8), -x.pow(3));
    EXPECT_TRUE(is_regular_dicritic(reg));
    EXPECT_FALSE(is_regular_dicritic(Xd));
    EXPECT_FALSE(is_regular_dicritic(P.field(x * y, y * y)));
    EXPECT_FALSE(is_regular_dicritic(P.R().times(x + y)));
    EXPECT_THROW(is_regular_dicritic(VectorField::radial(2, 2).times(Jet::variable(2, 2, 0))),
                 PreconditionError);
}

TEST(Dicritic, ThreeVariables) {
    const unsigned N = 6;
    Jet x = Jet::variable(3, N, 0), y = Jet::variable(3, N, 1), z = Jet::variable(3, N, 2);
    VectorField R = VectorField::radial(3, N);
    VectorField X = R.times(x + z) + VectorField({Jet(3, N), z.pow(3), Jet(3, N)});
    EXPECT_TRUE(is_dicritic(X));
    EXPECT_TRUE(is_regular_dicritic(X));
    VectorField Y = R.times(x) + VectorField({Jet(3, N), x * y * y, Jet(3, N)});
    EXPECT_FALSE(is_regular_dicritic(Y));
}

TEST(Factors, ProjectiveAndFlow) {
    Plane P(8);
    VectorField X = P.R().times(P.x + P.y);
    EXPECT_EQ(*projective_factor(exp(X), X), Scalar(1));
    EXPECT_EQ(*projective_factor(Diffeo::identity(2, 8), X), Scalar(1));
    // (Dg . X) o g^-1 for g = lambda Id scales a degree-(k+1) field by lambda^-k
    EXPECT_EQ(*projective_factor(Diffeo::homothety(2, 8, Scalar(3)), X), Scalar(Rational(1, 3)));
    EXPECT_FALSE(projective_factor(P.map(P.x, P.x + P.y), X).has_value());
    EXPECT_THROW(projective_factor(exp(X), VectorField::zero(2, 8)), PreconditionError);

    EXPECT_EQ(*flow_membership(exp(X), X), Scalar(1));
    EXPECT_EQ(*flow_membership(Diffeo::identity(2, 8), X), Scalar(0));
    Scalar r(Rational(3, 2));
    EXPECT_EQ(*flow_membership(exp_t(X, r), X), r);
    EXPECT_FALSE(flow_membership(exp(P.field(P.y * P.y, Jet(2, 8))), X).has_value());
}

TEST(FlowCommutation, SampledTimes) {
    Plane P(7);
    VectorField X = P.R().times(P.x);
    Diffeo f = exp_t(X, Scalar(Rational(-2, 5)));
    ASSERT_TRUE(commutator(f, exp(X)).is_identity());
    for (long t = 0; t <= 7; ++t) EXPECT_TRUE(commutator(f, exp_t(X, Scalar(t))).is_identity());
}

TEST(NormalForm, OneDimension) {
    VectorField X = normal_form_1d(2, Scalar(1), 7);
    EXPECT_EQ(X[0].str({"z"}), "z^3 - z^5 + z^7");
}
