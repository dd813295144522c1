#include "fdiff/poly.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace fdiff;

namespace {

Jet var(std::size_t n, std::size_t i) { return Jet::variable(n, 12, i); }

}  // namespace

TEST(Poly, GcdOfSharedFactor) {
    Jet x = var(2, 0), y = var(2, 1);
    Jet a = (x + y) * (x - y);
    Jet b = (x + y) * (x + y) * x;
    EXPECT_EQ(gcd(Poly::from_jet(a), Poly::from_jet(b)), Poly::from_jet(x + y));
}

TEST(Poly, ExactDivision) {
    Jet x = var(3, 0), y = var(3, 1), z = var(3, 2);
    Jet f = x * y + z * z;
    Jet g = x - y * z * Scalar(3);
    auto q = Poly::from_jet(f * g).divide(Poly::from_jet(g));
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, Poly::from_jet(f));
    EXPECT_FALSE(Poly::from_jet(f).divide(Poly::from_jet(g)).has_value());
}

TEST(Poly, HomogeneousCoprimeTwoVars) {
    Jet x = var(2, 0), y = var(2, 1);
    EXPECT_TRUE(homogeneous_coprime(x + y, x * x * x));
    EXPECT_FALSE(homogeneous_coprime(x + y, (x + y) * y));
    // common factor of the dehomogenized variable
    EXPECT_FALSE(homogeneous_coprime(y * x, y * y));
    EXPECT_TRUE(homogeneous_coprime(x, y.pow(4)));
    EXPECT_FALSE(homogeneous_coprime(x, Jet(2, 12)));
    EXPECT_TRUE(homogeneous_coprime(x * Scalar::i() + y, x * x + y * y * Scalar(2)));
    // x^2 + y^2 = (x + i y)(x - i y)
    EXPECT_FALSE(homogeneous_coprime(x + y * Scalar::i(), x * x + y * y));
}

TEST(Poly, HomogeneousCoprimeThreeVars) {
    Jet x = var(3, 0), y = var(3, 1), z = var(3, 2);
    EXPECT_TRUE(homogeneous_coprime(x + y + z, x * y * z));
    EXPECT_FALSE(homogeneous_coprime((x + y) * (y - z), (y - z) * x * x));
    EXPECT_FALSE(homogeneous_coprime(z * x, z * y));
}

TEST(PolyProperty, GcdDividesAndRecoversFactor) {
    test::Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        Jet c = test::random_homogeneous(rng, 3, 12, 1);
        Jet a = test::random_homogeneous(rng, 3, 12, 2);
        Jet b = test::random_homogeneous(rng, 3, 12, 2);
        Poly g = gcd(Poly::from_jet(a * c), Poly::from_jet(b * c));
        EXPECT_TRUE(Poly::from_jet(a * c).divide(g).has_value());
        EXPECT_TRUE(Poly::from_jet(b * c).divide(g).has_value());
        EXPECT_TRUE(g.divide(gcd(Poly::from_jet(c), Poly::from_jet(c))).has_value());
        EXPECT_FALSE(homogeneous_coprime(a * c, b * c));
    }
}
