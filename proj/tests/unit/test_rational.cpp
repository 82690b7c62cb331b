#include "polycomp/rational.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

using polycomp::Rational;

TEST(Rational, ReducesAndNormalizesSign)
{
    Rational r(6, -8);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 4);
    EXPECT_EQ(Rational(0, -5), Rational(0));
    EXPECT_EQ(Rational(0, -5).den(), 1);
}

TEST(Rational, ZeroDenominatorThrows)
{
    EXPECT_THROW(Rational(1, 0), std::domain_error);
    EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, Arithmetic)
{
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(1, 2) - Rational(3, 4), Rational(-1, 4));
    EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
    EXPECT_EQ(Rational(2, 3) / Rational(-4, 9), Rational(-3, 2));
    EXPECT_EQ(-Rational(5, 7), Rational(-5, 7));
    EXPECT_EQ(Rational(7, 3).to_string(), "7/3");
    EXPECT_EQ(Rational(4, 2).to_string(), "2");
    EXPECT_DOUBLE_EQ(Rational(-1, 8).to_double(), -0.125);
}

TEST(Rational, Ordering)
{
    EXPECT_LT(Rational(-1, 2), Rational(-1, 3));
    EXPECT_LE(Rational(2, 4), Rational(1, 2));
    EXPECT_GT(Rational(1, 3), Rational(1, 4));
    EXPECT_FALSE(Rational(1, 3) < Rational(1, 3));
}

TEST(Rational, FieldLawsOnRandomSmallFractions)
{
    std::mt19937 gen(5);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 40);
    for (int i = 0; i < 2000; ++i) {
        Rational a(num(gen), den(gen)), b(num(gen), den(gen)), c(num(gen), den(gen));
        EXPECT_EQ((a + b) - b, a);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        if (b != Rational(0))
            EXPECT_EQ((a / b) * b, a);
        EXPECT_EQ(a < b, a.to_double() < b.to_double());
    }
}
