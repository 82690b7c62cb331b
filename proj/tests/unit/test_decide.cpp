#include "polycomp/decide.hpp"
#include "polycomp/gallery.hpp"

#include <gtest/gtest.h>

using namespace polycomp;

namespace {

Answer answer(const std::string& name, double b1, double b2, const Params& p = {}, bool with_family = false)
{
    Verdict v = classify(gallery_build(name, p));
    auto e = gallery_expected(name, p);
    return decide(v, b1, b2, with_family && e.family ? &*e.family : nullptr).answer;
}

} // namespace

TEST(Decide, TridiscTable)
{
    EXPECT_EQ(answer("triple_product", -0.7, -0.7), Answer::unbounded);
    EXPECT_EQ(answer("triple_product", -0.65, -0.65), Answer::gap);
    EXPECT_EQ(answer("triple_product", 0.0, 0.0), Answer::bounded);
    EXPECT_EQ(answer("case5", -1.0, -1.0), Answer::bounded);
    EXPECT_EQ(answer("case3", -1.0, -1.0), Answer::unbounded);
    EXPECT_EQ(answer("case3", -0.99, -0.99), Answer::bounded);
    EXPECT_EQ(answer("case2", -0.9, -0.9), Answer::unbounded);
    EXPECT_EQ(answer("case2", -0.6, -0.6), Answer::gap);
    // automatic target 2 (beta1 + 2) - 2 for d_phi = 2
    EXPECT_EQ(answer("triple_product", -0.9, 0.2), Answer::bounded);
    EXPECT_EQ(answer("triple_product", 0.0, 0.5), Answer::bounded);
}

TEST(Decide, ProductFamily)
{
    for (int n = 1; n <= 2; ++n) {
        double t = -1.0 / (2 * n);
        EXPECT_EQ(answer("h_family", t, t, {{"n", n}}, true), Answer::bounded);
        EXPECT_EQ(answer("h_family", t - 0.01, t - 0.01, {{"n", n}}, true), Answer::unbounded);
        EXPECT_EQ(answer("h_family", t - 0.01, t - 0.01, {{"n", n}}, false), Answer::gap);
    }
    EXPECT_EQ(answer("bidisc_hn", 0.0, 0.25, {{"n", 1}}, true), Answer::bounded);
    EXPECT_EQ(answer("bidisc_hn", 0.0, 0.24, {{"n", 1}}, true), Answer::unbounded);
}

TEST(Decide, Bidisc)
{
    EXPECT_EQ(answer("bidisc_z1z1", 0.0, 1.9), Answer::unbounded);
    EXPECT_EQ(answer("bidisc_z1z1", 0.0, 2.0), Answer::bounded);
    EXPECT_EQ(answer("bidisc_z1z2", 0.0, 0.5), Answer::bounded);
    EXPECT_EQ(answer("bidisc_z1z2", 0.0, 0.2), Answer::unbounded);
    EXPECT_EQ(answer("bidisc_z1z2", 0.0, 0.4), Answer::gap);
    EXPECT_EQ(answer("avg2", 0.0, 0.25), Answer::bounded);
    EXPECT_EQ(answer("bidisc_aa", 0.0, 0.25), Answer::unbounded);
    EXPECT_EQ(answer("bidisc_a1a2", 0.0, 0.25), Answer::bounded);
    EXPECT_EQ(answer("bidisc_invertible", 0.3, 0.3), Answer::bounded);
}

TEST(Decide, NoContactAndErrors)
{
    Symbol phi({MultiPoly::variable(2, 0) * cplx(0.5), MultiPoly::variable(2, 1) * cplx(0.5)});
    EXPECT_EQ(decide(classify(phi), -1.0, -1.0).answer, Answer::bounded);
    EXPECT_THROW(decide(classify(phi), -1.5, 0.0), std::invalid_argument);
    EXPECT_EQ(to_string(Answer::gap), "gap");
}
