#include "polycomp/gallery.hpp"
#include "polycomp/poly.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace polycomp;

namespace {

const double pi = 3.14159265358979323846;

MultiPoly z(int d, int k) { return MultiPoly::variable(d, k); }

MultiPoly random_poly(std::mt19937& gen, int d, int terms, int maxdeg)
{
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::normal_distribution<double> c;
    MultiPoly p(d);
    for (int t = 0; t < terms; ++t) {
        Exponent e(d);
        for (auto& x : e)
            x = deg(gen);
        p.add_term(e, cplx(c(gen), c(gen)));
    }
    return p;
}

std::vector<cplx> random_point(std::mt19937& gen, int d)
{
    std::uniform_real_distribution<double> r(0.0, 1.0), t(-pi, pi);
    std::vector<cplx> v;
    for (int k = 0; k < d; ++k)
        v.push_back(std::polar(r(gen), t(gen)));
    return v;
}

} // namespace

TEST(Poly, PsiValues)
{
    MultiPoly psi = psi_poly();
    EXPECT_NEAR(std::abs(eval(psi, {1.0}) - cplx(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval(psi, {-1.0}) - cplx(-0.6875)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(eval(partial(psi, 0), {1.0}) - cplx(0.5)), 0.0, 1e-15);
}

TEST(Poly, PsiModulusClosedForm)
{
    MultiPoly psi = psi_poly();
    for (int i = 0; i <= 64; ++i) {
        double th = -pi + 2.0 * pi * i / 64;
        double closed = (2.0 * (135 * std::cos(3 * th) - 810 * std::cos(2 * th) + 2025 * std::cos(th)) + 13684) / 16384.0;
        EXPECT_NEAR(std::norm(eval(psi, {std::polar(1.0, th)})), closed, 1e-13);
    }
}

TEST(Poly, GOneAtMinusOneVanishes)
{
    EXPECT_NEAR(std::abs(eval(g_poly(1), {-1.0})), 0.0, 1e-15);
}

TEST(Poly, PartialOfProduct)
{
    MultiPoly p = z(3, 0) * z(3, 1) * z(3, 2);
    EXPECT_EQ(partial(p, 0), z(3, 1) * z(3, 2));
    EXPECT_TRUE(partial(p, Exponent{2, 0, 0}).is_zero());
    EXPECT_EQ(partial(p, Exponent{1, 1, 1}), MultiPoly::constant(3, 1.0));
}

TEST(Poly, PartialMatchesFiniteDifference)
{
    std::mt19937 gen(3);
    for (int t = 0; t < 50; ++t) {
        MultiPoly p = random_poly(gen, 3, 6, 4);
        auto x = random_point(gen, 3);
        for (int k = 0; k < 3; ++k) {
            const double h = 1e-6;
            auto xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            cplx fd = (eval(p, xp) - eval(p, xm)) / (2.0 * h);
            EXPECT_NEAR(std::abs(eval(partial(p, k), x) - fd), 0.0, 1e-6 * (1.0 + std::abs(fd)));
        }
    }
}

TEST(Poly, ArithmeticIsPointwise)
{
    std::mt19937 gen(4);
    for (int t = 0; t < 50; ++t) {
        MultiPoly a = random_poly(gen, 2, 5, 3), b = random_poly(gen, 2, 5, 3);
        auto x = random_point(gen, 2);
        EXPECT_NEAR(std::abs(eval(a * b, x) - eval(a, x) * eval(b, x)), 0.0, 1e-11);
        EXPECT_NEAR(std::abs(eval(a + b, x) - eval(a, x) - eval(b, x)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(eval(a.pow(3), x) - std::pow(eval(a, x), 3)), 0.0, 1e-9 * (1 + std::pow(std::abs(eval(a, x)), 3)));
    }
}

TEST(Poly, VariableSupport)
{
    EXPECT_EQ(variable_support(z(3, 0) * z(3, 1) * z(3, 2)), (std::vector<int>{0, 1, 2}));
    MultiPoly f0 = F_poly(0.0), fb = F_poly(0.02);
    MultiPoly p = embed(f0, 3, 0) * embed(fb, 3, 1) * embed(f0, 3, 2);
    EXPECT_EQ(variable_support(p), (std::vector<int>{0, 1, 2}));
    EXPECT_TRUE(variable_support(MultiPoly(3)).empty());
}

TEST(Poly, RotatedAndEmbedded)
{
    std::mt19937 gen(6);
    MultiPoly p = random_poly(gen, 2, 6, 3);
    std::vector<cplx> xi = {std::polar(1.0, 0.3), std::polar(1.0, -1.1)};
    cplx f = std::polar(1.0, 0.7);
    MultiPoly q = p.rotated(xi, f);
    auto x = random_point(gen, 2);
    EXPECT_NEAR(std::abs(eval(q, x) - f * eval(p, {xi[0] * x[0], xi[1] * x[1]})), 0.0, 1e-12);
    MultiPoly e = p.embedded(3, {2, 0});
    auto y = random_point(gen, 3);
    EXPECT_NEAR(std::abs(eval(e, y) - eval(p, {y[2], y[0]})), 0.0, 1e-12);
}

TEST(Poly, PermuteSymbolConjugates)
{
    std::mt19937 gen(7);
    Symbol phi({random_poly(gen, 3, 4, 2), random_poly(gen, 3, 4, 2), random_poly(gen, 3, 4, 2)});
    std::vector<int> perm = {2, 0, 1};
    Symbol psi = permute_symbol(phi, perm);
    auto x = random_point(gen, 3);
    std::vector<cplx> px(3);
    for (int k = 0; k < 3; ++k)
        px[perm[k]] = x[k];
    auto a = eval(phi, x), b = eval(psi, px);
    for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(std::abs(b[perm[j]] - a[j]), 0.0, 1e-12);
}

TEST(Poly, TaylorOfTripleProduct)
{
    MultiPoly p = z(3, 0) * z(3, 1) * z(3, 2);
    auto T = torus_taylor(p, {0.0, 0.0, 0.0}, 2);
    auto li = T.linear_im();
    auto lr = T.linear_re();
    auto qr = T.quadratic_re();
    auto qi = T.quadratic_im();
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(li[k], 1.0, 1e-14);
        EXPECT_NEAR(lr[k], 0.0, 1e-14);
        for (int l = 0; l < 3; ++l) {
            EXPECT_NEAR(qr[3 * k + l], -0.5, 1e-14);
            EXPECT_NEAR(qi[3 * k + l], 0.0, 1e-14);
        }
    }
    EXPECT_NEAR(T.re_coef({0, 0, 0}), 1.0, 1e-15);
}

TEST(Poly, TaylorOfAverage)
{
    MultiPoly p = (z(3, 0) + z(3, 1) + z(3, 2)) * cplx(1.0 / 3.0);
    auto T = torus_taylor(p, {0.0, 0.0, 0.0}, 2);
    auto qr = T.quadratic_re();
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(T.linear_im()[k], 1.0 / 3.0, 1e-15);
        for (int l = 0; l < 3; ++l)
            EXPECT_NEAR(qr[3 * k + l], k == l ? -1.0 / 6.0 : 0.0, 1e-15);
    }
}

TEST(Poly, TaylorMatchesTorusEvaluation)
{
    std::mt19937 gen(8);
    MultiPoly p = random_poly(gen, 2, 6, 4);
    std::vector<double> th0 = {0.4, -0.9};
    auto T = torus_taylor(p, th0, 3);
    for (double s : {1e-2, 5e-3}) {
        std::vector<double> t = {0.7 * s, -0.3 * s};
        cplx approx = 0.0;
        for (std::size_t i = 0; i < T.index.size(); ++i) {
            const auto& a = T.index[i];
            approx += cplx(T.re[i], T.im[i]) * std::pow(t[0], a[0]) * std::pow(t[1], a[1]);
        }
        cplx exact = eval(p, {std::polar(1.0, th0[0] + t[0]), std::polar(1.0, th0[1] + t[1])});
        EXPECT_LT(std::abs(approx - exact), 50.0 * std::pow(s, 4) * (1.0 + p.max_coefficient()));
    }
}

TEST(Poly, SelfMapCheck)
{
    Symbol psi({psi_poly()});
    auto r = selfmap_check(psi, 256);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.max_modulus[0], 1.0, 1e-12);
    EXPECT_NEAR(r.argmax[0][0], 0.0, 1e-2);
    MultiPoly t = z(3, 0) * z(3, 1) * z(3, 2);
    EXPECT_TRUE(selfmap_check(Symbol({t, t, MultiPoly(3)})).pass);
    EXPECT_FALSE(selfmap_check(Symbol({z(1, 0) * cplx(1.01)})).pass);
}

TEST(Poly, CompiledMatchesDirect)
{
    std::mt19937 gen(9);
    for (int d : {1, 2, 3, 5}) {
        for (int t = 0; t < 10; ++t) {
            MultiPoly p = random_poly(gen, d, 8, d >= 5 ? 9 : 4);
            CompiledPoly cp(p);
            std::vector<cplx> scratch(cp.scratch_size() + 1);
            auto x = random_point(gen, d);
            EXPECT_NEAR(std::abs(cp.eval(x.data(), scratch.data()) - eval(p, x)), 0.0, 1e-11);
        }
    }
}

TEST(Poly, CompiledGridVisitsEveryPoint)
{
    std::mt19937 gen(10);
    MultiPoly p = random_poly(gen, 2, 5, 3);
    CompiledPoly cp(p);
    const int N = 8;
    int count = 0;
    double err = 0.0;
    cp.grid(N, [&](std::size_t flat, cplx v) {
        ++count;
        int i = static_cast<int>(flat / N), j = static_cast<int>(flat % N);
        cplx e = eval(p, {std::polar(1.0, -pi + 2 * pi * i / N), std::polar(1.0, -pi + 2 * pi * j / N)});
        err = std::max(err, std::abs(v - e));
    });
    EXPECT_EQ(count, N * N);
    EXPECT_LT(err, 1e-12);
}
