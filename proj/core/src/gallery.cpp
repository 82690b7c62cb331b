#include "polycomp/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polycomp {

namespace {

const cplx I_unit(0.0, 1.0);

MultiPoly uz() { return MultiPoly::variable(1, 0); }
MultiPoly uc(cplx c) { return MultiPoly::constant(1, c); }

int iparam(const Params& p, const std::string& k) { return static_cast<int>(std::lround(p.at(k))); }

// prod_{i<k} f(z_i) * prod_{i>=k} z_i in d variables
MultiPoly product_monomial(const MultiPoly& f, int d, int k)
{
    MultiPoly out = MultiPoly::constant(d, 1.0);
    for (int i = 0; i < k; ++i)
        out = out * embed(f, d, i);
    for (int i = k; i < d; ++i)
        out = out * MultiPoly::variable(d, i);
    return out;
}

Symbol replicated(const MultiPoly& p, int d, int q, const std::string& name)
{
    std::vector<MultiPoly> comps;
    for (int j = 0; j < d; ++j)
        comps.push_back(j < q ? p : MultiPoly(d));
    return Symbol(comps, name);
}

MultiPoly factor_poly(int factor, int n, int p)
{
    switch (factor) {
    case 0:
        return h_poly(n);
    case 1:
        return g_poly(n);
    case 2:
        return H_poly(n, p);
    case 3:
        return psi_poly();
    case 4:
        return F_poly(0.0);
    default:
        throw std::invalid_argument("factor must be 0 (h_n), 1 (g_n), 2 (H_n), 3 (psi) or 4 (F_0)");
    }
}

Rational kappa_of(const MultiPoly& f) { return Rational(contact_order(f).kappa); }

BetaSet tag_jc(const std::string& tag)
{
    if (tag == "alpha")
        return BetaSet::ray_closed(0.0);
    if (tag == "beta" || tag == "delta")
        return BetaSet::ray_closed(-0.5);
    if (tag == "gamma")
        return BetaSet::ray_open(-1.0);
    return BetaSet::all();
}

BetaSet tag_jd(const std::string& tag)
{
    if (tag == "alpha")
        return BetaSet::closed_open(-1.0, -2.0 / 3.0);
    if (tag == "beta")
        return BetaSet::closed_open(-1.0, -5.0 / 6.0);
    if (tag == "gamma" || tag == "delta")
        return BetaSet::point(-1.0);
    return BetaSet::empty();
}

Expected tridisc_expect(const std::string& tag, int s, std::pair<int, int> r)
{
    Expected e;
    e.case_tag = tag;
    e.s = s;
    e.r = r;
    e.J_cont = tag_jc(tag);
    e.J_discont = tag_jd(tag);
    return e;
}

void set_threshold(Expected& e, Rational bmin)
{
    e.beta_min = bmin;
    e.bounded = BetaSet::ray_closed(bmin.to_double());
}

// torus slope of the two-component window at the threshold: |I|(2+b) - |P_I|(1+b) with |I|=2, |P_I|=3
double slope_at(Rational bmin) { return 1.0 - bmin.to_double(); }

std::vector<GalleryEntry> make_entries()
{
    std::vector<GalleryEntry> v;
    const ParamSpec eps_b{"b", 0.03, 0.0, 0.035, false, "F_b parameter"};
    const ParamSpec eps_c{"c", 0.03, 0.0, 0.035, false, "F_c parameter"};
    const ParamSpec eps_a{"a", 0.03, 0.0, 0.035, false, "F_a parameter"};

    v.push_back({"psi", "one-variable psi(z) = 1 + (z-1)/2 - (z-1)^2/8 + 3(z-1)^3/128", {},
                 [](const Params&) { return Symbol({psi_poly()}, "psi"); },
                 [](const Params&) {
                     Expected e;
                     e.note = "|psi(e^it)|^2 = 1 - (135/16384) t^6 + ...";
                     return e;
                 }});

    v.push_back({"identity", "identity map of the d-disc", {{"d", 3, 1, 8, true, "dimension"}},
                 [](const Params& p) {
                     int d = iparam(p, "d");
                     std::vector<MultiPoly> c;
                     for (int k = 0; k < d; ++k)
                         c.push_back(MultiPoly::variable(d, k));
                     return Symbol(c, "identity");
                 },
                 [](const Params& p) {
                     Expected e;
                     int d = iparam(p, "d");
                     e.d_phi = d;
                     if (d == 3) {
                         e.case_tag = "invertible";
                         e.J_cont = BetaSet::all();
                         e.J_discont = BetaSet::empty();
                     }
                     if (d == 2) {
                         e.halfgain = true;
                         e.quartergain = true;
                     }
                     e.bounded = BetaSet::all();
                     return e;
                 }});

    v.push_back({"triple_product", "(z1 z2 z3, z1 z2 z3, 0)", {},
                 [](const Params&) {
                     MultiPoly m = MultiPoly::monomial({1, 1, 1}, 1.0);
                     return Symbol({m, m, MultiPoly(3)}, "triple_product");
                 },
                 [](const Params&) {
                     Expected e = tridisc_expect("alpha", 1, {0, 0});
                     set_threshold(e, Rational(0));
                     e.slope = 1.0;
                     e.slope_tol = 0.05;
                     e.note = "bounded iff beta >= 0";
                     return e;
                 }});

    v.push_back({"case1_ex2", "(F0(z1)F0(z2)F0(z3), same, 0)", {},
                 [](const Params&) {
                     MultiPoly m = product_monomial(F_poly(0.0), 3, 3);
                     return Symbol({m, m, MultiPoly(3)}, "case1_ex2");
                 },
                 [](const Params&) {
                     Expected e = tridisc_expect("alpha", 1, {0, 0});
                     set_threshold(e, Rational(-1, 2));
                     e.note = "bounded iff beta >= -1/2";
                     return e;
                 }});

    const ParamSpec eps_b2{"b", 0.035, 0.0, 0.035, false, "F_b parameter"};
    const ParamSpec eps_c2{"c", 0.035, 0.0, 0.035, false, "F_c parameter"};
    v.push_back({"case2", "(F0(z1)F_b(z2)F0(z3), F0(z1)F_b(z2)F_c(z3), 0)", {eps_b2, eps_c2},
                 [](const Params& p) {
                     MultiPoly f0 = F_poly(0.0), fb = F_poly(p.at("b")), fc = F_poly(p.at("c"));
                     MultiPoly a = embed(f0, 3, 0) * embed(fb, 3, 1) * embed(f0, 3, 2);
                     MultiPoly b = embed(f0, 3, 0) * embed(fb, 3, 1) * embed(fc, 3, 2);
                     return Symbol({a, b, MultiPoly(3)}, "case2");
                 },
                 [](const Params& p) {
                     if (p.at("c") == 0.0) {
                         Expected e = tridisc_expect("alpha", 1, {0, 0});
                         e.note = "c = 0 makes the two components equal";
                         return e;
                     }
                     Expected e = tridisc_expect("beta", 1, {1, 0});
                     set_threshold(e, Rational(-3, 4));
                     e.slope = 1.75;
                     e.slope_tol = 0.10;
                     e.note = "bounded iff beta >= -3/4";
                     return e;
                 }});

    v.push_back({"case3", "(F0(z1)F_b(z2)F0(z3), F0(z1)F0(z2)F_c(z3), 0)", {eps_b, eps_c},
                 [](const Params& p) {
                     MultiPoly f0 = F_poly(0.0), fb = F_poly(p.at("b")), fc = F_poly(p.at("c"));
                     MultiPoly a = embed(f0, 3, 0) * embed(fb, 3, 1) * embed(f0, 3, 2);
                     MultiPoly b = embed(f0, 3, 0) * embed(f0, 3, 1) * embed(fc, 3, 2);
                     return Symbol({a, b, MultiPoly(3)}, "case3");
                 },
                 [](const Params& p) {
                     if (p.at("b") == 0.0 || p.at("c") == 0.0)
                         throw std::invalid_argument("case3 expectation needs b > 0 and c > 0");
                     Expected e = tridisc_expect("gamma", 1, {1, 1});
                     e.bounded = BetaSet::ray_open(-1.0);
                     e.note = "bounded iff beta > -1";
                     return e;
                 }});

    v.push_back({"case4_ex1", "(1/2(z1 z2 + (1+z3)/2), same, 0)", {},
                 [](const Params&) {
                     MultiPoly m = MultiPoly::monomial({1, 1, 0}, 0.5) + MultiPoly::constant(3, 0.25) +
                                   MultiPoly::variable(3, 2, 0.25);
                     return Symbol({m, m, MultiPoly(3)}, "case4_ex1");
                 },
                 [](const Params&) {
                     Expected e = tridisc_expect("delta", 2, {0, 0});
                     set_threshold(e, Rational(-1, 2));
                     e.slope = 1.5;
                     e.slope_tol = 0.10;
                     e.note = "bounded iff beta >= -1/2";
                     return e;
                 }});

    v.push_back({"case4_ex2", "(z1 z2 psi(z3), same, 0)", {},
                 [](const Params&) {
                     MultiPoly m = MultiPoly::monomial({1, 1, 0}, 1.0) * embed(psi_poly(), 3, 2);
                     return Symbol({m, m, MultiPoly(3)}, "case4_ex2");
                 },
                 [](const Params&) {
                     Expected e = tridisc_expect("alpha", 1, {0, 0});
                     set_threshold(e, Rational(-1, 6));
                     e.family = FamilyData{3, 2, 1, Rational(6)};
                     e.note = "bounded iff beta >= -1/6; the second-order form has rank one";
                     return e;
                 }});

    v.push_back({"case5", "((z1+z2+z3)/3, same, 0)", {},
                 [](const Params&) {
                     MultiPoly m(3);
                     for (int k = 0; k < 3; ++k)
                         m += MultiPoly::variable(3, k, 1.0 / 3.0);
                     return Symbol({m, m, MultiPoly(3)}, "case5");
                 },
                 [](const Params&) {
                     Expected e = tridisc_expect("epsilon", 3, {0, 0});
                     e.bounded = BetaSet::all();
                     e.note = "bounded for every beta >= -1";
                     return e;
                 }});

    v.push_back({"case6", "(1/2(F_a(z1)F_a(z2) + (1+z3)/2), 1/2(F0(z1)F0(z2) + (1+z3)/2), 0)", {eps_a},
                 [](const Params& p) {
                     MultiPoly fa = F_poly(p.at("a")), f0 = F_poly(0.0);
                     MultiPoly tail = MultiPoly::constant(3, 0.25) + MultiPoly::variable(3, 2, 0.25);
                     MultiPoly a = embed(fa, 3, 0) * embed(fa, 3, 1) * 0.5 + tail;
                     MultiPoly b = embed(f0, 3, 0) * embed(f0, 3, 1) * 0.5 + tail;
                     return Symbol({a, b, MultiPoly(3)}, "case6");
                 },
                 [](const Params& p) {
                     if (p.at("a") == 0.0)
                         return tridisc_expect("delta", 2, {0, 0});
                     Expected e = tridisc_expect("epsilon", 2, {0, 1});
                     e.bounded = BetaSet::all();
                     e.note = "s = 2 with a one-dimensional definite residual form";
                     return e;
                 }});

    v.push_back({"case7", "(F0(z1)F_a(z2)F_a(z3), F0(z1)F0(z2)F0(z3), 0)", {eps_a},
                 [](const Params& p) {
                     MultiPoly fa = F_poly(p.at("a")), f0 = F_poly(0.0);
                     MultiPoly a = embed(f0, 3, 0) * embed(fa, 3, 1) * embed(fa, 3, 2);
                     MultiPoly b = product_monomial(f0, 3, 3);
                     return Symbol({a, b, MultiPoly(3)}, "case7");
                 },
                 [](const Params& p) {
                     if (p.at("a") == 0.0)
                         return tridisc_expect("alpha", 1, {0, 0});
                     Expected e = tridisc_expect("epsilon", 1, {2, 0});
                     e.bounded = BetaSet::all();
                     e.note = "s = 1 with a definite residual form of rank two";
                     return e;
                 }});

    v.push_back({"avg2", "((z1+z2)/2, (z1+z2)/2)", {},
                 [](const Params&) {
                     MultiPoly m = MultiPoly::variable(2, 0, 0.5) + MultiPoly::variable(2, 1, 0.5);
                     return Symbol({m, m}, "avg2");
                 },
                 [](const Params&) {
                     Expected e;
                     e.s = 2;
                     e.r = std::make_pair(0, 0);
                     e.halfgain = true;
                     e.quartergain = true;
                     e.note = "maps A^2_b1 to A^2_b2 for b2 >= b1 + 1/4";
                     return e;
                 }});

    v.push_back({"bidisc_aa", "(F_a(z1)F_a(z2), F_a(z1)F_a(z2))", {eps_a},
                 [](const Params& p) {
                     MultiPoly fa = F_poly(p.at("a"));
                     MultiPoly m = embed(fa, 2, 0) * embed(fa, 2, 1);
                     return Symbol({m, m}, "bidisc_aa");
                 },
                 [](const Params&) {
                     Expected e;
                     e.s = 1;
                     e.r = std::make_pair(0, 0);
                     e.halfgain = true;
                     e.quartergain = false;
                     e.note = "equal components: no quarter gain beyond what J, s, r give";
                     return e;
                 }});

    v.push_back({"bidisc_a1a2", "(F_a1(z1)F_a1(z2), F_a2(z1)F_a2(z2))",
                 {{"a1", 0.01, 0.0, 0.035, false, "first F parameter"},
                  {"a2", 0.03, 0.0, 0.035, false, "second F parameter"}},
                 [](const Params& p) {
                     MultiPoly f1 = F_poly(p.at("a1")), f2 = F_poly(p.at("a2"));
                     return Symbol({embed(f1, 2, 0) * embed(f1, 2, 1), embed(f2, 2, 0) * embed(f2, 2, 1)},
                                   "bidisc_a1a2");
                 },
                 [](const Params& p) {
                     Expected e;
                     e.s = 1;
                     e.halfgain = true;
                     if (p.at("a1") == p.at("a2")) {
                         e.r = std::make_pair(0, 0);
                         e.quartergain = false;
                     } else {
                         e.r = std::make_pair(1, 0);
                         e.quartergain = true;
                     }
                     return e;
                 }});

    v.push_back({"bidisc_z1z1", "(z1, z1)", {},
                 [](const Params&) {
                     MultiPoly m = MultiPoly::variable(2, 0);
                     return Symbol({m, m}, "bidisc_z1z1");
                 },
                 [](const Params&) {
                     Expected e;
                     e.halfgain = false;
                     e.quartergain = false;
                     e.note = "minimal target index 2 b1 + 2";
                     return e;
                 }});

    v.push_back({"bidisc_z1z2", "(z1 z2, z1 z2)", {},
                 [](const Params&) {
                     MultiPoly m = MultiPoly::monomial({1, 1}, 1.0);
                     return Symbol({m, m}, "bidisc_z1z2");
                 },
                 [](const Params&) {
                     Expected e;
                     e.s = 1;
                     e.r = std::make_pair(0, 0);
                     e.halfgain = true;
                     e.quartergain = false;
                     e.note = "minimal target index b1 + 1/2";
                     return e;
                 }});

    v.push_back({"bidisc_invertible", "((z1+z2)/2, (z1+2 z2)/3)", {},
                 [](const Params&) {
                     MultiPoly a = MultiPoly::variable(2, 0, 0.5) + MultiPoly::variable(2, 1, 0.5);
                     MultiPoly b = MultiPoly::variable(2, 0, 1.0 / 3.0) + MultiPoly::variable(2, 1, 2.0 / 3.0);
                     return Symbol({a, b}, "bidisc_invertible");
                 },
                 [](const Params&) {
                     Expected e;
                     e.halfgain = true;
                     e.quartergain = true;
                     e.note = "J != 0 at the contact; minimal target index b1";
                     return e;
                 }});

    v.push_back({"bidisc_hn", "(z1 h_n(z2), z1 h_n(z2))", {{"n", 1, 1, 6, true, "order"}},
                 [](const Params& p) {
                     MultiPoly m = MultiPoly::variable(2, 0) * embed(h_poly(iparam(p, "n")), 2, 1);
                     return Symbol({m, m}, "bidisc_hn");
                 },
                 [](const Params& p) {
                     int n = iparam(p, "n");
                     Expected e;
                     e.family = FamilyData{2, 2, 1, kappa_of(h_poly(n))};
                     e.halfgain = true;
                     e.quartergain = n == 1;
                     e.s = n == 1 ? 2 : 1;
                     e.r = std::make_pair(0, 0);
                     e.note = "minimal target index b1 + 1/2 - 1/(4n)";
                     return e;
                 }});

    auto nth = [](int n, int side) {
        MultiPoly f = side == 0 ? h_poly(n) : g_poly(2 * n);
        MultiPoly m = embed(f, 3, 0) * MultiPoly::monomial({0, 1, 1}, 1.0);
        return Symbol({m, m, MultiPoly(3)}, side == 0 ? "h_family" : "g_family");
    };
    auto nth_expect = [](int n, int side) {
        Rational kappa = kappa_of(side == 0 ? h_poly(n) : g_poly(2 * n));
        Expected e;
        if (side == 0 && n == 1)
            e = tridisc_expect("delta", 2, {0, 0});
        else
            e = tridisc_expect("alpha", 1, {0, 0});
        e.family = FamilyData{3, 2, 1, kappa};
        Rational bmin = product_family_fixed_point(3, 2, 1, kappa);
        set_threshold(e, bmin);
        e.slope = slope_at(bmin);
        e.slope_tol = 0.10;
        e.note = "bounded iff beta >= -1/kappa";
        return e;
    };

    v.push_back({"h_family", "(h_n(z1) z2 z3, same, 0)", {{"n", 1, 1, 6, true, "order"}},
                 [nth](const Params& p) { return nth(iparam(p, "n"), 0); },
                 [nth_expect](const Params& p) { return nth_expect(iparam(p, "n"), 0); }});
    v.push_back({"g_family", "(g_2n(z1) z2 z3, same, 0)", {{"n", 1, 1, 6, true, "order"}},
                 [nth](const Params& p) { return nth(iparam(p, "n"), 1); },
                 [nth_expect](const Params& p) { return nth_expect(iparam(p, "n"), 1); }});
    v.push_back({"nth_pair", "side 0: (h_n(z1) z2 z3, same, 0); side 1: (g_2n(z1) z2 z3, same, 0)",
                 {{"n", 1, 1, 6, true, "order"}, {"side", 0, 0, 1, true, "0 = h_n, 1 = g_2n"}},
                 [nth](const Params& p) { return nth(iparam(p, "n"), iparam(p, "side")); },
                 [nth_expect](const Params& p) { return nth_expect(iparam(p, "n"), iparam(p, "side")); }});

    v.push_back({"product_family", "(f(z1)...f(zk) z_{k+1}...z_d, ... q copies ..., 0, ..., 0)",
                 {{"d", 3, 1, 16, true, "dimension"},
                  {"q", 2, 1, 16, true, "number of identical components"},
                  {"k", 1, 1, 16, true, "number of factor variables"},
                  {"factor", 0, 0, 4, true, "0 = h_n, 1 = g_n, 2 = H_n, 3 = psi, 4 = F_0"},
                  {"n", 1, 1, 6, true, "order"},
                  {"p", 1, 1, 6, true, "H_n shift"}},
                 [](const Params& p) {
                     int d = iparam(p, "d"), q = iparam(p, "q"), k = iparam(p, "k");
                     if (q > d || k > d)
                         throw std::invalid_argument("product_family: need q <= d and k <= d");
                     MultiPoly f = factor_poly(iparam(p, "factor"), iparam(p, "n"), iparam(p, "p"));
                     return replicated(product_monomial(f, d, k), d, q, "product_family");
                 },
                 [](const Params& p) {
                     int d = iparam(p, "d"), q = iparam(p, "q"), k = iparam(p, "k");
                     if (q > d || k > d)
                         throw std::invalid_argument("product_family: need q <= d and k <= d");
                     Rational kappa = kappa_of(factor_poly(iparam(p, "factor"), iparam(p, "n"), iparam(p, "p")));
                     Expected e;
                     e.family = FamilyData{d, q, k, kappa};
                     if (d > q)
                         set_threshold(e, product_family_fixed_point(d, q, k, kappa));
                     return e;
                 }});

    v.push_back({"H_family", "(F(z1)...F(z_{d-1}) z_d, ... q copies ..., 0, ...), F = H_n or g_{(p+1)n}",
                 {{"d", 3, 2, 8, true, "dimension"},
                  {"q", 2, 1, 7, true, "number of identical components"},
                  {"n", 1, 1, 4, true, "order"},
                  {"p", 1, 1, 4, true, "shift"},
                  {"side", 0, 0, 1, true, "0 = H_n, 1 = g_{(p+1)n}"}},
                 [](const Params& p) {
                     int d = iparam(p, "d"), q = iparam(p, "q"), n = iparam(p, "n"), pp = iparam(p, "p");
                     if (q >= d)
                         throw std::invalid_argument("H_family: need q < d");
                     MultiPoly f = iparam(p, "side") == 0 ? H_poly(n, pp) : g_poly((pp + 1) * n);
                     return replicated(product_monomial(f, d, d - 1), d, q, "H_family");
                 },
                 [](const Params& p) {
                     int d = iparam(p, "d"), q = iparam(p, "q"), n = iparam(p, "n"), pp = iparam(p, "p");
                     if (q >= d)
                         throw std::invalid_argument("H_family: need q < d");
                     MultiPoly f = iparam(p, "side") == 0 ? H_poly(n, pp) : g_poly((pp + 1) * n);
                     Rational kappa = kappa_of(f);
                     Expected e;
                     e.family = FamilyData{d, q, d - 1, kappa};
                     set_threshold(e, product_family_fixed_point(d, q, d - 1, kappa));
                     return e;
                 }});

    v.push_back({"nth_general", "d = 2a+b+3, q = a+b+3, k = 4n; factor h_n (side 0) or g_2n (side 1)",
                 {{"a", 5, 1, 8, true, "a > 4n"},
                  {"b", 0, -8, 8, true, "b >= -a"},
                  {"n", 1, 1, 2, true, "order"},
                  {"side", 0, 0, 1, true, "0 = h_n, 1 = g_2n"}},
                 [](const Params& p) {
                     int a = iparam(p, "a"), b = iparam(p, "b"), n = iparam(p, "n");
                     if (a <= 4 * n || b < -a)
                         throw std::invalid_argument("nth_general: need a > 4n and b >= -a");
                     int d = 2 * a + b + 3, q = a + b + 3, k = 4 * n;
                     MultiPoly f = iparam(p, "side") == 0 ? h_poly(n) : g_poly(2 * n);
                     return replicated(product_monomial(f, d, k), d, q, "nth_general");
                 },
                 [](const Params& p) {
                     int a = iparam(p, "a"), b = iparam(p, "b"), n = iparam(p, "n");
                     if (a <= 4 * n || b < -a)
                         throw std::invalid_argument("nth_general: need a > 4n and b >= -a");
                     int d = 2 * a + b + 3, q = a + b + 3, k = 4 * n;
                     Rational kappa = kappa_of(iparam(p, "side") == 0 ? h_poly(n) : g_poly(2 * n));
                     Expected e;
                     e.family = FamilyData{d, q, k, kappa};
                     set_threshold(e, product_family_fixed_point(d, q, k, kappa));
                     return e;
                 }});

    v.push_back({"auto_witness", "(z1, ..., z1 (m copies), 0, ..., 0)",
                 {{"d", 3, 1, 8, true, "dimension"}, {"m", 2, 1, 8, true, "copies of z1"}},
                 [](const Params& p) {
                     int d = iparam(p, "d"), m = iparam(p, "m");
                     if (m > d)
                         throw std::invalid_argument("auto_witness: need m <= d");
                     return replicated(MultiPoly::variable(d, 0), d, m, "auto_witness");
                 },
                 [](const Params& p) {
                     Expected e;
                     e.d_phi = iparam(p, "m");
                     e.slope = 1.0;
                     e.slope_tol = 0.05;
                     e.note = "the torus window measure scales like delta";
                     return e;
                 }});
    return v;
}

} // namespace

MultiPoly g_poly(int n)
{
    if (n < 1)
        throw std::invalid_argument("g_poly: n must be >= 1");
    MultiPoly z = uz();
    MultiPoly u = z - (uc(1.0) + z * z) * 0.5;
    return z.pow(n) - u.pow(n) * std::ldexp(1.0, -n);
}

MultiPoly h_poly(int n)
{
    if (n < 1)
        throw std::invalid_argument("h_poly: n must be >= 1");
    return uz().pow(n) * g_poly(n);
}

MultiPoly psi_poly()
{
    MultiPoly w = uz() - uc(1.0);
    return uc(1.0) + w * 0.5 - w.pow(2) * 0.125 + w.pow(3) * (3.0 / 128.0);
}

MultiPoly F_poly(double eps)
{
    if (!(eps >= 0.0 && eps <= 0.035))
        throw std::invalid_argument("F_poly: eps must lie in [0, 0.035] for F_eps to be a self-map");
    MultiPoly z = uz();
    MultiPoly w = z - uc(1.0);
    MultiPoly base = (uc(3.0) + z * 6.0 - z * z) * 0.125;
    return base + w.pow(2) * (2.0 * eps * I_unit) - w.pow(3) * (eps * I_unit);
}

MultiPoly H_poly(int n, int p)
{
    if (n < 1 || p < 1)
        throw std::invalid_argument("H_poly: need n >= 1 and p >= 1");
    return uz().pow(p * n) * g_poly(n);
}

MultiPoly embed(const MultiPoly& univariate, int d, int k)
{
    if (univariate.dimension() != 1)
        throw std::invalid_argument("embed: polynomial must be univariate");
    if (k < 0 || k >= d)
        throw std::invalid_argument("embed: axis out of range");
    return univariate.embedded(d, {k});
}

ContactOrder contact_order(const MultiPoly& p, int max_order)
{
    if (p.dimension() != 1)
        throw std::invalid_argument("contact_order: polynomial must be univariate");
    cplx at1 = p({cplx(1.0, 0.0)});
    if (std::abs(std::abs(at1) - 1.0) > 1e-12)
        throw std::domain_error("contact_order: |p(1)| != 1");
    // |p(e^{it})|^2 = sum_m w_m e^{imt}, w_m = sum_{k-l=m} a_k conj(a_l)
    std::map<int, cplx> w;
    double scale = 0.0;
    for (const auto& [ek, ak] : p.terms())
        for (const auto& [el, al] : p.terms()) {
            w[ek[0] - el[0]] += ak * std::conj(al);
            scale += std::abs(ak) * std::abs(al);
        }
    double fact = 1.0;
    for (int j = 1; j <= max_order; ++j) {
        fact *= j;
        cplx s = 0.0;
        for (const auto& [m, wm] : w)
            s += wm * std::pow(cplx(0.0, static_cast<double>(m)), j);
        double coef = s.real() / fact;
        double bound = scale * std::pow(static_cast<double>(std::max<int>(1, p.degree_in(0))), j) / fact;
        if (std::abs(coef) > 1e-10 * std::max(bound, 1e-300))
            return {j, -coef / 2.0};
    }
    throw std::domain_error("contact_order: no finite contact order found");
}

const std::vector<GalleryEntry>& gallery_entries()
{
    static const std::vector<GalleryEntry> entries = make_entries();
    return entries;
}

const GalleryEntry& gallery_entry(const std::string& name)
{
    for (const auto& e : gallery_entries())
        if (e.name == name)
            return e;
    throw std::invalid_argument("unknown gallery entry: " + name);
}

std::vector<std::string> gallery_names()
{
    std::vector<std::string> out;
    for (const auto& e : gallery_entries())
        out.push_back(e.name);
    return out;
}

Params resolve_params(const GalleryEntry& e, const Params& given)
{
    Params out;
    for (const auto& [k, val] : given) {
        bool known = std::any_of(e.params.begin(), e.params.end(), [&](const ParamSpec& s) { return s.name == k; });
        if (!known)
            throw std::invalid_argument("gallery entry " + e.name + " has no parameter '" + k + "'");
    }
    for (const auto& s : e.params) {
        auto it = given.find(s.name);
        double val = it == given.end() ? s.def : it->second;
        if (!(val >= s.lo && val <= s.hi)) {
            std::ostringstream os;
            os << "parameter " << s.name << " of " << e.name << " must lie in [" << s.lo << ", " << s.hi << "]";
            if (!s.note.empty())
                os << " (" << s.note << ")";
            throw std::invalid_argument(os.str());
        }
        if (s.integer && val != std::round(val))
            throw std::invalid_argument("parameter " + s.name + " of " + e.name + " must be an integer");
        out[s.name] = val;
    }
    return out;
}

Symbol gallery_build(const std::string& name, const Params& params, bool check_selfmap)
{
    const auto& e = gallery_entry(name);
    Symbol s = e.builder(resolve_params(e, params));
    s.name = name;
    if (check_selfmap) {
        auto rep = selfmap_check(s);
        if (!rep.pass) {
            std::ostringstream os;
            os << "gallery entry " << name << " failed the self-map check (max modulus";
            for (double m : rep.max_modulus)
                os << " " << m;
            os << ")";
            throw std::runtime_error(os.str());
        }
    }
    return s;
}

Expected gallery_expected(const std::string& name, const Params& params)
{
    const auto& e = gallery_entry(name);
    return e.expected(resolve_params(e, params));
}

Rational product_family_fixed_point(int d, int q, int k, Rational kappa)
{
    if (d <= q)
        throw std::invalid_argument("product_family_fixed_point: need d > q");
    return (Rational(2 * q - d - 1) - Rational(k) / kappa) / Rational(d - q);
}

} // namespace polycomp
