#include "polycomp/gallery.hpp"
#include "polycomp/io.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <random>

using namespace polycomp;
using nlohmann::json;

TEST(Io, SymbolRoundTripIsByteStable)
{
    for (const auto& name : gallery_names()) {
        Symbol phi = gallery_build(name, {}, false);
        std::string a = symbol_to_json(phi);
        Symbol back = symbol_from_json(a);
        EXPECT_EQ(symbol_to_json(back), a) << name;
        EXPECT_EQ(back.dimension, phi.dimension);
        for (int j = 0; j < phi.dimension; ++j)
            EXPECT_EQ(back.components[j], phi.components[j]) << name;
        EXPECT_EQ(symbol_digest(back), symbol_digest(phi));
    }
    EXPECT_NE(symbol_digest(gallery_build("case2")), symbol_digest(gallery_build("case3")));
}

TEST(Io, MalformedSymbols)
{
    EXPECT_THROW(symbol_from_json("{"), std::invalid_argument);
    EXPECT_THROW(symbol_from_json(R"({"dimension": 2, "components": []})"), std::invalid_argument);
    EXPECT_THROW(symbol_from_json(R"({"dimension": 1, "components": [{"terms": [{"exp": [-1], "re": 1}]}]})"),
                 std::invalid_argument);
    EXPECT_THROW(symbol_from_json(R"({"dimension": 1, "components": [{"terms": [{"exp": [1, 0], "re": 1}]}]})"),
                 std::invalid_argument);
    EXPECT_THROW(symbol_from_json(R"({"components": []})"), std::invalid_argument);
    EXPECT_THROW(load_symbol("/nonexistent/file.json"), std::runtime_error);
}

TEST(Io, ParsesHandWrittenSymbol)
{
    Symbol s = symbol_from_json(
        R"({"dimension": 2, "components": [{"terms": [{"exp": [1, 1], "re": 1}]}, {"terms": [{"exp": [1, 1], "re": 1}, {"exp": [0, 0], "im": 0}]}]})");
    EXPECT_EQ(s.components[0], MultiPoly::variable(2, 0) * MultiPoly::variable(2, 1));
    EXPECT_EQ(s.components[1], s.components[0]);
}

TEST(Io, BetaSetRoundTrip)
{
    std::vector<BetaSet> sets = {BetaSet::all(), BetaSet::empty(), BetaSet::point(-1.0),
                                 BetaSet::closed_open(-1.0, -2.0 / 3.0).unite(BetaSet::ray_open(0.5))};
    for (const auto& s : sets)
        EXPECT_EQ(betaset_from_json(betaset_to_json(s)), s);
    auto j = json::parse(betaset_to_json(BetaSet::ray_closed(0.0)));
    EXPECT_TRUE(j[0]["hi"].is_null());
}

TEST(Io, VerdictIsOneBased)
{
    Verdict v = classify(gallery_build("triple_product"));
    auto j = json::parse(verdict_to_json(v));
    EXPECT_EQ(j["contacts"][0]["I"], json({1, 2}));
    EXPECT_EQ(j["contacts"][0]["P_I"], json({1, 2, 3}));
    EXPECT_EQ(j["contacts"][0]["case_tag"], "alpha");
    EXPECT_EQ(betaset_from_json(j["gap"].dump()), BetaSet::closed_open(-2.0 / 3.0, 0.0));
}

TEST(Io, SeriesCsvColumns)
{
    MeasureSeries s;
    s.kind = "torus";
    s.seed = 17;
    SeriesPoint p;
    p.delta = 0.125;
    p.est = {0.5, 0.01, 10, 100};
    s.points.push_back(p);
    std::string csv = series_to_csv(s);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "delta,estimate,stderr,n,seed");
    EXPECT_NE(csv.find("0.125,0.5,0.01,100,17"), std::string::npos);
    auto j = json::parse(series_to_json(s));
    EXPECT_EQ(j["seed"], 17);
    EXPECT_TRUE(j["fit"].is_null());
}
