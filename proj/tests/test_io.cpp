#include <gtest/gtest.h>

#include "dimer/census.hpp"
#include "dimer/io.hpp"
#include "dimer/output.hpp"
#include "dimer/render.hpp"
#include "support.hpp"

using namespace dimer;
using testing_support::fixture;
using testing_support::fixture_path;
using testing_support::raw_fixture;

TEST(Io, RoundTripIsByteStable) {
    for (const char* name : {"hex1", "sq1", "g1", "g2", "square3x3_seed59"}) {
        auto raw = raw_fixture(name);
        auto text = serialize(raw);
        auto again = parse_raw_graph(text);
        EXPECT_EQ(again, raw);
        EXPECT_EQ(serialize(again), text);
    }
}

TEST(Io, ParseErrors) {
    EXPECT_THROW(parse_raw_graph("{"), ParseError);
    EXPECT_THROW(parse_raw_graph("[]"), ParseError);
    EXPECT_THROW(parse_raw_graph(R"({"nodes": [{"id": "b", "color": "red"}], "edges": [], "rotations": {}})"),
                 ParseError);
    EXPECT_THROW(parse_raw_graph(R"({"nodes": [{"id": "b", "color": "black"}, {"id": "b", "color": "white"}],
                                     "edges": [], "rotations": {}})"),
                 ParseError);
    EXPECT_THROW(parse_raw_graph(R"({"nodes": [], "edges": [{"id": "e", "black": "x", "white": "y",
                                     "offset": [0, 0]}], "rotations": {}})"),
                 ParseError);
    EXPECT_THROW(parse_raw_graph(R"({"nodes": [{"id": "b", "color": "black"}, {"id": "w", "color": "white"}],
                                     "edges": [{"id": "e", "black": "b", "white": "w", "offset": [0.5, 0]}],
                                     "rotations": {}})"),
                 ParseError);
    EXPECT_THROW(load_raw_graph("/nonexistent/model.json"), ParseError);
}

TEST(Io, GeneratorIsSeeded) {
    auto a = random_model(Family::square, 3, 3, 0.2, 42);
    auto b = random_model(Family::square, 3, 3, 0.2, 42);
    EXPECT_EQ(serialize(a.graph), serialize(b.graph));
    EXPECT_TRUE(validate(a.graph).graph.has_value());
    EXPECT_THROW(random_model(Family::hexagonal, 3, 3, 1.5, 1), DomainError);
    EXPECT_THROW(lattice_model(Family::hexagonal, 0, 3), DomainError);
}

TEST(Io, LatticeModelsAreConsistent) {
    for (auto fam : {Family::hexagonal, Family::square}) {
        for (int n : {1, 2, 3}) {
            auto g = validated(lattice_model(fam, n, n));
            EXPECT_TRUE(is_consistent(g).consistent);
            EXPECT_EQ(characteristic_polygon(g), zigzag_polygon(g));
        }
    }
}

TEST(Io, CensusIsOrderedAndReproducible) {
    std::vector<ModelParams> params;
    for (std::uint64_t s = 0; s < 12; ++s) params.push_back(standard_params(s));
    auto one = census_csv(run_census(params, 1));
    auto many = census_csv(run_census(params, 4));
    EXPECT_EQ(one, many);
    EXPECT_EQ(one.substr(0, one.find('\n')),
              "seed,family,rows,cols,p,nodes,edges,consistent,polygons_equal,char_area2,zigzag_area2");
    EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 13);
}

TEST(Io, JsonViews) {
    auto g = fixture("g1");
    auto c = MatchingCensus::of(g);
    auto j = to_json(g, c);
    EXPECT_EQ(j["count"], 6);
    EXPECT_EQ(j["polynomial"].size(), 4u);
    auto rep = to_json(g, is_consistent(g));
    EXPECT_EQ(rep["consistent"], false);
    EXPECT_EQ(rep["reports"][0]["kind"], "double_intersection");
    EXPECT_EQ(to_json(characteristic_polynomial(fixture("hex1"))).size(), 3u);
    EXPECT_EQ(to_json(g, zigzag_paths(g)).size(), 3u);
}

TEST(Io, RenderSvg) {
    auto svg = render_svg(raw_fixture("g1"), RenderOptions{.highlight = {"e_x"}});
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("#d62728"), std::string::npos);
    EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 10, true);
    // Positions are optional.
    auto raw = raw_fixture("hex1");
    for (auto& n : raw.nodes) n.pos.reset();
    EXPECT_NE(render_svg(raw).find("<circle"), std::string::npos);
}
