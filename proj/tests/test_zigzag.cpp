#include <gtest/gtest.h>

#include "dimer/matchings.hpp"
#include "dimer/zigzag.hpp"
#include "support.hpp"

using namespace dimer;
using testing_support::fixture;
using testing_support::random_graph;

namespace {

void expect_double_cover(const TorusGraph& g) {
    auto sys = zigzag_paths(g);
    std::vector<int> seen(g.dart_count(), 0);
    Vec2 total;
    for (const auto& z : sys.paths) {
        total += z.slope;
        EXPECT_EQ(cycle_homology(g, z.darts), z.slope);
        for (std::size_t i = 0; i < z.darts.size(); ++i) {
            ++seen[z.darts[i].index()];
            EXPECT_EQ(zigzag_next(g, z.darts[i]), z.darts[(i + 1) % z.darts.size()]);
        }
    }
    // Each edge is traversed once black -> white and once white -> black.
    for (auto c : seen) EXPECT_EQ(c, 1);
    EXPECT_EQ(total, (Vec2{0, 0}));
}

std::multiset<Vec2> slopes(const TorusGraph& g) {
    auto s = zigzag_paths(g).slopes();
    return {s.begin(), s.end()};
}

}  // namespace

TEST(Zigzag, DoubleCoverAndSlopeSum) {
    for (const char* name : {"hex1", "sq1", "g1", "g2", "square3x3_seed59"}) {
        SCOPED_TRACE(name);
        expect_double_cover(fixture(name));
    }
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SCOPED_TRACE(seed);
        expect_double_cover(random_graph(seed));
    }
}

TEST(Zigzag, HexagonalFixture) {
    auto g = fixture("hex1");
    EXPECT_EQ(slopes(g).size(), 3u);
    EXPECT_EQ(zigzag_polygon(g), characteristic_polygon(g));
    EXPECT_TRUE(is_consistent(g).consistent);
}

TEST(Zigzag, SquareFixture) {
    auto g = fixture("sq1");
    EXPECT_EQ(slopes(g).size(), 4u);
    EXPECT_EQ(zigzag_polygon(g), characteristic_polygon(g));
    EXPECT_TRUE(is_consistent(g).consistent);
}

TEST(Zigzag, ReconstructedModel) {
    auto g = fixture("g1");
    EXPECT_EQ(slopes(g), (std::multiset<Vec2>{{1, -1}, {0, 1}, {-1, 0}}));
    auto rep = is_consistent(g);
    EXPECT_FALSE(rep.consistent);
    auto d = find_double_intersection(g);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->kind, IntersectionKind::double_intersection);
    std::set<std::string> ids;
    for (auto e : d->edges) ids.insert(g.edge(e).id);
    EXPECT_EQ(ids, (std::set<std::string>{"e_x", "e_y"}));
    EXPECT_TRUE(verify_report(g, zigzag_paths(g), *d));
    EXPECT_FALSE(find_trivial_zigzag(g));
    EXPECT_FALSE(find_self_intersection(g));
}

TEST(Zigzag, UnionOfSimpleMatchingsIsConsistent) {
    auto g = fixture("g2");
    EXPECT_TRUE(is_consistent(g).consistent);
    EXPECT_EQ(zigzag_polygon(g), zigzag_polygon(fixture("g1")));
    EXPECT_EQ(characteristic_polygon(g), zigzag_polygon(g));
}

TEST(Zigzag, PolygonFromSlopes) {
    // Rotated slopes of the hexagonal fixture close up into a unit triangle.
    auto p = zigzag_polygon_from_slopes({{1, 0}, {0, 1}, {-1, -1}});
    EXPECT_EQ(p.area2(), 1);
    auto q = zigzag_polygon_from_slopes({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    EXPECT_EQ(q, convex_hull(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
}

TEST(Zigzag, ReportsVerify) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        SCOPED_TRACE(seed);
        auto g = random_graph(seed);
        auto sys = zigzag_paths(g);
        for (const auto& r : is_consistent(g).reports) EXPECT_TRUE(verify_report(g, sys, r));
    }
}

TEST(Zigzag, ConsistentModelsHaveEqualPolygons) {
    int consistent = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto g = random_graph(seed);
        if (!is_consistent(g).consistent) continue;
        ++consistent;
        EXPECT_EQ(characteristic_polygon(g), zigzag_polygon(g)) << "seed " << seed;
    }
    EXPECT_GT(consistent, 0);
}

TEST(Zigzag, ZigzagAtWhite) {
    auto g = fixture("hex1");
    for (const auto& z : zigzag_paths(g).paths) EXPECT_FALSE(is_zigzag_at_white(g, z.darts));
}
