#include <gtest/gtest.h>

#include "dimer/matchings.hpp"
#include "dimer/quiver.hpp"
#include "support.hpp"

using namespace dimer;
using testing_support::fixture;
using testing_support::random_graph;

namespace {

PerfectMatching by_ids(const TorusGraph& g, std::initializer_list<const char*> ids) {
    PerfectMatching m;
    for (auto id : ids) m.edges.push_back(g.edge_index(id));
    std::sort(m.edges.begin(), m.edges.end());
    return m;
}

void expect_relations_well_formed(const Quiver& q) {
    for (const auto& r : q.relations) {
        const auto& a = q.arrows[r.arrow];
        auto plus = path_ends(q, r.plus);
        auto minus = path_ends(q, r.minus);
        EXPECT_EQ(plus, std::make_pair(a.tgt, a.src));
        EXPECT_EQ(minus, std::make_pair(a.tgt, a.src));
    }
}

}  // namespace

TEST(Quiver, HexagonalFixture) {
    auto q = derive_quiver(fixture("hex1"));
    EXPECT_EQ(q.vertex_count(), 1u);
    ASSERT_EQ(q.arrow_count(), 3u);
    for (const auto& a : q.arrows) EXPECT_EQ(a.src, a.tgt);
    for (const auto& r : q.relations) {
        EXPECT_EQ(r.plus.size(), 2u);
        EXPECT_EQ(r.minus.size(), 2u);
        // The two length-2 return paths use the other two loops in opposite orders.
        EXPECT_EQ(r.plus[0], r.minus[1]);
        EXPECT_EQ(r.plus[1], r.minus[0]);
    }
    expect_relations_well_formed(q);
}

TEST(Quiver, SquareFixture) {
    auto q = derive_quiver(fixture("sq1"));
    EXPECT_EQ(q.vertex_count(), 2u);
    ASSERT_EQ(q.arrow_count(), 4u);
    for (std::size_t a = 0; a < 4; ++a) {
        EXPECT_NE(q.arrows[a].src, q.arrows[a].tgt);
        // Consecutive arrows around a node alternate direction.
        EXPECT_EQ(q.arrows[a].src, q.arrows[(a + 1) % 4].tgt);
    }
    expect_relations_well_formed(q);
}

TEST(Quiver, ArrowOrientationPutsWhiteOnTheRight) {
    // The target is the face left of the black -> white traversal.
    auto g = fixture("g1");
    auto q = derive_quiver(g);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        EXPECT_EQ(q.arrows[e].tgt, g.face_of(Dart{e, true}));
        EXPECT_EQ(q.arrows[e].src, g.face_of(Dart{e, false}));
    }
}

TEST(Quiver, ReconstructedModel) {
    auto g = fixture("g1");
    auto q = derive_quiver(g);
    EXPECT_EQ(q.vertex_count(), 3u);
    EXPECT_EQ(q.arrow_count(), 11u);
    expect_relations_well_formed(q);
    auto c = MatchingCensus::of(g);
    std::size_t simple = 0;
    for (std::size_t i = 0; i < c.matchings.size(); ++i) {
        bool s = is_simple_matching(q, c.matchings[i]);
        simple += s ? 1 : 0;
        EXPECT_EQ(s, c.multiplicity_of(i) == 1);
    }
    EXPECT_EQ(simple, 3u);
}

TEST(Quiver, AllowedPaths) {
    auto g = fixture("hex1");
    auto q = derive_quiver(g);
    auto d = by_ids(g, {"e_a"});
    EXPECT_TRUE(is_allowed(q, d, {}));
    EXPECT_TRUE(is_allowed(q, d, {g.edge_index("e_b")}));
    EXPECT_FALSE(is_allowed(q, d, {g.edge_index("e_b"), g.edge_index("e_a")}));
    auto sq = fixture("sq1");
    auto qs = derive_quiver(sq);
    // e1 and e3 both run from the same face to the other; they do not compose.
    EXPECT_THROW(is_allowed(qs, by_ids(sq, {"e2"}), {sq.edge_index("e1"), sq.edge_index("e3")}), DomainError);
    EXPECT_THROW(path_ends(qs, {99}), DomainError);
}

TEST(Quiver, RepresentationsSatisfyRelations) {
    std::vector<TorusGraph> graphs{fixture("hex1"), fixture("sq1"), fixture("g1"), fixture("g2")};
    for (std::uint64_t seed = 0; seed < 30; ++seed) graphs.push_back(random_graph(seed));
    for (const auto& g : graphs) {
        auto q = derive_quiver(g);
        expect_relations_well_formed(q);
        for (const auto& m : enumerate_matchings(g)) EXPECT_TRUE(matching_representation(q, m).satisfies(q));
    }
}

TEST(Quiver, SimpleIffMultiplicityFreeOnRandomModels) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto g = random_graph(seed);
        if (!is_nondegenerate_model(g)) continue;
        ++checked;
        auto q = derive_quiver(g);
        auto c = MatchingCensus::of(g);
        for (std::size_t i = 0; i < c.matchings.size(); ++i) {
            bool free = c.multiplicity_of(i) == 1;
            EXPECT_EQ(is_simple_matching(q, c.matchings[i]), free) << "seed " << seed;
            if (free) EXPECT_TRUE(c.is_corner(i)) << "seed " << seed;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Quiver, JsonAndDot) {
    auto g = fixture("sq1");
    auto q = derive_quiver(g);
    auto j = to_json(q);
    EXPECT_EQ(j["vertices"].size(), 2u);
    EXPECT_EQ(j["arrows"].size(), 4u);
    EXPECT_EQ(j["relations"][0]["plus"].size(), 3u);
    auto dot = to_dot(q);
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("label=\"e3\""), std::string::npos);
}
