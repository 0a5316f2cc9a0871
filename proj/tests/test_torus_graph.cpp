#include <gtest/gtest.h>

#include "dimer/torus_graph.hpp"
#include "support.hpp"

using namespace dimer;
using testing_support::fixture;
using testing_support::random_graph;
using testing_support::raw_fixture;

namespace {

void expect_face_invariants(const TorusGraph& g) {
    std::size_t total = 0;
    std::vector<int> seen(g.dart_count(), 0);
    for (const auto& f : g.faces()) {
        total += f.darts.size();
        Vec2 sum;
        for (std::size_t i = 0; i < f.darts.size(); ++i) {
            ++seen[f.darts[i].index()];
            sum += g.offset(f.darts[i]);
            EXPECT_EQ(g.face_next(f.darts[i]), f.darts[(i + 1) % f.darts.size()]);
        }
        EXPECT_EQ(sum, (Vec2{0, 0}));
        EXPECT_EQ(cycle_homology(g, f.darts), (Vec2{0, 0}));
    }
    EXPECT_EQ(total, 2 * g.edge_count());
    for (auto c : seen) EXPECT_EQ(c, 1);
    EXPECT_EQ(static_cast<std::int64_t>(g.node_count()) - static_cast<std::int64_t>(g.edge_count()) +
                  static_cast<std::int64_t>(g.faces().size()),
              0);
}

}  // namespace

TEST(TorusGraph, HexagonalFixtureHasOneHexagon) {
    auto g = fixture("hex1");
    ASSERT_EQ(g.faces().size(), 1u);
    EXPECT_EQ(g.faces()[0].darts.size(), 6u);
    expect_face_invariants(g);
}

TEST(TorusGraph, SquareFixtureHasTwoSquares) {
    auto g = fixture("sq1");
    ASSERT_EQ(g.faces().size(), 2u);
    for (const auto& f : g.faces()) EXPECT_EQ(f.darts.size(), 4u);
    expect_face_invariants(g);
}

TEST(TorusGraph, FaceInvariantsOnRandomModels) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SCOPED_TRACE(seed);
        expect_face_invariants(random_graph(seed));
    }
    expect_face_invariants(fixture("g1"));
    expect_face_invariants(fixture("g2"));
}

TEST(TorusGraph, RejectsDeletedHexEdge) {
    auto raw = remove_edges(raw_fixture("hex1"), {"e_a"});
    auto v = validate(raw);
    EXPECT_FALSE(v.graph.has_value());
    EXPECT_FALSE(v.report.ok());
}

TEST(TorusGraph, RejectsUnivalentNode) {
    auto raw = remove_edges(raw_fixture("hex1"), {"e_a", "e_b"});
    auto v = validate(raw);
    EXPECT_FALSE(v.graph);
    EXPECT_TRUE(v.report.has(IssueKind::univalent_node));
}

TEST(TorusGraph, RejectsSameColorEdge) {
    auto raw = raw_fixture("sq1");
    raw.nodes[1].color = Color::black;
    auto v = validate(raw);
    EXPECT_FALSE(v.graph);
    EXPECT_TRUE(v.report.has(IssueKind::color_mismatch));
}

TEST(TorusGraph, RejectsRotationMismatch) {
    auto raw = raw_fixture("sq1");
    raw.rotations[0].pop_back();
    auto v = validate(raw);
    EXPECT_FALSE(v.graph);
    EXPECT_TRUE(v.report.has(IssueKind::rotation_mismatch));
}

TEST(TorusGraph, RejectsNonCellularEmbedding) {
    // Swapping two edges in one rotation changes the face structure.
    auto raw = raw_fixture("sq1");
    std::swap(raw.rotations[0][1], raw.rotations[0][2]);
    auto v = validate(raw);
    EXPECT_FALSE(v.graph);
    EXPECT_TRUE(v.report.has(IssueKind::euler_characteristic) || v.report.has(IssueKind::face_offset));
}

TEST(TorusGraph, RejectsEmptyGraph) {
    auto v = validate(RawGraph{});
    EXPECT_FALSE(v.graph);
    EXPECT_TRUE(v.report.has(IssueKind::empty_graph));
}

TEST(TorusGraph, ValidatedThrowsOnInvalid) {
    EXPECT_THROW(validated(remove_edges(raw_fixture("hex1"), {"e_a"})), ParseError);
}

TEST(TorusGraph, RotationNeighbours) {
    auto g = fixture("sq1");
    auto b = g.node_index("b");
    auto e1 = g.edge_index("e1");
    EXPECT_EQ(g.edge(g.succ(b, e1)).id, "e2");
    EXPECT_EQ(g.edge(g.pred(b, e1)).id, "e4");
    auto left = g.edges_on_left(b, e1, g.edge_index("e3"));
    ASSERT_EQ(left.size(), 1u);
    EXPECT_EQ(g.edge(left[0]).id, "e4");
    auto right = g.edges_on_right(b, e1, g.edge_index("e3"));
    ASSERT_EQ(right.size(), 1u);
    EXPECT_EQ(g.edge(right[0]).id, "e2");
}

TEST(TorusGraph, CycleHomologyAndLift) {
    auto g = fixture("hex1");
    std::vector<Dart> walk{{g.edge_index("e_b"), true}, {g.edge_index("e_a"), false}};
    EXPECT_EQ(cycle_homology(g, walk), (Vec2{1, 0}));
    auto lift = lift_walk(g, {g.node_index("b"), {0, 0}}, walk);
    ASSERT_EQ(lift.size(), 3u);
    EXPECT_EQ(lift.back().translate, (Vec2{1, 0}));
    EXPECT_EQ(lift.back().node, g.node_index("b"));
    std::vector<Dart> open{{g.edge_index("e_b"), true}};
    EXPECT_THROW(cycle_homology(g, open), DomainError);
}

TEST(TorusGraph, StableFaceIds) {
    auto g = fixture("sq1");
    auto again = validated(g.raw());
    for (std::size_t f = 0; f < g.faces().size(); ++f) EXPECT_EQ(g.face_id(f), again.face_id(f));
}

TEST(TorusGraph, RemoveEdgesKeepsIds) {
    auto g = fixture("g1");
    auto raw = remove_edges(g, {"e_x", "e_y"});
    EXPECT_EQ(raw.edges.size(), 9u);
    EXPECT_FALSE(raw.find_edge("e_x"));
    EXPECT_TRUE(raw.find_edge("e_a0"));
    EXPECT_EQ(raw, raw_fixture("g2"));
    EXPECT_THROW(remove_edges(g, {"nope"}), DomainError);
}

TEST(TorusGraph, PruneUnivalentCascades) {
    // Dropping two of the three edges at b leaves b univalent; pruning removes
    // b, which makes w isolated or univalent in turn.
    auto raw = remove_edges(raw_fixture("hex1"), {"e_a", "e_b"});
    auto pruned = prune_univalent(raw);
    EXPECT_TRUE(pruned.edges.empty());
}
