#include <gtest/gtest.h>

#include <random>

#include "dimer/lattice.hpp"
#include "oracles.hpp"

using namespace dimer;

namespace {

LatticePolygon hull(std::vector<Vec2> pts) { return convex_hull(pts); }

const LatticePolygon kSquare = hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
const LatticePolygon kTriangle = hull({{0, 0}, {1, 0}, {0, 1}});

}  // namespace

TEST(Lattice, IntersectionPairing) {
    EXPECT_EQ(intersection_pairing({1, 0}, {0, 1}), 1);
    EXPECT_EQ(intersection_pairing({2, 3}, {2, 3}), 0);
    EXPECT_EQ(intersection_pairing({1, -1}, {0, 1}), 1);
    EXPECT_EQ(intersection_pairing({0, 1}, {1, 0}), -1);
}

TEST(Lattice, PairingBilinearAntisymmetric) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int i = 0; i < 200; ++i) {
        Vec2 a{d(rng), d(rng)}, b{d(rng), d(rng)}, c{d(rng), d(rng)};
        EXPECT_EQ(intersection_pairing(a, b), -intersection_pairing(b, a));
        EXPECT_EQ(intersection_pairing(a + b, c), intersection_pairing(a, c) + intersection_pairing(b, c));
        EXPECT_EQ(intersection_pairing(3 * a, c), 3 * intersection_pairing(a, c));
        EXPECT_GE(intersection_pairing(a, rotate_ccw(a)), 0);
        EXPECT_EQ(rotate_ccw(rotate_ccw(rotate_ccw(rotate_ccw(a)))), a);
    }
}

TEST(Lattice, RotateCcw) {
    EXPECT_EQ(rotate_ccw({1, 0}), (Vec2{0, 1}));
    EXPECT_EQ(rotate_ccw({0, 0}), (Vec2{0, 0}));
    EXPECT_EQ(rotate_ccw({1, -1}), (Vec2{1, 1}));
}

TEST(Lattice, HullExamples) {
    EXPECT_EQ(hull({{0, 0}, {1, 0}, {0, 1}, {0, 0}}).vertices(), (std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}}));
    EXPECT_EQ(hull({{0, 0}, {2, 0}, {1, 0}}).vertices(), (std::vector<Vec2>{{0, 0}, {2, 0}}));
    EXPECT_EQ(hull({{0, 0}, {-1, 0}, {-1, -1}, {0, -1}}).vertices(),
              (std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    EXPECT_TRUE(hull({}).empty());
    EXPECT_EQ(hull({{4, 5}, {4, 5}}).vertices(), (std::vector<Vec2>{{0, 0}}));
}

TEST(Lattice, HullMatchesOracle) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-4, 4);
    std::uniform_int_distribution<int> count(1, 12);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Vec2> pts(static_cast<std::size_t>(count(rng)));
        for (auto& p : pts) p = {d(rng), d(rng)};
        auto h = hull(pts);
        EXPECT_EQ(oracle::vertex_set(h), oracle::canonical_hull(pts));
        // Idempotent and translation invariant.
        EXPECT_EQ(hull(h.vertices()), h);
        std::vector<Vec2> shifted;
        for (auto p : pts) shifted.push_back(p + Vec2{5, -3});
        EXPECT_EQ(hull(shifted), h);
        if (h.size() >= 3) EXPECT_GT(h.area2(), 0);
    }
}

TEST(Lattice, Corners) {
    EXPECT_EQ(corners(kSquare).size(), 4u);
    EXPECT_EQ(corners(hull({{0, 0}, {3, 0}})).size(), 2u);
    EXPECT_EQ(corners(hull({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {1, 0}})).size(), 4u);
}

TEST(Lattice, AdjacentCornerPairs) {
    auto sq = adjacent_corner_pairs(kSquare);
    ASSERT_EQ(sq.size(), 4u);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        EXPECT_EQ(sq[i].second, sq[(i + 1) % sq.size()].first);
        // Counter-clockwise: the polygon lies to the left of each pair.
        auto next = sq[(i + 1) % sq.size()].second;
        EXPECT_GT(cross(sq[i].first, sq[i].second, next), 0);
    }
    EXPECT_EQ(adjacent_corner_pairs(kTriangle).size(), 3u);
    auto seg = adjacent_corner_pairs(hull({{0, 0}, {2, 1}}));
    ASSERT_EQ(seg.size(), 2u);
    EXPECT_EQ(seg[0].first, seg[1].second);
    EXPECT_THROW(adjacent_corner_pairs(hull({{1, 1}})), DomainError);
}

TEST(Lattice, Contains) {
    EXPECT_TRUE(contains(kSquare, kTriangle));
    EXPECT_FALSE(contains(kTriangle, kSquare));
    EXPECT_TRUE(contains(kSquare, kSquare));
    EXPECT_TRUE(contains(kSquare, hull({{0, 0}, {1, 1}})));
    EXPECT_FALSE(contains(kSquare, hull({{0, 0}, {2, 0}})));
    EXPECT_TRUE(contains(kSquare, LatticePolygon{}));
    // Translation matters only up to lattice shifts.
    EXPECT_TRUE(contains(hull({{0, 0}, {3, 0}, {0, 3}}), hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}})));
    EXPECT_FALSE(contains(hull({{0, 0}, {2, 0}, {0, 2}}), hull({{0, 0}, {2, 0}, {2, 1}})));
}

TEST(Lattice, ContainsMatchesBruteForce) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec2> a(5), b(3);
        for (auto& p : a) p = {d(rng), d(rng)};
        for (auto& p : b) p = {d(rng), d(rng)};
        auto outer = hull(a);
        auto inner = hull(b);
        // A shifted point is inside or on the outer hull iff adding it leaves
        // the oracle's vertex set unchanged.
        bool expect = false;
        for (int tx = -7; tx <= 7 && !expect; ++tx) {
            for (int ty = -7; ty <= 7 && !expect; ++ty) {
                bool all = true;
                for (auto v : inner.vertices()) {
                    auto pts = outer.vertices();
                    pts.push_back(v + Vec2{tx, ty});
                    if (oracle::hull_vertices(pts) != oracle::hull_vertices(outer.vertices())) all = false;
                }
                expect = all;
            }
        }
        EXPECT_EQ(contains(outer, inner), expect) << outer << " " << inner;
    }
}

TEST(Lattice, Nondegenerate) {
    EXPECT_TRUE(is_nondegenerate(kSquare));
    EXPECT_TRUE(is_nondegenerate(kTriangle));
    EXPECT_FALSE(is_nondegenerate(hull({{0, 0}, {2, 0}})));
    EXPECT_FALSE(is_nondegenerate(LatticePolygon{}));
}
