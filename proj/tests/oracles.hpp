#pragma once

// Test-only reference implementations, deliberately naive and independent
// of the library's algorithms.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "dimer/lattice.hpp"
#include "dimer/torus_graph.hpp"

namespace oracle {

using dimer::Vec2;

/// Every perfect matching, as sorted edge-id sets, by choosing one incident
/// edge per black node in all possible ways.
inline std::set<std::set<std::string>> matchings(const dimer::RawGraph& g) {
    std::vector<std::size_t> blacks;
    std::size_t whites = 0;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (g.nodes[v].color == dimer::Color::black) {
            blacks.push_back(v);
        } else {
            ++whites;
        }
    }
    std::vector<std::vector<std::size_t>> choices(blacks.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto it = std::find(blacks.begin(), blacks.end(), g.edges[e].black);
        choices[it - blacks.begin()].push_back(e);
    }
    std::set<std::set<std::string>> out;
    if (blacks.size() != whites) return out;
    std::vector<std::size_t> pick(blacks.size(), 0);
    for (const auto& c : choices) {
        if (c.empty()) return out;
    }
    while (true) {
        std::set<std::size_t> used;
        std::set<std::string> ids;
        for (std::size_t i = 0; i < blacks.size(); ++i) {
            const auto& e = g.edges[choices[i][pick[i]]];
            used.insert(e.white);
            ids.insert(e.id);
        }
        if (used.size() == whites) out.insert(ids);
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return out;
}

inline std::int64_t orient(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

inline bool in_segment(Vec2 p, Vec2 a, Vec2 b) {
    return orient(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    auto d1 = orient(a, b, p);
    auto d2 = orient(b, c, p);
    auto d3 = orient(c, a, p);
    bool neg = d1 < 0 || d2 < 0 || d3 < 0;
    bool pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(neg && pos);
}

/// Extreme points of a finite set: those not in any closed triangle or
/// segment spanned by the other points.
inline std::set<Vec2> hull_vertices(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::set<Vec2> out;
    const auto n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        bool inside = false;
        for (std::size_t a = 0; a < n && !inside; ++a) {
            if (a == i) continue;
            for (std::size_t b = a + 1; b < n && !inside; ++b) {
                if (b == i) continue;
                if (in_segment(pts[i], pts[a], pts[b])) inside = true;
                for (std::size_t c = b + 1; c < n && !inside; ++c) {
                    if (c == i) continue;
                    if (orient(pts[a], pts[b], pts[c]) != 0 && in_triangle(pts[i], pts[a], pts[b], pts[c])) {
                        inside = true;
                    }
                }
            }
        }
        if (!inside) out.insert(pts[i]);
    }
    return out;
}

/// Hull vertices translated so the lexicographically least one is (0,0).
inline std::set<Vec2> canonical_hull(const std::vector<Vec2>& pts) {
    auto v = hull_vertices(pts);
    std::set<Vec2> out;
    if (v.empty()) return out;
    auto base = *v.begin();
    for (auto p : v) out.insert(p - base);
    return out;
}

inline std::set<Vec2> vertex_set(const dimer::LatticePolygon& p) {
    return {p.vertices().begin(), p.vertices().end()};
}

}  // namespace oracle
