#pragma once

// Perfect matchings, height changes, the characteristic polynomial and
// polygon, and the alternating cycles of symmetric differences.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"
#include "dimer/torus_graph.hpp"

namespace dimer {

/// Sorted edge indices of a perfect matching on a particular graph.
struct PerfectMatching {
    std::vector<std::size_t> edges;

    bool contains(std::size_t e) const { return std::binary_search(edges.begin(), edges.end(), e); }
    auto operator<=>(const PerfectMatching&) const = default;
};

inline bool is_perfect_matching(const TorusGraph& g, const PerfectMatching& m) {
    std::vector<int> cover(g.node_count(), 0);
    for (auto e : m.edges) {
        if (e >= g.edge_count()) return false;
        ++cover[g.edge(e).black];
        ++cover[g.edge(e).white];
    }
    return std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
}

/// All perfect matchings in canonical (lexicographic) order. Backtracking
/// always covers the lowest-indexed uncovered node next.
inline std::vector<PerfectMatching> enumerate_matchings(const RawGraph& g) {
    const auto n = g.nodes.size();
    std::vector<PerfectMatching> out;
    if (n % 2 != 0) return out;
    std::vector<std::vector<std::size_t>> incident(n);
    std::size_t blacks = 0;
    for (std::size_t v = 0; v < n; ++v) {
        incident[v] = g.rotations[v];
        std::sort(incident[v].begin(), incident[v].end());
        if (g.nodes[v].color == Color::black) ++blacks;
    }
    if (2 * blacks != n) return out;

    std::vector<bool> covered(n, false);
    std::vector<std::size_t> chosen;
    chosen.reserve(n / 2);
    auto recurse = [&](auto&& self, std::size_t from) -> void {
        while (from < n && covered[from]) ++from;
        if (from == n) {
            PerfectMatching m{chosen};
            std::sort(m.edges.begin(), m.edges.end());
            out.push_back(std::move(m));
            return;
        }
        covered[from] = true;
        for (auto e : incident[from]) {
            auto u = g.edges[e].black == from ? g.edges[e].white : g.edges[e].black;
            if (covered[u]) continue;
            covered[u] = true;
            chosen.push_back(e);
            self(self, from + 1);
            chosen.pop_back();
            covered[u] = false;
        }
        covered[from] = false;
    };
    recurse(recurse, 0);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<PerfectMatching> enumerate_matchings(const TorusGraph& g) { return enumerate_matchings(g.raw()); }

/// Sum of offsets of a matching's edges (each traversed black -> white).
inline HomologyClass matching_chain_class(const TorusGraph& g, const PerfectMatching& m) {
    Vec2 s;
    for (auto e : m.edges) s += g.edge(e).offset;
    return s;
}

/// Poincare dual of v: h = (<(1,0), v>, <(0,1), v>) = (v_y, -v_x).
constexpr Vec2 dual_height(HomologyClass v) {
    return {intersection_pairing({1, 0}, v), intersection_pairing({0, 1}, v)};
}

/// h(D, D') for the class v = [D - D'].
inline Vec2 height_change(const TorusGraph& g, const PerfectMatching& d, const PerfectMatching& ref) {
    return dual_height(matching_chain_class(g, d) - matching_chain_class(g, ref));
}

/// Laurent polynomial with non-negative coefficients, exponent -> coefficient.
struct CharPolynomial {
    std::map<Vec2, std::int64_t> terms;

    std::int64_t total() const {
        std::int64_t t = 0;
        for (const auto& [_, c] : terms) t += c;
        return t;
    }
    std::vector<Vec2> exponents() const {
        std::vector<Vec2> out;
        for (const auto& [e, _] : terms) out.push_back(e);
        return out;
    }
    bool operator==(const CharPolynomial&) const = default;
};

/// Every matching of a graph together with its height change relative to a
/// fixed reference. Most matching-level queries are answered from this.
struct MatchingCensus {
    std::vector<PerfectMatching> matchings;
    std::size_t reference = 0;
    std::vector<Vec2> heights;
    CharPolynomial polynomial;
    /// Characteristic polygon in the reference frame (not translated).
    LatticePolygon polygon;

    static MatchingCensus of(const TorusGraph& g, std::optional<PerfectMatching> ref = std::nullopt) {
        MatchingCensus c;
        c.matchings = enumerate_matchings(g);
        if (c.matchings.empty()) return c;
        if (ref) {
            auto it = std::find(c.matchings.begin(), c.matchings.end(), *ref);
            if (it == c.matchings.end()) throw DomainError("reference is not a perfect matching of the graph");
            c.reference = static_cast<std::size_t>(it - c.matchings.begin());
        }
        const auto base = matching_chain_class(g, c.matchings[c.reference]);
        for (const auto& m : c.matchings) {
            auto h = dual_height(matching_chain_class(g, m) - base);
            c.heights.push_back(h);
            ++c.polynomial.terms[h];
        }
        auto ex = c.polynomial.exponents();
        c.polygon = LatticePolygon::hull_of(ex);
        return c;
    }

    bool empty() const { return matchings.empty(); }
    void require_matching() const {
        if (matchings.empty()) throw DomainError("the model has no perfect matching");
    }
    LatticePolygon canonical_polygon() const { return polygon.canonical(); }

    std::size_t multiplicity_of(std::size_t i) const {
        return static_cast<std::size_t>(polynomial.terms.at(heights[i]));
    }
    bool is_corner(std::size_t i) const {
        const auto& v = polygon.vertices();
        return std::find(v.begin(), v.end(), heights[i]) != v.end();
    }
    /// Matching indices grouped by corner, corners in counter-clockwise order.
    std::vector<std::pair<Vec2, std::vector<std::size_t>>> corner_groups() const {
        std::vector<std::pair<Vec2, std::vector<std::size_t>>> out;
        for (auto c : polygon.vertices()) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < heights.size(); ++i) {
                if (heights[i] == c) members.push_back(i);
            }
            out.emplace_back(c, std::move(members));
        }
        return out;
    }
    std::optional<std::size_t> first_with_height(Vec2 h) const {
        for (std::size_t i = 0; i < heights.size(); ++i) {
            if (heights[i] == h) return i;
        }
        return std::nullopt;
    }
    std::optional<std::size_t> first_containing(std::size_t e) const {
        for (std::size_t i = 0; i < matchings.size(); ++i) {
            if (matchings[i].contains(e)) return i;
        }
        return std::nullopt;
    }
    std::size_t index_of(const PerfectMatching& m) const {
        auto it = std::find(matchings.begin(), matchings.end(), m);
        if (it == matchings.end()) throw DomainError("not a perfect matching of this graph");
        return static_cast<std::size_t>(it - matchings.begin());
    }
};

inline PerfectMatching default_reference(const TorusGraph& g) {
    auto all = enumerate_matchings(g);
    if (all.empty()) throw DomainError("the model has no perfect matching");
    return all.front();
}

inline CharPolynomial characteristic_polynomial(const TorusGraph& g, std::optional<PerfectMatching> ref = std::nullopt) {
    auto c = MatchingCensus::of(g, std::move(ref));
    c.require_matching();
    return c.polynomial;
}

/// Canonical characteristic polygon; independent of the reference.
inline LatticePolygon characteristic_polygon(const TorusGraph& g, std::optional<PerfectMatching> ref = std::nullopt) {
    auto c = MatchingCensus::of(g, std::move(ref));
    c.require_matching();
    return c.canonical_polygon();
}

/// Corners of the characteristic polygon (reference frame) -> matchings there.
inline std::map<Vec2, std::vector<PerfectMatching>> corner_matchings(const TorusGraph& g,
                                                                     std::optional<PerfectMatching> ref = std::nullopt) {
    auto c = MatchingCensus::of(g, std::move(ref));
    c.require_matching();
    std::map<Vec2, std::vector<PerfectMatching>> out;
    for (const auto& [corner, members] : c.corner_groups()) {
        auto& slot = out[corner];
        for (auto i : members) slot.push_back(c.matchings[i]);
    }
    return out;
}

inline std::size_t multiplicity(const TorusGraph& g, const PerfectMatching& d) {
    auto c = MatchingCensus::of(g);
    return c.multiplicity_of(c.index_of(d));
}

/// Every edge lies in some perfect matching.
inline bool is_nondegenerate_model(const TorusGraph& g) {
    auto all = enumerate_matchings(g);
    std::vector<bool> used(g.edge_count(), false);
    for (const auto& m : all) {
        for (auto e : m.edges) used[e] = true;
    }
    return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

/// Every edge lies in some corner perfect matching.
inline bool is_strongly_nondegenerate(const TorusGraph& g) {
    auto c = MatchingCensus::of(g);
    if (c.empty()) return false;
    std::vector<bool> used(g.edge_count(), false);
    for (std::size_t i = 0; i < c.matchings.size(); ++i) {
        if (!c.is_corner(i)) continue;
        for (auto e : c.matchings[i].edges) used[e] = true;
    }
    return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

/// Drops edges lying in no perfect matching (or, with `corner_only`, in no
/// corner perfect matching), then nodes left without edges, then every
/// component contained in a disc of T. The characteristic polygon is kept.
/// The input only needs consistent rotations, not a cellular embedding.
inline RawGraph restrict_to_matched(const RawGraph& g, bool corner_only = false) {
    auto all = enumerate_matchings(g);
    if (all.empty()) throw DomainError("the model has no perfect matching");
    std::vector<bool> corner(all.size(), true);
    if (corner_only) {
        std::vector<HomologyClass> cls;
        for (const auto& m : all) {
            Vec2 s;
            for (auto e : m.edges) s += g.edges[e].offset;
            cls.push_back(s);
        }
        std::vector<Vec2> heights;
        for (const auto& c : cls) heights.push_back(dual_height(c - cls.front()));
        auto hull = LatticePolygon::hull_of(heights).vertices();
        for (std::size_t i = 0; i < all.size(); ++i) {
            corner[i] = std::find(hull.begin(), hull.end(), heights[i]) != hull.end();
        }
    }
    std::vector<bool> keep_edge(g.edges.size(), false);
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!corner[i]) continue;
        for (auto e : all[i].edges) keep_edge[e] = true;
    }
    std::vector<bool> keep_node(g.nodes.size(), false);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!keep_edge[e]) continue;
        keep_node[g.edges[e].black] = true;
        keep_node[g.edges[e].white] = true;
    }
    return delete_null_homotopic_components(filter_graph(g, keep_node, keep_edge));
}

inline RawGraph restrict_to_matched(const TorusGraph& g, bool corner_only = false) {
    return restrict_to_matched(g.raw(), corner_only);
}

// ---------------------------------------------------------------------------
// Symmetric differences

/// A closed walk given by darts, with its homology class.
struct DartCycle {
    std::vector<Dart> darts;
    HomologyClass homology;

    bool uses_edge(std::size_t e) const {
        return std::any_of(darts.begin(), darts.end(), [e](Dart d) { return d.edge == e; });
    }
    bool operator==(const DartCycle&) const = default;
};

struct SymmetricDifference {
    /// Disjoint alternating cycles; d1 edges run black -> white. Sorted by
    /// their lowest d1 edge.
    std::vector<DartCycle> components;

    HomologyClass total() const {
        Vec2 s;
        for (const auto& c : components) s += c.homology;
        return s;
    }
};

inline SymmetricDifference symmetric_difference(const TorusGraph& g, const PerfectMatching& d1,
                                                const PerfectMatching& d2) {
    std::vector<std::size_t> mate1(g.node_count(), SIZE_MAX);
    std::vector<std::size_t> mate2(g.node_count(), SIZE_MAX);
    for (auto e : d1.edges) mate1[g.edge(e).black] = mate1[g.edge(e).white] = e;
    for (auto e : d2.edges) mate2[g.edge(e).black] = mate2[g.edge(e).white] = e;
    SymmetricDifference sd;
    std::vector<bool> done(g.edge_count(), false);
    for (auto e : d1.edges) {
        if (done[e] || d2.contains(e)) continue;
        DartCycle cyc;
        auto cur = e;
        while (!done[cur]) {
            done[cur] = true;
            cyc.darts.push_back({cur, true});
            auto w = g.edge(cur).white;
            auto back = mate2[w];
            if (back == SIZE_MAX) throw DomainError("symmetric_difference: d2 is not perfect");
            cyc.darts.push_back({back, false});
            cur = mate1[g.edge(back).black];
            if (cur == SIZE_MAX) throw DomainError("symmetric_difference: d1 is not perfect");
        }
        cyc.homology = cycle_homology(g, cyc.darts);
        sd.components.push_back(std::move(cyc));
    }
    return sd;
}

/// d xor c for an alternating cycle c. Throws unless the result is perfect.
inline PerfectMatching flip(const TorusGraph& g, const PerfectMatching& d, const DartCycle& c) {
    if (c.darts.empty()) return d;
    for (std::size_t i = 0; i < c.darts.size(); ++i) {
        bool a = d.contains(c.darts[i].edge);
        bool b = d.contains(c.darts[(i + 1) % c.darts.size()].edge);
        if (a == b) throw DomainError("flip: cycle does not alternate with the matching");
    }
    std::set<std::size_t> edges(d.edges.begin(), d.edges.end());
    for (auto dt : c.darts) {
        if (!edges.erase(dt.edge)) edges.insert(dt.edge);
    }
    PerfectMatching out{{edges.begin(), edges.end()}};
    if (!is_perfect_matching(g, out)) throw DomainError("flip: result is not a perfect matching");
    return out;
}

/// The strip of T immediately to the right of one of several disjoint
/// parallel cycles.
struct Strip {
    /// Index of the cycle bounding the strip on its right-hand side (whose
    /// left side faces the strip).
    std::size_t next = 0;
    std::set<std::size_t> faces;
    /// Edges with the strip on both sides, i.e. strictly between the cycles.
    std::size_t interior_edges = 0;
};

inline Strip strip_right_of(const TorusGraph& g, const std::vector<DartCycle>& cycles, std::size_t which) {
    std::vector<int> owner(g.dart_count(), -1);  // dart -> cycle traversing it in that direction
    std::vector<bool> on_cycle(g.edge_count(), false);
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        for (auto d : cycles[c].darts) {
            owner[d.index()] = static_cast<int>(c);
            on_cycle[d.edge] = true;
        }
    }
    Strip strip;
    std::deque<std::size_t> queue;
    for (auto d : cycles[which].darts) {
        auto f = g.face_of(d.reversed());
        if (strip.faces.insert(f).second) queue.push_back(f);
    }
    std::set<std::size_t> next_candidates;
    std::set<std::size_t> interior;
    while (!queue.empty()) {
        auto f = queue.front();
        queue.pop_front();
        for (auto d : g.faces()[f].darts) {
            if (on_cycle[d.edge]) {
                if (owner[d.index()] >= 0) next_candidates.insert(static_cast<std::size_t>(owner[d.index()]));
                continue;
            }
            interior.insert(d.edge);
            auto nf = g.face_of(d.reversed());
            if (strip.faces.insert(nf).second) queue.push_back(nf);
        }
    }
    if (next_candidates.size() != 1) {
        throw InternalError("strip_right_of: the strip is not bounded by exactly one cycle on its right (found " +
                            std::to_string(next_candidates.size()) + ")");
    }
    strip.next = *next_candidates.begin();
    strip.interior_edges = interior.size();
    return strip;
}

/// Cyclic order of disjoint parallel cycles: starts at cycle 0 and each
/// next cycle is the one immediately to the right of the previous.
inline std::vector<std::size_t> order_components(const TorusGraph& g, const std::vector<DartCycle>& cycles) {
    if (cycles.empty()) return {};
    for (std::size_t i = 1; i < cycles.size(); ++i) {
        if (cycles[i].homology.is_zero() || intersection_pairing(cycles[0].homology, cycles[i].homology) != 0) {
            throw InternalError("order_components: cycles are not parallel and non-trivial");
        }
    }
    std::vector<std::size_t> order{0};
    std::vector<bool> seen(cycles.size(), false);
    seen[0] = true;
    while (order.size() < cycles.size()) {
        auto nx = strip_right_of(g, cycles, order.back()).next;
        if (seen[nx]) throw InternalError("order_components: strip walk closed before visiting every cycle");
        seen[nx] = true;
        order.push_back(nx);
    }
    if (strip_right_of(g, cycles, order.back()).next != 0) {
        throw InternalError("order_components: strip walk does not close up");
    }
    return order;
}

inline std::vector<std::size_t> order_components(const TorusGraph& g, const SymmetricDifference& sd) {
    return order_components(g, sd.components);
}

}  // namespace dimer
