#pragma once

// Dual quiver of a dimer model. Vertices are faces, arrows are edges. Each
// arrow crosses its edge with the white end on its right; the relation of
// arrow a pairs the return path clockwise around the white end (plus) with
// the return path counter-clockwise around the black end (minus).

#include <cstddef>
#include <deque>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/io.hpp"
#include "dimer/matchings.hpp"
#include "dimer/torus_graph.hpp"

namespace dimer {

struct Arrow {
    std::size_t edge = 0;
    std::size_t src = 0;
    std::size_t tgt = 0;
};

struct Relation {
    std::size_t arrow = 0;
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
};

struct Quiver {
    /// Face ids, indexed like TorusGraph::faces().
    std::vector<std::string> vertices;
    /// arrows[i] is dual to edge i.
    std::vector<Arrow> arrows;
    std::vector<std::string> arrow_ids;
    std::vector<Relation> relations;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t arrow_count() const { return arrows.size(); }
};

inline Quiver derive_quiver(const TorusGraph& g) {
    Quiver q;
    for (std::size_t f = 0; f < g.faces().size(); ++f) q.vertices.push_back(g.face_id(f));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        // The face left of black->white is the target; the one on the right the source.
        q.arrows.push_back({e, g.face_of(Dart{e, false}), g.face_of(Dart{e, true})});
        q.arrow_ids.push_back(g.edge(e).id);
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        Relation r;
        r.arrow = e;
        const auto w = g.edge(e).white;
        const auto b = g.edge(e).black;
        for (auto x = g.pred(w, e); x != e; x = g.pred(w, x)) r.plus.push_back(x);
        for (auto x = g.succ(b, e); x != e; x = g.succ(b, x)) r.minus.push_back(x);
        q.relations.push_back(std::move(r));
    }
    return q;
}

/// Source and target of a path; throws if consecutive arrows do not compose.
inline std::pair<std::size_t, std::size_t> path_ends(const Quiver& q, const std::vector<std::size_t>& path) {
    if (path.empty()) throw DomainError("path_ends: empty path has no determined vertex");
    for (auto a : path) {
        if (a >= q.arrow_count()) throw DomainError("path names arrow index " + std::to_string(a) + " out of range");
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (q.arrows[path[i]].tgt != q.arrows[path[i + 1]].src) {
            throw DomainError("path is not composable at position " + std::to_string(i + 1) + " (arrow '" +
                              q.arrow_ids[path[i + 1]] + "')");
        }
    }
    return {q.arrows[path.front()].src, q.arrows[path.back()].tgt};
}

/// Allowed: no arrow of the path belongs to d. The empty path is allowed.
inline bool is_allowed(const Quiver& q, const PerfectMatching& d, const std::vector<std::size_t>& path) {
    if (path.empty()) return true;
    path_ends(q, path);
    for (auto a : path) {
        if (d.contains(a)) return false;
    }
    return true;
}

/// Dimension vector (1,...,1) representation: arrows in d act by 0, the rest by 1.
struct MatchingRepresentation {
    PerfectMatching matching;
    std::vector<int> labels;

    int path_value(const std::vector<std::size_t>& path) const {
        int v = 1;
        for (auto a : path) v *= labels[a];
        return v;
    }
    bool satisfies(const Quiver& q) const {
        for (const auto& r : q.relations) {
            if (path_value(r.plus) != path_value(r.minus)) return false;
        }
        return true;
    }
};

inline MatchingRepresentation matching_representation(const Quiver& q, const PerfectMatching& d) {
    MatchingRepresentation rep{d, std::vector<int>(q.arrow_count(), 1)};
    for (auto e : d.edges) {
        if (e >= q.arrow_count()) throw DomainError("matching names an edge outside the quiver");
        rep.labels[e] = 0;
    }
    return rep;
}

/// Strong connectivity of the quiver with the arrows of d deleted.
inline bool is_simple_matching(const Quiver& q, const PerfectMatching& d) {
    const auto n = q.vertex_count();
    if (n <= 1) return true;
    std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        if (d.contains(a)) continue;
        fwd[q.arrows[a].src].push_back(q.arrows[a].tgt);
        bwd[q.arrows[a].tgt].push_back(q.arrows[a].src);
    }
    auto reaches_all = [n](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto u : adj[v]) {
                if (!seen[u]) {
                    seen[u] = true;
                    ++count;
                    queue.push_back(u);
                }
            }
        }
        return count == n;
    };
    return reaches_all(fwd) && reaches_all(bwd);
}

inline bool is_simple_matching(const TorusGraph& g, const PerfectMatching& d) {
    if (!is_perfect_matching(g, d)) throw DomainError("is_simple_matching: not a perfect matching");
    return is_simple_matching(derive_quiver(g), d);
}

inline Json to_json(const Quiver& q) {
    Json vertices = Json::array();
    for (const auto& v : q.vertices) vertices.push_back(v);
    Json arrows = Json::array();
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        arrows.push_back({{"id", q.arrow_ids[a]}, {"src", q.vertices[q.arrows[a].src]}, {"tgt", q.vertices[q.arrows[a].tgt]}});
    }
    auto ids = [&q](const std::vector<std::size_t>& path) {
        Json arr = Json::array();
        for (auto a : path) arr.push_back(q.arrow_ids[a]);
        return arr;
    };
    Json relations = Json::array();
    for (const auto& r : q.relations) {
        relations.push_back({{"arrow", q.arrow_ids[r.arrow]}, {"plus", ids(r.plus)}, {"minus", ids(r.minus)}});
    }
    return {{"vertices", std::move(vertices)}, {"arrows", std::move(arrows)}, {"relations", std::move(relations)}};
}

/// Graphviz digraph; arrows labelled by edge id.
inline std::string to_dot(const Quiver& q) {
    std::ostringstream os;
    os << "digraph quiver {\n";
    for (const auto& v : q.vertices) os << "  \"" << v << "\";\n";
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        os << "  \"" << q.vertices[q.arrows[a].src] << "\" -> \"" << q.vertices[q.arrows[a].tgt] << "\" [label=\""
           << q.arrow_ids[a] << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace dimer
