#pragma once

// Bicolored graphs embedded in the torus T = R^2 / Z^2, stored as a
// combinatorial map: a counter-clockwise rotation of edges at every node and
// a homology offset on every edge. An edge with offset t runs from its black
// node in the fundamental domain to the copy of its white node translated by t.
//
// "Left" and "right" of a directed walk are always decided from rotation
// positions, never from coordinates.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"

namespace dimer {

enum class Color : std::uint8_t { black, white };

inline const char* to_string(Color c) { return c == Color::black ? "black" : "white"; }

/// A directed traversal of an edge. `forward` means black -> white.
struct Dart {
    std::size_t edge = 0;
    bool forward = true;

    constexpr std::size_t index() const { return 2 * edge + (forward ? 0 : 1); }
    constexpr Dart reversed() const { return {edge, !forward}; }
    static constexpr Dart from_index(std::size_t i) { return {i / 2, i % 2 == 0}; }

    auto operator<=>(const Dart&) const = default;
};

struct NodeData {
    std::string id;
    Color color = Color::black;
    /// Optional drawing position in the unit square; carried for rendering only.
    std::optional<std::array<double, 2>> pos;
};

struct EdgeData {
    std::string id;
    std::size_t black = 0;
    std::size_t white = 0;
    Vec2 offset;
};

/// Unvalidated graph data. Indices refer to positions in `nodes` / `edges`;
/// `rotations[v]` lists the edges at v in counter-clockwise order. Every edit
/// produces one of these, and intermediate states need not be dimer models.
struct RawGraph {
    std::vector<NodeData> nodes;
    std::vector<EdgeData> edges;
    std::vector<std::vector<std::size_t>> rotations;

    std::optional<std::size_t> find_node(std::string_view id) const {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id == id) return i;
        }
        return std::nullopt;
    }
    std::optional<std::size_t> find_edge(std::string_view id) const {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edges[i].id == id) return i;
        }
        return std::nullopt;
    }

    bool operator==(const RawGraph& o) const {
        if (nodes.size() != o.nodes.size() || edges.size() != o.edges.size()) return false;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id != o.nodes[i].id || nodes[i].color != o.nodes[i].color) return false;
        }
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto& a = edges[i];
            const auto& b = o.edges[i];
            if (a.id != b.id || a.black != b.black || a.white != b.white || a.offset != b.offset) {
                return false;
            }
        }
        return rotations == o.rotations;
    }
};

/// Keeps nodes and edges whose flags are set; indices are compacted and the
/// relative order of survivors is preserved.
inline RawGraph filter_graph(const RawGraph& g, const std::vector<bool>& keep_node,
                             const std::vector<bool>& keep_edge) {
    RawGraph out;
    std::vector<std::size_t> node_map(g.nodes.size(), SIZE_MAX);
    std::vector<std::size_t> edge_map(g.edges.size(), SIZE_MAX);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (!keep_node[v]) continue;
        node_map[v] = out.nodes.size();
        out.nodes.push_back(g.nodes[v]);
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& ed = g.edges[e];
        if (!keep_edge[e] || node_map[ed.black] == SIZE_MAX || node_map[ed.white] == SIZE_MAX) {
            continue;
        }
        edge_map[e] = out.edges.size();
        out.edges.push_back({ed.id, node_map[ed.black], node_map[ed.white], ed.offset});
    }
    out.rotations.resize(out.nodes.size());
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (node_map[v] == SIZE_MAX) continue;
        for (auto e : g.rotations[v]) {
            if (e < edge_map.size() && edge_map[e] != SIZE_MAX) {
                out.rotations[node_map[v]].push_back(edge_map[e]);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

enum class IssueKind {
    empty_graph,
    bad_reference,
    color_mismatch,
    rotation_mismatch,
    isolated_node,
    univalent_node,
    disconnected,
    euler_characteristic,
    face_offset,
    homology_rank,
};

inline const char* to_string(IssueKind k) {
    switch (k) {
        case IssueKind::empty_graph: return "empty_graph";
        case IssueKind::bad_reference: return "bad_reference";
        case IssueKind::color_mismatch: return "color_mismatch";
        case IssueKind::rotation_mismatch: return "rotation_mismatch";
        case IssueKind::isolated_node: return "isolated_node";
        case IssueKind::univalent_node: return "univalent_node";
        case IssueKind::disconnected: return "disconnected";
        case IssueKind::euler_characteristic: return "euler_characteristic";
        case IssueKind::face_offset: return "face_offset";
        case IssueKind::homology_rank: return "homology_rank";
    }
    return "unknown";
}

struct Issue {
    IssueKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Issue> issues;
    std::size_t faces = 0;

    bool ok() const { return issues.empty(); }
    bool has(IssueKind k) const {
        return std::any_of(issues.begin(), issues.end(), [k](const Issue& i) { return i.kind == k; });
    }
    std::string summary() const {
        std::ostringstream os;
        for (const auto& i : issues) os << to_string(i.kind) << ": " << i.message << '\n';
        return os.str();
    }
};

class TorusGraph;
struct ValidationOutcome;
ValidationOutcome validate(RawGraph raw);

struct Face {
    std::vector<Dart> darts;
};

/// A validated dimer model: every edge joins black to white, no node is
/// univalent, the map is connected, cellular on the torus, and its cycles
/// span H_1(T; Z).
class TorusGraph {
public:
    const RawGraph& raw() const { return raw_; }
    std::size_t node_count() const { return raw_.nodes.size(); }
    std::size_t edge_count() const { return raw_.edges.size(); }
    std::size_t dart_count() const { return 2 * raw_.edges.size(); }

    const NodeData& node(std::size_t v) const { return raw_.nodes[v]; }
    const EdgeData& edge(std::size_t e) const { return raw_.edges[e]; }
    Color color(std::size_t v) const { return raw_.nodes[v].color; }
    const std::vector<std::size_t>& rotation(std::size_t v) const { return raw_.rotations[v]; }
    std::size_t degree(std::size_t v) const { return raw_.rotations[v].size(); }

    std::size_t node_index(std::string_view id) const {
        auto it = node_by_id_.find(std::string(id));
        if (it == node_by_id_.end()) throw ParseError("unknown node id '" + std::string(id) + "'");
        return it->second;
    }
    std::size_t edge_index(std::string_view id) const {
        auto it = edge_by_id_.find(std::string(id));
        if (it == edge_by_id_.end()) throw ParseError("unknown edge id '" + std::string(id) + "'");
        return it->second;
    }
    std::optional<std::size_t> find_edge(std::string_view id) const {
        auto it = edge_by_id_.find(std::string(id));
        if (it == edge_by_id_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t tail(Dart d) const { return d.forward ? edge(d.edge).black : edge(d.edge).white; }
    std::size_t head(Dart d) const { return d.forward ? edge(d.edge).white : edge(d.edge).black; }
    Vec2 offset(Dart d) const { return d.forward ? edge(d.edge).offset : -edge(d.edge).offset; }
    std::size_t other_end(std::size_t e, std::size_t v) const {
        return edge(e).black == v ? edge(e).white : edge(e).black;
    }
    /// The dart along e leaving v.
    Dart dart_from(std::size_t v, std::size_t e) const { return {e, edge(e).black == v}; }

    std::size_t rotation_position(std::size_t v, std::size_t e) const {
        return edge(e).black == v ? pos_black_[e] : pos_white_[e];
    }
    /// Counter-clockwise neighbour of e around v.
    std::size_t succ(std::size_t v, std::size_t e) const {
        const auto& r = rotation(v);
        return r[(rotation_position(v, e) + 1) % r.size()];
    }
    /// Clockwise neighbour of e around v.
    std::size_t pred(std::size_t v, std::size_t e) const {
        const auto& r = rotation(v);
        return r[(rotation_position(v, e) + r.size() - 1) % r.size()];
    }

    /// Edges strictly between `in` and `out` when turning clockwise from `in`
    /// at v: the edges on the left of a walk arriving along `in` and leaving
    /// along `out`.
    std::vector<std::size_t> edges_on_left(std::size_t v, std::size_t in, std::size_t out) const {
        std::vector<std::size_t> res;
        for (auto e = pred(v, in); e != out && e != in; e = pred(v, e)) res.push_back(e);
        return res;
    }
    /// Edges strictly between `in` and `out` turning counter-clockwise from `in`.
    std::vector<std::size_t> edges_on_right(std::size_t v, std::size_t in, std::size_t out) const {
        std::vector<std::size_t> res;
        for (auto e = succ(v, in); e != out && e != in; e = succ(v, e)) res.push_back(e);
        return res;
    }

    /// Face tracing successor: the face on the left of d continues with the
    /// clockwise neighbour of d's edge at its head.
    Dart face_next(Dart d) const {
        auto v = head(d);
        return dart_from(v, pred(v, d.edge));
    }

    const std::vector<Face>& faces() const { return faces_; }
    std::size_t face_of(Dart d) const { return dart_face_[d.index()]; }
    std::size_t position_in_face(Dart d) const { return dart_face_pos_[d.index()]; }
    /// Translate of d's tail in the lift of its face whose first dart starts at (0,0).
    Vec2 face_tail_translate(Dart d) const { return dart_face_translate_[d.index()]; }
    /// Stable face id: label of the lowest dart on its boundary.
    std::string face_id(std::size_t f) const { return dart_label(faces_[f].darts.front()); }

    std::string dart_label(Dart d) const { return edge(d.edge).id + (d.forward ? "+" : "-"); }

private:
    friend ValidationOutcome validate(RawGraph raw);

    RawGraph raw_;
    std::vector<std::size_t> pos_black_;
    std::vector<std::size_t> pos_white_;
    std::vector<Face> faces_;
    std::vector<std::size_t> dart_face_;
    std::vector<std::size_t> dart_face_pos_;
    std::vector<Vec2> dart_face_translate_;
    std::unordered_map<std::string, std::size_t> node_by_id_;
    std::unordered_map<std::string, std::size_t> edge_by_id_;
};

struct ValidationOutcome {
    std::optional<TorusGraph> graph;
    ValidationReport report;
};

namespace detail {

/// Face tracing on raw data whose rotations are already known to be
/// consistent. Returns darts grouped per face.
inline std::vector<std::vector<Dart>> trace_faces(const RawGraph& g,
                                                  const std::vector<std::size_t>& pos_black,
                                                  const std::vector<std::size_t>& pos_white) {
    const auto ndarts = 2 * g.edges.size();
    std::vector<bool> seen(ndarts, false);
    std::vector<std::vector<Dart>> faces;
    for (std::size_t start = 0; start < ndarts; ++start) {
        if (seen[start]) continue;
        std::vector<Dart> face;
        auto d = Dart::from_index(start);
        while (!seen[d.index()]) {
            seen[d.index()] = true;
            face.push_back(d);
            const auto& ed = g.edges[d.edge];
            auto v = d.forward ? ed.white : ed.black;
            auto pos = d.forward ? pos_white[d.edge] : pos_black[d.edge];
            const auto& rot = g.rotations[v];
            auto next_edge = rot[(pos + rot.size() - 1) % rot.size()];
            d = Dart{next_edge, g.edges[next_edge].black == v};
        }
        faces.push_back(std::move(face));
    }
    return faces;
}

}  // namespace detail

/// Checks every invariant of a dimer model and reports all violations found.
/// Face-level checks run only when the rotation data is structurally sound.
inline ValidationOutcome validate(RawGraph raw) {
    ValidationOutcome out;
    auto& rep = out.report;
    auto add = [&](IssueKind k, std::string msg) { rep.issues.push_back({k, std::move(msg)}); };

    const auto n = raw.nodes.size();
    const auto m = raw.edges.size();
    if (n == 0 || m == 0) {
        add(IssueKind::empty_graph, "graph has no nodes or no edges");
        return out;
    }
    bool structural = true;
    if (raw.rotations.size() != n) {
        add(IssueKind::rotation_mismatch, "rotation table size differs from node count");
        return out;
    }
    for (std::size_t e = 0; e < m; ++e) {
        const auto& ed = raw.edges[e];
        if (ed.black >= n || ed.white >= n) {
            add(IssueKind::bad_reference, "edge '" + ed.id + "' references a missing node");
            structural = false;
            continue;
        }
        if (raw.nodes[ed.black].color != Color::black || raw.nodes[ed.white].color != Color::white) {
            add(IssueKind::color_mismatch, "edge '" + ed.id + "' does not join a black node to a white node");
            structural = false;
        }
    }
    if (!structural) return out;

    std::vector<std::size_t> pos_black(m, SIZE_MAX);
    std::vector<std::size_t> pos_white(m, SIZE_MAX);
    for (std::size_t v = 0; v < n; ++v) {
        const auto& rot = raw.rotations[v];
        for (std::size_t i = 0; i < rot.size(); ++i) {
            auto e = rot[i];
            if (e >= m) {
                add(IssueKind::rotation_mismatch, "rotation at '" + raw.nodes[v].id + "' lists a missing edge");
                structural = false;
                continue;
            }
            auto& slot = raw.edges[e].black == v ? pos_black[e] : pos_white[e];
            if ((raw.edges[e].black != v && raw.edges[e].white != v) || slot != SIZE_MAX) {
                add(IssueKind::rotation_mismatch,
                    "rotation at '" + raw.nodes[v].id + "' lists edge '" + raw.edges[e].id +
                        "' which is not incident or is repeated");
                structural = false;
                continue;
            }
            slot = i;
        }
    }
    for (std::size_t e = 0; e < m; ++e) {
        if (pos_black[e] == SIZE_MAX || pos_white[e] == SIZE_MAX) {
            add(IssueKind::rotation_mismatch, "edge '" + raw.edges[e].id + "' is missing from a rotation list");
            structural = false;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (raw.rotations[v].empty()) add(IssueKind::isolated_node, "node '" + raw.nodes[v].id + "' has no edges");
        if (raw.rotations[v].size() == 1) add(IssueKind::univalent_node, "node '" + raw.nodes[v].id + "' is univalent");
    }
    if (!structural) return out;

    // Connectivity and spanning-tree translates of every node.
    std::vector<std::optional<Vec2>> potential(n);
    std::vector<Vec2> cycle_classes;
    std::size_t components = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (potential[root]) continue;
        ++components;
        potential[root] = Vec2{};
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto e : raw.rotations[v]) {
                const auto& ed = raw.edges[e];
                bool at_black = ed.black == v;
                auto u = at_black ? ed.white : ed.black;
                Vec2 pu = *potential[v] + (at_black ? ed.offset : -ed.offset);
                if (!potential[u]) {
                    potential[u] = pu;
                    queue.push_back(u);
                } else if (*potential[u] != pu) {
                    cycle_classes.push_back(pu - *potential[u]);
                }
            }
        }
    }
    if (components > 1) {
        add(IssueKind::disconnected,
            "graph has " + std::to_string(components) + " connected components; faces cannot all be discs");
    }

    auto faces = detail::trace_faces(raw, pos_black, pos_white);
    rep.faces = faces.size();
    auto euler = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(m) +
                 static_cast<std::int64_t>(faces.size());
    if (euler != 0) {
        add(IssueKind::euler_characteristic,
            "V - E + F = " + std::to_string(euler) + " (expected 0 for a cellular torus map)");
    }
    for (const auto& f : faces) {
        Vec2 sum;
        for (auto d : f) sum += d.forward ? raw.edges[d.edge].offset : -raw.edges[d.edge].offset;
        if (!sum.is_zero()) {
            std::ostringstream os;
            os << "face through '" << raw.edges[f.front().edge].id << "' has total offset " << sum;
            add(IssueKind::face_offset, os.str());
        }
    }
    // Cycle classes must generate Z^2: gcd of all 2x2 minors equals 1.
    std::int64_t g = 0;
    for (std::size_t i = 0; i < cycle_classes.size() && g != 1; ++i) {
        for (std::size_t j = i + 1; j < cycle_classes.size() && g != 1; ++j) {
            g = gcd64(g, intersection_pairing(cycle_classes[i], cycle_classes[j]));
        }
    }
    if (g != 1) {
        add(IssueKind::homology_rank, "cycle classes span a sublattice of index " + std::to_string(g) +
                                          " in H_1(T; Z) (expected 1)");
    }
    if (!rep.ok()) return out;

    TorusGraph tg;
    tg.raw_ = std::move(raw);
    tg.pos_black_ = std::move(pos_black);
    tg.pos_white_ = std::move(pos_white);
    tg.dart_face_.assign(2 * m, 0);
    tg.dart_face_pos_.assign(2 * m, 0);
    tg.dart_face_translate_.assign(2 * m, Vec2{});
    for (std::size_t f = 0; f < faces.size(); ++f) {
        Vec2 t;
        for (std::size_t k = 0; k < faces[f].size(); ++k) {
            auto d = faces[f][k];
            tg.dart_face_[d.index()] = f;
            tg.dart_face_pos_[d.index()] = k;
            tg.dart_face_translate_[d.index()] = t;
            t += d.forward ? tg.raw_.edges[d.edge].offset : -tg.raw_.edges[d.edge].offset;
        }
        tg.faces_.push_back({std::move(faces[f])});
    }
    for (std::size_t v = 0; v < n; ++v) tg.node_by_id_.emplace(tg.raw_.nodes[v].id, v);
    for (std::size_t e = 0; e < m; ++e) tg.edge_by_id_.emplace(tg.raw_.edges[e].id, e);
    if (tg.node_by_id_.size() != n || tg.edge_by_id_.size() != m) {
        out.report.issues.push_back({IssueKind::bad_reference, "node or edge ids are not unique"});
        return out;
    }
    out.graph = std::move(tg);
    return out;
}

/// Validates or throws ParseError carrying the full report.
inline TorusGraph validated(RawGraph raw) {
    auto out = validate(std::move(raw));
    if (!out.graph) throw ParseError("invalid dimer model:\n" + out.report.summary());
    return std::move(*out.graph);
}

// ---------------------------------------------------------------------------
// Walks and lifts

/// A lifted node of the universal cover R^2 -> T.
struct LiftedNode {
    std::size_t node = 0;
    Vec2 translate;
    auto operator<=>(const LiftedNode&) const = default;
};

/// Class of a closed walk: +offset for black->white steps, -offset otherwise.
inline HomologyClass cycle_homology(const TorusGraph& g, const std::vector<Dart>& walk) {
    Vec2 sum;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        if (g.head(walk[i]) != g.tail(walk[(i + 1) % walk.size()])) {
            throw DomainError("cycle_homology: walk is not closed and edge-consecutive");
        }
        sum += g.offset(walk[i]);
    }
    return sum;
}

/// Lifted nodes visited by `walk` starting at `start`; the result has
/// walk.size() + 1 entries.
inline std::vector<LiftedNode> lift_walk(const TorusGraph& g, LiftedNode start, const std::vector<Dart>& walk) {
    std::vector<LiftedNode> out{start};
    for (auto d : walk) {
        if (g.tail(d) != out.back().node) throw DomainError("lift_walk: walk is not edge-consecutive");
        out.push_back({g.head(d), out.back().translate + g.offset(d)});
    }
    return out;
}

/// An edge of the universal cover, named by the translate of its black end.
struct LiftedEdge {
    std::size_t edge = 0;
    Vec2 black;
    auto operator<=>(const LiftedEdge&) const = default;
};

inline LiftedEdge lifted_edge(const TorusGraph& g, Dart d, Vec2 tail_translate) {
    return {d.edge, d.forward ? tail_translate : tail_translate - g.edge(d.edge).offset};
}

// ---------------------------------------------------------------------------
// Edits. All of them return raw data; callers re-validate.

inline RawGraph remove_edges(const RawGraph& g, const std::set<std::string>& ids) {
    std::vector<bool> keep(g.edges.size(), true);
    for (const auto& id : ids) {
        auto e = g.find_edge(id);
        if (!e) throw DomainError("remove_edges: unknown edge '" + id + "'");
        keep[*e] = false;
    }
    return filter_graph(g, std::vector<bool>(g.nodes.size(), true), keep);
}

inline RawGraph remove_edges(const TorusGraph& g, const std::set<std::string>& ids) {
    return remove_edges(g.raw(), ids);
}

inline RawGraph remove_nodes(const RawGraph& g, const std::set<std::string>& ids) {
    std::vector<bool> keep(g.nodes.size(), true);
    for (const auto& id : ids) {
        auto v = g.find_node(id);
        if (!v) throw DomainError("remove_nodes: unknown node '" + id + "'");
        keep[*v] = false;
    }
    return filter_graph(g, keep, std::vector<bool>(g.edges.size(), true));
}

/// Ids of nodes lying in connected components all of whose cycles are
/// null-homologous (those components sit inside a disc of T).
inline std::set<std::string> null_homotopic_component_nodes(const RawGraph& g) {
    const auto n = g.nodes.size();
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        incident[g.edges[e].black].push_back(e);
        incident[g.edges[e].white].push_back(e);
    }
    std::vector<std::optional<Vec2>> potential(n);
    std::set<std::string> doomed;
    for (std::size_t root = 0; root < n; ++root) {
        if (potential[root]) continue;
        potential[root] = Vec2{};
        std::vector<std::size_t> members{root};
        bool essential = false;
        for (std::size_t i = 0; i < members.size(); ++i) {
            auto v = members[i];
            for (auto e : incident[v]) {
                const auto& ed = g.edges[e];
                bool at_black = ed.black == v;
                auto u = at_black ? ed.white : ed.black;
                Vec2 pu = *potential[v] + (at_black ? ed.offset : -ed.offset);
                if (!potential[u]) {
                    potential[u] = pu;
                    members.push_back(u);
                } else if (*potential[u] != pu) {
                    essential = true;
                }
            }
        }
        if (!essential) {
            for (auto v : members) doomed.insert(g.nodes[v].id);
        }
    }
    return doomed;
}

/// Removes every connected component contained in a simply-connected
/// domain of T (detected as: all its cycles have class (0,0)).
inline RawGraph delete_null_homotopic_components(const RawGraph& g) {
    auto doomed = null_homotopic_component_nodes(g);
    if (doomed.empty()) return g;
    return remove_nodes(g, doomed);
}

/// Ids of nodes removed by repeatedly deleting univalent nodes with their edge.
inline std::set<std::string> univalent_cascade(const RawGraph& g) {
    const auto n = g.nodes.size();
    std::vector<std::size_t> deg(n, 0);
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        ++deg[g.edges[e].black];
        ++deg[g.edges[e].white];
        incident[g.edges[e].black].push_back(e);
        incident[g.edges[e].white].push_back(e);
    }
    std::vector<bool> dead_edge(g.edges.size(), false);
    std::vector<bool> dead_node(n, false);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v) {
        if (deg[v] == 1) queue.push_back(v);
    }
    std::set<std::string> removed;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (dead_node[v] || deg[v] != 1) continue;
        dead_node[v] = true;
        removed.insert(g.nodes[v].id);
        for (auto e : incident[v]) {
            if (dead_edge[e]) continue;
            dead_edge[e] = true;
            auto u = g.edges[e].black == v ? g.edges[e].white : g.edges[e].black;
            --deg[v];
            if (--deg[u] == 1) queue.push_back(u);
        }
    }
    return removed;
}

inline RawGraph prune_univalent(const RawGraph& g) {
    auto doomed = univalent_cascade(g);
    if (doomed.empty()) return g;
    return remove_nodes(g, doomed);
}

// ---------------------------------------------------------------------------
// Regions of the universal cover cut out by a closed null-homologous walk.

/// A face of the universal cover: face index plus the translate of the tail
/// of the face's first dart.
struct LiftedFace {
    std::size_t face = 0;
    Vec2 frame;
    auto operator<=>(const LiftedFace&) const = default;
};

struct BoundedRegion {
    bool inside_is_left = true;
    std::set<LiftedFace> faces;
    /// Lifted edges bounding inside faces that are not on the loop itself.
    std::set<LiftedEdge> interior_edges;
};

/// Given a closed walk of class (0,0) whose lift is a simple loop, returns
/// the bounded complementary region. Both sides are flooded in lockstep and
/// the side that runs out of faces first is the bounded one.
inline BoundedRegion bounded_region(const TorusGraph& g, const std::vector<Dart>& loop) {
    if (!cycle_homology(g, loop).is_zero()) throw DomainError("bounded_region: loop is not null-homologous");
    std::set<LiftedEdge> on_loop;
    std::set<LiftedFace> seeds[2];
    Vec2 t;
    for (auto d : loop) {
        on_loop.insert(lifted_edge(g, d, t));
        seeds[0].insert({g.face_of(d), t - g.face_tail_translate(d)});
        auto r = d.reversed();
        Vec2 head = t + g.offset(d);
        seeds[1].insert({g.face_of(r), head - g.face_tail_translate(r)});
        t += g.offset(d);
    }
    struct Flood {
        std::set<LiftedFace> seen;
        std::deque<LiftedFace> queue;
        std::set<LiftedEdge> interior;
    } flood[2];
    for (int s = 0; s < 2; ++s) {
        for (const auto& f : seeds[s]) {
            flood[s].seen.insert(f);
            flood[s].queue.push_back(f);
        }
    }
    // Expand one face on a side; returns false when that side is exhausted.
    auto step = [&](Flood& fl) {
        if (fl.queue.empty()) return false;
        auto lf = fl.queue.front();
        fl.queue.pop_front();
        for (auto d : g.faces()[lf.face].darts) {
            Vec2 tail = lf.frame + g.face_tail_translate(d);
            auto le = lifted_edge(g, d, tail);
            if (on_loop.count(le)) continue;
            fl.interior.insert(le);
            auto r = d.reversed();
            LiftedFace next{g.face_of(r), tail + g.offset(d) - g.face_tail_translate(r)};
            if (fl.seen.insert(next).second) fl.queue.push_back(next);
        }
        return true;
    };
    const std::size_t cap = 64 * (g.faces().size() + 1) * (loop.size() + 1) * (loop.size() + 1) + 4096;
    while (true) {
        bool left_alive = step(flood[0]);
        bool right_alive = step(flood[1]);
        if (!left_alive || !right_alive) {
            int s = !left_alive ? 0 : 1;
            return {s == 0, std::move(flood[s].seen), std::move(flood[s].interior)};
        }
        if (flood[0].seen.size() > cap && flood[1].seen.size() > cap) {
            throw InternalError("bounded_region: neither side of the loop is bounded (loop not simple?)");
        }
    }
}

/// Contracts a null-homologous loop that has no edge strictly inside it and
/// all of whose nodes of one color have no edges off the loop: those nodes
/// and the loop edges are removed and the remaining loop nodes are merged
/// into one node (keeping the id of the first of them along the loop). The
/// loop may pass through a node more than once.
inline RawGraph contract_trivial_loop(const TorusGraph& g, const std::vector<Dart>& loop) {
    if (loop.empty()) throw DomainError("contract: empty loop");
    if (!cycle_homology(g, loop).is_zero()) throw DomainError("contract: loop is not homologically trivial");
    auto region = bounded_region(g, loop);
    if (!region.interior_edges.empty()) throw DomainError("contract: loop has an edge strictly inside");

    // Occurrence k is the tail of loop[k], with its lifted translate.
    const auto len = loop.size();
    std::vector<std::size_t> node(len);
    std::vector<Vec2> where(len);
    Vec2 t;
    std::vector<bool> on_loop(g.edge_count(), false);
    std::map<std::size_t, std::size_t> visits;
    for (std::size_t k = 0; k < len; ++k) {
        node[k] = g.tail(loop[k]);
        where[k] = t;
        t += g.offset(loop[k]);
        on_loop[loop[k].edge] = true;
        ++visits[node[k]];
    }
    auto enclosed = [&](Color c) {
        bool any = false;
        for (auto [v, count] : visits) {
            if (g.color(v) != c) continue;
            any = true;
            if (g.degree(v) != 2 * count) return false;
        }
        return any;
    };
    Color removed_color;
    if (enclosed(Color::white)) {
        removed_color = Color::white;
    } else if (enclosed(Color::black)) {
        removed_color = Color::black;
    } else {
        throw DomainError("contract: nodes of neither color lie only on the loop");
    }
    const Color kept_color = removed_color == Color::white ? Color::black : Color::white;

    std::vector<std::size_t> kept;  // loop positions of merged occurrences, in loop order
    for (std::size_t k = 0; k < len; ++k) {
        if (g.color(node[k]) == kept_color) kept.push_back(k);
    }
    if (!region.inside_is_left) std::reverse(kept.begin(), kept.end());

    std::vector<bool> keep_node(g.node_count(), true);
    std::vector<bool> keep_edge(g.edge_count(), true);
    for (auto d : loop) keep_edge[d.edge] = false;
    for (std::size_t k = 0; k < len; ++k) {
        if (g.color(node[k]) == removed_color) keep_node[node[k]] = false;
    }

    RawGraph work = g.raw();
    const std::size_t target = node[kept.front()];
    const Vec2 base = where[kept.front()];
    std::vector<std::size_t> merged_rotation;
    for (auto k : kept) {
        auto v = node[k];
        auto in = loop[(k + len - 1) % len].edge;
        auto out = loop[k].edge;
        // The outside wedge starts next to `in` (inside on the left) or next
        // to `out` (inside on the right) and ends at the next loop edge.
        std::vector<std::size_t> outward;
        if (region.inside_is_left) {
            if (g.pred(v, in) != out) throw DomainError("contract: loop wedge at a merged node is not empty");
            for (auto e = g.succ(v, in); !on_loop[e]; e = g.succ(v, e)) outward.push_back(e);
        } else {
            if (g.succ(v, in) != out) throw DomainError("contract: loop wedge at a merged node is not empty");
            for (auto e = g.succ(v, out); !on_loop[e]; e = g.succ(v, e)) outward.push_back(e);
        }
        Vec2 shift = where[k] - base;
        for (auto e : outward) {
            auto& ed = work.edges[e];
            if (kept_color == Color::black) {
                ed.black = target;
                ed.offset += shift;
            } else {
                ed.white = target;
                ed.offset -= shift;
            }
            merged_rotation.push_back(e);
        }
        if (v != target) keep_node[v] = false;
    }
    work.rotations[target] = std::move(merged_rotation);
    return filter_graph(work, keep_node, keep_edge);
}

}  // namespace dimer
