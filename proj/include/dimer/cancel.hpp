#pragma once

// Edge-removal algorithms that make a dimer model consistent while keeping
// either its zigzag polygon or its characteristic polygon. Every step is
// recorded in a RewriteLog that can be replayed on the input.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"
#include "dimer/matchings.hpp"
#include "dimer/torus_graph.hpp"
#include "dimer/zigzag.hpp"

namespace dimer {

// ---------------------------------------------------------------------------
// Rewrite log

struct RewriteAction {
    enum class Kind { remove_edges, remove_nodes, contract_loop, flip };
    Kind kind = Kind::remove_edges;
    /// Edge ids, node ids, or dart labels ("id+" / "id-") of the contracted loop.
    std::vector<std::string> ids;
    /// For flips: which matching of the corner pair (1 or 2).
    int matching = 0;
};

inline const char* to_string(RewriteAction::Kind k) {
    switch (k) {
        case RewriteAction::Kind::remove_edges: return "remove_edges";
        case RewriteAction::Kind::remove_nodes: return "remove_nodes";
        case RewriteAction::Kind::contract_loop: return "contract_loop";
        case RewriteAction::Kind::flip: return "flip";
    }
    return "unknown";
}

struct RewriteStep {
    std::string rule;
    std::string detail;
    std::vector<RewriteAction> actions;
    std::size_t edges_after = 0;
    /// Flips only: a quantity that strictly decreases along consecutive flips
    /// of the same kind (see the flip functions).
    std::optional<std::int64_t> potential;
};

struct RewriteLog {
    std::vector<RewriteStep> steps;

    void append(const RewriteLog& other) { steps.insert(steps.end(), other.steps.begin(), other.steps.end()); }

    std::string to_jsonl() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto& s = steps[k];
            nlohmann::ordered_json j;
            j["step"] = k;
            j["rule"] = s.rule;
            j["detail"] = s.detail;
            auto acts = nlohmann::ordered_json::array();
            for (const auto& a : s.actions) {
                nlohmann::ordered_json ja{{"op", to_string(a.kind)}, {"ids", a.ids}};
                if (a.kind == RewriteAction::Kind::flip) ja["matching"] = a.matching;
                acts.push_back(std::move(ja));
            }
            j["actions"] = std::move(acts);
            j["edges_after"] = s.edges_after;
            if (s.potential) j["potential"] = *s.potential;
            os << j.dump() << '\n';
        }
        return os.str();
    }

    static RewriteLog from_jsonl(const std::string& text) {
        RewriteLog log;
        std::istringstream in(text);
        std::string line;
        try {
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                auto j = nlohmann::json::parse(line);
                RewriteStep s;
                s.rule = j.at("rule").get<std::string>();
                s.detail = j.value("detail", std::string{});
                s.edges_after = j.at("edges_after").get<std::size_t>();
                if (j.contains("potential")) s.potential = j["potential"].get<std::int64_t>();
                for (const auto& ja : j.at("actions")) {
                    RewriteAction a;
                    auto op = ja.at("op").get<std::string>();
                    if (op == "remove_edges") {
                        a.kind = RewriteAction::Kind::remove_edges;
                    } else if (op == "remove_nodes") {
                        a.kind = RewriteAction::Kind::remove_nodes;
                    } else if (op == "contract_loop") {
                        a.kind = RewriteAction::Kind::contract_loop;
                    } else if (op == "flip") {
                        a.kind = RewriteAction::Kind::flip;
                        a.matching = ja.at("matching").get<int>();
                    } else {
                        throw ParseError("rewrite log: unknown op '" + op + "'");
                    }
                    a.ids = ja.at("ids").get<std::vector<std::string>>();
                    s.actions.push_back(std::move(a));
                }
                log.steps.push_back(std::move(s));
            }
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("rewrite log: ") + ex.what());
        }
        return log;
    }
};

inline std::vector<Dart> parse_dart_labels(const TorusGraph& g, const std::vector<std::string>& labels) {
    std::vector<Dart> out;
    for (const auto& l : labels) {
        if (l.size() < 2 || (l.back() != '+' && l.back() != '-')) throw ParseError("bad dart label '" + l + "'");
        out.push_back({g.edge_index(l.substr(0, l.size() - 1)), l.back() == '+'});
    }
    return out;
}

inline RawGraph apply_action(const RawGraph& g, const RewriteAction& a) {
    switch (a.kind) {
        case RewriteAction::Kind::remove_edges:
            return remove_edges(g, std::set<std::string>(a.ids.begin(), a.ids.end()));
        case RewriteAction::Kind::remove_nodes:
            return remove_nodes(g, std::set<std::string>(a.ids.begin(), a.ids.end()));
        case RewriteAction::Kind::contract_loop: {
            auto tg = validated(g);
            return contract_trivial_loop(tg, parse_dart_labels(tg, a.ids));
        }
        case RewriteAction::Kind::flip:
            return g;
    }
    return g;
}

/// Re-applies every graph action of a log to its input.
inline RawGraph replay(const RawGraph& input, const RewriteLog& log) {
    RawGraph g = input;
    for (const auto& s : log.steps) {
        for (const auto& a : s.actions) g = apply_action(g, a);
        if (g.edges.size() != s.edges_after) {
            throw DomainError("replay: edge count after step '" + s.rule + "' differs from the log");
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Shared helpers

/// Removes univalent nodes (repeatedly) and components inside discs of T.
/// Returns the removed node ids; isolated nodes count as such components.
inline std::vector<std::string> cleanup_nodes(RawGraph& g) {
    std::set<std::string> all;
    while (true) {
        auto uni = univalent_cascade(g);
        if (!uni.empty()) g = remove_nodes(g, uni);
        auto nh = null_homotopic_component_nodes(g);
        if (!nh.empty()) g = remove_nodes(g, nh);
        if (uni.empty() && nh.empty()) break;
        all.insert(uni.begin(), uni.end());
        all.insert(nh.begin(), nh.end());
    }
    return {all.begin(), all.end()};
}

inline std::vector<std::string> edge_ids(const TorusGraph& g, const std::vector<std::size_t>& edges) {
    std::set<std::string> ids;
    for (auto e : edges) ids.insert(g.edge(e).id);
    return {ids.begin(), ids.end()};
}

/// Removes edges, cleans up, and records the step.
inline RawGraph remove_and_log(const TorusGraph& g, const std::vector<std::string>& ids, std::string rule,
                               std::string detail, RewriteLog& log) {
    RewriteStep step;
    step.rule = std::move(rule);
    step.detail = std::move(detail);
    auto raw = remove_edges(g, std::set<std::string>(ids.begin(), ids.end()));
    step.actions.push_back({RewriteAction::Kind::remove_edges, ids, 0});
    auto nodes = cleanup_nodes(raw);
    if (!nodes.empty()) step.actions.push_back({RewriteAction::Kind::remove_nodes, nodes, 0});
    step.edges_after = raw.edges.size();
    log.steps.push_back(std::move(step));
    return raw;
}

inline TorusGraph validated_step(const RawGraph& raw, const std::string& where) {
    auto v = validate(raw);
    if (!v.graph) throw InternalError(where + ": result is not a dimer model:\n" + v.report.summary());
    return std::move(*v.graph);
}

// ---------------------------------------------------------------------------
// Preserving the zigzag polygon

namespace detail {

/// For a trivial zigzag z: every pair of edges of z that are consecutive
/// intersections with a lift of another zigzag path w, over all w and all
/// lifts of w through an edge of z. Pairs are listed by w, then by position.
inline std::vector<std::vector<std::size_t>> trivial_zigzag_crossing_edges(const TorusGraph& g,
                                                                           const ZigzagSystem& sys, std::size_t zi) {
    const auto& z = sys.paths[zi];
    std::set<std::size_t> others;
    for (auto d : z.darts) {
        auto wi = sys.path_of_dart[d.reversed().index()];
        if (wi != zi) others.insert(wi);
    }
    std::map<LiftedEdge, std::size_t> on_z;
    std::int64_t span = 0;
    for (std::size_t i = 0; i < z.length(); ++i) {
        auto le = z.lifted_edge_at(g, static_cast<std::int64_t>(i));
        on_z[le] = i;
        span = std::max({span, std::abs(le.black.x), std::abs(le.black.y)});
    }
    std::vector<std::vector<std::size_t>> out;
    auto add = [&](std::vector<std::size_t> es) {
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        if (std::find(out.begin(), out.end(), es) == out.end()) out.push_back(std::move(es));
    };
    for (auto wi : others) {
        const auto& w = sys.paths[wi];
        const auto M = static_cast<std::int64_t>(w.length());
        std::int64_t wobble = 0;
        for (auto t : w.tail) wobble = std::max({wobble, std::abs(t.x), std::abs(t.y)});
        std::vector<Vec2> tried;
        for (std::size_t j = 0; j < w.length(); ++j) {
            for (std::size_t i = 0; i < z.length(); ++i) {
                if (z.darts[i].edge != w.darts[j].edge) continue;
                Vec2 tau = z.lifted_edge_at(g, static_cast<std::int64_t>(i)).black -
                           w.lifted_edge_at(g, static_cast<std::int64_t>(j)).black;
                // Lifts of w that differ by a multiple of its slope are the same.
                if (std::any_of(tried.begin(), tried.end(), [&](Vec2 u) {
                        Vec2 d = tau - u;
                        if (w.trivial()) return d == Vec2{};
                        return intersection_pairing(d, w.slope) == 0 &&
                               (w.slope.x != 0 ? d.x % w.slope.x == 0 : d.y % w.slope.y == 0);
                    })) {
                    continue;
                }
                tried.push_back(tau);
                const auto j0 = static_cast<std::int64_t>(j);
                const std::int64_t periods =
                    w.trivial() ? 0 : span + 2 * wobble + std::abs(tau.x) + std::abs(tau.y) + 2;
                const std::int64_t lo = j0 - periods * M;
                const std::int64_t hi = w.trivial() ? j0 + M - 1 : j0 + periods * M;
                std::vector<std::int64_t> shared;
                for (auto q = lo; q <= hi; ++q) {
                    if (on_z.count(w.lifted_edge_at(g, q, tau))) shared.push_back(q);
                }
                if (w.trivial() && shared.size() > 1) shared.push_back(shared.front() + M);
                for (std::size_t k = 0; k + 1 < shared.size(); ++k) {
                    add({w.darts[w.split(shared[k]).second].edge, w.darts[w.split(shared[k + 1]).second].edge});
                }
            }
        }
    }
    return out;
}

/// Whether all nodes of one color on the loop are divalent.
inline bool has_divalent_side(const TorusGraph& g, const ZigzagPath& z) {
    for (Color c : {Color::white, Color::black}) {
        bool all = true;
        for (auto d : z.darts) {
            auto v = g.tail(d);
            if (g.color(v) == c && g.degree(v) != 2) all = false;
        }
        if (all) return true;
    }
    return false;
}

/// Whether removing `ids` and cleaning up leaves a dimer model with the given
/// zigzag polygon.
inline bool removal_keeps_polygon(const TorusGraph& g, const std::vector<std::string>& ids,
                                  const LatticePolygon& target) {
    auto raw = remove_edges(g, std::set<std::string>(ids.begin(), ids.end()));
    cleanup_nodes(raw);
    auto v = validate(std::move(raw));
    return v.graph && zigzag_polygon(*v.graph) == target;
}

}  // namespace detail

struct CancelResult {
    RawGraph graph;
    RewriteLog log;
};

/// Removes edges (and contracts empty trivial zigzag loops) until the model
/// is consistent. The zigzag polygon, which must be non-degenerate, is
/// checked after every step.
inline CancelResult cancellativize_zigzag(const TorusGraph& input) {
    const auto target = zigzag_polygon(input);
    if (!is_nondegenerate(target)) throw DomainError("cancellativize_zigzag: zigzag polygon is degenerate");
    const auto guard = 4 * input.edge_count() * input.edge_count() + 4;
    CancelResult out;
    RawGraph cur = input.raw();
    for (std::size_t step = 0;; ++step) {
        if (step > guard) throw InternalError("cancellativize_zigzag: step guard exceeded");
        auto g = validated_step(cur, "cancellativize_zigzag");
        auto sys = zigzag_paths(g);
        if (auto r = find_self_intersection(g, sys)) {
            cur = remove_and_log(g, edge_ids(g, r->edges), "self_intersection", r->describe(g), out.log);
        } else if (auto t = find_trivial_zigzag(g, sys)) {
            const auto& z = sys.paths[t->path];
            auto region = bounded_region(g, z.darts);
            if (region.interior_edges.empty() && detail::has_divalent_side(g, z)) {
                RewriteStep s;
                s.rule = "trivial_zigzag_contract";
                s.detail = t->describe(g);
                std::vector<std::string> labels;
                for (auto d : z.darts) labels.push_back(g.dart_label(d));
                cur = contract_trivial_loop(g, z.darts);
                s.actions.push_back({RewriteAction::Kind::contract_loop, labels, 0});
                auto nodes = cleanup_nodes(cur);
                if (!nodes.empty()) s.actions.push_back({RewriteAction::Kind::remove_nodes, nodes, 0});
                s.edges_after = cur.edges.size();
                out.log.steps.push_back(std::move(s));
            } else {
                std::optional<std::vector<std::string>> chosen;
                for (const auto& es : detail::trivial_zigzag_crossing_edges(g, sys, t->path)) {
                    auto ids = edge_ids(g, es);
                    if (detail::removal_keeps_polygon(g, ids, target)) {
                        chosen = std::move(ids);
                        break;
                    }
                }
                if (!chosen) {
                    throw InternalError("cancellativize_zigzag: no crossing pair of the trivial zigzag keeps the polygon (" +
                                        t->describe(g) + ")");
                }
                cur = remove_and_log(g, *chosen, "trivial_zigzag_crossing", t->describe(g), out.log);
            }
        } else if (auto d = find_double_intersection(g, sys)) {
            auto usable = find_double_intersection(g, sys, [&](const IntersectionReport& r) {
                return detail::removal_keeps_polygon(g, edge_ids(g, r.edges), target);
            });
            if (!usable) {
                throw InternalError("cancellativize_zigzag: no double intersection whose removal keeps the polygon (" +
                                    d->describe(g) + ")");
            }
            cur = remove_and_log(g, edge_ids(g, usable->edges), "double_intersection", usable->describe(g), out.log);
        } else {
            out.graph = std::move(cur);
            return out;
        }
        auto next = validated_step(cur, "cancellativize_zigzag after " + out.log.steps.back().rule);
        auto poly = zigzag_polygon(next);
        if (poly != target) {
            std::ostringstream os;
            os << "cancellativize_zigzag: zigzag polygon changed from " << target << " to " << poly << " by "
               << out.log.steps.back().rule << " (" << out.log.steps.back().detail << ")";
            throw InternalError(os.str());
        }
    }
}

// ---------------------------------------------------------------------------
// Preserving the characteristic polygon

/// A perfect matching named by edge ids, so it survives edge removals.
using MatchingIds = std::set<std::string>;

inline MatchingIds matching_ids(const TorusGraph& g, const PerfectMatching& d) {
    MatchingIds out;
    for (auto e : d.edges) out.insert(g.edge(e).id);
    return out;
}

/// The matching on g made of those ids that are still edges of g.
inline PerfectMatching matching_on(const TorusGraph& g, const MatchingIds& ids) {
    PerfectMatching d;
    for (const auto& id : ids) {
        if (auto e = g.find_edge(id)) d.edges.push_back(*e);
    }
    std::sort(d.edges.begin(), d.edges.end());
    if (!is_perfect_matching(g, d)) throw InternalError("matching_on: matching is no longer perfect");
    return d;
}

/// Two perfect matchings at adjacent corners of the characteristic polygon
/// (counter-clockwise) and the ordered non-trivial components of their
/// symmetric difference. `order[k]` indexes `diff.components`; each is
/// immediately to the right of the previous one.
struct CornerPairState {
    Vec2 c1;
    Vec2 c2;
    PerfectMatching d1;
    PerfectMatching d2;
    SymmetricDifference diff;
    std::vector<std::size_t> order;

    const DartCycle& component(std::size_t k) const { return diff.components[order[k]]; }
    std::size_t size() const { return order.size(); }
};

struct CharOptions {
    /// Recompute the characteristic polygon after every edge removal.
    bool verify_each_removal = true;
};

/// A cycle is a zigzag path when it has no edge on its right at white nodes
/// and none on its left at black nodes.
inline bool is_zigzag_cycle(const TorusGraph& g, const std::vector<Dart>& cycle) {
    const auto n = cycle.size();
    for (std::size_t k = 0; k < n; ++k) {
        auto in = cycle[k];
        auto out = cycle[(k + 1) % n];
        auto v = g.head(in);
        auto side = g.color(v) == Color::white ? g.edges_on_right(v, in.edge, out.edge)
                                                : g.edges_on_left(v, in.edge, out.edge);
        if (!side.empty()) return false;
    }
    return true;
}

namespace detail {

/// Position of the component containing node v, per node (SIZE_MAX if none),
/// and the darts entering and leaving v along it.
struct ComponentIndex {
    std::vector<std::size_t> comp;
    std::vector<std::pair<Dart, Dart>> through;

    ComponentIndex(const TorusGraph& g, const CornerPairState& st)
        : comp(g.node_count(), SIZE_MAX), through(g.node_count()) {
        for (std::size_t k = 0; k < st.size(); ++k) {
            const auto& c = st.component(k).darts;
            for (std::size_t i = 0; i < c.size(); ++i) {
                auto v = g.head(c[i]);
                comp[v] = k;
                through[v] = {c[i], c[(i + 1) % c.size()]};
            }
        }
    }
};

inline std::vector<std::size_t> common_mates(const TorusGraph& g, const CornerPairState& st) {
    std::vector<std::size_t> mate(g.node_count(), SIZE_MAX);
    for (auto e : st.d1.edges) {
        if (!st.d2.contains(e)) continue;
        mate[g.edge(e).black] = mate[g.edge(e).white] = e;
    }
    return mate;
}

}  // namespace detail

/// Builds the state for the given matchings. Components that are
/// homologically trivial are flipped away in d1 first (each flip is logged).
inline CornerPairState make_corner_pair_state(const TorusGraph& g, Vec2 c1, Vec2 c2, PerfectMatching d1,
                                              PerfectMatching d2, RewriteLog* log = nullptr) {
    while (true) {
        auto sd = symmetric_difference(g, d1, d2);
        auto trivial = std::find_if(sd.components.begin(), sd.components.end(),
                                    [](const DartCycle& c) { return c.homology.is_zero(); });
        if (trivial == sd.components.end()) {
            CornerPairState st{c1, c2, std::move(d1), std::move(d2), std::move(sd), {}};
            st.order = order_components(g, st.diff);
            return st;
        }
        std::size_t remaining = 0;
        for (const auto& c : sd.components) remaining += c.homology.is_zero() ? 1 : 0;
        d1 = flip(g, d1, *trivial);
        if (log) {
            RewriteStep s;
            s.rule = "trivial_component_flip";
            std::vector<std::string> ids;
            for (auto d : trivial->darts) ids.push_back(g.edge(d.edge).id);
            s.detail = "flip matching 1 along a homologically trivial component of length " +
                       std::to_string(trivial->darts.size());
            s.actions.push_back({RewriteAction::Kind::flip, std::move(ids), 1});
            s.edges_after = g.edge_count();
            s.potential = static_cast<std::int64_t>(remaining) - 1;
            log->steps.push_back(std::move(s));
        }
    }
}

/// Whether a path alternating with d1 and d2's common edges runs from a white
/// node of component k (leaving it on the right) to a black node of component
/// k + 1 (reaching it from the left).
inline bool has_strip_path(const TorusGraph& g, const CornerPairState& st, std::size_t k) {
    detail::ComponentIndex ix(g, st);
    auto mate = detail::common_mates(g, st);
    const auto target = (k + 1) % st.size();
    std::vector<bool> seen(g.node_count(), false);
    std::deque<std::pair<std::size_t, std::size_t>> queue;  // (black node, edge used to reach it)
    const auto& z = st.component(k).darts;
    for (std::size_t i = 0; i < z.size(); ++i) {
        auto in = z[i];
        auto out = z[(i + 1) % z.size()];
        auto v = g.head(in);
        if (g.color(v) != Color::white) continue;
        for (auto e : g.edges_on_right(v, in.edge, out.edge)) queue.emplace_back(g.edge(e).black, e);
    }
    while (!queue.empty()) {
        auto [b, via] = queue.front();
        queue.pop_front();
        if (ix.comp[b] != SIZE_MAX) {
            if (ix.comp[b] != target) continue;
            auto [in, out] = ix.through[b];
            auto left = g.edges_on_left(b, in.edge, out.edge);
            if (std::find(left.begin(), left.end(), via) != left.end()) return true;
            continue;
        }
        if (seen[b]) continue;
        seen[b] = true;
        auto f = mate[b];
        if (f == SIZE_MAX) throw InternalError("has_strip_path: node off the components is not matched by both");
        auto w = g.edge(f).white;
        for (auto e : g.rotation(w)) {
            if (e != f) queue.emplace_back(g.edge(e).black, e);
        }
    }
    return false;
}

/// Least position k whose component is not yet a zigzag path and admits no
/// path to the next component.
inline std::size_t find_no_path_component(const TorusGraph& g, const CornerPairState& st) {
    for (std::size_t k = 0; k < st.size(); ++k) {
        if (is_zigzag_cycle(g, st.component(k).darts)) continue;
        if (!has_strip_path(g, st, k)) return k;
    }
    throw InternalError("find_no_path_component: every non-zigzag component has a path to the next one");
}

/// Flips d1 or d2 along trivial cycles until component k has no edge on its
/// right at white nodes. Height changes are unchanged. Each flip moves the
/// component across the disc bounded by the flipped cycle into the strip on
/// its right; the logged potential is the number of faces of that strip at
/// the start minus the faces crossed so far, and stays non-negative.
inline CornerPairState make_zigzag_at_white(const TorusGraph& g, CornerPairState st, std::size_t k,
                                            const MatchingCensus& census, RewriteLog& log) {
    const auto class1 = matching_chain_class(g, st.d1);
    const auto class2 = matching_chain_class(g, st.d2);
    const std::size_t guard = 4 * g.edge_count() * g.edge_count() + 4;
    auto budget = static_cast<std::int64_t>(strip_right_of(g, st.diff.components, st.order[k]).faces.size());
    for (std::size_t round = 0;; ++round) {
        if (round > guard) throw InternalError("make_zigzag_at_white: step guard exceeded");
        const auto& z = st.component(k).darts;
        auto bad = is_zigzag_at_white(g, z);
        if (!bad) return st;
        const auto w = bad->node;
        const auto e = bad->edge;
        auto di = census.first_containing(e);
        if (!di) throw DomainError("make_zigzag_at_white: no perfect matching contains edge '" + g.edge(e).id + "'");
        const auto& d = census.matchings[*di];
        std::vector<std::size_t> mate_d(g.node_count(), SIZE_MAX);
        for (auto x : d.edges) mate_d[g.edge(x).black] = mate_d[g.edge(x).white] = x;
        detail::ComponentIndex ix(g, st);
        auto mate = detail::common_mates(g, st);

        // The arc q of d xor (d1 and d2) leaving w along e.
        std::vector<Dart> q{g.dart_from(w, e)};
        auto b = g.edge(e).black;
        while (ix.comp[b] == SIZE_MAX) {
            auto f = mate[b];
            auto w2 = g.edge(f).white;
            auto x = mate_d[w2];
            if (f == SIZE_MAX || x == SIZE_MAX || x == f) throw InternalError("make_zigzag_at_white: arc q is broken");
            q.push_back(g.dart_from(b, f));
            q.push_back(g.dart_from(w2, x));
            b = g.edge(x).black;
            if (q.size() > 2 * g.edge_count()) throw InternalError("make_zigzag_at_white: arc q does not end");
        }
        if (ix.comp[b] != k) {
            throw InternalError("make_zigzag_at_white: arc q from '" + g.node(w).id + "' ends on another component");
        }
        // Positions of w and b along z (as heads of darts).
        const auto n = z.size();
        std::size_t pw = n;
        std::size_t pb = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (g.head(z[i]) == w) pw = i;
            if (g.head(z[i]) == b) pb = i;
        }
        // q then back along z from b to w, or q then forward along z from b to w.
        std::vector<Dart> backward = q;
        for (auto i = pb; i != pw; i = (i + n - 1) % n) backward.push_back(z[i].reversed());
        std::vector<Dart> forward = q;
        for (auto i = (pb + 1) % n;; i = (i + 1) % n) {
            forward.push_back(z[i]);
            if (i == pw) break;
        }
        DartCycle cyc;
        int which;
        if (cycle_homology(g, backward).is_zero()) {
            // q' runs from w to b along z: flip d2.
            cyc = {backward, {}};
            which = 2;
        } else if (cycle_homology(g, forward).is_zero()) {
            cyc = {forward, {}};
            which = 1;
        } else {
            throw InternalError("make_zigzag_at_white: neither q + q' is homologically trivial");
        }
        try {
            if (which == 2) {
                st.d2 = flip(g, st.d2, cyc);
            } else {
                st.d1 = flip(g, st.d1, cyc);
            }
        } catch (const DomainError& ex) {
            throw InternalError(std::string("make_zigzag_at_white: ") + ex.what());
        }
        if (matching_chain_class(g, st.d1) != class1 || matching_chain_class(g, st.d2) != class2) {
            throw InternalError("make_zigzag_at_white: a flip changed a height change");
        }
        st = make_corner_pair_state(g, st.c1, st.c2, std::move(st.d1), std::move(st.d2));
        // The updated component is the one through e.
        std::size_t nk = st.size();
        for (std::size_t i = 0; i < st.size(); ++i) {
            if (st.component(i).uses_edge(e)) nk = i;
        }
        if (nk == st.size()) throw InternalError("make_zigzag_at_white: updated component not found");
        k = nk;
        RewriteStep s;
        s.rule = "zigzag_at_white_flip";
        s.detail = "edge '" + g.edge(e).id + "' on the right of white node '" + g.node(w).id + "'";
        std::vector<std::string> ids;
        for (auto dt : cyc.darts) ids.push_back(g.edge(dt.edge).id);
        s.actions.push_back({RewriteAction::Kind::flip, std::move(ids), which});
        s.edges_after = g.edge_count();
        budget -= static_cast<std::int64_t>(bounded_region(g, cyc.darts).faces.size());
        s.potential = budget;
        log.steps.push_back(std::move(s));
    }
}

/// First edge attached from the left to a black node of component k.
inline std::optional<std::size_t> left_black_edge(const TorusGraph& g, const DartCycle& z) {
    const auto n = z.darts.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto in = z.darts[i];
        auto out = z.darts[(i + 1) % n];
        auto v = g.head(in);
        if (g.color(v) != Color::black) continue;
        auto left = g.edges_on_left(v, in.edge, out.edge);
        if (!left.empty()) return left.front();
    }
    return std::nullopt;
}

namespace detail {

/// Removes `ids`, then every edge in no perfect matching and every component
/// inside a disc, logging the difference as one step.
inline RawGraph remove_and_restrict(const TorusGraph& g, const std::vector<std::string>& ids, std::string rule,
                                    std::string detail, RewriteLog& log) {
    auto raw = restrict_to_matched(remove_edges(g, std::set<std::string>(ids.begin(), ids.end())));
    std::set<std::string> kept_edges;
    std::set<std::string> kept_nodes;
    for (const auto& e : raw.edges) kept_edges.insert(e.id);
    for (const auto& v : raw.nodes) kept_nodes.insert(v.id);
    std::vector<std::string> gone_edges;
    std::vector<std::string> gone_nodes;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (!kept_edges.count(g.edge(e).id)) gone_edges.push_back(g.edge(e).id);
    }
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (!kept_nodes.count(g.node(v).id)) gone_nodes.push_back(g.node(v).id);
    }
    std::sort(gone_edges.begin(), gone_edges.end());
    RewriteStep s;
    s.rule = std::move(rule);
    s.detail = std::move(detail);
    s.actions.push_back({RewriteAction::Kind::remove_edges, gone_edges, 0});
    if (!gone_nodes.empty()) s.actions.push_back({RewriteAction::Kind::remove_nodes, gone_nodes, 0});
    s.edges_after = raw.edges.size();
    log.steps.push_back(std::move(s));
    return raw;
}

}  // namespace detail

/// Removes one edge attached from the left to a black node of component k,
/// which must be zigzag at white nodes. Returns nullopt when there is none.
inline std::optional<RawGraph> remove_left_black_edge(const TorusGraph& g, const CornerPairState& st, std::size_t k,
                                                      RewriteLog& log, const CharOptions& opt = {}) {
    const auto& z = st.component(k);
    if (is_zigzag_at_white(g, z.darts)) throw DomainError("remove_left_black_edge: component is not zigzag at white");
    auto e = left_black_edge(g, z);
    if (!e) return std::nullopt;
    auto before = opt.verify_each_removal ? characteristic_polygon(g) : LatticePolygon{};
    auto raw = detail::remove_and_restrict(g, {g.edge(*e).id}, "left_black_edge",
                                           "edge '" + g.edge(*e).id + "' on the left of a black node", log);
    if (opt.verify_each_removal) {
        auto after = characteristic_polygon(validated_step(raw, "remove_left_black_edge"));
        if (after != before) {
            std::ostringstream os;
            os << "remove_left_black_edge: characteristic polygon changed from " << before << " to " << after
               << " by removing '" << g.edge(*e).id << "'";
            throw InternalError(os.str());
        }
    }
    return raw;
}

struct CornerPairResult {
    RawGraph graph;
    MatchingIds d1;
    MatchingIds d2;
    bool removed = false;
};

/// Makes every component of d1 xor d2 a zigzag path, removing edges from the
/// left of black nodes and flipping the matchings along trivial cycles.
inline CornerPairResult process_corner_pair(const TorusGraph& input, Vec2 c1, Vec2 c2, const MatchingIds& d1,
                                            const MatchingIds& d2, RewriteLog& log, const CharOptions& opt = {}) {
    CornerPairResult out{input.raw(), d1, d2, false};
    const std::size_t guard = 4 * input.edge_count() * input.edge_count() + 4;
    for (std::size_t round = 0;; ++round) {
        if (round > guard) throw InternalError("process_corner_pair: step guard exceeded");
        auto g = validated_step(out.graph, "process_corner_pair");
        auto census = MatchingCensus::of(g);
        auto st = make_corner_pair_state(g, c1, c2, matching_on(g, out.d1), matching_on(g, out.d2), &log);
        out.d1 = matching_ids(g, st.d1);
        out.d2 = matching_ids(g, st.d2);
        bool all = true;
        for (std::size_t k = 0; k < st.size(); ++k) all = all && is_zigzag_cycle(g, st.component(k).darts);
        if (all) return out;
        auto k = find_no_path_component(g, st);
        auto first = st.component(k).darts.front().edge;
        st = make_zigzag_at_white(g, std::move(st), k, census, log);
        out.d1 = matching_ids(g, st.d1);
        out.d2 = matching_ids(g, st.d2);
        // Locate the component again: it still runs through any edge of it
        // that the flips did not move; otherwise take the non-zigzag one
        // that is zigzag at white.
        std::optional<std::size_t> at;
        for (std::size_t i = 0; i < st.size(); ++i) {
            const auto& c = st.component(i);
            if (!is_zigzag_at_white(g, c.darts) && !is_zigzag_cycle(g, c.darts)) {
                if (!at || c.uses_edge(first)) at = i;
            }
        }
        if (!at) continue;  // the component became a zigzag path
        if (auto raw = remove_left_black_edge(g, st, *at, log, opt)) {
            out.graph = std::move(*raw);
            out.removed = true;
        }
    }
}

/// Whether every corner perfect matching is multiplicity-free.
inline bool check_multiplicity_free_criterion(const TorusGraph& g, std::optional<PerfectMatching> ref = std::nullopt) {
    auto c = MatchingCensus::of(g, std::move(ref));
    c.require_matching();
    for (const auto& [corner, members] : c.corner_groups()) {
        if (members.size() != 1) return false;
    }
    return true;
}

/// Removes edges until the model is consistent, keeping the characteristic
/// polygon (which must be non-degenerate). Each adjacent pair of corners is
/// processed until the symmetric difference of its matchings consists of
/// zigzag paths, repeating until no pair removes an edge; the zigzag
/// polygon then equals the characteristic polygon and the zigzag-preserving
/// algorithm finishes the job.
inline CancelResult cancellativize_char(const TorusGraph& input, const CharOptions& opt = {}) {
    const auto target = characteristic_polygon(input);
    if (!is_nondegenerate(target)) throw DomainError("cancellativize_char: characteristic polygon is degenerate");
    CancelResult out;
    RawGraph cur = input.raw();
    {
        auto restricted = restrict_to_matched(input);
        if (restricted.edges.size() != input.edge_count() || restricted.nodes.size() != input.node_count()) {
            std::vector<std::string> none;
            cur = detail::remove_and_restrict(input, none, "restrict_to_matched", "edges in no perfect matching",
                                              out.log);
        }
    }
    const std::size_t guard = 4 * input.edge_count() * input.edge_count() + 4;
    for (std::size_t pass = 0;; ++pass) {
        if (pass > guard) throw InternalError("cancellativize_char: fixpoint guard exceeded");
        bool removed = false;
        auto g = validated_step(cur, "cancellativize_char");
        const auto corners = MatchingCensus::of(g).corner_groups().size();
        for (std::size_t k = 0; k < corners; ++k) {
            auto census = MatchingCensus::of(g);
            auto groups = census.corner_groups();
            const auto& a = groups[k];
            const auto& b = groups[(k + 1) % groups.size()];
            auto res = process_corner_pair(g, a.first, b.first, matching_ids(g, census.matchings[a.second.front()]),
                                           matching_ids(g, census.matchings[b.second.front()]), out.log, opt);
            if (res.removed) {
                removed = true;
                cur = std::move(res.graph);
                g = validated_step(cur, "cancellativize_char");
            }
        }
        if (!removed) break;
    }
    auto g = validated_step(cur, "cancellativize_char");
    auto char_now = characteristic_polygon(g);
    if (char_now != target) throw InternalError("cancellativize_char: characteristic polygon changed");
    if (!contains(zigzag_polygon(g), char_now)) {
        std::ostringstream os;
        os << "cancellativize_char: zigzag polygon " << zigzag_polygon(g) << " does not contain the characteristic polygon "
           << char_now;
        throw InternalError(os.str());
    }
    auto rest = cancellativize_zigzag(g);
    out.log.append(rest.log);
    out.graph = std::move(rest.graph);
    auto final_char = characteristic_polygon(validated_step(out.graph, "cancellativize_char"));
    if (final_char != target) {
        std::ostringstream os;
        os << "cancellativize_char: final characteristic polygon " << final_char << " differs from " << target;
        throw InternalError(os.str());
    }
    return out;
}

}  // namespace dimer
