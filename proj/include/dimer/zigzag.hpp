#pragma once

// Zigzag paths, the zigzag polygon and the consistency checks. Intersections
// between lifts to the universal cover are found exactly by solving for the
// lattice translates at which two lifts share an edge.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"
#include "dimer/torus_graph.hpp"

namespace dimer {

struct ZigzagPath {
    /// One period, starting at the lowest dart of the path.
    std::vector<Dart> darts;
    HomologyClass slope;
    /// tail[k]: translate of the tail of darts[k] when darts[0] starts at (0,0).
    std::vector<Vec2> tail;

    std::size_t length() const { return darts.size(); }
    bool trivial() const { return slope.is_zero(); }

    /// Lifted edge at an arbitrary integer position of the bi-infinite lift
    /// starting at `origin`.
    LiftedEdge lifted_edge_at(const TorusGraph& g, std::int64_t pos, Vec2 origin = {}) const {
        auto [period, k] = split(pos);
        return lifted_edge(g, darts[k], origin + tail[k] + period * slope);
    }
    LiftedNode tail_at(const TorusGraph& g, std::int64_t pos, Vec2 origin = {}) const {
        auto [period, k] = split(pos);
        return {g.tail(darts[k]), origin + tail[k] + period * slope};
    }
    std::pair<std::int64_t, std::size_t> split(std::int64_t pos) const {
        auto len = static_cast<std::int64_t>(darts.size());
        auto period = pos >= 0 ? pos / len : -((-pos + len - 1) / len);
        return {period, static_cast<std::size_t>(pos - period * len)};
    }
};

/// Next dart along a zigzag path: maximal right turn at white nodes, maximal
/// left turn at black nodes.
inline Dart zigzag_next(const TorusGraph& g, Dart d) {
    auto v = g.head(d);
    auto e = g.color(v) == Color::white ? g.succ(v, d.edge) : g.pred(v, d.edge);
    return g.dart_from(v, e);
}

struct ZigzagSystem {
    std::vector<ZigzagPath> paths;
    std::vector<std::size_t> path_of_dart;
    std::vector<std::size_t> position_of_dart;

    /// The two paths through an edge: (forward traversal, backward traversal).
    std::pair<std::size_t, std::size_t> paths_of_edge(std::size_t e) const {
        return {path_of_dart[Dart{e, true}.index()], path_of_dart[Dart{e, false}.index()]};
    }
    std::vector<HomologyClass> slopes() const {
        std::vector<HomologyClass> out;
        for (const auto& p : paths) out.push_back(p.slope);
        return out;
    }
};

inline ZigzagSystem zigzag_paths(const TorusGraph& g) {
    ZigzagSystem sys;
    sys.path_of_dart.assign(g.dart_count(), SIZE_MAX);
    sys.position_of_dart.assign(g.dart_count(), SIZE_MAX);
    for (std::size_t start = 0; start < g.dart_count(); ++start) {
        if (sys.path_of_dart[start] != SIZE_MAX) continue;
        ZigzagPath p;
        auto d = Dart::from_index(start);
        Vec2 t;
        while (sys.path_of_dart[d.index()] == SIZE_MAX) {
            sys.path_of_dart[d.index()] = sys.paths.size();
            sys.position_of_dart[d.index()] = p.darts.size();
            p.darts.push_back(d);
            p.tail.push_back(t);
            t += g.offset(d);
            d = zigzag_next(g, d);
        }
        if (d.index() != start) throw InternalError("zigzag_paths: turn rule is not a permutation of darts");
        p.slope = t;
        sys.paths.push_back(std::move(p));
    }
    return sys;
}

/// Hull of the partial sums of the slopes rotated by a quarter turn, taken in
/// angular order beginning with the slope of the first path.
inline LatticePolygon zigzag_polygon_from_slopes(std::vector<HomologyClass> slopes) {
    std::vector<HomologyClass> nz;
    std::optional<HomologyClass> first;
    for (auto s : slopes) {
        if (s.is_zero()) continue;
        if (!first) first = s;
        nz.push_back(s);
    }
    std::vector<Vec2> pts{Vec2{}};
    if (nz.empty()) return convex_hull(pts);
    std::stable_sort(nz.begin(), nz.end(), angle_less);
    auto it = std::find_if(nz.begin(), nz.end(), [&](Vec2 s) { return !angle_less(s, *first) && !angle_less(*first, s); });
    std::rotate(nz.begin(), it, nz.end());
    Vec2 w;
    for (auto s : nz) {
        w += rotate_ccw(s);
        pts.push_back(w);
    }
    return convex_hull(pts);
}

inline LatticePolygon zigzag_polygon(const TorusGraph& g) { return zigzag_polygon_from_slopes(zigzag_paths(g).slopes()); }

// ---------------------------------------------------------------------------
// Intersections

enum class IntersectionKind { trivial_zigzag, self_intersection, double_intersection };

inline const char* to_string(IntersectionKind k) {
    switch (k) {
        case IntersectionKind::trivial_zigzag: return "trivial_zigzag";
        case IntersectionKind::self_intersection: return "self_intersection";
        case IntersectionKind::double_intersection: return "double_intersection";
    }
    return "unknown";
}

/// Witness of a failed consistency condition.
///  - trivial_zigzag: `path` has slope (0,0).
///  - self_intersection: positions first.p < second.p of `path` (lift from
///    (0,0)) traverse the same lifted edge `lifted`.
///  - double_intersection: the lift of `path` from (0,0) and the lift of
///    `other` from `translate` share edges at (first.p, first.q) and
///    (second.p, second.q); both lifts meet first before second, and no other
///    shared edge lies between them along the first lift.
struct IntersectionReport {
    struct Positions {
        std::int64_t p = 0;
        std::int64_t q = 0;
        auto operator<=>(const Positions&) const = default;
    };

    IntersectionKind kind = IntersectionKind::trivial_zigzag;
    std::size_t path = 0;
    std::size_t other = 0;
    Vec2 translate;
    Positions first;
    Positions second;
    LiftedEdge lifted;
    /// Edges at the witness (the removal set of the cancellativization step).
    std::vector<std::size_t> edges;

    std::string describe(const TorusGraph& g) const {
        std::ostringstream os;
        os << to_string(kind) << " on zigzag " << path;
        if (kind == IntersectionKind::double_intersection) {
            os << " and zigzag " << other << " translated by " << translate;
        }
        if (kind == IntersectionKind::self_intersection) {
            os << " at edge '" << g.edge(lifted.edge).id << "' black translate " << lifted.black;
        }
        if (!edges.empty()) {
            os << " edges";
            for (auto e : edges) os << " '" << g.edge(e).id << "'";
        }
        return os.str();
    }
};

inline std::optional<IntersectionReport> find_trivial_zigzag(const TorusGraph& g, const ZigzagSystem& sys) {
    for (std::size_t i = 0; i < sys.paths.size(); ++i) {
        if (!sys.paths[i].trivial()) continue;
        IntersectionReport r;
        r.kind = IntersectionKind::trivial_zigzag;
        r.path = r.other = i;
        for (auto d : sys.paths[i].darts) r.edges.push_back(d.edge);
        (void)g;
        return r;
    }
    return std::nullopt;
}

inline std::optional<IntersectionReport> find_trivial_zigzag(const TorusGraph& g) {
    return find_trivial_zigzag(g, zigzag_paths(g));
}

/// The lift of a path traverses one lifted edge twice (necessarily once in
/// each direction): positions i and j of one period carry the same edge and
/// their black translates differ by a multiple of the slope (for slope (0,0),
/// not at all).
inline std::optional<IntersectionReport> find_self_intersection(const TorusGraph& g, const ZigzagSystem& sys) {
    for (std::size_t pi = 0; pi < sys.paths.size(); ++pi) {
        const auto& z = sys.paths[pi];
        const auto len = z.length();
        for (std::size_t i = 0; i < len; ++i) {
            for (std::size_t j = i + 1; j < len; ++j) {
                if (z.darts[i].edge != z.darts[j].edge) continue;
                auto bi = z.lifted_edge_at(g, static_cast<std::int64_t>(i)).black;
                auto bj = z.lifted_edge_at(g, static_cast<std::int64_t>(j)).black;
                Vec2 diff = bi - bj;  // need bj + k*s == bi
                std::optional<std::int64_t> k;
                if (z.slope.is_zero()) {
                    if (diff.is_zero()) k = 0;
                } else if (intersection_pairing(diff, z.slope) == 0) {
                    auto num = z.slope.x != 0 ? diff.x : diff.y;
                    auto den = z.slope.x != 0 ? z.slope.x : z.slope.y;
                    if (num % den == 0) k = num / den;
                }
                if (!k) continue;
                IntersectionReport r;
                r.kind = IntersectionKind::self_intersection;
                r.path = r.other = pi;
                auto pj = static_cast<std::int64_t>(j) + *k * static_cast<std::int64_t>(len);
                r.first = {static_cast<std::int64_t>(i), static_cast<std::int64_t>(i)};
                r.second = {pj, pj};
                if (r.second.p < r.first.p) std::swap(r.first, r.second);
                r.lifted = z.lifted_edge_at(g, static_cast<std::int64_t>(i));
                r.edges = {z.darts[i].edge};
                return r;
            }
        }
    }
    return std::nullopt;
}

inline std::optional<IntersectionReport> find_self_intersection(const TorusGraph& g) {
    return find_self_intersection(g, zigzag_paths(g));
}

namespace detail {

struct ExtGcd {
    std::int64_t g, x, y;  // a*x + b*y = g >= 0
};

inline ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        auto q = old_r / r;
        std::tie(old_r, r) = std::pair{r, old_r - q * r};
        std::tie(old_s, s) = std::pair{s, old_s - q * s};
        std::tie(old_t, t) = std::pair{t, old_t - q * t};
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    auto q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Both lifts traverse shared edges; `p` indexes the first lift, `q` the second.
using SharedPairs = std::vector<IntersectionReport::Positions>;

/// Pairs (i, j) of one-period positions of z and w on the same edge.
inline std::vector<std::pair<std::size_t, std::size_t>> same_edge_positions(const ZigzagPath& z, const ZigzagPath& w,
                                                                            bool same_path) {
    std::map<std::size_t, std::vector<std::size_t>> at;
    for (std::size_t j = 0; j < w.length(); ++j) at[w.darts[j].edge].push_back(j);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < z.length(); ++i) {
        auto it = at.find(z.darts[i].edge);
        if (it == at.end()) continue;
        for (auto j : it->second) {
            if (same_path && i == j) continue;
            out.emplace_back(i, j);
        }
    }
    return out;
}

/// Consecutive shared edges along the first lift that the second lift also
/// meets in increasing order.
inline std::vector<std::pair<IntersectionReport::Positions, IntersectionReport::Positions>> consecutive_same_direction(
    SharedPairs pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<std::pair<IntersectionReport::Positions, IntersectionReport::Positions>> out;
    for (std::size_t k = 0; k + 1 < pairs.size(); ++k) {
        if (pairs[k].p == pairs[k + 1].p) continue;
        if (pairs[k].q < pairs[k + 1].q) out.emplace_back(pairs[k], pairs[k + 1]);
    }
    return out;
}

}  // namespace detail

/// Exact double-intersection search for one ordered pair of non-trivial
/// paths. Lift z from (0,0); for every class of translates modulo the
/// lattice spanned by both slopes that produces a shared edge, compute the
/// shared edges of the two lifts (one full period of their pattern when the
/// slopes are parallel) and look for consecutive ones in the same order.
using ReportFilter = std::function<bool(const IntersectionReport&)>;

inline std::optional<IntersectionReport> find_double_intersection_between(const TorusGraph& g, const ZigzagSystem& sys,
                                                                          std::size_t zi, std::size_t wi,
                                                                          const ReportFilter& accept = {}) {
    const auto& z = sys.paths[zi];
    const auto& w = sys.paths[wi];
    if (z.trivial() || w.trivial()) return std::nullopt;
    const bool same = zi == wi;
    const auto cand = detail::same_edge_positions(z, w, same);
    if (cand.empty()) return std::nullopt;
    const auto L = static_cast<std::int64_t>(z.length());
    const auto M = static_cast<std::int64_t>(w.length());
    const Vec2 s = z.slope;
    const Vec2 t = w.slope;
    const auto det = intersection_pairing(s, t);

    // Black translate of the shared edge on each side, one period.
    auto bz = [&](std::size_t i) { return lifted_edge(g, z.darts[i], z.tail[i]).black; };
    auto bw = [&](std::size_t j) { return lifted_edge(g, w.darts[j], w.tail[j]).black; };

    auto make_report = [&](Vec2 tau, IntersectionReport::Positions a, IntersectionReport::Positions b) {
        IntersectionReport r;
        r.kind = IntersectionKind::double_intersection;
        r.path = zi;
        r.other = wi;
        r.translate = tau;
        r.first = a;
        r.second = b;
        auto e1 = z.darts[z.split(a.p).second].edge;
        auto e2 = z.darts[z.split(b.p).second].edge;
        r.edges = {std::min(e1, e2), std::max(e1, e2)};
        if (e1 == e2) r.edges.pop_back();
        return r;
    };

    std::vector<Vec2> tried;
    if (det != 0) {
        // Translates tau with a shared edge at (i, j): tau = bz(i) - bw(j) mod Zs + Zt.
        auto in_lattice = [&](Vec2 r) {
            return intersection_pairing(r, t) % det == 0 && intersection_pairing(s, r) % det == 0;
        };
        for (auto [i0, j0] : cand) {
            Vec2 tau = bz(i0) - bw(j0);
            if (std::any_of(tried.begin(), tried.end(), [&](Vec2 u) { return in_lattice(tau - u); })) continue;
            tried.push_back(tau);
            detail::SharedPairs pairs;
            for (auto [i, j] : cand) {
                // k s - k' t = tau + bw(j) - bz(i)
                Vec2 r = tau + bw(j) - bz(i);
                if (!in_lattice(r)) continue;
                auto k = intersection_pairing(r, t) / det;
                auto kp = -intersection_pairing(s, r) / det;
                pairs.push_back({static_cast<std::int64_t>(i) + k * L, static_cast<std::int64_t>(j) + kp * M});
            }
            for (const auto& [h1, h2] : detail::consecutive_same_direction(pairs)) {
                auto r = make_report(tau, h1, h2);
                if (!accept || accept(r)) return r;
            }
        }
        return std::nullopt;
    }

    // Parallel slopes: s = a u, t = b u with u primitive.
    const Vec2 u = primitive(s);
    auto coeff = [&](Vec2 v) { return u.x != 0 ? v.x / u.x : v.y / u.y; };
    const auto a = coeff(s);
    const auto b = coeff(t);
    const auto eg = detail::ext_gcd(a, b);
    const auto gab = eg.g;
    // Homogeneous step of k a - k' b = 0, oriented so the first lift advances.
    std::int64_t dk = b / gab;
    std::int64_t dkp = a / gab;
    if (dk < 0) {
        dk = -dk;
        dkp = -dkp;
    }
    const auto period = dk * L;
    auto on_line = [&](Vec2 r) { return intersection_pairing(r, u) == 0; };
    for (auto [i0, j0] : cand) {
        {
            // Every translate with a shared edge at (i0, j0) is equivalent to this one.
            Vec2 tau = bz(i0) - bw(j0);
            // Equivalent translates differ by an element of Z s + Z t = Z gab u.
            if (same && on_line(tau) && coeff(tau) % a == 0) continue;  // same lift of z
            if (std::any_of(tried.begin(), tried.end(), [&](Vec2 v) {
                    Vec2 d = tau - v;
                    return on_line(d) && coeff(d) % gab == 0;
                })) {
                continue;
            }
            tried.push_back(tau);
            detail::SharedPairs pairs;
            for (auto [i, j] : cand) {
                Vec2 r = tau + bw(j) - bz(i);
                if (!on_line(r)) continue;
                auto m = coeff(r);
                if (m % gab != 0) continue;
                // particular solution of k a - k' b = m
                std::int64_t k = eg.x * (m / gab);
                std::int64_t kp = -eg.y * (m / gab);
                // Shift to the first solution with P >= 0, then cover two periods.
                std::int64_t p0 = static_cast<std::int64_t>(i) + k * L;
                std::int64_t steps = detail::floor_div(-p0, period);
                if (p0 + steps * period < 0) ++steps;
                k += steps * dk;
                kp += steps * dkp;
                for (int rep = 0; rep < 3; ++rep) {
                    pairs.push_back({static_cast<std::int64_t>(i) + (k + rep * dk) * L,
                                     static_cast<std::int64_t>(j) + (kp + rep * dkp) * M});
                }
            }
            // Keep a window of exactly two pattern periods so consecutive
            // pairs are representative.
            std::erase_if(pairs, [&](const auto& pr) { return pr.p >= 2 * period; });
            for (const auto& [h1, h2] : detail::consecutive_same_direction(pairs)) {
                auto r = make_report(tau, h1, h2);
                if (!accept || accept(r)) return r;
            }
        }
    }
    return std::nullopt;
}

inline std::optional<IntersectionReport> find_double_intersection(const TorusGraph& g, const ZigzagSystem& sys,
                                                                   const ReportFilter& accept = {}) {
    for (std::size_t zi = 0; zi < sys.paths.size(); ++zi) {
        for (std::size_t wi = 0; wi < sys.paths.size(); ++wi) {
            if (auto r = find_double_intersection_between(g, sys, zi, wi, accept)) return r;
        }
    }
    return std::nullopt;
}

inline std::optional<IntersectionReport> find_double_intersection(const TorusGraph& g) {
    return find_double_intersection(g, zigzag_paths(g));
}

/// Re-checks a witness by walking the lifts dart by dart.
inline bool verify_report(const TorusGraph& g, const ZigzagSystem& sys, const IntersectionReport& r) {
    auto walk_lift = [&](const ZigzagPath& z, Vec2 origin, std::int64_t pos) {
        // Independent of the cached period data: step along the darts.
        Vec2 t = origin;
        auto len = static_cast<std::int64_t>(z.length());
        if (pos >= 0) {
            for (std::int64_t k = 0; k < pos; ++k) t += g.offset(z.darts[static_cast<std::size_t>(k % len)]);
        } else {
            for (std::int64_t k = -1; k >= pos; --k) {
                t -= g.offset(z.darts[static_cast<std::size_t>(((k % len) + len) % len)]);
            }
        }
        auto d = z.darts[static_cast<std::size_t>(((pos % len) + len) % len)];
        return std::pair{LiftedNode{g.tail(d), t}, lifted_edge(g, d, t)};
    };
    if (r.path >= sys.paths.size() || r.other >= sys.paths.size()) return false;
    const auto& z = sys.paths[r.path];
    switch (r.kind) {
        case IntersectionKind::trivial_zigzag:
            return z.slope.is_zero() && cycle_homology(g, z.darts).is_zero();
        case IntersectionKind::self_intersection: {
            if (r.first.p == r.second.p) return false;
            auto a = walk_lift(z, {}, r.first.p).second;
            auto b = walk_lift(z, {}, r.second.p).second;
            return a == b && a == r.lifted;
        }
        case IntersectionKind::double_intersection: {
            const auto& w = sys.paths[r.other];
            if (r.path == r.other && !z.slope.is_zero()) {
                Vec2 tau = r.translate;
                bool same_lift = intersection_pairing(tau, z.slope) == 0 &&
                                 (z.slope.x != 0 ? tau.x % z.slope.x == 0 : tau.y % z.slope.y == 0);
                if (same_lift) return false;
            }
            if (!(r.first.p < r.second.p && r.first.q < r.second.q)) return false;
            for (auto pos : {r.first, r.second}) {
                if (walk_lift(z, {}, pos.p).second != walk_lift(w, r.translate, pos.q).second) return false;
            }
            // No shared edge strictly between them along the first lift.
            std::set<LiftedEdge> wset;
            auto lo = std::min(r.first.q, r.second.q) - 4 * static_cast<std::int64_t>(w.length() * (z.length() + 1));
            auto hi = std::max(r.first.q, r.second.q) + 4 * static_cast<std::int64_t>(w.length() * (z.length() + 1));
            for (auto q = lo; q <= hi; ++q) wset.insert(w.lifted_edge_at(g, q, r.translate));
            for (auto p = r.first.p + 1; p < r.second.p; ++p) {
                if (wset.count(z.lifted_edge_at(g, p))) return false;
            }
            return true;
        }
    }
    return false;
}

struct ConsistencyReport {
    bool consistent = true;
    std::vector<IntersectionReport> reports;
};

inline ConsistencyReport is_consistent(const TorusGraph& g) {
    auto sys = zigzag_paths(g);
    ConsistencyReport out;
    for (auto r : {find_trivial_zigzag(g, sys), find_self_intersection(g, sys), find_double_intersection(g, sys)}) {
        if (r) out.reports.push_back(*r);
    }
    out.consistent = out.reports.empty();
    return out;
}

// ---------------------------------------------------------------------------
// Cycles that turn maximally right at white nodes

struct WhiteTurnViolation {
    std::size_t node = 0;
    std::size_t edge = 0;
};

/// A closed walk is zigzag at white nodes when no edge leaves any of its
/// white nodes on the right. Returns the first violation along the walk.
inline std::optional<WhiteTurnViolation> is_zigzag_at_white(const TorusGraph& g, const std::vector<Dart>& cycle) {
    const auto n = cycle.size();
    for (std::size_t k = 0; k < n; ++k) {
        auto in = cycle[k];
        auto out = cycle[(k + 1) % n];
        auto v = g.head(in);
        if (g.color(v) != Color::white) continue;
        auto right = g.edges_on_right(v, in.edge, out.edge);
        if (!right.empty()) return WhiteTurnViolation{v, right.front()};
    }
    return std::nullopt;
}

/// Contracts a homologically trivial zigzag path with no edge inside it.
inline RawGraph contract_trivial_zigzag_boundary(const TorusGraph& g, const ZigzagPath& z) {
    if (!z.trivial()) throw DomainError("contract: zigzag path is not homologically trivial");
    return contract_trivial_loop(g, z.darts);
}

}  // namespace dimer
