#pragma once

// Exact integer geometry on Z^2: homology classes of the torus, the
// intersection pairing and convex lattice polygons.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "dimer/errors.hpp"

namespace dimer {

/// An element of Z^2. Used both for H_1(T; Z) (cycle classes, zigzag
/// slopes, edge offsets, lift translates) and for height changes.
struct Vec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    constexpr auto operator<=>(const Vec2&) const = default;

    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2& operator-=(Vec2 o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(std::int64_t k, Vec2 a) { return {k * a.x, k * a.y}; }

    constexpr bool is_zero() const { return x == 0 && y == 0; }

    friend std::ostream& operator<<(std::ostream& os, Vec2 v) {
        return os << '(' << v.x << ',' << v.y << ')';
    }
};

using HomologyClass = Vec2;

struct Vec2Hash {
    std::size_t operator()(Vec2 v) const noexcept {
        auto h = static_cast<std::uint64_t>(v.x) * 0x9E3779B97F4A7C15ull;
        h ^= static_cast<std::uint64_t>(v.y) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

/// <a, b> = a.x * b.y - a.y * b.x, with <(1,0),(0,1)> = +1.
constexpr std::int64_t intersection_pairing(HomologyClass a, HomologyClass b) {
    return a.x * b.y - a.y * b.x;
}

constexpr HomologyClass rotate_ccw(HomologyClass v) { return {-v.y, v.x}; }

constexpr std::int64_t cross(Vec2 o, Vec2 a, Vec2 b) { return intersection_pairing(a - o, b - o); }

constexpr std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        auto t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Primitive vector in the direction of v; (0,0) stays (0,0).
constexpr Vec2 primitive(Vec2 v) {
    auto g = gcd64(v.x, v.y);
    if (g == 0) return v;
    return {v.x / g, v.y / g};
}

/// Strict weak order of nonzero vectors by angle in [0, 2pi).
inline bool angle_less(Vec2 a, Vec2 b) {
    auto half = [](Vec2 v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; };
    int ha = half(a);
    int hb = half(b);
    if (ha != hb) return ha < hb;
    return intersection_pairing(a, b) > 0;
}

/// Convex lattice polygon. Vertices are pairwise distinct, counter-clockwise,
/// strictly convex, and start at the lexicographically smallest vertex.
/// Empty, single-point and segment polygons are ordinary values.
class LatticePolygon {
public:
    LatticePolygon() = default;

    /// Hull of an arbitrary point set, kept in its original position.
    static LatticePolygon hull_of(std::span<const Vec2> points) {
        std::vector<Vec2> pts(points.begin(), points.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        LatticePolygon poly;
        if (pts.size() <= 1) {
            poly.vertices_ = std::move(pts);
            return poly;
        }
        // Andrew's monotone chain, dropping collinear points.
        std::vector<Vec2> h(2 * pts.size());
        std::size_t k = 0;
        for (const auto& p : pts) {
            while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
            h[k++] = p;
        }
        for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
            while (k >= lo && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
            h[k++] = pts[i];
        }
        h.resize(k - 1);
        // All collinear: the chain degenerates to the two extreme points.
        poly.vertices_ = std::move(h);
        return poly;
    }

    const std::vector<Vec2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool empty() const { return vertices_.empty(); }

    /// Translated so that the lexicographically smallest vertex is (0,0).
    LatticePolygon canonical() const {
        LatticePolygon out = *this;
        if (out.vertices_.empty()) return out;
        Vec2 base = out.vertices_.front();
        for (auto& v : out.vertices_) v -= base;
        return out;
    }

    LatticePolygon translated(Vec2 t) const {
        LatticePolygon out = *this;
        for (auto& v : out.vertices_) v += t;
        return out;
    }

    /// Twice the enclosed area (an integer for lattice polygons).
    std::int64_t area2() const {
        std::int64_t a = 0;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            a += intersection_pairing(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
        }
        return a;
    }

    /// Point inside or on the boundary.
    bool covers(Vec2 p) const {
        switch (vertices_.size()) {
            case 0:
                return false;
            case 1:
                return p == vertices_[0];
            case 2: {
                Vec2 a = vertices_[0];
                Vec2 b = vertices_[1];
                if (cross(a, b, p) != 0) return false;
                return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
                       std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
            }
            default:
                for (std::size_t i = 0; i < vertices_.size(); ++i) {
                    if (cross(vertices_[i], vertices_[(i + 1) % vertices_.size()], p) < 0) {
                        return false;
                    }
                }
                return true;
        }
    }

    bool operator==(const LatticePolygon&) const = default;

    friend std::ostream& operator<<(std::ostream& os, const LatticePolygon& p) {
        os << '[';
        for (std::size_t i = 0; i < p.vertices_.size(); ++i) {
            if (i) os << ',';
            os << p.vertices_[i];
        }
        return os << ']';
    }

private:
    std::vector<Vec2> vertices_;
};

/// Canonical hull: translated so the lexicographically minimal vertex is the origin.
inline LatticePolygon convex_hull(std::span<const Vec2> points) {
    return LatticePolygon::hull_of(points).canonical();
}

inline std::vector<Vec2> corners(const LatticePolygon& p) { return p.vertices(); }

/// Cyclically consecutive corner pairs in counter-clockwise order. A segment
/// yields both directions.
inline std::vector<std::pair<Vec2, Vec2>> adjacent_corner_pairs(const LatticePolygon& p) {
    const auto& v = p.vertices();
    if (v.size() < 2) {
        throw DomainError("adjacent_corner_pairs: polygon has fewer than two corners");
    }
    std::vector<std::pair<Vec2, Vec2>> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], v[(i + 1) % v.size()]);
    return out;
}

inline bool is_nondegenerate(const LatticePolygon& p) { return p.size() >= 3; }

/// True iff some integer translate of `inner` lies inside `outer`.
inline bool contains(const LatticePolygon& outer, const LatticePolygon& inner) {
    if (inner.empty()) return true;
    if (outer.empty()) return false;
    auto bbox = [](const LatticePolygon& p) {
        Vec2 lo = p.vertices().front();
        Vec2 hi = lo;
        for (auto v : p.vertices()) {
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
        }
        return std::pair{lo, hi};
    };
    auto [olo, ohi] = bbox(outer);
    auto [ilo, ihi] = bbox(inner);
    for (auto tx = olo.x - ilo.x; tx <= ohi.x - ihi.x; ++tx) {
        for (auto ty = olo.y - ilo.y; ty <= ohi.y - ihi.y; ++ty) {
            Vec2 t{tx, ty};
            bool ok = std::all_of(inner.vertices().begin(), inner.vertices().end(),
                                  [&](Vec2 v) { return outer.covers(v + t); });
            if (ok) return true;
        }
    }
    return false;
}

}  // namespace dimer

template <>
struct std::hash<dimer::Vec2> : dimer::Vec2Hash {};
