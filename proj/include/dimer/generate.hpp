#pragma once

// Lattice dimer models on an m x n supercell and random subgraphs of them.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/matchings.hpp"
#include "dimer/torus_graph.hpp"

namespace dimer {

enum class Family { hexagonal, square };

inline const char* to_string(Family f) { return f == Family::hexagonal ? "hex" : "square"; }

inline Family family_from_string(const std::string& s) {
    if (s == "hex" || s == "hexagonal") return Family::hexagonal;
    if (s == "square") return Family::square;
    throw ParseError("unknown lattice family '" + s + "' (expected hex or square)");
}

/// Hexagonal or square lattice model with rows * cols black nodes. Offsets
/// are in units of the supercell.
inline RawGraph lattice_model(Family family, int rows, int cols) {
    if (rows < 1 || cols < 1) throw DomainError("lattice_model: rows and cols must be positive");
    const int m = cols;  // x extent
    const int n = rows;  // y extent
    RawGraph g;
    auto bid = [&](int i, int j) { return static_cast<std::size_t>(2 * (j * m + i)); };
    auto wid = [&](int i, int j) { return static_cast<std::size_t>(2 * (j * m + i) + 1); };
    const double bx = family == Family::hexagonal ? 0.3 : 0.75;
    const double wx = family == Family::hexagonal ? 0.7 : 0.25;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) {
            auto suffix = std::to_string(i) + "_" + std::to_string(j);
            g.nodes.push_back({"b" + suffix, Color::black, std::array<double, 2>{(i + bx) / m, (j + bx) / n}});
            g.nodes.push_back({"w" + suffix, Color::white, std::array<double, 2>{(i + wx) / m, (j + wx) / n}});
        }
    }
    g.rotations.resize(g.nodes.size());
    // Steps from b(i,j) to its white neighbours, in counter-clockwise order.
    std::vector<std::pair<int, int>> steps = family == Family::hexagonal
                                                 ? std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}}
                                                 : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::string letters = "abcd";
    auto wrap = [](int v, int size, std::int64_t& off) {
        off = v >= size ? 1 : 0;
        return v % size;
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < steps.size(); ++k) {
                Vec2 off;
                int ti = wrap(i + steps[k].first, m, off.x);
                int tj = wrap(j + steps[k].second, n, off.y);
                EdgeData e{"e" + std::to_string(i) + "_" + std::to_string(j) + letters[k], bid(i, j), wid(ti, tj), off};
                g.rotations[bid(i, j)].push_back(g.edges.size());
                g.edges.push_back(std::move(e));
            }
        }
    }
    // At w(i,j) the incident edges come from b(i,j) - step_k, in the same
    // cyclic order as the steps.
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < steps.size(); ++k) {
                int si = ((i - steps[k].first) % m + m) % m;
                int sj = ((j - steps[k].second) % n + n) % n;
                auto e = static_cast<std::size_t>((sj * m + si) * static_cast<int>(steps.size())) + k;
                g.rotations[wid(i, j)].push_back(e);
            }
        }
    }
    return g;
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct RandomModel {
    RawGraph graph;
    /// Draws that were discarded because cleanup did not leave a dimer model
    /// with a perfect matching.
    std::size_t rejections = 0;
};

/// Deletes each edge of the lattice model independently with probability p,
/// prunes univalent nodes, drops components inside discs, and keeps the
/// result if it is a valid dimer model with a perfect matching. Draws repeat
/// on the same stream until one is accepted.
inline RandomModel random_model(Family family, int rows, int cols, double p, std::uint64_t seed,
                                std::size_t max_attempts = 1000) {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("random_model: deletion probability must be in [0, 1)");
    auto base = lattice_model(family, rows, cols);
    std::mt19937_64 rng(seed);
    RandomModel out;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<bool> keep(base.edges.size(), true);
        for (std::size_t e = 0; e < base.edges.size(); ++e) keep[e] = unit_double(rng) >= p;
        auto g = filter_graph(base, std::vector<bool>(base.nodes.size(), true), keep);
        g = delete_null_homotopic_components(prune_univalent(g));
        std::vector<bool> nonisolated(g.nodes.size(), false);
        for (const auto& e : g.edges) nonisolated[e.black] = nonisolated[e.white] = true;
        g = filter_graph(g, nonisolated, std::vector<bool>(g.edges.size(), true));
        auto v = validate(g);
        if (v.graph && !enumerate_matchings(*v.graph).empty()) {
            out.graph = std::move(g);
            return out;
        }
        ++out.rejections;
    }
    throw DomainError("random_model: no valid model after " + std::to_string(max_attempts) + " draws");
}

}  // namespace dimer
