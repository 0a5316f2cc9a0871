#pragma once

// SVG drawing of the fundamental domain. Nodes sit at their stored
// positions, or on a circle when positions are missing. An edge is drawn
// from its black node to the translate of its white node; edges that leave
// the square are drawn a second time from the other side.

#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/torus_graph.hpp"

namespace dimer {

struct RenderOptions {
    double size = 480.0;
    double margin = 40.0;
    double node_radius = 5.0;
    /// Edge ids to highlight (e.g. a matching).
    std::set<std::string> highlight;
};

inline std::string xml_escape(const std::string& in) {
    std::string out;
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::vector<std::array<double, 2>> node_positions(const RawGraph& g) {
    std::vector<std::array<double, 2>> pos(g.nodes.size());
    const auto n = static_cast<double>(g.nodes.size());
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (g.nodes[v].pos) {
            pos[v] = *g.nodes[v].pos;
        } else {
            double t = 2.0 * std::numbers::pi * static_cast<double>(v) / n;
            pos[v] = {0.5 + 0.35 * std::cos(t), 0.5 + 0.35 * std::sin(t)};
        }
    }
    return pos;
}

inline std::string render_svg(const RawGraph& g, const RenderOptions& opt = {}) {
    const auto pos = node_positions(g);
    const double s = opt.size;
    const double m = opt.margin;
    // y grows upwards on the torus and downwards in SVG.
    auto X = [&](double x) { return m + x * s; };
    auto Y = [&](double y) { return m + (1.0 - y) * s; };
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << s + 2 * m << "\" height=\"" << s + 2 * m
       << "\" viewBox=\"0 0 " << s + 2 * m << ' ' << s + 2 * m << "\">\n";
    os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << s << "\" height=\"" << s
       << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";
    os << "<g stroke-linecap=\"round\">\n";
    for (const auto& e : g.edges) {
        const bool hi = opt.highlight.count(e.id) > 0;
        const auto& b = pos[e.black];
        const auto& w = pos[e.white];
        const double ox = static_cast<double>(e.offset.x);
        const double oy = static_cast<double>(e.offset.y);
        auto line = [&](double x1, double y1, double x2, double y2) {
            os << "<line x1=\"" << X(x1) << "\" y1=\"" << Y(y1) << "\" x2=\"" << X(x2) << "\" y2=\"" << Y(y2)
               << "\" stroke=\"" << (hi ? "#d62728" : "#333") << "\" stroke-width=\"" << (hi ? 4 : 1.5) << "\">"
               << "<title>" << xml_escape(e.id) << "</title></line>\n";
        };
        line(b[0], b[1], w[0] + ox, w[1] + oy);
        if (e.offset.x != 0 || e.offset.y != 0) line(b[0] - ox, b[1] - oy, w[0], w[1]);
    }
    os << "</g>\n";
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        const bool black = g.nodes[v].color == Color::black;
        os << "<circle cx=\"" << X(pos[v][0]) << "\" cy=\"" << Y(pos[v][1]) << "\" r=\"" << opt.node_radius
           << "\" fill=\"" << (black ? "#000" : "#fff") << "\" stroke=\"#000\" stroke-width=\"1.5\"><title>"
           << xml_escape(g.nodes[v].id) << "</title></circle>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace dimer
