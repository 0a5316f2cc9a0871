#pragma once

// JSON views of analysis results: matching censuses, polynomials, zigzag
// systems and consistency reports.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/io.hpp"
#include "dimer/matchings.hpp"
#include "dimer/zigzag.hpp"

namespace dimer {

inline Json matching_json(const TorusGraph& g, const PerfectMatching& m) {
    std::vector<std::string> ids;
    for (auto e : m.edges) ids.push_back(g.edge(e).id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline std::string exponent_key(Vec2 v) {
    std::ostringstream os;
    os << '[' << v.x << ',' << v.y << ']';
    return os.str();
}

/// {"[hx,hy]": coefficient}, keys in exponent order.
inline Json to_json(const CharPolynomial& p) {
    Json j = Json::object();
    for (const auto& [e, c] : p.terms) j[exponent_key(e)] = c;
    return j;
}

inline Json to_json(const TorusGraph& g, const MatchingCensus& c) {
    Json ms = Json::array();
    for (std::size_t i = 0; i < c.matchings.size(); ++i) {
        ms.push_back({{"edges", matching_json(g, c.matchings[i])},
                      {"height", to_json(c.heights[i])},
                      {"multiplicity", c.multiplicity_of(i)},
                      {"corner", c.is_corner(i)}});
    }
    Json j;
    j["count"] = c.matchings.size();
    j["reference"] = c.empty() ? Json() : matching_json(g, c.matchings[c.reference]);
    j["matchings"] = std::move(ms);
    j["polynomial"] = to_json(c.polynomial);
    j["polygon"] = to_json(c.canonical_polygon());
    return j;
}

inline Json to_json(const TorusGraph& g, const ZigzagSystem& sys) {
    Json paths = Json::array();
    for (const auto& z : sys.paths) {
        Json darts = Json::array();
        for (auto d : z.darts) darts.push_back(g.dart_label(d));
        paths.push_back({{"slope", to_json(z.slope)}, {"darts", std::move(darts)}});
    }
    return paths;
}

inline Json to_json(const TorusGraph& g, const IntersectionReport& r) {
    Json j;
    j["kind"] = to_string(r.kind);
    j["path"] = r.path;
    if (r.kind == IntersectionKind::double_intersection) {
        j["other"] = r.other;
        j["translate"] = to_json(r.translate);
    }
    Json edges = Json::array();
    for (auto e : r.edges) edges.push_back(g.edge(e).id);
    j["witnesses"] = std::move(edges);
    j["description"] = r.describe(g);
    return j;
}

inline Json to_json(const TorusGraph& g, const ConsistencyReport& rep) {
    Json reports = Json::array();
    for (const auto& r : rep.reports) reports.push_back(to_json(g, r));
    return {{"consistent", rep.consistent}, {"reports", std::move(reports)}};
}

inline Json to_json(const ValidationReport& rep) {
    Json issues = Json::array();
    for (const auto& i : rep.issues) issues.push_back({{"kind", to_string(i.kind)}, {"message", i.message}});
    Json j{{"valid", rep.ok()}};
    if (rep.ok()) j["faces"] = rep.faces;
    j["issues"] = std::move(issues);
    return j;
}

}  // namespace dimer
