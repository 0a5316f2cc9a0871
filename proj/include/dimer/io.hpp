#pragma once

// JSON model format:
//   { "nodes": [{"id": "...", "color": "black"|"white"}...],
//     "edges": [{"id": "...", "black": nodeId, "white": nodeId, "offset": [ox, oy]}...],
//     "rotations": {nodeId: [edgeId, ... counter-clockwise]} }
// Nodes may carry an optional "pos": [x, y] used only for drawing.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"
#include "dimer/torus_graph.hpp"

namespace dimer {

using Json = nlohmann::ordered_json;

inline Json to_json(Vec2 v) { return Json::array({v.x, v.y}); }

inline Json to_json(const LatticePolygon& p) {
    Json arr = Json::array();
    for (auto v : p.vertices()) arr.push_back(to_json(v));
    return arr;
}

inline Vec2 vec2_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw ParseError("expected an integer pair [x, y], got " + j.dump());
    }
    return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

inline Json to_json(const RawGraph& g) {
    Json nodes = Json::array();
    for (const auto& n : g.nodes) {
        Json jn{{"id", n.id}, {"color", to_string(n.color)}};
        if (n.pos) jn["pos"] = Json::array({(*n.pos)[0], (*n.pos)[1]});
        nodes.push_back(std::move(jn));
    }
    Json edges = Json::array();
    for (const auto& e : g.edges) {
        edges.push_back({{"id", e.id},
                         {"black", g.nodes[e.black].id},
                         {"white", g.nodes[e.white].id},
                         {"offset", to_json(e.offset)}});
    }
    Json rotations = Json::object();
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        Json list = Json::array();
        for (auto e : g.rotations[v]) list.push_back(g.edges[e].id);
        rotations[g.nodes[v].id] = std::move(list);
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"rotations", std::move(rotations)}};
}

inline Json to_json(const TorusGraph& g) { return to_json(g.raw()); }

inline RawGraph raw_graph_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw ParseError("model must be a JSON object");
        RawGraph g;
        std::unordered_map<std::string, std::size_t> node_ix;
        std::unordered_map<std::string, std::size_t> edge_ix;
        for (const auto& jn : j.at("nodes")) {
            NodeData n;
            n.id = jn.at("id").get<std::string>();
            auto c = jn.at("color").get<std::string>();
            if (c == "black") {
                n.color = Color::black;
            } else if (c == "white") {
                n.color = Color::white;
            } else {
                throw ParseError("node '" + n.id + "' has unknown color '" + c + "'");
            }
            if (jn.contains("pos")) {
                const auto& p = jn.at("pos");
                n.pos = std::array<double, 2>{p.at(0).get<double>(), p.at(1).get<double>()};
            }
            if (!node_ix.emplace(n.id, g.nodes.size()).second) {
                throw ParseError("duplicate node id '" + n.id + "'");
            }
            g.nodes.push_back(std::move(n));
        }
        auto lookup_node = [&](const std::string& id) {
            auto it = node_ix.find(id);
            if (it == node_ix.end()) throw ParseError("unknown node id '" + id + "'");
            return it->second;
        };
        for (const auto& je : j.at("edges")) {
            EdgeData e;
            e.id = je.at("id").get<std::string>();
            e.black = lookup_node(je.at("black").get<std::string>());
            e.white = lookup_node(je.at("white").get<std::string>());
            e.offset = vec2_from_json(je.at("offset"));
            if (!edge_ix.emplace(e.id, g.edges.size()).second) {
                throw ParseError("duplicate edge id '" + e.id + "'");
            }
            g.edges.push_back(std::move(e));
        }
        g.rotations.resize(g.nodes.size());
        for (const auto& [node_id, list] : j.at("rotations").items()) {
            auto v = lookup_node(node_id);
            for (const auto& je : list) {
                auto id = je.get<std::string>();
                auto it = edge_ix.find(id);
                if (it == edge_ix.end()) throw ParseError("rotation of '" + node_id + "' names unknown edge '" + id + "'");
                g.rotations[v].push_back(it->second);
            }
        }
        return g;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed model JSON: ") + ex.what());
    }
}

inline RawGraph parse_raw_graph(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("invalid JSON: ") + ex.what());
    }
    return raw_graph_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline RawGraph load_raw_graph(const std::string& path) { return parse_raw_graph(read_text_file(path)); }

inline TorusGraph load_graph(const std::string& path) { return validated(load_raw_graph(path)); }

inline std::string serialize(const RawGraph& g) { return to_json(g).dump(2) + "\n"; }

}  // namespace dimer
