// Copyright 2026 The agqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON formats. Vertices are 1-based in every file.
//
// Graph:  {"n": 4, "edges": [[1, 2], ...], "inputs": [1], "outputs": [4],
//          "angles": {"1": 0.0, ...}, "planes": {"1": "XY", ...}}
//         "angles" and "planes" are optional; planes default to XY.
// Gflow:  {"g": {"1": [2], ...}, "layer": {"1": 0, ..., "4": "output"},
//          "graph": {...}}  with "graph" optional.
// Schedule (written only): mode, gamma, graph, gflow and one entry per step
//         with rendered operators.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "agqc/compile.hpp"
#include "agqc/gflow.hpp"
#include "agqc/graph.hpp"
#include "agqc/logical.hpp"
#include "agqc/sim.hpp"

namespace agqc {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_object(const Json &j, const std::string &what, const std::set<std::string> &allowed,
                           const std::set<std::string> &required) {
    if (!j.is_object()) throw ParseError(what + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.contains(it.key())) throw ParseError(what + ": unknown field \"" + it.key() + "\"");
    for (const std::string &r : required)
        if (!j.contains(r)) throw ParseError(what + ": missing field \"" + r + "\"");
}

inline Vertex vertex_from(const Json &j, const std::string &what) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw ParseError(what + ": vertices are integers >= 1");
    return static_cast<Vertex>(j.get<long long>() - 1);
}

inline Vertex vertex_from_key(const std::string &key, const std::string &what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(key, &pos);
    } catch (const std::exception &) {
        throw ParseError(what + ": bad vertex key \"" + key + "\"");
    }
    if (pos != key.size() || v < 1) throw ParseError(what + ": bad vertex key \"" + key + "\"");
    return static_cast<Vertex>(v - 1);
}

inline std::vector<Vertex> vertex_list(const Json &j, const std::string &what) {
    if (!j.is_array()) throw ParseError(what + ": expected an array");
    std::vector<Vertex> out;
    for (const Json &e : j) out.push_back(vertex_from(e, what));
    return out;
}

inline Json vertex_list_json(const std::vector<Vertex> &vs) {
    Json a = Json::array();
    for (Vertex v : vs) a.push_back(v + 1);
    return a;
}

inline std::string key_of(Vertex v) { return std::to_string(v + 1); }

}  // namespace detail

inline Json graph_to_json(const OpenGraph &g) {
    Json j;
    j["n"] = g.size();
    Json edges = Json::array();
    for (auto [a, b] : g.edges()) edges.push_back({a + 1, b + 1});
    j["edges"] = edges;
    j["inputs"] = detail::vertex_list_json(g.inputs());
    j["outputs"] = detail::vertex_list_json(g.outputs());
    Json angles = Json::object();
    for (auto &[v, a] : g.angles()) angles[detail::key_of(v)] = a;
    j["angles"] = angles;
    Json planes = Json::object();
    for (auto &[v, p] : g.planes()) planes[detail::key_of(v)] = plane_name(p);
    j["planes"] = planes;
    return j;
}

inline OpenGraph graph_from_json(const Json &j) {
    detail::require_object(j, "graph", {"n", "edges", "inputs", "outputs", "angles", "planes"},
                           {"n", "edges", "inputs", "outputs"});
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0) throw ParseError("graph: n must be >= 0");
    std::vector<Edge> edges;
    if (!j["edges"].is_array()) throw ParseError("graph: edges must be an array");
    for (const Json &e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) throw ParseError("graph: each edge is a pair");
        edges.emplace_back(detail::vertex_from(e[0], "graph edge"), detail::vertex_from(e[1], "graph edge"));
    }
    std::map<Vertex, double> angles;
    if (j.contains("angles")) {
        if (!j["angles"].is_object()) throw ParseError("graph: angles must be an object");
        for (auto it = j["angles"].begin(); it != j["angles"].end(); ++it) {
            if (!it.value().is_number()) throw ParseError("graph: angle values are numbers");
            angles[detail::vertex_from_key(it.key(), "graph angles")] = it.value().get<double>();
        }
    }
    std::map<Vertex, Plane> planes;
    if (j.contains("planes")) {
        if (!j["planes"].is_object()) throw ParseError("graph: planes must be an object");
        for (auto it = j["planes"].begin(); it != j["planes"].end(); ++it) {
            if (!it.value().is_string()) throw ParseError("graph: plane values are strings");
            try {
                planes[detail::vertex_from_key(it.key(), "graph planes")] = parse_plane(it.value().get<std::string>());
            } catch (const std::invalid_argument &e) {
                throw ParseError(std::string("graph: ") + e.what());
            }
        }
    }
    return OpenGraph(j["n"].get<std::size_t>(), std::move(edges), detail::vertex_list(j["inputs"], "graph inputs"),
                     detail::vertex_list(j["outputs"], "graph outputs"), std::move(angles), std::move(planes));
}

inline Json gflow_to_json(const Gflow &gf, const OpenGraph *graph = nullptr) {
    Json j;
    Json g = Json::object();
    for (auto &[v, set] : gf.g) g[detail::key_of(v)] = detail::vertex_list_json(mask_to_vertices(set));
    j["g"] = g;
    Json layer = Json::object();
    for (auto &[v, l] : gf.layer) {
        if (l == kOutputLayer)
            layer[detail::key_of(v)] = "output";
        else
            layer[detail::key_of(v)] = l;
    }
    j["layer"] = layer;
    if (graph) j["graph"] = graph_to_json(*graph);
    return j;
}

struct GflowFile {
    Gflow gflow;
    std::optional<OpenGraph> graph;
};

inline GflowFile gflow_from_json(const Json &j) {
    detail::require_object(j, "gflow", {"g", "layer", "graph"}, {"g", "layer"});
    GflowFile out;
    if (!j["g"].is_object() || !j["layer"].is_object()) throw ParseError("gflow: g and layer are objects");
    for (auto it = j["g"].begin(); it != j["g"].end(); ++it) {
        std::vector<Vertex> vs = detail::vertex_list(it.value(), "gflow g");
        for (Vertex v : vs)
            if (v >= kMaxVertices) throw ParseError("gflow: vertex out of range");
        out.gflow.g[detail::vertex_from_key(it.key(), "gflow g")] = vertices_to_mask(vs);
    }
    for (auto it = j["layer"].begin(); it != j["layer"].end(); ++it) {
        Vertex v = detail::vertex_from_key(it.key(), "gflow layer");
        const Json &l = it.value();
        if (l.is_string() && l.get<std::string>() == "output")
            out.gflow.layer[v] = kOutputLayer;
        else if (l.is_number_integer() && l.get<long long>() >= 0 && l.get<long long>() < kOutputLayer)
            out.gflow.layer[v] = static_cast<int>(l.get<long long>());
        else
            throw ParseError("gflow: layers are integers >= 0 or \"output\"");
    }
    if (j.contains("graph")) out.graph = graph_from_json(j["graph"]);
    return out;
}

inline Json schedule_to_json(const Schedule &s) {
    Json j;
    j["mode"] = mode_name(s.mode);
    j["gamma"] = s.gamma;
    j["graph"] = graph_to_json(s.graph);
    j["gflow"] = gflow_to_json(s.gflow);
    Json steps = Json::array();
    for (const ScheduleStep &st : s.steps) {
        Json e;
        std::vector<Vertex> intro;
        for (auto &[v, x] : st.introduced) intro.push_back(v);
        e["introduced"] = detail::vertex_list_json(intro);
        Json removed = Json::object();
        for (auto &[v, t] : st.removed) removed[detail::key_of(v)] = to_string(t);
        e["removed"] = removed;
        Json stat = Json::array();
        for (auto &t : st.static_terms) stat.push_back(to_string(t));
        e["static"] = stat;
        Json del = Json::array();
        for (auto &t : st.deleted) del.push_back(to_string(t));
        e["deleted"] = del;
        e["strip"] = st.strip;
        steps.push_back(e);
    }
    j["steps"] = steps;
    return j;
}

/// Row-major [[re, im], ...] rows.
inline Json matrix_to_json(const DenseOperator &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline DenseOperator matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix: expected rows");
    DenseOperator m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != j[0].size()) throw ParseError("matrix: ragged rows");
        for (std::size_t c = 0; c < j[r].size(); ++c) {
            const Json &e = j[r][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError("matrix: entries are [re, im]");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {e[0].get<double>(), e[1].get<double>()};
        }
    }
    return m;
}

inline Json frame_to_json(const LogicalFrame &f) {
    Json j = Json::object();
    for (std::size_t k = 0; k < f.qubits.size(); ++k) {
        j["X_L" + std::to_string(k + 1)] = to_string(f.qubits[k].x);
        j["Z_L" + std::to_string(k + 1)] = to_string(f.qubits[k].z);
    }
    return j;
}

/// Reads a whole file ("-" is stdin) and parses it.
inline Json read_json(const std::string &path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace agqc
