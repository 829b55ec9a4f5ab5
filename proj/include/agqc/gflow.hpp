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

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agqc/generators.hpp"
#include "agqc/graph.hpp"
#include "agqc/pauli.hpp"

namespace agqc {

/// Layer value carried by output vertices.
inline constexpr int kOutputLayer = INT_MAX;

/// Correcting sets on V \ O and a layer per vertex. Layer 0 is measured first.
struct Gflow {
    std::map<Vertex, VertexMask> g;
    std::map<Vertex, int> layer;

    VertexMask correcting_set(Vertex v) const {
        auto it = g.find(v);
        if (it == g.end()) throw std::invalid_argument("no correcting set for vertex " + std::to_string(v + 1));
        return it->second;
    }

    int layer_of(Vertex v) const {
        auto it = layer.find(v);
        if (it == layer.end()) throw std::invalid_argument("no layer for vertex " + std::to_string(v + 1));
        return it->second;
    }

    bool operator==(const Gflow &) const = default;
};

struct GflowViolation {
    Vertex vertex;
    std::string axiom;
    std::string detail;
};

struct GflowReport {
    bool valid = false;
    std::vector<GflowViolation> violations;
    int depth = 0;
    int max_size = 0;
    std::vector<int> layer_sizes;
};

/// Throws std::invalid_argument when `gf` does not fit `g`.
inline void check_gflow_structure(const OpenGraph &g, const Gflow &gf) {
    auto label = [](Vertex v) { return std::to_string(v + 1); };
    for (auto &[v, set] : gf.g) {
        if (v >= g.size()) throw std::invalid_argument("correcting set given for unknown vertex " + label(v));
        if (g.is_output(v)) throw std::invalid_argument("correcting set given for output vertex " + label(v));
        if ((set & ~g.all_mask()) != 0)
            throw std::invalid_argument("correcting set of vertex " + label(v) + " has an unknown vertex");
    }
    for (auto &[v, l] : gf.layer) {
        if (v >= g.size()) throw std::invalid_argument("layer given for unknown vertex " + label(v));
        if (g.is_output(v) && l != kOutputLayer)
            throw std::invalid_argument("output vertex " + label(v) + " must carry the output layer");
        if (!g.is_output(v) && (l < 0 || l == kOutputLayer))
            throw std::invalid_argument("bad layer for vertex " + label(v));
    }
    for (Vertex v = 0; v < g.size(); ++v) {
        if (!g.is_output(v) && !gf.g.contains(v))
            throw std::invalid_argument("missing correcting set for vertex " + label(v));
        if (!gf.layer.contains(v)) throw std::invalid_argument("missing layer for vertex " + label(v));
    }
}

/// Sizes of the non-output layers in increasing order, and their count.
inline std::pair<std::vector<int>, int> layers_and_depth(const Gflow &gf) {
    std::map<int, int> sizes;
    for (auto &[v, l] : gf.layer)
        if (l != kOutputLayer) ++sizes[l];
    std::vector<int> out;
    for (auto &[l, c] : sizes) out.push_back(c);
    return {out, static_cast<int>(out.size())};
}

/// Support size of prod_{w in g(v)} K_w.
inline int gflow_size(const OpenGraph &g, const Gflow &gf, Vertex v) {
    g.check_vertex(v);
    if (g.is_output(v)) throw std::invalid_argument("vertex " + std::to_string(v + 1) + " is an output");
    PauliString p;
    for (Vertex w : mask_to_vertices(gf.correcting_set(v))) p = p * stabilizer_generator(g, w);
    return p.weight();
}

/// Number of vertices in g(v), as opposed to gflow_size.
inline int correcting_set_cardinality(const Gflow &gf, Vertex v) { return popcount(gf.correcting_set(v)); }

inline std::vector<Edge> gflow_lines(const Gflow &gf) {
    std::vector<Edge> out;
    for (auto &[v, set] : gf.g)
        for (Vertex w : mask_to_vertices(set)) out.emplace_back(v, w);
    return out;
}

inline GflowReport verify_gflow(const OpenGraph &g, const Gflow &gf) {
    check_gflow_structure(g, gf);
    GflowReport r;
    auto label = [](Vertex v) { return std::to_string(v + 1); };
    for (Vertex v : g.non_outputs()) {
        VertexMask gv = gf.correcting_set(v);
        int lv = gf.layer_of(v);
        for (Vertex w : mask_to_vertices(gv & ~bit(v))) {
            if (g.is_input(w))
                r.violations.push_back({v, "G1", "correcting set contains input " + label(w)});
            else if (gf.layer_of(w) <= lv)
                r.violations.push_back({v, "G1", label(w) + " in g(" + label(v) + ") is not in its future"});
        }
        VertexMask odd = odd_neighborhood(g, gv);
        for (Vertex w : mask_to_vertices(odd & ~bit(v))) {
            if (gf.layer_of(w) <= lv)
                r.violations.push_back(
                    {v, "G2", label(w) + " is oddly connected to g(" + label(v) + ") but not in its future"});
        }
        bool in_g = contains(gv, v);
        bool in_odd = contains(odd, v);
        switch (g.plane(v)) {
            case Plane::XY:
                if (in_g) r.violations.push_back({v, "G3", "XY plane requires v not in g(v)"});
                if (!in_odd) r.violations.push_back({v, "G3", "XY plane requires g(v) oddly connected to v"});
                break;
            case Plane::XZ:
                if (!in_g) r.violations.push_back({v, "G3", "XZ plane requires v in g(v)"});
                if (!in_odd) r.violations.push_back({v, "G3", "XZ plane requires g(v) oddly connected to v"});
                break;
            case Plane::YZ:
                if (!in_g) r.violations.push_back({v, "G3", "YZ plane requires v in g(v)"});
                if (in_odd) r.violations.push_back({v, "G3", "YZ plane requires g(v) evenly connected to v"});
                break;
        }
    }
    r.valid = r.violations.empty();
    std::tie(r.layer_sizes, r.depth) = layers_and_depth(gf);
    if (r.valid)
        for (Vertex v : g.non_outputs()) r.max_size = std::max(r.max_size, gflow_size(g, gf, v));
    return r;
}

namespace detail {

/// Finds a subset of `columns` whose XOR equals `target`, preferring earlier columns.
inline std::optional<VertexMask> solve_gf2(const std::vector<VertexMask> &columns, VertexMask target) {
    struct Row {
        VertexMask vec;
        VertexMask combo;
    };
    std::vector<Row> basis;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        Row row{columns[i], bit(i)};
        for (const Row &b : basis)
            if (row.vec & (b.vec & (~b.vec + 1))) row.vec ^= b.vec, row.combo ^= b.combo;
        if (row.vec != 0) basis.push_back(row);
    }
    VertexMask combo = 0;
    for (const Row &b : basis)
        if (target & (b.vec & (~b.vec + 1))) target ^= b.vec, combo ^= b.combo;
    if (target != 0) return std::nullopt;
    return combo;
}

}  // namespace detail

/// Maximally delayed XY-plane gflow by backward layering, or nullopt.
inline std::optional<Gflow> find_gflow(const OpenGraph &g) {
    for (Vertex v = 0; v < g.size(); ++v)
        if (!g.is_output(v) && g.plane(v) != Plane::XY)
            throw std::invalid_argument("find_gflow supports the XY plane only");
    VertexMask processed = g.output_mask();
    VertexMask candidates = g.output_mask() & ~g.input_mask();
    std::map<Vertex, int> iteration;
    Gflow gf;
    for (int k = 0; processed != g.all_mask(); ++k) {
        VertexMask unprocessed = g.all_mask() & ~processed;
        std::vector<Vertex> cols = mask_to_vertices(candidates);
        std::vector<VertexMask> vecs;
        for (Vertex c : cols) vecs.push_back(g.neighbors(c) & unprocessed);
        VertexMask found = 0;
        for (Vertex v : mask_to_vertices(unprocessed)) {
            auto sol = detail::solve_gf2(vecs, bit(v));
            if (!sol) continue;
            VertexMask set = 0;
            for (std::size_t i : mask_to_vertices(*sol)) set |= bit(cols[i]);
            gf.g[v] = set;
            iteration[v] = k;
            found |= bit(v);
        }
        if (found == 0) return std::nullopt;
        processed |= found;
        candidates |= found & ~g.input_mask();
    }
    int last = 0;
    for (auto &[v, k] : iteration) last = std::max(last, k);
    for (Vertex v = 0; v < g.size(); ++v) gf.layer[v] = g.is_output(v) ? kOutputLayer : last - iteration[v];
    return gf;
}

/// The g^r family on generate_zigzag(n): g(v) = {n+v, ..., n+v+r-1} clamped
/// at the last output, layers of r consecutive inputs.
inline Gflow zigzag_gflow_family(std::size_t n, std::size_t r) {
    if (r < 1 || r > n) throw std::invalid_argument("r must satisfy 1 <= r <= n");
    Gflow gf;
    for (Vertex v = 0; v < n; ++v) {
        VertexMask set = 0;
        for (Vertex w = n + v; w < std::min(n + v + r, 2 * n); ++w) set |= bit(w);
        gf.g[v] = set;
        gf.layer[v] = static_cast<int>(v / r);
        gf.layer[n + v] = kOutputLayer;
    }
    return gf;
}

/// Vertices grouped by layer, earliest first.
inline std::vector<std::vector<Vertex>> layer_members(const Gflow &gf) {
    std::map<int, std::vector<Vertex>> by;
    for (auto &[v, l] : gf.layer)
        if (l != kOutputLayer) by[l].push_back(v);
    std::vector<std::vector<Vertex>> out;
    for (auto &[l, vs] : by) out.push_back(vs);
    return out;
}

}  // namespace agqc
