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
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace agqc {

/// Vertices are 0-based internally. Files and reports use 1-based labels.
using Vertex = std::size_t;

/// Set of vertices packed into one word; graphs are capped at 64 vertices.
using VertexMask = std::uint64_t;

inline constexpr std::size_t kMaxVertices = 64;
inline constexpr double kAngleTolerance = 1e-12;

inline constexpr VertexMask bit(Vertex v) { return VertexMask{1} << v; }
inline constexpr bool contains(VertexMask m, Vertex v) { return (m >> v) & 1U; }
inline int popcount(VertexMask m) { return std::popcount(m); }
inline bool odd_parity(VertexMask m) { return (std::popcount(m) & 1) != 0; }

inline std::vector<Vertex> mask_to_vertices(VertexMask m) {
    std::vector<Vertex> out;
    while (m != 0) {
        out.push_back(static_cast<Vertex>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

template <typename Range>
VertexMask vertices_to_mask(const Range &vs) {
    VertexMask m = 0;
    for (Vertex v : vs) m |= bit(v);
    return m;
}

enum class Plane { XY, XZ, YZ };

inline const char *plane_name(Plane p) {
    switch (p) {
        case Plane::XY: return "XY";
        case Plane::XZ: return "XZ";
        case Plane::YZ: return "YZ";
    }
    return "?";
}

inline Plane parse_plane(const std::string &s) {
    if (s == "XY") return Plane::XY;
    if (s == "XZ") return Plane::XZ;
    if (s == "YZ") return Plane::YZ;
    throw std::invalid_argument("unknown measurement plane '" + s + "'");
}

/// True when `theta` is a multiple of pi/2 within kAngleTolerance.
inline bool is_clifford_angle(double theta) {
    double q = theta / (std::numbers::pi / 2);
    return std::abs(q - std::round(q)) * (std::numbers::pi / 2) < kAngleTolerance;
}

using Edge = std::pair<Vertex, Vertex>;

/// An open graph: a graph state with designated inputs and outputs, plus a
/// measurement angle and plane for every measured vertex.
///
/// Construction never fails on malformed data (self-loops, duplicates,
/// out-of-range vertices); call validate() to get the list of problems.
/// The object is immutable afterwards.
class OpenGraph {
   public:
    OpenGraph() = default;

    OpenGraph(std::size_t n, std::vector<Edge> edges, std::vector<Vertex> inputs, std::vector<Vertex> outputs,
              std::map<Vertex, double> angles = {}, std::map<Vertex, Plane> planes = {})
        : n_(n),
          edges_(std::move(edges)),
          inputs_(std::move(inputs)),
          outputs_(std::move(outputs)),
          angles_(std::move(angles)),
          planes_(std::move(planes)),
          adjacency_(n, 0) {
        for (auto &[a, b] : edges_) {
            if (a > b) std::swap(a, b);
            if (a < n_ && b < n_ && a != b && n_ <= kMaxVertices) {
                adjacency_[a] |= bit(b);
                adjacency_[b] |= bit(a);
            }
        }
        for (Vertex v : inputs_)
            if (v < kMaxVertices) input_mask_ |= bit(v);
        for (Vertex v : outputs_)
            if (v < kMaxVertices) output_mask_ |= bit(v);
    }

    std::size_t size() const { return n_; }
    const std::vector<Edge> &edges() const { return edges_; }
    const std::vector<Vertex> &inputs() const { return inputs_; }
    const std::vector<Vertex> &outputs() const { return outputs_; }
    const std::map<Vertex, double> &angles() const { return angles_; }
    const std::map<Vertex, Plane> &planes() const { return planes_; }

    VertexMask input_mask() const { return input_mask_; }
    VertexMask output_mask() const { return output_mask_; }
    VertexMask all_mask() const { return n_ >= 64 ? ~VertexMask{0} : bit(n_) - 1; }
    VertexMask non_output_mask() const { return all_mask() & ~output_mask_; }

    bool is_input(Vertex v) const { return v < kMaxVertices && contains(input_mask_, v); }
    bool is_output(Vertex v) const { return v < kMaxVertices && contains(output_mask_, v); }

    /// Neighbourhood of v as a mask. Throws for unknown vertices.
    VertexMask neighbors(Vertex v) const {
        check_vertex(v);
        return adjacency_[v];
    }

    bool has_edge(Vertex a, Vertex b) const { return a < n_ && b < n_ && contains(adjacency_[a], b); }

    int degree(Vertex v) const { return popcount(neighbors(v)); }

    /// Measurement angle; outputs without an explicit angle read as 0.
    std::optional<double> angle(Vertex v) const {
        check_vertex(v);
        auto it = angles_.find(v);
        if (it != angles_.end()) return it->second;
        if (is_output(v)) return 0.0;
        return std::nullopt;
    }

    Plane plane(Vertex v) const {
        check_vertex(v);
        auto it = planes_.find(v);
        return it == planes_.end() ? Plane::XY : it->second;
    }

    std::vector<Vertex> non_outputs() const { return mask_to_vertices(non_output_mask()); }

    void check_vertex(Vertex v) const {
        if (v >= n_) throw std::out_of_range("unknown vertex " + std::to_string(v + 1));
    }

    bool operator==(const OpenGraph &o) const {
        auto sorted_edges = [](std::vector<Edge> e) {
            std::sort(e.begin(), e.end());
            return e;
        };
        auto planes_eq = [&] {
            for (Vertex v = 0; v < n_; ++v)
                if (plane(v) != o.plane(v)) return false;
            return true;
        };
        return n_ == o.n_ && sorted_edges(edges_) == sorted_edges(o.edges_) && inputs_ == o.inputs_ &&
               outputs_ == o.outputs_ && angles_ == o.angles_ && planes_eq();
    }

   private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<Vertex> inputs_;
    std::vector<Vertex> outputs_;
    std::map<Vertex, double> angles_;
    std::map<Vertex, Plane> planes_;
    std::vector<VertexMask> adjacency_;
    VertexMask input_mask_ = 0;
    VertexMask output_mask_ = 0;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const OpenGraph &g) {
    ValidationReport r;
    auto label = [](Vertex v) { return std::to_string(v + 1); };
    if (g.size() > kMaxVertices) {
        r.violations.push_back("too many vertices: " + std::to_string(g.size()) + " > " +
                               std::to_string(kMaxVertices));
        return r;
    }
    std::vector<Edge> seen;
    for (auto [a, b] : g.edges()) {
        if (a >= g.size() || b >= g.size()) {
            r.violations.push_back("edge (" + label(a) + "," + label(b) + ") references an unknown vertex");
            continue;
        }
        if (a == b) {
            r.violations.push_back("self-loop at vertex " + label(a));
            continue;
        }
        Edge e{std::min(a, b), std::max(a, b)};
        if (std::find(seen.begin(), seen.end(), e) != seen.end())
            r.violations.push_back("duplicate edge (" + label(e.first) + "," + label(e.second) + ")");
        seen.push_back(e);
    }
    auto check_list = [&](const std::vector<Vertex> &vs, const char *what) {
        VertexMask m = 0;
        for (Vertex v : vs) {
            if (v >= g.size()) {
                r.violations.push_back(std::string(what) + " vertex " + label(v) + " is unknown");
            } else if (contains(m, v)) {
                r.violations.push_back(std::string(what) + " vertex " + label(v) + " listed twice");
            } else {
                m |= bit(v);
            }
        }
    };
    check_list(g.inputs(), "input");
    check_list(g.outputs(), "output");
    if (g.outputs().size() < g.inputs().size())
        r.violations.push_back("information loss: fewer outputs (" + std::to_string(g.outputs().size()) +
                               ") than inputs (" + std::to_string(g.inputs().size()) + ")");
    for (auto &[v, theta] : g.angles()) {
        if (v >= g.size()) r.violations.push_back("angle given for unknown vertex " + label(v));
        if (!std::isfinite(theta)) r.violations.push_back("non-finite angle at vertex " + label(v));
    }
    for (auto &[v, p] : g.planes())
        if (v >= g.size()) r.violations.push_back("plane given for unknown vertex " + label(v));
    for (Vertex v = 0; v < g.size(); ++v)
        if (!g.is_output(v) && !g.angles().contains(v))
            r.violations.push_back("measured vertex " + label(v) + " has no angle");
    return r;
}

/// Parity of the number of edges between `set` and `v` (true = odd).
inline bool odd_connectivity(const OpenGraph &g, VertexMask set, Vertex v) {
    return odd_parity(g.neighbors(v) & set);
}

/// Odd neighbourhood of a set: vertices with an odd number of edges into it.
inline VertexMask odd_neighborhood(const OpenGraph &g, VertexMask set) {
    VertexMask out = 0;
    for (Vertex v : mask_to_vertices(set)) out ^= g.neighbors(v);
    return out;
}

// ---------------------------------------------------------------------------
// Generators.

/// Path 1-2-...-n with input 1 and output n. `angles` holds either n-1 or n
/// entries; an angle supplied for the output vertex is ignored.
inline OpenGraph generate_chain(std::size_t n, const std::vector<double> &angles) {
    if (n < 2) throw std::invalid_argument("chain needs at least 2 vertices");
    if (angles.size() + 1 != n && angles.size() != n)
        throw std::invalid_argument("chain of " + std::to_string(n) + " vertices needs " + std::to_string(n - 1) +
                                    " or " + std::to_string(n) + " angles");
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    std::map<Vertex, double> a;
    for (Vertex v = 0; v + 1 < n; ++v) a[v] = angles[v];
    return OpenGraph(n, std::move(edges), {0}, {n - 1}, std::move(a));
}

inline OpenGraph generate_chain(std::size_t n) { return generate_chain(n, std::vector<double>(n - 1, 0.0)); }

/// rows x cols square lattice. Vertex (r, c) has index c*rows + r, so each
/// column is a contiguous block; inputs are column 0, outputs the last column.
inline OpenGraph generate_cluster(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 2) throw std::invalid_argument("cluster needs rows >= 1 and cols >= 2");
    if (rows * cols > kMaxVertices) throw std::invalid_argument("cluster exceeds 64 vertices");
    auto id = [rows](std::size_t r, std::size_t c) { return c * rows + r; };
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    }
    std::sort(edges.begin(), edges.end());
    std::vector<Vertex> in, out;
    for (std::size_t r = 0; r < rows; ++r) {
        in.push_back(id(r, 0));
        out.push_back(id(r, cols - 1));
    }
    std::map<Vertex, double> a;
    for (std::size_t c = 0; c + 1 < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) a[id(r, c)] = 0.0;
    return OpenGraph(rows * cols, std::move(edges), std::move(in), std::move(out), std::move(a));
}

/// Zig-zag graph on 2n vertices: inputs 1..n, outputs n+1..2n, edges
/// (v, n+v) for all v and (v+1, n+v) for v < n (1-based).
inline OpenGraph generate_zigzag(std::size_t n) {
    if (n < 1) throw std::invalid_argument("zig-zag needs n >= 1");
    if (2 * n > kMaxVertices) throw std::invalid_argument("zig-zag exceeds 64 vertices");
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) {
        edges.emplace_back(v, n + v);
        if (v + 1 < n) edges.emplace_back(v + 1, n + v);
    }
    std::vector<Vertex> in, out;
    std::map<Vertex, double> a;
    for (Vertex v = 0; v < n; ++v) {
        in.push_back(v);
        out.push_back(n + v);
        a[v] = 0.0;
    }
    return OpenGraph(2 * n, std::move(edges), std::move(in), std::move(out), std::move(a));
}

/// Two rows a1-a2-a3 and b1-b2-b3 joined by the rung (a2, b2).
/// Indices: a1..a3 = 0..2, b1..b3 = 3..5.
inline OpenGraph generate_cnot_graph() {
    std::vector<Edge> edges{{0, 1}, {1, 2}, {3, 4}, {4, 5}, {1, 4}};
    std::map<Vertex, double> a{{0, 0.0}, {1, 0.0}, {3, 0.0}, {4, 0.0}};
    return OpenGraph(6, std::move(edges), {0, 3}, {2, 5}, std::move(a));
}

/// Copy of `g` with the measurement angles replaced.
inline OpenGraph with_angles(const OpenGraph &g, std::map<Vertex, double> angles) {
    return OpenGraph(g.size(), g.edges(), g.inputs(), g.outputs(), std::move(angles), g.planes());
}

}  // namespace agqc
