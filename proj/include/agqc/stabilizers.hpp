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

#include <map>
#include <stdexcept>
#include <string>

#include "agqc/generators.hpp"
#include "agqc/gflow.hpp"
#include "agqc/pauli.hpp"

namespace agqc {

/// T operators keyed by the non-output vertex they replace.
using StabilizerSet = std::map<Vertex, RotatedPauliOp>;

/// Raised when an operation is asked for something it deliberately refuses
/// (non-Clifford one-step updates, non-commuting layers, nested twists).
class RefusedError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// T_v = prod_{w in g(v)} K_w^{theta_w}.
inline RotatedPauliOp build_T(const OpenGraph &g, const Gflow &gf, Vertex v) {
    g.check_vertex(v);
    if (g.is_output(v)) throw std::invalid_argument("vertex " + std::to_string(v + 1) + " is an output");
    GflowReport rep = verify_gflow(g, gf);
    if (!rep.valid) throw std::invalid_argument("invalid gflow: " + rep.violations.front().detail);
    RotatedPauliOp t;
    for (Vertex w : mask_to_vertices(gf.correcting_set(v))) t = t * twisted_generator(g, w);
    return t;
}

inline StabilizerSet build_stabilizers(const OpenGraph &g, const Gflow &gf) {
    StabilizerSet out;
    for (Vertex v : g.non_outputs()) out[v] = build_T(g, gf, v);
    return out;
}

/// Sweeps the layers after L(v): whenever T_v carries Z or Y on a vertex w of
/// the current layer, multiply by the original T_w.
inline StabilizerSet one_step_update(const StabilizerSet &stabs, const Gflow &gf) {
    for (auto &[v, t] : stabs)
        if (t.has_twist())
            throw RefusedError("one-step update needs Clifford angles; T_" + std::to_string(v + 1) +
                               " carries a rotation (the general-angle search is exponential)");
    auto layers = layer_members(gf);
    StabilizerSet out;
    for (auto &[v, t] : stabs) {
        RotatedPauliOp cur = t;
        int lv = gf.layer_of(v);
        for (auto &members : layers) {
            if (gf.layer_of(members.front()) <= lv) continue;
            for (Vertex w : members) {
                if (!contains(cur.pauli().z, w)) continue;
                auto it = stabs.find(w);
                if (it == stabs.end()) throw std::invalid_argument("missing T for vertex " + std::to_string(w + 1));
                cur = cur * it->second;
            }
        }
        out[v] = cur;
    }
    return out;
}

/// Identity for outcome 0, prod_{mu in g(v)} K_mu for outcome 1.
inline PauliString correction_operator(const OpenGraph &g, const Gflow &gf, Vertex v, int outcome) {
    g.check_vertex(v);
    if (g.is_output(v)) throw std::invalid_argument("vertex " + std::to_string(v + 1) + " is an output");
    PauliString p;
    if (outcome == 0) return p;
    for (Vertex w : mask_to_vertices(gf.correcting_set(v))) p = p * stabilizer_generator(g, w);
    return p;
}

/// The part of `p` acting on `keep`; the phase is kept.
inline PauliString restrict_to(const PauliString &p, VertexMask keep) { return {p.x & keep, p.z & keep, p.phase}; }

}  // namespace agqc
