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

#include <stdexcept>
#include <string>

#include "agqc/graph.hpp"
#include "agqc/pauli.hpp"

namespace agqc {

/// K_v = X_v prod_{w ~ v} Z_w. Inputs carry no generator.
inline PauliString stabilizer_generator(const OpenGraph &g, Vertex v) {
    g.check_vertex(v);
    if (g.is_input(v))
        throw std::invalid_argument("no stabilizer generator on input vertex " + std::to_string(v + 1));
    return {bit(v), g.neighbors(v), 0};
}

/// K_v with X_v replaced by exp(-i theta_v Z_v) X_v.
inline RotatedPauliOp twisted_generator(const OpenGraph &g, Vertex v) {
    PauliString k = stabilizer_generator(g, v);
    auto theta = g.angle(v);
    if (!theta) throw std::invalid_argument("vertex " + std::to_string(v + 1) + " has no angle");
    return RotatedPauliOp(k, {{v, *theta}});
}

}  // namespace agqc
