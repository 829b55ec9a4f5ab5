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

#include "agqc/stabilizers.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace agqc;

namespace {

const double kPi = std::numbers::pi;

Gflow found(const OpenGraph &g) {
    auto gf = find_gflow(g);
    if (!gf) throw std::runtime_error("no gflow");
    return *gf;
}

OpenGraph random_angles(const OpenGraph &g, std::mt19937_64 &rng, bool clifford) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::uniform_int_distribution<int> q(0, 3);
    std::map<Vertex, double> a;
    for (Vertex v : g.non_outputs()) a[v] = clifford ? q(rng) * kPi / 2 : u(rng);
    return with_angles(g, a);
}

std::vector<OpenGraph> sample_graphs() {
    return {generate_chain(4), generate_chain(6), generate_cluster(2, 3), generate_cluster(3, 3),
            generate_zigzag(4), generate_cnot_graph()};
}

}  // namespace

TEST(BuildT, ChainIsNextGenerator) {
    OpenGraph g = generate_chain(5, {0.0, 0.3, 0.5, 0.7});
    Gflow gf = found(g);
    for (Vertex v = 0; v + 1 < 5; ++v) EXPECT_EQ(build_T(g, gf, v), twisted_generator(g, v + 1));
}

TEST(BuildT, ZigzagSupport) {
    OpenGraph g = generate_zigzag(3);
    RotatedPauliOp t = build_T(g, zigzag_gflow_family(3, 2), 0);
    EXPECT_EQ(support(t), bit(0) | bit(2) | bit(3) | bit(4));
    EXPECT_EQ(to_string(t), "+1 · Z1 Z3 X4 X5");
}

TEST(BuildT, ClusterInterior) {
    OpenGraph g = generate_cluster(3, 4);
    Gflow gf = found(g);
    for (Vertex v : g.non_outputs()) EXPECT_LE(build_T(g, gf, v).degree(), 5);
    // Vertex (1, 1) is corrected by its right neighbour.
    Gflow rows;
    for (Vertex v = 0; v < 12; ++v) {
        if (v < 9) {
            rows.g[v] = bit(v + 3);
            rows.layer[v] = static_cast<int>(v / 3);
        } else {
            rows.layer[v] = kOutputLayer;
        }
    }
    EXPECT_EQ(build_T(g, rows, 4), twisted_generator(g, 7));
    EXPECT_EQ(build_T(g, rows, 4).degree(), 5);
}

TEST(BuildT, Errors) {
    OpenGraph g = generate_chain(3);
    Gflow gf = found(g);
    EXPECT_THROW(build_T(g, gf, 2), std::invalid_argument);
    Gflow bad = gf;
    bad.g[0] = bit(0);
    EXPECT_THROW(build_T(g, bad, 1), std::invalid_argument);
}

TEST(BuildT, CommutationPattern) {
    std::mt19937_64 rng(3);
    for (const OpenGraph &base : sample_graphs()) {
        for (int trial = 0; trial < 3; ++trial) {
            OpenGraph g = random_angles(base, rng, false);
            Gflow gf = found(g);
            StabilizerSet t = build_stabilizers(g, gf);
            for (auto &[v, tv] : t) {
                EXPECT_EQ(commutes(tv, PauliString::X(v)), Commutation::Anticommute);
                for (auto &[w, tw] : t) {
                    EXPECT_EQ(commutes(tv, tw), Commutation::Commute);
                    if (gf.layer_of(w) > gf.layer_of(v))
                        EXPECT_EQ(commutes(tw, PauliString::X(v)), Commutation::Commute);
                }
            }
        }
    }
}

TEST(OneStep, ChainFour) {
    OpenGraph g = generate_chain(4);
    Gflow gf = found(g);
    StabilizerSet t = one_step_update(build_stabilizers(g, gf), gf);
    EXPECT_EQ(to_string(t.at(0)), "+1 · Z1 X2 X4");
    EXPECT_EQ(to_string(t.at(1)), "+1 · Z2 X3 Z4");
    EXPECT_EQ(to_string(t.at(2)), "+1 · Z3 X4");
}

TEST(OneStep, CommutationTargetAtCliffordAngles) {
    std::mt19937_64 rng(5);
    for (const OpenGraph &base : sample_graphs()) {
        for (int trial = 0; trial < 4; ++trial) {
            OpenGraph g = random_angles(base, rng, true);
            Gflow gf = found(g);
            StabilizerSet t = one_step_update(build_stabilizers(g, gf), gf);
            for (auto &[v, tv] : t) {
                for (auto &[w, tw] : t) {
                    EXPECT_EQ(commutes(tv, tw), Commutation::Commute);
                    EXPECT_EQ(commutes(tv, PauliString::X(w)),
                              v == w ? Commutation::Anticommute : Commutation::Commute);
                }
            }
        }
    }
}

TEST(OneStep, DepthOneUnchanged) {
    OpenGraph g = generate_zigzag(4);
    Gflow gf = zigzag_gflow_family(4, 4);
    StabilizerSet t = build_stabilizers(g, gf);
    EXPECT_EQ(one_step_update(t, gf), t);
}

TEST(OneStep, RefusesGeneralAngles) {
    OpenGraph g = generate_chain(4, {0.0, kPi / 3, 0.0});
    Gflow gf = found(g);
    EXPECT_THROW(one_step_update(build_stabilizers(g, gf), gf), RefusedError);
}

TEST(Correction, Examples) {
    OpenGraph g = generate_chain(4);
    Gflow gf = found(g);
    EXPECT_EQ(correction_operator(g, gf, 1, 0), PauliString{});
    EXPECT_EQ(correction_operator(g, gf, 1, 1), stabilizer_generator(g, 2));
    OpenGraph two = generate_chain(2);
    PauliString c = correction_operator(two, found(two), 0, 1);
    EXPECT_EQ(letters_string(c), "Z1 X2");
    EXPECT_EQ(letters_string(restrict_to(c, two.output_mask())), "X2");
    EXPECT_THROW(correction_operator(g, gf, 3, 1), std::invalid_argument);
}
