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

#include "agqc/logical.hpp"
#include "agqc/sim.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

using namespace agqc;

namespace {

const double kPi = std::numbers::pi;

Gflow found(const OpenGraph &g) { return *find_gflow(g); }

// Oracle matrices built from 2x2 factors.
DenseOperator kron_site(std::size_t n, Vertex v, const Eigen::Matrix2cd &m) {
    DenseOperator out = DenseOperator::Identity(1, 1);
    for (int s = static_cast<int>(n) - 1; s >= 0; --s) {
        DenseOperator f = (static_cast<Vertex>(s) == v) ? DenseOperator(m) : DenseOperator::Identity(2, 2);
        DenseOperator next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
        out = next;
    }
    return out;
}

Eigen::Matrix2cd px() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}
Eigen::Matrix2cd pz() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}
Eigen::Matrix2cd twisted_x(double theta) { return std::cos(theta) * px() + Complex(0, -std::sin(theta)) * pz() * px(); }

/// -gamma sum of K^theta_{v+1} built from Kronecker factors, chain only.
DenseOperator chain_t(std::size_t n, Vertex v, const std::vector<double> &theta) {
    Vertex w = v + 1;
    double th = w < theta.size() ? theta[w] : 0.0;
    DenseOperator m = kron_site(n, w, twisted_x(th));
    m = m * kron_site(n, v, pz());
    if (w + 1 < n) m = m * kron_site(n, w + 1, pz());
    return m;
}

}  // namespace

TEST(Assemble, ChainEndpoints) {
    OpenGraph g = generate_chain(4, {0.0, 0.4, 0.9});
    Schedule s = compile_stepwise(g, found(g));
    std::vector<double> th{0.0, 0.4, 0.9};
    DenseOperator t1 = chain_t(4, 0, th), t2 = chain_t(4, 1, th), t3 = chain_t(4, 2, th);
    DenseOperator x1 = kron_site(4, 0, px());
    EXPECT_LT((assemble(s, 0, 0.0) + t1 + t2 + t3).norm(), 1e-12);
    EXPECT_LT((assemble(s, 0, 1.0) + x1 + t2 + t3).norm(), 1e-12);
    EXPECT_LT((assemble(s, 0, 0.3) + 0.7 * t1 + 0.3 * x1 + t2 + t3).norm(), 1e-12);
    EXPECT_TRUE(assemble(s, 1, 0.2).isApprox(assemble(s, 1, 0.2).adjoint()));
}

TEST(Assemble, ReorderedStep) {
    OpenGraph g = generate_chain(4);
    auto [s, rep] = compile_reordered_fixed(g, found(g), {2, 0, 1});
    std::vector<double> th(4, 0.0);
    DenseOperator expect = -chain_t(4, 0, th) - chain_t(4, 1, th) - 0.6 * chain_t(4, 2, th) - 0.4 * kron_site(4, 2, px());
    EXPECT_LT((assemble(s, 0, 0.4) - expect).norm(), 1e-12);
}

TEST(Assemble, SizeCap) {
    OpenGraph g = generate_chain(15);
    Schedule s = compile_stepwise(g, found(g));
    EXPECT_THROW(assemble(s, 0, 0.0), std::invalid_argument);
}

TEST(Scan, ChainGapMatchesAnalytic) {
    for (std::size_t n = 3; n <= 6; ++n) {
        OpenGraph g = generate_chain(n, std::vector<double>(n - 1, 0.3));
        Schedule s = compile_stepwise(g, found(g));
        for (std::size_t k = 0; k < s.steps.size(); ++k) {
            SpectralScan scan = spectral_scan(s, k, uniform_grid(11));
            for (std::size_t i = 0; i < scan.s_grid.size(); ++i) {
                double sv = scan.s_grid[i];
                EXPECT_NEAR(scan.gap[i], 2 * std::sqrt(1 - 2 * sv + 2 * sv * sv), 1e-9);
                EXPECT_EQ(scan.ground_degeneracy[i], 2);
            }
        }
    }
}

TEST(Scan, LayeredLadder) {
    OpenGraph g = generate_zigzag(3);
    Schedule s = compile_layered(g, zigzag_gflow_family(3, 3));
    SpectralScan scan = spectral_scan(s, 0, {0.25});
    double eta = gap_eta(0.25);
    // Ladder -3 eta, -eta, eta, 3 eta, each with degeneracy 8 * C(3, k).
    std::vector<double> e = scan.eigenvalues[0];
    EXPECT_NEAR(e.front(), -3 * eta, 1e-9);
    EXPECT_NEAR(e[8], -eta, 1e-9);
    EXPECT_NEAR(e.back(), 3 * eta, 1e-9);
    EXPECT_EQ(scan.ground_degeneracy[0], 8);
    EXPECT_NEAR(scan.gap[0], 2 * eta, 1e-9);
}

TEST(Scan, DoubledDegeneracy) {
    OpenGraph g = generate_chain(4);
    auto [s, rep] = compile_reordered_fixed(g, found(g), {2, 0, 1});
    SpectralScan scan = spectral_scan(s, 0, {0.0, 0.5, 1.0});
    EXPECT_EQ(scan.ground_degeneracy[0], 2);
    EXPECT_EQ(scan.ground_degeneracy[2], 4);
}

TEST(Compare, PhaseInvariant) {
    DenseOperator h = hadamard_rz(0.0);
    EXPECT_LT(unitary_distance(h, std::polar(1.0, 0.7) * h), 1e-9);
    EXPECT_NEAR(unitary_distance(h, DenseOperator::Identity(2, 2)), std::sqrt(2.0), 1e-9);
}

TEST(Mbqc, TwoQubitTeleportation) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (double theta : {0.0, 0.3, kPi / 2, 2.1}) {
        OpenGraph g = generate_chain(2, {theta});
        Gflow gf = found(g);
        StateVector phi(2);
        phi << Complex(n01(rng), n01(rng)), Complex(n01(rng), n01(rng));
        phi.normalize();
        StateVector expect = hadamard_rz(theta) * phi;
        for (int m : {0, 1}) {
            StateVector out = mbqc_reference_run(g, gf, phi, std::vector<int>{m}).output;
            EXPECT_NEAR(std::abs(out.dot(expect)), 1.0, 1e-10) << theta << " " << m;
        }
    }
}

TEST(Mbqc, OutcomeIndependence) {
    OpenGraph g = generate_chain(4, {0.2, 1.1, -0.7});
    Gflow gf = found(g);
    StateVector phi(2);
    phi << Complex(0.6, 0.1), Complex(-0.3, 0.7);
    phi.normalize();
    StateVector ref = mbqc_reference_run(g, gf, phi, std::vector<int>{0, 0, 0}).output;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        MbqcRun run = mbqc_reference_run(g, gf, phi, std::nullopt, seed);
        EXPECT_NEAR(std::abs(run.output.dot(ref)), 1.0, 1e-10);
    }
    DenseOperator u = mbqc_unitary(g, gf);
    EXPECT_LT(unitary_distance(u, chain_unitary({0.2, 1.1, -0.7})), 1e-10);
}

TEST(Mbqc, CnotGraphIsHadamardConjugatedCnot) {
    OpenGraph g = generate_cnot_graph();
    DenseOperator u = mbqc_unitary(g, found(g));
    // Control a = bit 0, target b = bit 1.
    DenseOperator cnot = DenseOperator::Zero(4, 4);
    for (int i = 0; i < 4; ++i) cnot((i & 1) ? (i ^ 2) : i, i) = 1;
    DenseOperator ha = kron_site(2, 0, hadamard_rz(0.0));
    DenseOperator hh = kron_site(2, 0, hadamard_rz(0.0)) * kron_site(2, 1, hadamard_rz(0.0));
    DenseOperator cz = DenseOperator::Identity(4, 4);
    cz(3, 3) = -1;
    EXPECT_LT(unitary_distance(u, hh * cz * hh), 1e-10);
    EXPECT_LT(unitary_distance(u, ha * cnot * ha), 1e-10);
    EXPECT_GT(unitary_distance(u, cnot), 0.5);
}

TEST(Encoding, InInitialGroundSpace) {
    OpenGraph g = generate_cnot_graph();
    g = with_angles(g, {{0, 0.3}, {1, 0.5}, {3, -0.2}, {4, 1.0}});
    Schedule s = compile_stepwise(g, found(g));
    DenseOperator e = encoding_basis(g);
    DenseOperator h0 = assemble(s, 0, 0.0);
    double e0 = Eigen::SelfAdjointEigenSolver<DenseOperator>(h0, Eigen::EigenvaluesOnly).eigenvalues()(0);
    EXPECT_LT((h0 * e - e0 * e).norm(), 1e-10);
    EXPECT_LT((e.adjoint() * e - DenseOperator::Identity(4, 4)).norm(), 1e-12);
}

TEST(Evolve, ConstantHamiltonianIsIdentity) {
    OpenGraph g = generate_chain(3);
    Schedule s = compile_stepwise(g, found(g));
    ScheduleStep still = s.steps[0];
    still.introduced[0] = still.removed.at(0).pauli();
    Schedule c = s;
    c.steps = {still};
    EvolutionResult r = evolve(c, 50.0);
    EXPECT_LT(r.leakage, 1e-12);
    DenseOperator e = encoding_basis(g);
    DenseOperator m = e.adjoint() * r.final_states;
    EXPECT_LT(unitary_distance(m, DenseOperator::Identity(2, 2)), 1e-9);
}

TEST(Evolve, MagnusMatchesExactExponentialForConstantH) {
    OpenGraph g = generate_chain(3, {0.0, 0.7});
    Schedule s = compile_stepwise(g, found(g));
    ScheduleStep still = s.steps[1];
    still.introduced.begin()->second = PauliString::Z(0);
    Schedule c = s;
    c.steps = {still};
    DenseOperator psi = encoding_basis(g);
    DenseOperator start = psi;
    evolve_step(c, 0, 3.0, psi);
    // H(s) here is not constant; compare against a fine-step product of exact exponentials.
    DenseOperator ref = start;
    const int m = 3000;
    for (int i = 0; i < m; ++i) {
        double sm = (i + 0.5) / m;
        DenseOperator h = assemble(c, 0, sm);
        ref = (DenseOperator(Complex(0, -3.0 / m) * h)).exp() * ref;
    }
    EXPECT_LT((psi - ref).norm(), 1e-6);
}

TEST(Evolve, StepSizeConverged) {
    OpenGraph g = generate_chain(4, {0.3, -0.8, 1.2});
    Schedule s = compile_stepwise(g, found(g));
    EvolutionResult a = evolve(s, 30.0, {.dt = 0.1});
    EvolutionResult b = evolve(s, 30.0, {.dt = 0.025});
    EXPECT_LT((a.final_states - b.final_states).norm(), 1e-6);
}

TEST(Evolve, ChainMatchesMbqc) {
    OpenGraph g = generate_chain(4, {0.3, -0.8, 1.2});
    Gflow gf = found(g);
    Schedule s = compile_stepwise(g, gf);
    DenseOperator ref = mbqc_unitary(g, gf);
    EvolutionResult r100 = evolve(s, 100.0, {}, &ref);
    EvolutionResult r200 = evolve(s, 200.0, {}, &ref);
    // The logical operators are conserved exactly, so the polar part is exact
    // at any tau; the raw overlap carries the adiabatic error.
    EXPECT_LT(unitary_distance(r100.logical_unitary, ref), 1e-10);
    double d100 = unitary_distance(r100.overlap, ref), d200 = unitary_distance(r200.overlap, ref);
    EXPECT_LT(d200, 1e-2);
    EXPECT_LT(d200, d100);
    EXPECT_LT(r200.leakage, 1e-3);
    EXPECT_GT(*r200.fidelity, 0.99);
}

TEST(Evolve, CnotGraphMatchesMbqc) {
    OpenGraph g = generate_cnot_graph();
    Gflow gf = found(g);
    Schedule s = compile_stepwise(g, gf);
    DenseOperator ref = mbqc_unitary(g, gf);
    EvolutionResult r = evolve(s, 100.0, {}, &ref);
    EXPECT_LT(unitary_distance(r.logical_unitary, ref), 1e-2);
}

TEST(Conserved, ReorderingExample) {
    OpenGraph g = generate_chain(4);
    auto [s, rep] = compile_reordered_fixed(g, found(g), {2, 0, 1});
    StabilizerSet t = build_stabilizers(g, found(g));
    RotatedPauliOp t13 = t.at(0) * t.at(2);
    auto c1 = conserved_operator_check(s, 0, {t13, RotatedPauliOp()});
    EXPECT_TRUE(c1[0].symbolic);
    EXPECT_TRUE(c1[0].numeric);
    EXPECT_TRUE(c1[1].symbolic && c1[1].numeric);
    auto c2 = conserved_operator_check(s, 1, {t13});
    EXPECT_FALSE(c2[0].symbolic);
    EXPECT_FALSE(c2[0].numeric);
}

TEST(Leakage, ReorderedFixedPlateausStripRecovers) {
    OpenGraph g = generate_chain(4);
    Gflow gf = found(g);
    auto [fixed, rep] = compile_reordered_fixed(g, gf, {2, 0, 1});
    for (auto &row : leakage_experiment(fixed, {10.0, 100.0})) EXPECT_GT(row.leakage, 0.05);
    Schedule strip = compile_reordered_strip(g, gf, {2, 0, 1});
    auto rows = leakage_experiment(strip, {200.0});
    EXPECT_LT(rows[0].leakage, 1e-3);
}
