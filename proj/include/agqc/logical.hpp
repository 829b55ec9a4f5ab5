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
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "agqc/compile.hpp"
#include "agqc/gflow.hpp"
#include "agqc/graph.hpp"
#include "agqc/pauli.hpp"
#include "agqc/sim.hpp"
#include "agqc/stabilizers.hpp"

namespace agqc {

/// Logical X and Z of one encoded qubit. Y_L = i Z_L X_L is not stored.
struct LogicalQubit {
    RotatedPauliOp x;
    RotatedPauliOp z;
};

struct LogicalFrame {
    std::vector<LogicalQubit> qubits;

    /// Vertices currently carrying the encoded information.
    VertexMask location() const {
        VertexMask m = 0;
        for (const LogicalQubit &q : qubits) m |= q.x.support() | q.z.support();
        return m;
    }

    bool operator==(const LogicalFrame &o) const {
        if (qubits.size() != o.qubits.size()) return false;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            if (!(qubits[k].x == o.qubits[k].x) || !(qubits[k].z == o.qubits[k].z)) return false;
        }
        return true;
    }
};

/// X_L = K_i^{theta_i}, Z_L = Z_i for each input i, in input order.
inline LogicalFrame initial_frame(const OpenGraph &g, const Gflow &gf) {
    GflowReport rep = verify_gflow(g, gf);
    if (!rep.valid) throw std::invalid_argument("invalid gflow: " + rep.violations.front().detail);
    LogicalFrame f;
    for (Vertex i : g.inputs()) {
        PauliString k{bit(i), g.neighbors(i), 0};
        double theta = g.angle(i).value_or(0.0);
        RotatedPauliOp x = theta == 0.0 ? RotatedPauliOp(k) : RotatedPauliOp(k, {{i, theta}});
        f.qubits.push_back({x, RotatedPauliOp(PauliString::Z(i))});
    }
    return f;
}

namespace detail {

inline RotatedPauliOp propagate_operator(RotatedPauliOp op, const ScheduleStep &step) {
    for (auto &[v, xv] : step.introduced) {
        Commutation c = commutes(op, RotatedPauliOp(xv));
        if (c == Commutation::Neither)
            throw RefusedError("logical operator " + to_string(op) + " neither commutes nor anticommutes with X" +
                               std::to_string(v + 1) + "; use the numerical logical map from evolve");
        if (c == Commutation::Commute) continue;
        auto it = step.removed.find(v);
        if (it == step.removed.end())
            throw RefusedError("no removed term for vertex " + std::to_string(v + 1));
        op = op * it->second;
    }
    for (auto &[v, xv] : step.introduced) {
        if (commutes(op, RotatedPauliOp(xv)) != Commutation::Commute)
            throw RefusedError("update of " + to_string(op) + " does not commute with X" + std::to_string(v + 1));
    }
    VertexMask drop = 0;
    for (auto &[v, xv] : step.introduced) drop |= bit(v);
    PauliString p = op.pauli();
    p.x &= ~drop;
    return RotatedPauliOp(p, op.twist());
}

}  // namespace detail

/// Heisenberg update through one step; introduced X_v act as identity afterwards.
inline LogicalFrame propagate(const LogicalFrame &frame, const ScheduleStep &step) {
    LogicalFrame out;
    for (const LogicalQubit &q : frame.qubits)
        out.qubits.push_back({detail::propagate_operator(q.x, step), detail::propagate_operator(q.z, step)});
    for (const LogicalQubit &q : out.qubits) {
        if (commutes(q.x, q.z) != Commutation::Anticommute)
            throw std::logic_error("logical pair lost anticommutation");
    }
    return out;
}

inline LogicalFrame propagate(const LogicalFrame &frame, const Schedule &sched) {
    LogicalFrame f = frame;
    for (const ScheduleStep &step : sched.steps) f = propagate(f, step);
    return f;
}

/// Matrix of op on the logical register; bit k of the index addresses sites[k].
inline DenseOperator frame_matrix(const RotatedPauliOp &op, const std::vector<Vertex> &sites) {
    VertexMask allowed = vertices_to_mask(sites);
    if (op.support() & ~allowed) throw std::invalid_argument("operator " + to_string(op) + " leaves the register");
    const std::size_t d = std::size_t{1} << sites.size();
    DenseOperator m = DenseOperator::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
        VertexMask b = detail::embed_index(j, sites);
        MonomialAction a = apply_to_basis(op, b);
        m(static_cast<Eigen::Index>(detail::extract_index(b ^ a.flip, sites)), static_cast<Eigen::Index>(j)) =
            a.coefficient;
    }
    return m;
}

/// H~ U_z(theta) with U_z(theta) = exp(-i theta Z / 2).
inline Eigen::Matrix2cd hadamard_rz(double theta) {
    Eigen::Matrix2cd h;
    const double r = 1 / std::sqrt(2.0);
    h << r, r, r, -r;
    Eigen::Matrix2cd rz = Eigen::Matrix2cd::Zero();
    rz(0, 0) = std::polar(1.0, -theta / 2);
    rz(1, 1) = std::polar(1.0, theta / 2);
    return h * rz;
}

/// Logical map of a chain: H~U_z(theta_{n-1}) ... H~U_z(theta_1), one factor per
/// replacement, theta_k the angle of the k-th measured vertex.
inline DenseOperator chain_unitary(const std::vector<double> &thetas) {
    DenseOperator u = DenseOperator::Identity(2, 2);
    for (double t : thetas) u = DenseOperator(hadamard_rz(t)) * u;
    return u;
}

/// Phase-quotiented operator 2-norm distance.
inline double compare(const DenseOperator &u, const DenseOperator &target) { return unitary_distance(u, target); }

/// Largest deviation of the frame from the conjugation table of target:
/// max_k max(||X_L,k - U X_k U^dagger||, ||Z_L,k - U Z_k U^dagger||).
inline double compare(const LogicalFrame &frame, const std::vector<Vertex> &sites, const DenseOperator &target) {
    const Eigen::Index d = Eigen::Index{1} << frame.qubits.size();
    if (target.rows() != d || target.cols() != d || sites.size() != frame.qubits.size())
        throw std::invalid_argument("dimension mismatch");
    std::vector<Vertex> reg(frame.qubits.size());
    for (std::size_t k = 0; k < reg.size(); ++k) reg[k] = k;
    double worst = 0;
    for (std::size_t k = 0; k < frame.qubits.size(); ++k) {
        DenseOperator xk = frame_matrix(RotatedPauliOp(PauliString::X(k)), reg);
        DenseOperator zk = frame_matrix(RotatedPauliOp(PauliString::Z(k)), reg);
        worst = std::max(worst, spectral_norm(frame_matrix(frame.qubits[k].x, sites) -
                                              target * xk * target.adjoint()));
        worst = std::max(worst, spectral_norm(frame_matrix(frame.qubits[k].z, sites) -
                                              target * zk * target.adjoint()));
    }
    return worst;
}

inline std::string to_string(const LogicalFrame &f) {
    std::string out;
    for (std::size_t k = 0; k < f.qubits.size(); ++k) {
        out += "X_L" + std::to_string(k + 1) + " = " + to_string(f.qubits[k].x) + "\n";
        out += "Z_L" + std::to_string(k + 1) + " = " + to_string(f.qubits[k].z) + "\n";
    }
    return out;
}

}  // namespace agqc
