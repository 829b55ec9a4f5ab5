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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "agqc/compile.hpp"
#include "agqc/gflow.hpp"
#include "agqc/graph.hpp"
#include "agqc/pauli.hpp"

namespace agqc {

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using SparseOperator = Eigen::SparseMatrix<Complex>;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kDenseCap = 14;

inline void check_dense_cap(std::size_t n) {
    if (n > kDenseCap)
        throw std::invalid_argument("dense simulation is capped at " + std::to_string(kDenseCap) + " qubits, got " +
                                    std::to_string(n));
}

// ---------------------------------------------------------------------------
// Operators.

struct WeightedTerm {
    double weight;
    RotatedPauliOp op;
};

/// Terms of H(s) with their weights, -gamma folded in.
inline std::vector<WeightedTerm> step_terms(const Schedule &sched, std::size_t k, double s) {
    if (k >= sched.steps.size()) throw std::out_of_range("step index out of range");
    const ScheduleStep &st = sched.steps[k];
    const double g = -sched.gamma;
    std::vector<WeightedTerm> out;
    for (auto &t : st.static_terms) out.push_back({g, t});
    for (auto &[v, t] : st.removed) out.push_back({g * (1 - s), t});
    for (auto &t : st.deleted) out.push_back({g * (1 - s), t});
    for (auto &[v, x] : st.introduced) out.push_back({g * s, RotatedPauliOp(x)});
    return out;
}

inline SparseOperator sparse_operator(const std::vector<WeightedTerm> &terms, std::size_t n) {
    check_dense_cap(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(terms.size() * static_cast<std::size_t>(dim));
    for (auto &t : terms) {
        if (t.weight == 0) continue;
        for (Eigen::Index b = 0; b < dim; ++b) {
            MonomialAction a = apply_to_basis(t.op, static_cast<VertexMask>(b));
            trips.emplace_back(static_cast<Eigen::Index>(static_cast<VertexMask>(b) ^ a.flip), b,
                               t.weight * a.coefficient);
        }
    }
    SparseOperator m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    m.prune(Complex(0, 0), 0);
    return m;
}

inline DenseOperator dense_operator(const RotatedPauliOp &op, std::size_t n) {
    return DenseOperator(sparse_operator({{1.0, op}}, n));
}

/// Exact matrix of H(s) for step k.
inline DenseOperator assemble(const Schedule &sched, std::size_t k, double s) {
    return DenseOperator(sparse_operator(step_terms(sched, k, s), sched.graph.size()));
}

// ---------------------------------------------------------------------------
// Spectra.

/// Dimension of the subspace a schedule protects: 2^|O|.
inline int protected_dimension(const Schedule &sched) { return 1 << sched.graph.outputs().size(); }

struct SpectralScan {
    std::vector<double> s_grid;
    std::vector<std::vector<double>> eigenvalues;
    std::vector<double> gap;
    std::vector<int> ground_degeneracy;
};

inline std::vector<double> uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(static_cast<double>(i) / (points - 1));
    return g;
}

/// Sorted spectrum of H(s) on the grid. `gap` is E_d - E_0 with d the
/// protected dimension; `lowest` limits the stored eigenvalues (0 = all).
inline SpectralScan spectral_scan(const Schedule &sched, std::size_t k, const std::vector<double> &s_grid,
                                  int lowest = 0) {
    SpectralScan scan;
    scan.s_grid = s_grid;
    const int d = protected_dimension(sched);
    const double tol = 1e-9 * sched.gamma;
    for (double s : s_grid) {
        Eigen::SelfAdjointEigenSolver<DenseOperator> es(assemble(sched, k, s), Eigen::EigenvaluesOnly);
        const Eigen::VectorXd &ev = es.eigenvalues();
        std::vector<double> e(ev.data(), ev.data() + ev.size());
        int deg = 0;
        while (deg < static_cast<int>(e.size()) && e[static_cast<std::size_t>(deg)] - e[0] < tol) ++deg;
        scan.gap.push_back(d < static_cast<int>(e.size()) ? e[static_cast<std::size_t>(d)] - e[0] : 0.0);
        scan.ground_degeneracy.push_back(deg);
        if (lowest > 0 && static_cast<int>(e.size()) > lowest) e.resize(static_cast<std::size_t>(lowest));
        scan.eigenvalues.push_back(std::move(e));
    }
    return scan;
}

/// Orthonormal basis of the eigenspace within tol of the lowest eigenvalue.
inline DenseOperator ground_space(const DenseOperator &h, double tol = 1e-9) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(h);
    const Eigen::VectorXd &ev = es.eigenvalues();
    Eigen::Index deg = 0;
    while (deg < ev.size() && ev(deg) - ev(0) < tol) ++deg;
    return es.eigenvectors().leftCols(deg);
}

// ---------------------------------------------------------------------------
// Unitary comparison.

inline double spectral_norm(const DenseOperator &m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<DenseOperator> svd(m);
    return svd.singularValues()(0);
}

/// min over phi of || u - e^{i phi} v ||_2.
inline double unitary_distance(const DenseOperator &u, const DenseOperator &v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) throw std::invalid_argument("shape mismatch");
    auto f = [&](double phi) { return spectral_norm(u - std::polar(1.0, phi) * v); };
    const int grid = 72;
    const double step = 2 * std::numbers::pi / grid;
    double best_phi = 0, best = f(0);
    for (int i = 1; i < grid; ++i) {
        double val = f(i * step);
        if (val < best) best = val, best_phi = i * step;
    }
    double a = best_phi - step, b = best_phi + step;
    const double r = (std::sqrt(5.0) - 1) / 2;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            b = d, d = c, fd = fc;
            c = b - r * (b - a), fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + r * (b - a), fd = f(d);
        }
    }
    return std::min(best, std::min(fc, fd));
}

/// Nearest isometry W V^dagger from the SVD M = W S V^dagger.
inline DenseOperator polar_unitary(const DenseOperator &m) {
    Eigen::JacobiSVD<DenseOperator> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

// ---------------------------------------------------------------------------
// Encoding and reference bases. Bit k of a logical index addresses inputs[k]
// (or outputs[k]); vertex v is bit v of a basis state.

namespace detail {

inline VertexMask embed_index(std::size_t index, const std::vector<Vertex> &sites) {
    VertexMask b = 0;
    for (std::size_t k = 0; k < sites.size(); ++k)
        if ((index >> k) & 1U) b |= bit(sites[k]);
    return b;
}

inline std::size_t extract_index(VertexMask b, const std::vector<Vertex> &sites) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < sites.size(); ++k)
        if (contains(b, sites[k])) index |= std::size_t{1} << k;
    return index;
}

inline double angle_or_zero(const OpenGraph &g, Vertex v) { return g.angle(v).value_or(0.0); }

}  // namespace detail

/// prod_v diag(1, e^{i theta_v}) CZ_E (|i>_I |+>_rest), one column per i.
inline DenseOperator encoding_basis(const OpenGraph &g) {
    check_dense_cap(g.size());
    const std::size_t n = g.size();
    const Eigen::Index dim = Eigen::Index{1} << n;
    const std::size_t d = std::size_t{1} << g.inputs().size();
    const VertexMask free = g.all_mask() & ~g.input_mask();
    const double amp = std::pow(2.0, -0.5 * popcount(free));
    DenseOperator out = DenseOperator::Zero(dim, static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        VertexMask in_bits = detail::embed_index(i, g.inputs());
        for (Eigen::Index b = 0; b < dim; ++b) {
            VertexMask bm = static_cast<VertexMask>(b);
            if ((bm & g.input_mask()) != in_bits) continue;
            int cz = 0;
            for (auto [u, v] : g.edges()) cz += contains(bm, u) && contains(bm, v);
            double phase = 0;
            for (Vertex v : mask_to_vertices(bm)) phase += detail::angle_or_zero(g, v);
            out(b, static_cast<Eigen::Index>(i)) = amp * (cz % 2 ? -1.0 : 1.0) * std::polar(1.0, phase);
        }
    }
    return out;
}

/// |+> on every non-output, |j> on the outputs.
inline DenseOperator output_reference_basis(const OpenGraph &g) {
    check_dense_cap(g.size());
    const Eigen::Index dim = Eigen::Index{1} << g.size();
    const std::size_t d = std::size_t{1} << g.outputs().size();
    const double amp = std::pow(2.0, -0.5 * popcount(g.non_output_mask()));
    DenseOperator out = DenseOperator::Zero(dim, static_cast<Eigen::Index>(d));
    for (Eigen::Index b = 0; b < dim; ++b) {
        std::size_t j = detail::extract_index(static_cast<VertexMask>(b), g.outputs());
        out(b, static_cast<Eigen::Index>(j)) = amp;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Time evolution.

struct EvolveOptions {
    /// Sub-step length in units of 1/gamma.
    double dt = 0.05;
};

struct EvolutionResult {
    DenseOperator final_states;
    DenseOperator overlap;
    DenseOperator logical_unitary;
    double leakage = 0;
    std::optional<double> fidelity;
    double tau_used = 0;
};

namespace detail {

/// exp(-i K) applied to a block by Taylor series to machine precision.
template <typename ApplyK>
void apply_exp(const ApplyK &apply_k, DenseOperator &psi) {
    DenseOperator term = psi, acc = psi;
    for (int k = 1; k < 200; ++k) {
        term = apply_k(term) * Complex(0, -1.0 / k);
        acc += term;
        if (term.norm() < 1e-17 * acc.norm()) {
            psi = acc;
            return;
        }
    }
    throw std::runtime_error("time-step exponential did not converge");
}

}  // namespace detail

/// Integrates one step for time tau with s = t / tau, using the fourth-order
/// Magnus propagator at Gauss points; H(s) = A + s B.
inline void evolve_step(const Schedule &sched, std::size_t k, double tau, DenseOperator &psi,
                        const EvolveOptions &opt = {}) {
    if (!(tau > 0)) throw std::invalid_argument("tau must be positive");
    const std::size_t n = sched.graph.size();
    SparseOperator a = sparse_operator(step_terms(sched, k, 0.0), n);
    SparseOperator b = SparseOperator(sparse_operator(step_terms(sched, k, 1.0), n) - a);
    SparseOperator ba = SparseOperator(b * a - a * b);
    SparseOperator c = SparseOperator(ba * Complex(0, -std::sqrt(3.0) / 12));
    c.prune(Complex(0, 0), 1e-14);

    double norm_bound = std::max(static_cast<double>(step_terms(sched, k, 0.5).size()) * sched.gamma, 1e-12);
    double dt_target = std::min(opt.dt / sched.gamma, 1.0 / norm_bound);
    const long steps = std::max(1L, static_cast<long>(std::ceil(tau / dt_target)));
    const double dt = tau / static_cast<double>(steps);
    const double g1 = 0.5 - std::sqrt(3.0) / 6, g2 = 0.5 + std::sqrt(3.0) / 6;

    for (long i = 0; i < steps; ++i) {
        double t0 = static_cast<double>(i) * dt;
        double s1 = (t0 + g1 * dt) / tau, s2 = (t0 + g2 * dt) / tau;
        // K = dt/2 (H(s1) + H(s2)) + dt^2 (s2 - s1) C, C = -i sqrt(3)/12 [B, A].
        double wa = dt, wb = dt / 2 * (s1 + s2), wc = dt * dt * (s2 - s1);
        auto apply_k = [&](const DenseOperator &x) -> DenseOperator {
            return DenseOperator(wa * (a * x) + wb * (b * x) + wc * (c * x));
        };
        detail::apply_exp(apply_k, psi);
    }
    for (Eigen::Index j = 0; j < psi.cols(); ++j)
        if (std::abs(psi.col(j).norm() - 1) > 1e-10)
            throw std::runtime_error("integration drifted from unit norm");
}

/// Unitary of the MBQC pattern with all outcomes 0 (declared below).
inline DenseOperator mbqc_unitary(const OpenGraph &g, const Gflow &gf);

/// Evolves the encoded basis through every step (tau per step, in units of
/// 1/gamma) and reads out the logical map on the outputs.
inline EvolutionResult evolve(const Schedule &sched, const std::vector<double> &tau_per_step,
                              const EvolveOptions &opt = {}, const DenseOperator *reference = nullptr) {
    check_dense_cap(sched.graph.size());
    if (tau_per_step.size() != sched.steps.size())
        throw std::invalid_argument("need one evolution time per step");
    EvolutionResult r;
    DenseOperator psi = encoding_basis(sched.graph);
    for (std::size_t k = 0; k < sched.steps.size(); ++k) {
        evolve_step(sched, k, tau_per_step[k], psi, opt);
        r.tau_used += tau_per_step[k];
    }
    r.final_states = psi;
    DenseOperator h_final = sched.steps.empty() ? DenseOperator::Zero(psi.rows(), psi.rows())
                                                : assemble(sched, sched.steps.size() - 1, 1.0);
    DenseOperator gs = ground_space(h_final, 1e-9 * sched.gamma);
    r.leakage = std::max(0.0, 1.0 - (gs.adjoint() * psi).squaredNorm() / static_cast<double>(psi.cols()));
    r.overlap = output_reference_basis(sched.graph).adjoint() * psi;
    r.logical_unitary = polar_unitary(r.overlap);
    if (reference && reference->rows() == r.overlap.rows() && reference->cols() == r.overlap.cols()) {
        double d = static_cast<double>(r.overlap.cols());
        r.fidelity = std::norm((reference->adjoint() * r.overlap).trace()) / (d * d);
    }
    return r;
}

inline EvolutionResult evolve(const Schedule &sched, double tau_per_step, const EvolveOptions &opt = {},
                              const DenseOperator *reference = nullptr) {
    return evolve(sched, std::vector<double>(sched.steps.size(), tau_per_step), opt, reference);
}

struct LeakageRow {
    double tau;
    double leakage;
    double fidelity;
};

/// Evolves at each tau (per step) and scores against the MBQC reference.
inline std::vector<LeakageRow> leakage_experiment(const Schedule &sched, const std::vector<double> &taus,
                                                  const EvolveOptions &opt = {}) {
    DenseOperator ref = mbqc_unitary(sched.graph, sched.gflow);
    std::vector<LeakageRow> rows;
    for (double tau : taus) {
        EvolutionResult r = evolve(sched, tau, opt, &ref);
        rows.push_back({tau, r.leakage, r.fidelity.value_or(0.0)});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Conserved operators.

struct ConservedCheck {
    RotatedPauliOp candidate;
    bool symbolic = false;
    bool numeric = false;
    double max_commutator = 0;
};

/// Whether each candidate commutes with H(s) of step k, symbolically (every
/// term at both endpoints) and numerically on the grid.
inline std::vector<ConservedCheck> conserved_operator_check(const Schedule &sched, std::size_t k,
                                                            const std::vector<RotatedPauliOp> &candidates,
                                                            const std::vector<double> &s_grid = uniform_grid(11)) {
    if (k >= sched.steps.size()) throw std::out_of_range("step index out of range");
    std::vector<ConservedCheck> out;
    std::vector<RotatedPauliOp> terms = sched.steps[k].initial_terms();
    for (auto &t : sched.steps[k].final_terms()) terms.push_back(t);
    for (auto &cand : candidates) {
        ConservedCheck c{cand};
        c.symbolic = std::all_of(terms.begin(), terms.end(),
                                 [&](const RotatedPauliOp &t) { return commutes(cand, t) == Commutation::Commute; });
        if (sched.graph.size() <= kDenseCap) {
            DenseOperator p = dense_operator(cand, sched.graph.size());
            for (double s : s_grid) {
                DenseOperator h = assemble(sched, k, s);
                c.max_commutator = std::max(c.max_commutator, spectral_norm(h * p - p * h));
            }
            c.numeric = c.max_commutator < 1e-9 * sched.gamma;
        }
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// MBQC reference.

struct MbqcRun {
    StateVector output;
    std::vector<int> outcomes;
};

namespace detail {

/// Projects vertex v onto (|0> + sign e^{-i theta}|1>)/sqrt2 without renormalizing.
inline void project_measured(StateVector &psi, Vertex v, double theta, int outcome) {
    const Complex e = (outcome ? -1.0 : 1.0) * std::polar(1.0, -theta);
    const Eigen::Index dim = psi.size();
    const VertexMask m = bit(v);
    for (Eigen::Index b = 0; b < dim; ++b) {
        VertexMask bm = static_cast<VertexMask>(b);
        if (bm & m) continue;
        Eigen::Index b1 = static_cast<Eigen::Index>(bm | m);
        // <e| psi with <e| = (<0| + conj(e) <1|)/sqrt2, then |e> (x) amplitude.
        Complex amp = (psi(b) + std::conj(e) * psi(b1)) / std::sqrt(2.0);
        psi(b) = amp / std::sqrt(2.0);
        psi(b1) = e * amp / std::sqrt(2.0);
    }
}

inline void apply_pauli(StateVector &psi, const PauliString &p) {
    StateVector out = StateVector::Zero(psi.size());
    RotatedPauliOp op(p);
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
        MonomialAction a = apply_to_basis(op, static_cast<VertexMask>(b));
        out(static_cast<Eigen::Index>(static_cast<VertexMask>(b) ^ a.flip)) += a.coefficient * psi(b);
    }
    psi = out;
}

/// Full-register state CZ_E (|phi>_I |+>_rest).
inline StateVector graph_state_with_input(const OpenGraph &g, const StateVector &input) {
    const Eigen::Index dim = Eigen::Index{1} << g.size();
    const VertexMask free = g.all_mask() & ~g.input_mask();
    const double amp = std::pow(2.0, -0.5 * popcount(free));
    StateVector psi = StateVector::Zero(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        VertexMask bm = static_cast<VertexMask>(b);
        int cz = 0;
        for (auto [u, v] : g.edges()) cz += contains(bm, u) && contains(bm, v);
        psi(b) = amp * (cz % 2 ? -1.0 : 1.0) * input(static_cast<Eigen::Index>(extract_index(bm, g.inputs())));
    }
    return psi;
}

/// Contracts the measured vertices with their outcome-0 basis states.
inline StateVector read_outputs(const OpenGraph &g, const StateVector &psi) {
    StateVector out = StateVector::Zero(Eigen::Index{1} << g.outputs().size());
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
        VertexMask bm = static_cast<VertexMask>(b);
        Complex w = 1;
        for (Vertex v : g.non_outputs())
            w *= (contains(bm, v) ? std::polar(1.0, angle_or_zero(g, v)) : Complex(1)) / std::sqrt(2.0);
        out(static_cast<Eigen::Index>(extract_index(bm, g.outputs()))) += w * psi(b);
    }
    return out;
}

inline void check_mbqc_input(const OpenGraph &g, const Gflow &gf) {
    check_dense_cap(g.size());
    for (Vertex v : g.non_outputs())
        if (g.plane(v) != Plane::XY) throw std::invalid_argument("MBQC reference supports the XY plane only");
    GflowReport rep = verify_gflow(g, gf);
    if (!rep.valid) throw std::invalid_argument("invalid gflow: " + rep.violations.front().detail);
}

}  // namespace detail

/// Measures every non-output in layer order in the basis
/// (|0> +- e^{-i theta_v}|1>)/sqrt2 and corrects outcome 1 with
/// prod_{w in g(v)} K_w. `outcomes` lists results in measurement order; when
/// absent they are sampled from `seed`.
inline MbqcRun mbqc_reference_run(const OpenGraph &g, const Gflow &gf, const StateVector &input,
                                  std::optional<std::vector<int>> outcomes = std::nullopt,
                                  std::uint64_t seed = 1) {
    detail::check_mbqc_input(g, gf);
    if (input.size() != (Eigen::Index{1} << g.inputs().size()))
        throw std::invalid_argument("input state has the wrong dimension");
    std::vector<Vertex> order = measurement_order(gf);
    if (outcomes && outcomes->size() != order.size())
        throw std::invalid_argument("need one outcome per measured vertex");
    std::mt19937_64 rng(seed);
    StateVector psi = detail::graph_state_with_input(g, input.normalized());
    MbqcRun run;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Vertex v = order[i];
        double theta = detail::angle_or_zero(g, v);
        int m;
        if (outcomes) {
            m = (*outcomes)[i];
        } else {
            StateVector p0 = psi;
            detail::project_measured(p0, v, theta, 0);
            std::bernoulli_distribution one(std::clamp(1.0 - p0.squaredNorm(), 0.0, 1.0));
            m = one(rng) ? 1 : 0;
        }
        detail::project_measured(psi, v, theta, m);
        double norm = psi.norm();
        if (norm < 1e-12) throw std::runtime_error("outcome has zero probability");
        psi /= norm;
        if (m) detail::apply_pauli(psi, correction_operator(g, gf, v, 1));
        run.outcomes.push_back(m);
    }
    run.output = detail::read_outputs(g, psi);
    return run;
}

inline DenseOperator mbqc_unitary(const OpenGraph &g, const Gflow &gf) {
    detail::check_mbqc_input(g, gf);
    const Eigen::Index din = Eigen::Index{1} << g.inputs().size();
    const Eigen::Index dout = Eigen::Index{1} << g.outputs().size();
    DenseOperator u(dout, din);
    for (Eigen::Index i = 0; i < din; ++i) {
        StateVector psi = detail::graph_state_with_input(g, StateVector::Unit(din, i));
        for (Vertex v : measurement_order(gf)) detail::project_measured(psi, v, detail::angle_or_zero(g, v), 0);
        u.col(i) = detail::read_outputs(g, psi);
    }
    double scale = u.col(0).norm();
    if (scale < 1e-12) throw std::runtime_error("pattern annihilates the first input");
    return u / scale;
}

}  // namespace agqc
