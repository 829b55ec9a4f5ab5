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
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agqc/gflow.hpp"
#include "agqc/graph.hpp"
#include "agqc/pauli.hpp"
#include "agqc/stabilizers.hpp"

namespace agqc {

enum class ScheduleMode { Stepwise, Layered, OneStep, ReorderFixed, ReorderStrip };

inline const char *mode_name(ScheduleMode m) {
    switch (m) {
        case ScheduleMode::Stepwise: return "stepwise";
        case ScheduleMode::Layered: return "layered";
        case ScheduleMode::OneStep: return "onestep";
        case ScheduleMode::ReorderFixed: return "reorder-fixed";
        case ScheduleMode::ReorderStrip: return "reorder-strip";
    }
    return "?";
}

inline ScheduleMode parse_mode(const std::string &s) {
    for (auto m : {ScheduleMode::Stepwise, ScheduleMode::Layered, ScheduleMode::OneStep, ScheduleMode::ReorderFixed,
                   ScheduleMode::ReorderStrip})
        if (s == mode_name(m)) return m;
    throw std::invalid_argument("unknown schedule mode '" + s + "'");
}

/// H(s) = -gamma [ sum(static) + (1-s) sum(removed, deleted) + s sum(introduced) ].
struct ScheduleStep {
    std::map<Vertex, RotatedPauliOp> removed;
    std::map<Vertex, PauliString> introduced;
    std::vector<RotatedPauliOp> static_terms;
    std::vector<RotatedPauliOp> deleted;
    bool strip = false;

    int replaced_count() const { return static_cast<int>(introduced.size()); }

    std::vector<RotatedPauliOp> initial_terms() const {
        std::vector<RotatedPauliOp> out = static_terms;
        for (auto &[v, t] : removed) out.push_back(t);
        out.insert(out.end(), deleted.begin(), deleted.end());
        return out;
    }

    std::vector<RotatedPauliOp> final_terms() const {
        std::vector<RotatedPauliOp> out = static_terms;
        for (auto &[v, x] : introduced) out.emplace_back(x);
        return out;
    }
};

struct Schedule {
    std::vector<ScheduleStep> steps;
    double gamma = 1.0;
    ScheduleMode mode = ScheduleMode::Stepwise;
    OpenGraph graph;
    Gflow gflow;
};

struct AdiabaticBudget {
    double delta = 1.0;
    double epsilon = 0.01;
    double c_delta = 1.0;
    double gamma = 1.0;

    void check() const {
        if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("delta must lie in (0, 1]");
        if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
        if (!(c_delta > 0)) throw std::invalid_argument("c_delta must be positive");
        if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    }
};

namespace detail {

inline void require_xy_gflow(const OpenGraph &g, const Gflow &gf) {
    for (Vertex v : g.non_outputs())
        if (g.plane(v) != Plane::XY)
            throw std::invalid_argument("vertex " + std::to_string(v + 1) + " is not measured in the XY plane");
    GflowReport rep = verify_gflow(g, gf);
    if (!rep.valid)
        throw std::invalid_argument("invalid gflow at vertex " + std::to_string(rep.violations.front().vertex + 1) +
                                    ": " + rep.violations.front().detail);
}

inline Schedule empty_schedule(const OpenGraph &g, const Gflow &gf, ScheduleMode mode, double gamma) {
    Schedule s;
    s.gamma = gamma;
    s.mode = mode;
    s.graph = g;
    s.gflow = gf;
    return s;
}

/// Replaces the groups in order; each group swaps T_v for X_v.
inline Schedule replace_in_groups(const OpenGraph &g, const Gflow &gf, const StabilizerSet &stabs,
                                  const std::vector<std::vector<Vertex>> &groups, ScheduleMode mode, double gamma) {
    Schedule sched = empty_schedule(g, gf, mode, gamma);
    std::set<Vertex> done;
    for (auto &group : groups) {
        ScheduleStep step;
        for (Vertex v : group) {
            step.removed[v] = stabs.at(v);
            step.introduced[v] = PauliString::X(v);
        }
        for (auto &[u, t] : stabs) {
            if (done.contains(u)) step.static_terms.emplace_back(PauliString::X(u));
            else if (!step.removed.contains(u)) step.static_terms.push_back(t);
        }
        for (Vertex v : group) done.insert(v);
        sched.steps.push_back(std::move(step));
    }
    return sched;
}

inline void check_order(const OpenGraph &g, const std::vector<Vertex> &order) {
    std::vector<Vertex> a = order, b = g.non_outputs();
    std::sort(a.begin(), a.end());
    if (a != b) throw std::invalid_argument("order must be a permutation of the non-output vertices");
}

inline bool commutes_with_all(const RotatedPauliOp &p, const std::vector<RotatedPauliOp> &terms) {
    for (auto &t : terms)
        if (commutes(p, t) != Commutation::Commute) return false;
    return true;
}

}  // namespace detail

/// Non-outputs ordered by (layer, index).
inline std::vector<Vertex> measurement_order(const Gflow &gf) {
    std::vector<Vertex> out;
    for (auto &members : layer_members(gf)) out.insert(out.end(), members.begin(), members.end());
    return out;
}

inline Schedule compile_stepwise(const OpenGraph &g, const Gflow &gf, double gamma = 1.0) {
    detail::require_xy_gflow(g, gf);
    StabilizerSet stabs = build_stabilizers(g, gf);
    std::vector<std::vector<Vertex>> groups;
    for (Vertex v : measurement_order(gf)) groups.push_back({v});
    return detail::replace_in_groups(g, gf, stabs, groups, ScheduleMode::Stepwise, gamma);
}

/// One step per layer. Throws RefusedError when some T_u fails to commute
/// with X_v for u != v in the same layer.
inline Schedule compile_layered(const OpenGraph &g, const Gflow &gf, double gamma = 1.0) {
    detail::require_xy_gflow(g, gf);
    StabilizerSet stabs = build_stabilizers(g, gf);
    auto layers = layer_members(gf);
    for (auto &layer : layers)
        for (Vertex u : layer)
            for (Vertex v : layer)
                if (u != v && commutes(stabs.at(u), PauliString::X(v)) != Commutation::Commute)
                    throw RefusedError("layer " + std::to_string(gf.layer_of(u)) + ": T_" + std::to_string(u + 1) +
                                       " does not commute with X_" + std::to_string(v + 1));
    return detail::replace_in_groups(g, gf, stabs, layers, ScheduleMode::Layered, gamma);
}

/// All one-step-updated T~_v replaced at once. Clifford angles only.
inline Schedule compile_one_step(const OpenGraph &g, const Gflow &gf, double gamma = 1.0) {
    detail::require_xy_gflow(g, gf);
    StabilizerSet updated = one_step_update(build_stabilizers(g, gf), gf);
    for (auto &[u, t] : updated)
        for (auto &[v, t2] : updated) {
            auto c = commutes(t, PauliString::X(v));
            if (c != (u == v ? Commutation::Anticommute : Commutation::Commute))
                throw RefusedError("one-step update left T~_" + std::to_string(u + 1) + " and X_" +
                                   std::to_string(v + 1) + " in the wrong relation");
        }
    std::vector<std::vector<Vertex>> groups;
    if (!updated.empty()) groups.push_back(g.non_outputs());
    return detail::replace_in_groups(g, gf, updated, groups, ScheduleMode::OneStep, gamma);
}

struct StepProtection {
    std::vector<RotatedPauliOp> conserved;
    bool protected_ok = true;
    std::string note;
};

struct ReorderReport {
    std::vector<StepProtection> steps;
    bool feasible() const {
        return std::all_of(steps.begin(), steps.end(), [](const StepProtection &p) { return p.protected_ok; });
    }
};

/// Replaces T_v by X_v in a user-chosen order keeping every other term.
/// The report certifies, per step, the products of stabilizer generators that
/// commute with the whole interpolation and flags steps with none.
inline std::pair<Schedule, ReorderReport> compile_reordered_fixed(const OpenGraph &g, const Gflow &gf,
                                                                  const std::vector<Vertex> &order,
                                                                  double gamma = 1.0) {
    detail::require_xy_gflow(g, gf);
    detail::check_order(g, order);
    StabilizerSet stabs = build_stabilizers(g, gf);
    std::vector<std::vector<Vertex>> groups;
    for (Vertex v : order) groups.push_back({v});
    Schedule sched = detail::replace_in_groups(g, gf, stabs, groups, ScheduleMode::ReorderFixed, gamma);

    ReorderReport report;
    std::vector<RotatedPauliOp> hidden;
    std::set<Vertex> done;
    for (std::size_t k = 0; k < order.size(); ++k) {
        Vertex v = order[k];
        const ScheduleStep &step = sched.steps[k];
        std::vector<RotatedPauliOp> all = step.initial_terms();
        all.emplace_back(PauliString::X(v));

        // T's still in the Hamiltonian, removed one first.
        std::vector<Vertex> present{v};
        for (auto &[u, t] : stabs)
            if (u != v && !done.contains(u)) present.push_back(u);
        if (present.size() > 20) throw RefusedError("too many stabilizers for the protection search");

        auto search = [&](const RotatedPauliOp &seed, VertexMask must) -> std::optional<RotatedPauliOp> {
            // Smallest subsets first, so T_u T_v is tried before larger products.
            std::vector<VertexMask> subsets;
            for (VertexMask s = 0; s < (VertexMask{1} << present.size()); ++s)
                if ((s & must) == must) subsets.push_back(s);
            std::stable_sort(subsets.begin(), subsets.end(),
                             [](VertexMask a, VertexMask b) { return popcount(a) < popcount(b); });
            for (VertexMask s : subsets) {
                RotatedPauliOp p = seed;
                for (std::size_t i : mask_to_vertices(s)) p = p * stabs.at(present[i]);
                if (detail::commutes_with_all(p, all)) return p;
            }
            return std::nullopt;
        };

        StepProtection prot;
        std::vector<RotatedPauliOp> next_hidden;
        for (auto &h : hidden) {
            if (auto p = search(h, 0)) {
                next_hidden.push_back(*p);
            } else {
                prot.protected_ok = false;
                prot.note += "conserved product " + to_string(h) + " is broken; ";
            }
        }
        for (std::size_t i = 1; i < present.size(); ++i) {
            Vertex u = present[i];
            if (commutes(stabs.at(u), PauliString::X(v)) == Commutation::Commute) continue;
            if (auto p = search(RotatedPauliOp(), bit(i))) {
                next_hidden.push_back(*p);
            } else {
                prot.protected_ok = false;
                prot.note += "T_" + std::to_string(u + 1) + " anticommutes with X_" + std::to_string(v + 1) +
                             " and no product restores it; ";
            }
        }
        hidden = next_hidden;
        prot.conserved = hidden;
        if (!prot.note.empty()) prot.note.resize(prot.note.size() - 2);
        report.steps.push_back(std::move(prot));
        done.insert(v);
    }
    return {sched, report};
}

struct StripOptions {
    /// Keep a*R as a rewritten static term instead of deleting a.
    bool rewrite = false;
};

/// Reordered schedule that also interpolates out every remaining term
/// anticommuting with the introduced X_v.
inline Schedule compile_reordered_strip(const OpenGraph &g, const Gflow &gf, const std::vector<Vertex> &order,
                                        double gamma = 1.0, StripOptions opts = {}) {
    detail::require_xy_gflow(g, gf);
    detail::check_order(g, order);
    StabilizerSet stabs = build_stabilizers(g, gf);
    Schedule sched = detail::empty_schedule(g, gf, ScheduleMode::ReorderStrip, gamma);

    struct Term {
        RotatedPauliOp op;
        std::optional<Vertex> stabilizer_of;
    };
    std::vector<Term> terms;
    for (auto &[u, t] : stabs) terms.push_back({t, u});
    std::vector<RotatedPauliOp> hidden;

    auto relation = [](const RotatedPauliOp &a, Vertex v) {
        Commutation c = commutes(a, PauliString::X(v));
        if (c == Commutation::Neither) throw RefusedError("twisted term neither commutes nor anticommutes with X");
        return c;
    };

    for (Vertex v : order) {
        RotatedPauliOp xv(PauliString::X(v));
        std::optional<std::size_t> r_term;
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (terms[i].stabilizer_of == v) r_term = i;
        if (!r_term)
            for (std::size_t i = 0; i < terms.size(); ++i)
                if (relation(terms[i].op, v) == Commutation::Anticommute) {
                    r_term = i;
                    break;
                }
        std::optional<RotatedPauliOp> r;
        if (r_term) {
            r = terms[*r_term].op;
        } else {
            for (std::size_t i = 0; i < hidden.size(); ++i)
                if (relation(hidden[i], v) == Commutation::Anticommute) {
                    r = hidden[i];
                    hidden.erase(hidden.begin() + static_cast<std::ptrdiff_t>(i));
                    break;
                }
        }

        ScheduleStep step;
        step.strip = true;
        step.introduced[v] = PauliString::X(v);
        if (r) step.removed[v] = *r;
        std::vector<Term> kept;
        std::vector<RotatedPauliOp> rewritten;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (r_term && i == *r_term) continue;
            if (relation(terms[i].op, v) == Commutation::Anticommute) {
                step.deleted.push_back(terms[i].op);
                RotatedPauliOp fixed = *r * terms[i].op;
                if (opts.rewrite) rewritten.push_back(fixed);
                else hidden.push_back(fixed);
            } else {
                kept.push_back(terms[i]);
                step.static_terms.push_back(terms[i].op);
            }
        }
        for (auto &h : hidden)
            if (relation(h, v) == Commutation::Anticommute) h = *r * h;
        // A rewritten term is static across the step: it commutes with R and X_v.
        for (auto &w : rewritten) {
            step.static_terms.push_back(w);
            kept.push_back({w, std::nullopt});
        }
        kept.push_back({xv, std::nullopt});
        terms = std::move(kept);
        sched.steps.push_back(std::move(step));
    }
    return sched;
}

// ---------------------------------------------------------------------------
// Analytic quantities.

/// True when every removed/introduced pair anticommutes and all other pairs
/// among the step's terms commute.
inline bool is_commuting_replacement(const ScheduleStep &step) {
    if (step.strip || !step.deleted.empty() || step.removed.size() != step.introduced.size()) return false;
    for (auto &[v, t] : step.removed) {
        if (!step.introduced.contains(v)) return false;
        for (auto &[u, x] : step.introduced) {
            Commutation want = (u == v) ? Commutation::Anticommute : Commutation::Commute;
            if (commutes(t, x) != want) return false;
        }
        for (auto &[u, t2] : step.removed)
            if (commutes(t, t2) != Commutation::Commute) return false;
        for (auto &st : step.static_terms)
            if (commutes(t, st) != Commutation::Commute) return false;
    }
    for (auto &[u, x] : step.introduced)
        for (auto &st : step.static_terms)
            if (commutes(x, st) != Commutation::Commute) return false;
    for (std::size_t i = 0; i < step.static_terms.size(); ++i)
        for (std::size_t j = i + 1; j < step.static_terms.size(); ++j)
            if (commutes(step.static_terms[i], step.static_terms[j]) != Commutation::Commute) return false;
    return true;
}

/// |U| gamma for a commuting replacement of |U| terms.
inline double step_norm_hdot(const ScheduleStep &step, double gamma) {
    if (!is_commuting_replacement(step))
        throw RefusedError("step is not a commuting replacement; use the numerical norm instead");
    return step.replaced_count() * gamma;
}

/// 2 gamma sqrt((1-s)^2 + s^2).
inline double gap_eta(double s) { return std::sqrt((1 - s) * (1 - s) + s * s); }

inline double step_gap_analytic(const ScheduleStep &step, double gamma, double s) {
    if (!is_commuting_replacement(step)) throw RefusedError("step is not a commuting replacement");
    return 2 * gamma * gap_eta(s);
}

/// Gap after the out-of-order replacement T_2 -> X_2^theta on a chain, in units of gamma.
inline double delta1_gap(double theta2, double s) {
    double gamma_sq = 2 * s * s * std::cos(2 * theta2) + (4 - 8 * s + 6 * s * s);
    double big = std::sqrt(std::max(0.0, gamma_sq));
    double base = 2 * (1 - s + s * s);
    return std::sqrt(std::max(0.0, base + big)) - std::sqrt(std::max(0.0, base - big));
}

/// delta1_gap at s = 1 - cos(theta2)/2.
inline double delta1_min(double theta2) { return delta1_gap(theta2, 1 - std::cos(theta2) / 2); }

/// c(delta) / (epsilon 2^{1 + delta/2} gamma).
inline double tau0(const AdiabaticBudget &b) {
    b.check();
    return b.c_delta / (b.epsilon * std::pow(2.0, 1 + b.delta / 2) * b.gamma);
}

/// c(delta) |Hdot|^{1+delta} / (epsilon gap^{2+delta}); infinite when gap <= 0.
inline double runtime_bound(double hdot, double gap, const AdiabaticBudget &b) {
    b.check();
    if (!(gap > 0)) return std::numeric_limits<double>::infinity();
    return b.c_delta * std::pow(hdot, 1 + b.delta) / (b.epsilon * std::pow(gap, 2 + b.delta));
}

struct StepBound {
    int replaced = 0;
    double gap_min = 0;
    double hdot_norm = 0;
    double tau_bound = 0;
};

/// Maximum of the bound over an s-grid, with the analytic norm and gap.
inline StepBound runtime_bound(const ScheduleStep &step, const AdiabaticBudget &b, int grid = 101) {
    if (grid < 2) throw std::invalid_argument("grid needs at least 2 points");
    StepBound out;
    out.replaced = step.replaced_count();
    out.hdot_norm = step_norm_hdot(step, b.gamma);
    out.gap_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        double s = static_cast<double>(i) / (grid - 1);
        double gap = step_gap_analytic(step, b.gamma, s);
        out.gap_min = std::min(out.gap_min, gap);
        out.tau_bound = std::max(out.tau_bound, runtime_bound(out.hdot_norm, gap, b));
    }
    return out;
}

/// Largest support among the terms of the initial Hamiltonian.
inline int hamiltonian_degree(const Schedule &s) {
    int k = 0;
    if (s.steps.empty()) return 0;
    for (auto &t : s.steps.front().initial_terms()) k = std::max(k, t.degree());
    return k;
}

struct GadgetParameters {
    double coefficient;
    double lambda_max;
    bool converges;
};

/// Effective coupling -k(-lambda)^k/(k-1)! and the threshold (k-1)/(4k).
inline GadgetParameters gadget_parameters(int k, double lambda) {
    if (k < 2) throw std::invalid_argument("gadget order k must be at least 2");
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    double coeff = -k * std::pow(-lambda, k) / std::tgamma(static_cast<double>(k));
    double lmax = static_cast<double>(k - 1) / (4.0 * k);
    return {coeff, lmax, lambda < lmax};
}

}  // namespace agqc
