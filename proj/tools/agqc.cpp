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

// agqc command-line tool. Exit codes: 0 success, 1 validation failure,
// 2 malformed input or infeasible request.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agqc/compile.hpp"
#include "agqc/gflow.hpp"
#include "agqc/graph.hpp"
#include "agqc/io.hpp"
#include "agqc/logical.hpp"
#include "agqc/sim.hpp"
#include "agqc/stabilizers.hpp"

using namespace agqc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;

class ValidationFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

void emit(const std::string &path, const Json &j) { emit(path, j.dump(2) + "\n"); }

std::vector<Vertex> to_vertices(const std::vector<int> &labels) {
    std::vector<Vertex> out;
    for (int l : labels) {
        if (l < 1) throw ParseError("vertex labels are >= 1");
        out.push_back(static_cast<Vertex>(l - 1));
    }
    return out;
}

OpenGraph load_graph(const std::string &path) {
    OpenGraph g = graph_from_json(read_json(path));
    ValidationReport rep = validate(g);
    if (!rep.ok()) throw ValidationFailure("invalid graph: " + rep.violations.front());
    return g;
}

Gflow load_or_find_gflow(const OpenGraph &g, const std::string &path) {
    Gflow gf;
    if (path.empty()) {
        auto found = find_gflow(g);
        if (!found) throw RefusedError("graph has no gflow");
        gf = *found;
    } else {
        gf = gflow_from_json(read_json(path)).gflow;
    }
    GflowReport rep = verify_gflow(g, gf);
    if (!rep.valid) throw ValidationFailure("invalid gflow: " + rep.violations.front().detail);
    return gf;
}

struct ScheduleArgs {
    std::string graph;
    std::string gflow;
    std::string mode = "stepwise";
    std::vector<int> order;
    double gamma = 1.0;
    bool rewrite = false;

    void attach(CLI::App *app) {
        app->add_option("--graph", graph, "graph JSON file")->required();
        app->add_option("--gflow", gflow, "gflow JSON file (found automatically when omitted)");
        app->add_option("--mode", mode, "stepwise|layered|onestep|reorder-fixed|reorder-strip");
        app->add_option("--order", order, "replacement order for reordered modes, e.g. 3,1,2")->delimiter(',');
        app->add_option("--gamma", gamma, "Hamiltonian energy scale");
        app->add_flag("--rewrite", rewrite, "strip mode keeps rewritten terms");
    }
};

struct Built {
    Schedule schedule;
    std::optional<ReorderReport> report;
};

Built build_schedule(const ScheduleArgs &a) {
    OpenGraph g = load_graph(a.graph);
    Gflow gf = load_or_find_gflow(g, a.gflow);
    ScheduleMode mode;
    try {
        mode = parse_mode(a.mode);
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
    if (!(a.gamma > 0)) throw ParseError("gamma must be positive");
    std::vector<Vertex> order = a.order.empty() ? measurement_order(gf) : to_vertices(a.order);
    switch (mode) {
        case ScheduleMode::Stepwise: return {compile_stepwise(g, gf, a.gamma), std::nullopt};
        case ScheduleMode::Layered: return {compile_layered(g, gf, a.gamma), std::nullopt};
        case ScheduleMode::OneStep: return {compile_one_step(g, gf, a.gamma), std::nullopt};
        case ScheduleMode::ReorderFixed: {
            auto [s, r] = compile_reordered_fixed(g, gf, order, a.gamma);
            return {s, r};
        }
        case ScheduleMode::ReorderStrip:
            return {compile_reordered_strip(g, gf, order, a.gamma, StripOptions{a.rewrite}), std::nullopt};
    }
    throw ParseError("unknown mode");
}

std::vector<double> s_grid_from(const std::vector<double> &list, int points) {
    if (!list.empty()) {
        for (double s : list)
            if (s < 0 || s > 1) throw ParseError("s-grid values lie in [0, 1]");
        return list;
    }
    return uniform_grid(points);
}

DenseOperator cnot_matrix() {
    DenseOperator c = DenseOperator::Zero(4, 4);
    c(0, 0) = c(2, 2) = c(3, 1) = c(1, 3) = 1;
    return c;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Adiabatic gate-based quantum computation toolkit"};
    app.require_subcommand(1);

    // graph gen / validate
    CLI::App *graph = app.add_subcommand("graph", "generate or validate open graphs");
    graph->require_subcommand(1);
    CLI::App *gen = graph->add_subcommand("gen", "generate a graph");
    std::string kind = "chain", out;
    std::size_t n = 4, rows = 2, cols = 3, r = 1;
    std::vector<double> angles;
    gen->add_option("--kind", kind, "chain|cluster|zigzag|cnot");
    gen->add_option("--n", n, "vertex count (chain, zigzag)");
    gen->add_option("--rows", rows, "cluster rows");
    gen->add_option("--cols", cols, "cluster columns");
    gen->add_option("--angles", angles, "angles of the non-outputs in vertex order")->delimiter(',');
    gen->add_option("--out", out, "output file (default stdout)");
    CLI::App *gvalidate = graph->add_subcommand("validate", "check a graph file");
    std::string graph_path, gflow_path;
    gvalidate->add_option("--graph", graph_path, "graph JSON file")->required();

    // gflow find / verify / zigzag
    CLI::App *gflow = app.add_subcommand("gflow", "find, verify or generate gflows");
    gflow->require_subcommand(1);
    CLI::App *gfind = gflow->add_subcommand("find", "maximally delayed gflow of a graph");
    gfind->add_option("--graph", graph_path, "graph JSON file")->required();
    gfind->add_option("--out", out, "output file");
    CLI::App *gverify = gflow->add_subcommand("verify", "check a gflow file");
    gverify->add_option("--gflow", gflow_path, "gflow JSON file, '-' for stdin");
    gverify->add_option("--graph", graph_path, "graph JSON file when not embedded");
    CLI::App *gzig = gflow->add_subcommand("zigzag", "zigzag graph with the g^r gflow");
    gzig->add_option("--n", n, "vertex count")->required();
    gzig->add_option("--r", r, "family parameter")->required();
    gzig->add_option("--out", out, "output file");

    // compile
    ScheduleArgs sargs;
    CLI::App *compile = app.add_subcommand("compile", "compile a replacement schedule");
    sargs.attach(compile);
    compile->add_option("--out", out, "output file");

    // gapscan
    CLI::App *gapscan = app.add_subcommand("gapscan", "spectrum of one step over s");
    sargs.attach(gapscan);
    int step = 1, points = 11, levels = 0;
    std::vector<double> s_list;
    gapscan->add_option("--step", step, "step number (1-based)");
    gapscan->add_option("--s-grid", s_list, "explicit s values")->delimiter(',');
    gapscan->add_option("--points", points, "uniform grid size when --s-grid is absent");
    gapscan->add_option("--levels", levels, "eigenvalues per row (default protected dimension + 1)");
    gapscan->add_option("--out", out, "CSV output file");

    // evolve
    CLI::App *evolve_cmd = app.add_subcommand("evolve", "time evolution and logical map");
    sargs.attach(evolve_cmd);
    std::vector<double> taus{200.0};
    double dt = 0.05;
    std::string target = "mbqc", csv;
    evolve_cmd->add_option("--tau", taus, "runtimes per step in units of 1/gamma")->delimiter(',');
    evolve_cmd->add_option("--dt", dt, "integrator step in units of 1/gamma");
    evolve_cmd->add_option("--target", target, "mbqc|cnot|none");
    evolve_cmd->add_option("--out", out, "JSON report");
    evolve_cmd->add_option("--csv", csv, "leakage table CSV");

    // reorder
    CLI::App *reorder = app.add_subcommand("reorder", "reordered replacement with protection report");
    sargs.attach(reorder);
    reorder->add_option("--out", out, "JSON report");

    // mbqc
    CLI::App *mbqc = app.add_subcommand("mbqc", "measurement-based reference runs");
    mbqc->add_option("--graph", graph_path, "graph JSON file")->required();
    mbqc->add_option("--gflow", gflow_path, "gflow JSON file");
    int input = -1;
    std::vector<int> outcomes;
    std::uint64_t seed = 1;
    mbqc->add_option("--input", input, "logical basis input index (default: all)");
    mbqc->add_option("--outcomes", outcomes, "outcomes in measurement order")->delimiter(',');
    mbqc->add_option("--seed", seed, "seed for sampled outcomes");
    mbqc->add_option("--out", out, "JSON report");

    // bounds
    CLI::App *bounds = app.add_subcommand("bounds", "runtime bound per step");
    sargs.attach(bounds);
    AdiabaticBudget budget;
    int grid = 101;
    bounds->add_option("--delta", budget.delta, "exponent delta in (0, 1]");
    bounds->add_option("--epsilon", budget.epsilon, "target error");
    bounds->add_option("--c-delta", budget.c_delta, "constant c(delta)");
    bounds->add_option("--grid", grid, "s-grid size for the gap minimum");
    bounds->add_option("--out", out, "CSV output file");

    // gadget
    CLI::App *gadget = app.add_subcommand("gadget", "perturbative gadget coupling and threshold");
    int k = 3;
    double lambda = 0.1;
    gadget->add_option("--k", k, "term degree")->required();
    gadget->add_option("--lambda", lambda, "perturbation strength")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInfeasible;
    }

    try {
        if (gen->parsed()) {
            OpenGraph g;
            if (kind == "chain") {
                if (n < 2) throw ParseError("chain needs n >= 2");
                g = generate_chain(n);
            } else if (kind == "cluster") {
                g = generate_cluster(rows, cols);
            } else if (kind == "zigzag") {
                g = generate_zigzag(n);
            } else if (kind == "cnot") {
                g = generate_cnot_graph();
            } else {
                throw ParseError("unknown graph kind " + kind);
            }
            if (!angles.empty()) {
                std::vector<Vertex> nonout = g.non_outputs();
                if (angles.size() != nonout.size())
                    throw ParseError("need " + std::to_string(nonout.size()) + " angles");
                std::map<Vertex, double> a;
                for (std::size_t i = 0; i < nonout.size(); ++i) a[nonout[i]] = angles[i];
                g = with_angles(g, a);
            }
            emit(out, graph_to_json(g));
        } else if (gvalidate->parsed()) {
            OpenGraph g = graph_from_json(read_json(graph_path));
            ValidationReport rep = validate(g);
            if (!rep.ok()) {
                for (auto &v : rep.violations) std::cout << "violation: " << v << "\n";
                return kExitInvalid;
            }
            std::cout << "valid\n";
        } else if (gfind->parsed()) {
            OpenGraph g = load_graph(graph_path);
            auto gf = find_gflow(g);
            if (!gf) throw RefusedError("graph has no gflow");
            emit(out, gflow_to_json(*gf, &g));
        } else if (gverify->parsed()) {
            GflowFile f = gflow_from_json(read_json(gflow_path.empty() ? "-" : gflow_path));
            OpenGraph g;
            if (!graph_path.empty())
                g = load_graph(graph_path);
            else if (f.graph)
                g = *f.graph;
            else
                throw ParseError("no graph: pass --graph or embed one in the gflow file");
            GflowReport rep = verify_gflow(g, f.gflow);
            if (!rep.valid) {
                std::cout << "invalid\n";
                for (auto &v : rep.violations)
                    std::cout << "violation " << v.axiom << " at " << v.vertex + 1 << ": " << v.detail << "\n";
                return kExitInvalid;
            }
            std::cout << "valid depth=" << rep.depth << " max_size=" << rep.max_size << "\n";
        } else if (gzig->parsed()) {
            OpenGraph g = generate_zigzag(n);
            Gflow gf;
            try {
                gf = zigzag_gflow_family(n, r);
            } catch (const std::invalid_argument &e) {
                throw ParseError(e.what());
            }
            emit(out, gflow_to_json(gf, &g));
        } else if (compile->parsed()) {
            Built b = build_schedule(sargs);
            emit(out, schedule_to_json(b.schedule));
        } else if (gapscan->parsed()) {
            Built b = build_schedule(sargs);
            if (step < 1 || static_cast<std::size_t>(step) > b.schedule.steps.size())
                throw ParseError("step out of range");
            check_dense_cap(b.schedule.graph.size());
            int lv = levels > 0 ? levels : protected_dimension(b.schedule) + 1;
            SpectralScan scan = spectral_scan(b.schedule, static_cast<std::size_t>(step - 1),
                                              s_grid_from(s_list, points), lv);
            std::ostringstream os;
            os << "s";
            for (int i = 0; i < lv; ++i) os << ",E" << i;
            os << ",gap,degeneracy\n";
            for (std::size_t i = 0; i < scan.s_grid.size(); ++i) {
                os << fmt(scan.s_grid[i]);
                for (double e : scan.eigenvalues[i]) os << "," << fmt(e);
                os << "," << fmt(scan.gap[i]) << "," << scan.ground_degeneracy[i] << "\n";
            }
            emit(out, os.str());
        } else if (evolve_cmd->parsed()) {
            Built b = build_schedule(sargs);
            const Schedule &s = b.schedule;
            if (!(dt > 0)) throw ParseError("dt must be positive");
            std::optional<DenseOperator> ref;
            if (target == "mbqc")
                ref = mbqc_unitary(s.graph, s.gflow);
            else if (target == "cnot")
                ref = cnot_matrix();
            else if (target != "none")
                throw ParseError("unknown target " + target);
            Json report;
            report["mode"] = mode_name(s.mode);
            report["gamma"] = s.gamma;
            report["dt"] = dt;
            report["target"] = target;
            Json runs = Json::array();
            std::ostringstream table;
            table << "tau,leakage,fidelity\n";
            for (double tau : taus) {
                if (!(tau > 0)) throw ParseError("tau must be positive");
                EvolutionResult res = evolve(s, tau, EvolveOptions{dt}, ref ? &*ref : nullptr);
                Json run;
                run["tau"] = tau;
                run["leakage"] = res.leakage;
                if (res.fidelity) run["fidelity"] = *res.fidelity;
                if (ref) {
                    run["distance"] = compare(res.logical_unitary, *ref);
                    run["overlap_distance"] = compare(res.overlap, *ref);
                }
                run["logical_unitary"] = matrix_to_json(res.logical_unitary);
                runs.push_back(run);
                table << fmt(tau) << "," << fmt(res.leakage) << ","
                      << (res.fidelity ? fmt(*res.fidelity) : std::string("nan")) << "\n";
            }
            report["runs"] = runs;
            try {
                report["frame"] = frame_to_json(propagate(initial_frame(s.graph, s.gflow), s));
            } catch (const RefusedError &e) {
                report["frame"] = nullptr;
                report["frame_note"] = e.what();
            }
            emit(out, report);
            if (!csv.empty()) emit(csv, table.str());
        } else if (reorder->parsed()) {
            if (sargs.mode == "stepwise") sargs.mode = "reorder-fixed";
            if (sargs.mode != "reorder-fixed" && sargs.mode != "reorder-strip")
                throw ParseError("reorder takes --mode reorder-fixed or reorder-strip");
            Built b = build_schedule(sargs);
            const Schedule &s = b.schedule;
            check_dense_cap(s.graph.size());
            Json report;
            report["mode"] = mode_name(s.mode);
            Json steps = Json::array();
            for (std::size_t i = 0; i < s.steps.size(); ++i) {
                Json e;
                e["step"] = i + 1;
                std::vector<Vertex> intro;
                for (auto &[v, x] : s.steps[i].introduced) intro.push_back(v);
                e["introduced"] = detail::vertex_list_json(intro);
                e["end_degeneracy"] = spectral_scan(s, i, {1.0}).ground_degeneracy[0];
                if (b.report) {
                    const StepProtection &p = b.report->steps[i];
                    Json cons = Json::array();
                    for (auto &c : p.conserved) cons.push_back(to_string(c));
                    e["conserved"] = cons;
                    e["protected"] = p.protected_ok;
                    if (!p.note.empty()) e["note"] = p.note;
                }
                steps.push_back(e);
            }
            report["steps"] = steps;
            if (b.report) report["feasible"] = b.report->feasible();
            report["schedule"] = schedule_to_json(s);
            emit(out, report);
        } else if (mbqc->parsed()) {
            OpenGraph g = load_graph(graph_path);
            Gflow gf = load_or_find_gflow(g, gflow_path);
            const int din = 1 << g.inputs().size();
            if (input >= din) throw ParseError("input index out of range");
            std::mt19937_64 rng(seed);
            Json report;
            report["seed"] = seed;
            report["unitary"] = matrix_to_json(mbqc_unitary(g, gf));
            Json runs = Json::array();
            for (int i = (input < 0 ? 0 : input); i < (input < 0 ? din : input + 1); ++i) {
                std::optional<std::vector<int>> oc;
                if (!outcomes.empty()) oc = outcomes;
                MbqcRun run = mbqc_reference_run(g, gf, StateVector::Unit(din, i), oc, rng());
                Json e;
                e["input"] = i;
                e["outcomes"] = run.outcomes;
                e["output"] = matrix_to_json(DenseOperator(run.output));
                runs.push_back(e);
            }
            report["runs"] = runs;
            emit(out, report);
        } else if (bounds->parsed()) {
            Built b = build_schedule(sargs);
            budget.gamma = sargs.gamma;
            try {
                budget.check();
            } catch (const std::invalid_argument &e) {
                throw ParseError(e.what());
            }
            std::ostringstream os;
            os << "step,U,gap_min,hdot_norm,tau_bound\n";
            for (std::size_t i = 0; i < b.schedule.steps.size(); ++i) {
                StepBound sb = runtime_bound(b.schedule.steps[i], budget, grid);
                os << i + 1 << "," << sb.replaced << "," << fmt(sb.gap_min) << "," << fmt(sb.hdot_norm) << ","
                   << fmt(sb.tau_bound) << "\n";
            }
            emit(out, os.str());
        } else if (gadget->parsed()) {
            GadgetParameters p = gadget_parameters(k, lambda);
            Json j;
            j["k"] = k;
            j["lambda"] = lambda;
            j["coefficient"] = p.coefficient;
            j["lambda_max"] = p.lambda_max;
            j["converges"] = p.converges;
            emit("", j);
        }
    } catch (const ValidationFailure &e) {
        std::cerr << "agqc: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception &e) {
        std::cerr << "agqc: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}
