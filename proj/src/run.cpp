#include "rodctl/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace rodctl {

using nlohmann::ordered_json;

namespace {

ordered_json trig_json(const TrigTerm& t) { return {{"a", t.a}, {"omega", t.omega}, {"phi", t.phi}}; }

ordered_json solution_json(const Solution& s) {
    ordered_json j;
    j["objective"] = s.objective;
    j["bc_residual"] = s.bc_residual;
    j["system_residual"] = s.system_residual;
    return j;
}

void write_summary(const std::string& path, const ordered_json& summary) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    out << summary.dump(2) << '\n';
}

}  // namespace

std::string timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream os;
    os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

ordered_json describe(const RunConfig& cfg) {
    ordered_json c;
    c["N"] = cfg.N;
    c["M"] = cfg.M;
    c["P"] = cfg.samples;
    if (cfg.profiles) {
        const ProfileFiles& f = *cfg.profiles;
        c["profiles"] = {{"v0", f.v0},
                         {f.r0_is_momentum ? "p0" : "r0", f.r0},
                         {"v1", f.v1},
                         {f.r1_is_momentum ? "p1" : "r1", f.r1}};
    } else {
        const Preset p = cfg.preset.value_or(Preset::Cos3Example);
        c["preset"] = to_string(p);
        if (p == Preset::Trig)
            c["trig"] = {{"v0", trig_json(cfg.trig[0])},
                         {"r0", trig_json(cfg.trig[1])},
                         {"v1", trig_json(cfg.trig[2])},
                         {"r1", trig_json(cfg.trig[3])}};
    }
    c["solver"] = to_string(cfg.solver);
    c["oracle"] = {{"enabled", cfg.oracle.enabled},
                   {"points_per_segment", cfg.oracle.sim.points_per_segment},
                   {"cfl", cfg.oracle.sim.cfl},
                   {"levels", cfg.oracle.levels}};
    c["rod"] = {{"rho", cfg.rod.rho}, {"kappa", cfg.rod.kappa}, {"L", cfg.rod.L}};
    return c;
}

SolveRun run_solve(const RunConfig& cfg, bool write) {
    SolveRun run;
    ordered_json& s = run.summary;
    s["timestamp"] = timestamp_now();
    s["config"] = describe(cfg);

    const SystemCounts n = counts(cfg.N, cfg.M);
    const MeshConfig mesh = build_mesh(cfg.N, cfg.M);
    s["mesh"] = {{"N", mesh.N},
                 {"M", mesh.M},
                 {"lambda", mesh.lambda},
                 {"T", mesh.T},
                 {"time_scale", cfg.rod.time_scale()},
                 {"T_physical", mesh.T * cfg.rod.time_scale()}};
    s["counts"] = {{"N_e", n.N_e}, {"N_w", n.N_w}, {"N_u", n.N_u}, {"N_v", n.N_v}, {"N_s", n.N_s}, {"N_b", n.N_b}};

    const FeasibilityReport feas = feasibility_check(cfg.N, cfg.M);
    s["feasibility"] = {{"feasible", feas.feasible()}, {"reason", feas.reason}};

    std::filesystem::path dir(cfg.out_dir);
    if (write) std::filesystem::create_directories(dir);
    auto finish = [&](int code, const std::string& status, const std::string& message) {
        run.exit_code = code;
        s["status"] = status;
        if (!message.empty()) s["message"] = message;
        if (write) {
            write_summary((dir / "summary.json").string(), s);
            run.written.push_back((dir / "summary.json").string());
        }
        return run;
    };
    if (!feas.feasible()) return finish(kExitInfeasible, "infeasible", feas.reason);

    const StateSpec state = build_state(cfg);
    Problem pb;
    try {
        pb = setup_problem(cfg.N, cfg.M, state);
    } catch (const InfeasibleError& e) {
        return finish(kExitInfeasible, "infeasible", e.what());
    } catch (const InvariantViolation& e) {
        return finish(kExitInvariant, "invariant_violation", e.what());
    }

    s["elimination"] = {{"free_functions", pb.par.free_count()},
                        {"vertex_rows", pb.bc.rows_in},
                        {"independent_vertex_rows", pb.bc.rank},
                        {"dropped_row_inconsistency", pb.bc.dropped_inconsistency}};

    if (write && cfg.dump_matrices) {
        const std::vector<std::pair<std::string, std::function<void(const std::string&)>>> dumps = {
            {"C.csv", [&](const std::string& p) { write_matrix_csv(p, pb.system.C); }},
            {"A.csv", [&](const std::string& p) { write_matrix_csv(p, pb.par.A_exact); }},
            {"gauge.csv", [&](const std::string& p) { write_matrix_csv(p, pb.par.gauge_exact); }},
            {"free_map.csv", [&](const std::string& p) { write_free_map_csv(p, pb.par); }},
        };
        for (const auto& [name, fn] : dumps) {
            fn((dir / name).string());
            run.written.push_back((dir / name).string());
        }
    }

    Outcome out;
    try {
        out = solve_problem(pb, cfg.solver);
    } catch (const InvariantViolation& e) {
        return finish(kExitInvariant, "invariant_violation", e.what());
    }

    s["energy"] = {{"E", out.E},
                   {"TE", out.TE},
                   {"field_energy", out.field_energy},
                   {"Q", out.Q},
                   {"Q_over_TE", out.TE > 0.0 ? out.Q / out.TE : 0.0}};
    s["terminal"] = {{"c1", out.c1.c1},
                     {"c1_spread", out.c1.spread},
                     {"v0_sup", out.terminal.v0_sup},
                     {"v0_l2", out.terminal.v0_l2},
                     {"r0_sup", out.terminal.r0_sup},
                     {"r0_l2", out.terminal.r0_l2},
                     {"v1_sup", out.terminal.v1_sup},
                     {"v1_l2", out.terminal.v1_l2},
                     {"r1_sup", out.terminal.r1_sup},
                     {"r1_l2", out.terminal.r1_l2}};
    s["checks"] = {{"edge_residual", out.edge_residual},
                   {"wave_continuity", out.waves.continuity_error},
                   {"interface_jump", out.interface_jump},
                   {"boundary_force_error", out.boundary_force_error}};

    ordered_json solvers;
    solvers["primary"] = out.qp ? "qp" : "el";
    if (out.qp) solvers["qp"] = solution_json(*out.qp);
    if (out.el) {
        solvers["el"] = solution_json(*out.el);
        solvers["el"]["pseudo_inverse"] = out.el->pseudo_inverse;
        solvers["el"]["conjugate_variation"] = conjugate_variation(out.el->p);
    }
    if (out.comparison) {
        const SolverComparison& c = *out.comparison;
        solvers["comparison"] = {{"gap", c.gap}, {"y_difference", c.y_difference}, {"qp_not_worse", c.qp_not_worse}};
    }
    s["solvers"] = solvers;

    s["force_discontinuities"] = {{"instants", out.discontinuities.instants},
                                  {"jump", out.discontinuities.jump},
                                  {"interior_max", out.discontinuities.interior_max}};

    if (cfg.oracle.enabled) {
        run.oracle = refinement_study(pb.mesh, RodParams{}, out.controls, pb.state, out.fields, cfg.oracle.sim,
                                      cfg.oracle.levels);
        const RefinementStudy& r = *run.oracle;
        s["oracle"] = {{"points_per_segment", r.points},
                       {"cfl", cfg.oracle.sim.cfl},
                       {"v_l2_error", r.errors},
                       {"energy_error", r.energy_errors},
                       {"order", r.orders},
                       {"energy_order", r.energy_orders},
                       {"min_order", r.min_order},
                       {"finest_error", r.finest_error},
                       {"finest_energy_error", r.finest_energy_error}};
    }

    if (write) {
        write_controls_csv((dir / "controls.csv").string(), out.controls);
        write_fields_csv((dir / "fields.csv").string(), out.fields, cfg.fields_stride);
        run.written.push_back((dir / "controls.csv").string());
        run.written.push_back((dir / "fields.csv").string());
    }
    run.outcome = std::move(out);
    return finish(kExitOk, "ok", "");
}

Range parse_range(const std::string& text) {
    Range r;
    const auto colon = text.find(':');
    try {
        std::size_t used = 0;
        if (colon == std::string::npos) {
            r.first = r.last = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
            r.first = std::stoi(a, &used);
            if (used != a.size()) throw std::invalid_argument(text);
            r.last = std::stoi(b, &used);
            if (used != b.size()) throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw ConfigurationError("range '" + text + "' is not of the form A:B");
    }
    if (r.first < 1 || r.last < r.first) throw ConfigurationError("range '" + text + "' must satisfy 1 <= A <= B");
    return r;
}

const SweepCell* SweepResult::find(int M, int N) const {
    for (const SweepCell& c : cells)
        if (c.M == M && c.N == N) return &c;
    return nullptr;
}

SweepResult run_sweep(const RunConfig& cfg, Range m_range, Range n_range, unsigned workers) {
    SweepResult result;
    for (int M = m_range.first; M <= m_range.last; ++M)
        for (int N = n_range.first; N <= n_range.last; ++N) result.cells.push_back({M, N, 0.0, 0.0, 0.0, ""});

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(result.cells.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < result.cells.size(); i = next++) {
            SweepCell& cell = result.cells[i];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const Problem pb = setup_problem(cell.N, cell.M, build_state(cfg, cell.N));
                cell.E = solve_objective(pb, cfg.solver);
                cell.TE = pb.mesh.T * cell.E;
                cell.status = "ok";
            } catch (const InfeasibleError&) {
                cell.status = "infeasible";
            } catch (const std::exception& e) {
                cell.status = std::string("failed: ") + e.what();
            }
            cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    result.report = check_monotonicity(result.cells);
    return result;
}

MonotonicityReport check_monotonicity(const std::vector<SweepCell>& cells, double slack) {
    MonotonicityReport rep;
    rep.slack = slack;
    std::map<std::pair<int, int>, const SweepCell*> grid;
    std::set<int> Ms, Ns;
    for (const SweepCell& c : cells) {
        if (!c.ok()) continue;
        grid[{c.M, c.N}] = &c;
        Ms.insert(c.M);
        Ns.insert(c.N);
    }
    auto walk = [&](const std::string& label, const std::vector<const SweepCell*>& seq, bool isochrone) {
        if (seq.size() < 2) return;
        rep.checked.push_back(label);
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            const SweepCell& a = *seq[i];
            const SweepCell& b = *seq[i + 1];
            if (b.TE > a.TE + slack) {
                std::ostringstream os;
                os << std::setprecision(12) << label << ": T*E(M=" << b.M << ",N=" << b.N << ")=" << b.TE
                   << " > T*E(M=" << a.M << ",N=" << a.N << ")=" << a.TE;
                if (isochrone)
                    rep.isochrone_decreasing = false;
                rep.violations.push_back(os.str());
            }
        }
    };
    for (int N : Ns) {
        std::vector<const SweepCell*> seq;
        for (int M : Ms)
            if (grid.count({M, N})) seq.push_back(grid[{M, N}]);
        walk("N=" + std::to_string(N) + " over M", seq, false);
    }
    for (int M : Ms) {
        std::vector<const SweepCell*> seq;
        for (int N : Ns)
            if (grid.count({M, N})) seq.push_back(grid[{M, N}]);
        walk("M=" + std::to_string(M) + " over N", seq, false);
    }
    std::vector<const SweepCell*> diag;
    for (int M : Ms)
        if (grid.count({M, M})) diag.push_back(grid[{M, M}]);
    walk("isochrone M=N", diag, true);
    return rep;
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    out << "M,N,TE,E,solve_seconds,status\n" << std::setprecision(15);
    for (const SweepCell& c : sweep.cells) {
        std::string status = c.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        out << c.M << ',' << c.N << ',';
        if (c.ok())
            out << c.TE << ',' << c.E;
        else
            out << ',';
        out << ',' << std::setprecision(4) << c.seconds << std::setprecision(15) << ',' << status << '\n';
    }
    const MonotonicityReport& r = sweep.report;
    out << "# monotonicity: " << (r.monotone() ? "nonincreasing" : "violated") << " along every axis (slack "
        << r.slack << ")\n";
    for (const std::string& c : r.checked) out << "# checked " << c << '\n';
    for (const std::string& v : r.violations) out << "# violation " << v << '\n';
}

}  // namespace rodctl
