#include "rodctl/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace rodctl;

namespace {

struct Options {
    std::string config;
    std::string out;
    int p_grid = 0;
    std::string solver;
    bool oracle = false;
    std::string m_range = "2:6";
    std::string n_range = "2:6";
    bool dump = false;
    unsigned workers = 0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "JSON run configuration");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--p-grid", o.p_grid, "samples per characteristic piece (odd)");
    cmd->add_option("--solver", o.solver, "qp, el or both")->check(CLI::IsMember({"qp", "el", "both"}));
    cmd->add_flag("--oracle", o.oracle, "run the finite-difference oracle");
    cmd->add_flag("--dump-matrices", o.dump, "write C, A and the free map with exact rationals");
}

RunConfig resolve(const Options& o) {
    RunConfig cfg = o.config.empty() ? validate_config(R"({"N": 4, "M": 4, "preset": "cos3"})")
                                     : load_config(o.config);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.p_grid != 0) {
        if (o.p_grid < 9 || o.p_grid % 2 == 0)
            throw ConfigErrors({"--p-grid: must be odd and >= 9, got " + std::to_string(o.p_grid)});
        cfg.samples = o.p_grid;
    }
    if (o.solver == "qp") cfg.solver = SolverChoice::QP;
    if (o.solver == "el") cfg.solver = SolverChoice::EL;
    if (o.solver == "both") cfg.solver = SolverChoice::Both;
    if (o.oracle) cfg.oracle.enabled = true;
    if (o.dump) cfg.dump_matrices = true;
    return cfg;
}

int solve(const Options& o) {
    const RunConfig cfg = resolve(o);
    const SolveRun run = run_solve(cfg);
    const auto& s = run.summary;
    if (run.exit_code != kExitOk) {
        std::fprintf(stderr, "%s: %s\n", s["status"].get<std::string>().c_str(),
                     s["message"].get<std::string>().c_str());
        return run.exit_code;
    }
    const Outcome& out = *run.outcome;
    std::printf("N=%d M=%d T=%g  E=%.10g  T*E=%.10g  Q=%.3e\n", cfg.N, cfg.M, s["mesh"]["T"].get<double>(), out.E,
                out.TE, out.Q);
    if (out.comparison)
        std::printf("qp %.12g  el %.12g  gap %.3e\n", out.comparison->objective_qp, out.comparison->objective_el,
                    out.comparison->gap);
    if (run.oracle)
        std::printf("oracle: energy error %.3e, order %.2f\n", run.oracle->finest_energy_error, run.oracle->min_order);
    for (const auto& path : run.written) std::printf("wrote %s\n", path.c_str());
    return kExitOk;
}

int sweep(const Options& o) {
    const RunConfig cfg = resolve(o);
    const Range m = parse_range(o.m_range);
    const Range n = parse_range(o.n_range);
    const SweepResult res = run_sweep(cfg, m, n, o.workers);
    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = (std::filesystem::path(cfg.out_dir) / "sweep.csv").string();
    write_sweep_csv(path, res);
    for (const SweepCell& c : res.cells) {
        if (c.ok())
            std::printf("M=%d N=%d  T*E=%.12g  E=%.12g  %.3fs\n", c.M, c.N, c.TE, c.E, c.seconds);
        else
            std::printf("M=%d N=%d  %s\n", c.M, c.N, c.status.c_str());
    }
    std::printf("monotonicity: %s\n", res.report.monotone() ? "nonincreasing along every axis" : "violated");
    for (const auto& v : res.report.violations) std::printf("  %s\n", v.c_str());
    std::printf("wrote %s\n", path.c_str());
    return kExitOk;
}

int verify(const Options& o) {
    RunConfig cfg = resolve(o);
    cfg.oracle.enabled = true;
    const SolveRun run = run_solve(cfg);
    if (run.exit_code != kExitOk) {
        std::fprintf(stderr, "%s: %s\n", run.summary["status"].get<std::string>().c_str(),
                     run.summary["message"].get<std::string>().c_str());
        return run.exit_code;
    }
    const Outcome& out = *run.outcome;
    bool ok = true;
    auto line = [&](const char* name, bool pass, double value, double limit) {
        std::printf("%-28s %s  %.3e (limit %.1e)\n", name, pass ? "ok  " : "FAIL", value, limit);
        ok = ok && pass;
    };
    const double v_term = std::max(out.terminal.v0_sup, out.terminal.v1_sup);
    const double r_term = std::max(out.terminal.r0_sup, out.terminal.r1_sup);
    line("terminal v", v_term <= 1e-8, v_term, 1e-8);
    line("terminal r (mod c1)", r_term <= 1e-8, r_term, 1e-8);
    line("constitutive residual Q", out.Q <= 1e-6 * out.TE + 1e-14, out.Q, 1e-6 * out.TE);
    line("boundary conditions", out.primary.bc_residual <= 1e-9, out.primary.bc_residual, 1e-9);
    line("oracle energy error", run.oracle->finest_energy_error <= 0.02, run.oracle->finest_energy_error, 0.02);
    line("oracle order", run.oracle->min_order >= 1.8, run.oracle->min_order, 1.8);
    return ok ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal boundary and distributed control of a rod by traveling waves"};
    app.require_subcommand(1);
    Options o;
    auto* s = app.add_subcommand("solve", "solve one configuration and write artifacts");
    auto* w = app.add_subcommand("sweep", "T*E over a grid of (M, N)");
    auto* v = app.add_subcommand("verify", "solve with the oracle and check the structural bounds");
    for (auto* cmd : {s, w, v}) add_common(cmd, o);
    w->add_option("--m-range", o.m_range, "A:B")->capture_default_str();
    w->add_option("--n-range", o.n_range, "A:B")->capture_default_str();
    w->add_option("--workers", o.workers, "worker threads (0: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*s) return solve(o);
        if (*w) return sweep(o);
        if (*v) return verify(o);
    } catch (const ConfigurationError& e) {
        std::cerr << "config error:\n" << e.what() << '\n';
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
