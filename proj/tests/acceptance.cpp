#include "rodctl/config.hpp"
#include "rodctl/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

using namespace rodctl;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
    if (!pass) ++failures;
    std::printf("criterion %2d %s  %-28s %s (%.2fs)\n", id, pass ? "PASS" : "FAIL", name, detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

RunConfig cos3_config(int N, int M, SolverChoice solver = SolverChoice::QP) {
    RunConfig cfg;
    cfg.N = N;
    cfg.M = M;
    cfg.preset = Preset::Cos3Example;
    cfg.solver = solver;
    return cfg;
}

const Outcome& cos3_outcome() {
    static const Outcome out = [] {
        const RunConfig cfg = cos3_config(4, 4, SolverChoice::Both);
        return solve_problem(setup_problem(4, 4, build_state(cfg)), SolverChoice::Both);
    }();
    return out;
}

void counting() {
    Timer t;
    bool ok = true;
    for (int N = 1; N <= 8; ++N)
        for (int M = 1; M <= 8; ++M) {
            const MeshConfig mesh = build_mesh(N, M);
            const EdgeSystem s = assemble_edge_structure(mesh);
            const long e = static_cast<long>(s.rows.size());
            const long w = static_cast<long>(s.catalog.wave_count());
            const long u = static_cast<long>(s.catalog.size()) - w;
            const long b = static_cast<long>(assemble_vertex_conditions(mesh).size());
            const long nb = N % 2 == 1 ? M * N + M - N + 1 : M * N + M - N;
            const SystemCounts c = counts(N, M);
            ok = ok && e == 2 * M * N + 4 * N && w == 2 * (M + 1) * N && u == M * (N + 1) &&
                 w + u - e == M * N + M - 2 * N && b == nb;
            ok = ok && c.N_e == e && c.N_w == w && c.N_u == u && c.N_v == w + u && c.N_s == w + u - e && c.N_b == b;
        }
    const double sec = t.seconds();
    report(1, "counting identities", ok && sec < 1.0, "64 meshes", sec);
}

void soundness() {
    Timer t;
    std::mt19937 rng(2024);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (auto [N, M] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{4, 4}, std::pair{5, 3}}) {
        const MeshConfig mesh = build_mesh(N, M);
        const EdgeSystem s = assemble_edge_constraints(mesh, build_state(cos3_config(N, M)));
        const Parametrization par = eliminate(s, mesh);
        for (int draw = 0; draw < 20; ++draw) {
            const Matrix Y = Matrix::NullaryExpr(par.samples, par.free_count(), [&] { return normal(rng); });
            const Vector c = Vector::NullaryExpr(N, [&] { return normal(rng); });
            worst = std::max(worst, edge_residual(s, par.entries(Y, c), c));
        }
    }
    const double sec = t.seconds();
    report(2, "parametrization soundness", worst <= 1e-10 && sec < 30.0, fmt("max residual %.2e", worst), sec);
}

void cos3() {
    Timer t;
    const Outcome& out = cos3_outcome();
    const double v = std::max(out.terminal.v0_sup, out.terminal.v1_sup);
    const double r = std::max(out.terminal.r0_sup, out.terminal.r1_sup);
    const bool ok = v <= 1e-8 && r <= 1e-8 && out.Q <= 1e-6 * out.TE;
    const double sec = t.seconds();
    report(3, "exact steering N=M=4", ok && sec < 5.0, fmt("v %.1e, r %.1e, Q/TE %.1e", v, r, out.Q / out.TE), sec);
}

void oracle() {
    Timer t;
    const Outcome& out = cos3_outcome();
    const RunConfig cfg = cos3_config(4, 4);
    SimConfig sim;
    sim.points_per_segment = 500;
    sim.cfl = 1.0;
    const RefinementStudy r =
        refinement_study(build_mesh(4, 4), RodParams{}, out.controls, build_state(cfg), out.fields, sim, 3);
    const bool ok = r.finest_energy_error <= 0.02 && r.min_order >= 1.8;
    const double sec = t.seconds();
    report(4, "independent verification", ok && sec < 60.0,
           fmt("energy error %.2e, order %.2f", r.finest_energy_error, r.min_order), sec);
}

void minimal_time() {
    Timer t;
    const SolveRun one = run_solve(cos3_config(4, 1), false);
    const SolveRun two = run_solve(cos3_config(4, 2), false);
    const bool ok = one.exit_code == kExitInfeasible && two.exit_code == kExitOk;
    report(5, "minimal controllability time", ok, fmt("exit codes M=1: %.0f, M=2: %.0f", one.exit_code, two.exit_code),
           t.seconds());
}

const SweepResult& sweep() {
    static const SweepResult res = run_sweep(cos3_config(2, 2), {2, 6}, {2, 6});
    return res;
}

void monotonicity() {
    Timer t;
    const SweepResult& res = sweep();
    bool all_ok = true;
    for (const SweepCell& c : res.cells) all_ok = all_ok && c.ok();
    const double sec = t.seconds();
    std::string detail = std::to_string(res.report.checked.size()) + " sequences, " +
                         std::to_string(res.report.violations.size()) + " violations";
    report(6, "T*E monotone over M, N", all_ok && res.report.monotone() && sec < 300.0, detail, sec);
}

void plateau() {
    Timer t;
    const SweepResult& res = sweep();
    const SweepCell* base = res.find(2, 2);
    double drift = 0.0;
    for (int M = 3; M <= 6; ++M) drift = std::max(drift, std::abs(res.find(M, 2)->TE - base->TE));
    report(7, "N=2 plateau", drift <= 1e-8, fmt("max |T*E(M,2) - T*E(2,2)| = %.3e", drift), t.seconds());
}

void discontinuities() {
    Timer t;
    const DiscontinuityReport& d = cos3_outcome().discontinuities;
    bool ok = d.instants.size() == 3 && d.interior_max < 1e-8;
    double smallest = INFINITY;
    for (std::size_t i = 0; ok && i < 3; ++i) {
        ok = std::abs(d.instants[i] - 0.5 * double(i + 1)) < 1e-12 && d.jump[i] > 1e-6;
        smallest = std::min(smallest, d.jump[i]);
    }
    report(8, "force discontinuity pattern", ok, fmt("min jump %.2e, interior %.2e", smallest, d.interior_max),
           t.seconds());
}

void zero_data() {
    Timer t;
    RunConfig cfg = cos3_config(4, 4, SolverChoice::Both);
    cfg.preset = Preset::Zero;
    const Outcome out = solve_problem(setup_problem(4, 4, build_state(cfg)), SolverChoice::Both);
    double worst = std::abs(out.E);
    for (const Matrix& f : out.controls.forces) worst = std::max(worst, f.cwiseAbs().maxCoeff());
    for (const Matrix& u : out.controls.integrals) worst = std::max(worst, u.cwiseAbs().maxCoeff());
    for (const FieldBlock& b : out.fields.blocks)
        worst = std::max({worst, b.v.cwiseAbs().maxCoeff(), b.r.cwiseAbs().maxCoeff(), b.f.cwiseAbs().maxCoeff()});
    report(9, "zero data", worst <= 1e-12, fmt("max magnitude %.2e", worst), t.seconds());
}

void cross_check() {
    Timer t;
    const Outcome& out = cos3_outcome();
    const SolverComparison& c = *out.comparison;
    const double variation = conjugate_variation(out.el->p);
    const bool ok = c.bc_residual_qp <= 1e-9 && c.bc_residual_el <= 1e-9 &&
                    c.objective_qp <= c.objective_el + 1e-8 && variation <= 1e-8;
    report(10, "QP / Euler-Lagrange", ok,
           fmt("bc %.1e, gap %.2e, p variation %.1e", std::max(c.bc_residual_qp, c.bc_residual_el), c.gap, variation),
           t.seconds());
}

}  // namespace

int main() {
    counting();
    soundness();
    cos3();
    oracle();
    minimal_time();
    monotonicity();
    plateau();
    discontinuities();
    zero_data();
    cross_check();
    std::printf("%d of 10 criteria pass\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
