#include "rodctl/pipeline.hpp"

#include <cmath>

namespace rodctl {

const char* to_string(SolverChoice s) {
    switch (s) {
        case SolverChoice::QP: return "qp";
        case SolverChoice::EL: return "el";
        case SolverChoice::Both: return "both";
    }
    return "?";
}

Problem setup_problem(int N, int M, const StateSpec& state) {
    const FeasibilityReport feas = feasibility_check(N, M);
    if (!feas.feasible()) throw InfeasibleError("N=" + std::to_string(N) + ", M=" + std::to_string(M) + ": " + feas.reason);
    Problem pb;
    pb.mesh = build_mesh(N, M);
    pb.state = state;
    pb.system = assemble_edge_constraints(pb.mesh, state);
    pb.par = eliminate(pb.system, pb.mesh);
    pb.bc = boundary_matrices(pb.par, all_vertex_conditions(pb.mesh));
    pb.weights = build_weights(pb.mesh, pb.par.samples);
    return pb;
}

namespace {

Solution primary_solution(const Problem& pb, SolverChoice solver, std::optional<Solution>& qp,
                          std::optional<Solution>& el) {
    if (solver != SolverChoice::EL) qp = solve_qp(assemble_qp(pb.par, pb.bc, pb.weights), pb.par, pb.bc, pb.weights);
    if (solver != SolverChoice::QP) el = solve_euler_lagrange(pb.par, pb.bc, pb.weights);
    return qp ? *qp : *el;
}

}  // namespace

double solve_objective(const Problem& pb, SolverChoice solver) {
    std::optional<Solution> qp, el;
    return primary_solution(pb, solver, qp, el).objective;
}

Outcome solve_problem(const Problem& pb, SolverChoice solver) {
    Outcome out;
    out.primary = primary_solution(pb, solver, out.qp, out.el);
    if (out.qp && out.el) out.comparison = compare_solvers(*out.qp, *out.el);

    const Solution& sol = out.primary;
    out.E = sol.objective;
    out.TE = pb.mesh.T * sol.objective;
    out.waves = waves_from_solution(pb.par, sol);
    out.edge_residual = edge_residual(pb.system, out.waves.entries, sol.c);
    out.controls = controls_from_jumps(pb.mesh, jumps_from_table(out.waves));
    out.fields = fields(out.waves, out.controls, pb.mesh);
    out.field_energy = mean_energy(out.fields);
    out.Q = residual_Q(out.fields);
    out.c1 = terminal_constant(sol, out.controls);
    out.terminal = terminal_error(out.fields, pb.state, out.c1.c1);
    out.interface_jump = interface_jump(out.fields);
    out.boundary_force_error = boundary_force_error(out.fields, out.controls);
    out.discontinuities = force_discontinuities(out.controls);

    const double scale = 1.0 + pb.state.v0.values().cwiseAbs().maxCoeff() + pb.state.r0.values().cwiseAbs().maxCoeff() +
                         pb.state.v1.values().cwiseAbs().maxCoeff() + pb.state.r1.values().cwiseAbs().maxCoeff();
    if (out.edge_residual > 1e-8 * scale)
        throw InvariantViolation("reconstructed waves violate the edge constraints by " +
                                 std::to_string(out.edge_residual));
    if (out.c1.spread > 1e-8 * scale)
        throw InvariantViolation("terminal constants disagree across segments by " + std::to_string(out.c1.spread));
    if (sol.bc_residual > 1e-9 * scale)
        throw InvariantViolation("essential boundary conditions violated by " + std::to_string(sol.bc_residual));
    return out;
}

}  // namespace rodctl
