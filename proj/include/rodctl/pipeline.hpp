#ifndef RODCTL_PIPELINE_HPP
#define RODCTL_PIPELINE_HPP

#include "rodctl/core.hpp"
#include "rodctl/edge_system.hpp"
#include "rodctl/energy.hpp"
#include "rodctl/mesh.hpp"
#include "rodctl/optimizer.hpp"
#include "rodctl/reconstruct.hpp"

#include <optional>

namespace rodctl {

enum class SolverChoice { QP, EL, Both };

const char* to_string(SolverChoice s);

/// Everything up to the variational problem for one (N, M) and state.
struct Problem {
    MeshConfig mesh;
    StateSpec state;
    EdgeSystem system;
    Parametrization par;
    EssentialBC bc;
    EnergyWeights weights;
};

/// Throws InfeasibleError for M = 1.
Problem setup_problem(int N, int M, const StateSpec& state);

struct Outcome {
    Solution primary;  ///< QP when it ran, E-L otherwise
    std::optional<Solution> qp;
    std::optional<Solution> el;
    std::optional<SolverComparison> comparison;

    WaveTable waves;
    ControlSet controls;
    FieldGrid fields;

    double E = 0.0;   ///< weighted objective of the primary solution
    double TE = 0.0;
    double field_energy = 0.0;  ///< mean energy from the field grid
    double Q = 0.0;
    TerminalConstant c1;
    TerminalErrors terminal;
    double interface_jump = 0.0;
    double boundary_force_error = 0.0;
    double edge_residual = 0.0;
    DiscontinuityReport discontinuities;
};

/// Solves and reconstructs. Throws InvariantViolation when the result breaks
/// a structural check (junction continuity, terminal matching).
Outcome solve_problem(const Problem& problem, SolverChoice solver);

/// Objective only, for sweeps.
double solve_objective(const Problem& problem, SolverChoice solver);

}  // namespace rodctl

#endif
