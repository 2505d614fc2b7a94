#ifndef RODCTL_RECONSTRUCT_HPP
#define RODCTL_RECONSTRUCT_HPP

#include "rodctl/core.hpp"
#include "rodctl/edge_system.hpp"
#include "rodctl/fields.hpp"
#include "rodctl/mesh.hpp"
#include "rodctl/optimizer.hpp"

#include <string>
#include <vector>

namespace rodctl {

/// Every catalog entry on the piece grid, and the traveling waves of each
/// segment concatenated over their characteristic interval
/// [z(+/-)_k, z(+/-)_k + T + lambda].
struct WaveTable {
    MeshConfig mesh;
    Index samples = 0;
    Matrix entries;              ///< N_v x P
    std::vector<Vector> plus;    ///< per segment position, (M + 1)(P - 1) + 1 samples
    std::vector<Vector> minus;
    double continuity_error = 0.0;  ///< largest mismatch at a piece junction
};

WaveTable waves_from_solution(const Parametrization& par, const Solution& sol);

/// Control functions on the time layers [l lambda, (l + 1) lambda]. Each
/// layer holds its own samples, so both one-sided limits at a mesh instant
/// are kept.
struct ControlSet {
    MeshConfig mesh;
    Index samples = 0;
    double step = 0.0;
    std::vector<Matrix> jumps;        ///< (N + 1) x P, rows over J_x
    std::vector<Matrix> integrals;    ///< (N + 2) x P, rows over J_c
    std::vector<Matrix> forces;       ///< (N + 2) x P, f_k = u_k'
    std::vector<Matrix> force_jumps;  ///< (N + 1) x P, f_{n+1} - f_{n-1}

    double time(int layer, Index i) const { return layer * mesh.lambda + double(i) * step; }
    /// Position of k in J_c.
    int control_position(int k) const { return (k + mesh.N + 1) / 2; }
};

/// Controls from jumps given per layer as (N + 1) x P matrices.
ControlSet controls_from_jumps(const MeshConfig& mesh, const std::vector<Matrix>& jumps);

/// Jump entries of a wave table rearranged by layer.
std::vector<Matrix> jumps_from_table(const WaveTable& waves);

/// f_k for a time t; at a mesh instant the mean of the two one-sided limits.
double force_at(const ControlSet& controls, int k, double t);

FieldGrid fields(const WaveTable& waves, const ControlSet& controls, const MeshConfig& mesh);

/// Integral of q = g^2 / (4 rho) + h^2 / (4 kappa) with g = rho v_t - r_x and
/// h = kappa v_x - r_t + f, differenced over grid cells from v and r.
double residual_Q(const FieldGrid& fg, const RodParams& params = {});

/// The common terminal constant c_k + u_k(T) and its spread over segments.
struct TerminalConstant {
    double c1 = 0.0;
    double spread = 0.0;
};

TerminalConstant terminal_constant(const Solution& sol, const ControlSet& controls);

struct TerminalErrors {
    double v0_sup = 0.0, v0_l2 = 0.0;
    double r0_sup = 0.0, r0_l2 = 0.0;
    double v1_sup = 0.0, v1_l2 = 0.0;
    double r1_sup = 0.0, r1_l2 = 0.0;  ///< after removing c1
};

TerminalErrors terminal_error(const FieldGrid& fg, const StateSpec& state, double c1);

/// Largest |[v]| and |[r]| across interior interfaces.
double interface_jump(const FieldGrid& fg);

/// Sup over the boundary of |s(t, +/-1) - f_(+/-)(t)|.
double boundary_force_error(const FieldGrid& fg, const ControlSet& controls);

/// One-sided derivative estimates of the control integrals near every
/// sample: the jump between left and right estimates at mesh instants and
/// the largest disagreement inside layers.
struct DiscontinuityReport {
    std::vector<double> instants;   ///< interior mesh instants
    std::vector<double> jump;       ///< max over k of |f_k(t+) - f_k(t-)| at each instant
    double interior_max = 0.0;      ///< max over k and interior samples
};

DiscontinuityReport force_discontinuities(const ControlSet& controls, int accuracy = 6);

// CSV output and input.
void write_controls_csv(const std::string& path, const ControlSet& controls);
void write_fields_csv(const std::string& path, const FieldGrid& fg, Index stride = 1);
FieldGrid read_fields_csv(const std::string& path, const MeshConfig& mesh, Index samples);

}  // namespace rodctl

#endif
