#ifndef RODCTL_FD_ORACLE_HPP
#define RODCTL_FD_ORACLE_HPP

#include "rodctl/core.hpp"
#include "rodctl/edge_system.hpp"
#include "rodctl/fields.hpp"
#include "rodctl/mesh.hpp"
#include "rodctl/reconstruct.hpp"

#include <string>
#include <vector>

namespace rodctl {

struct SimConfig {
    int points_per_segment = 500;
    double cfl = 1.0;

    void validate() const;
};

/// Terminal state of the staggered leapfrog run: v at nodes and t = T,
/// momentum density p at nodes synchronized to t = T.
struct SimResult {
    double dx = 0.0;
    double dt = 0.0;
    Index steps = 0;
    Vector x;
    Vector v;
    Vector p;
    Vector v0, p0;                ///< initial nodal state
    std::vector<double> energy;   ///< conserved discrete energy at each step
    double momentum_defect = 0.0; ///< worst per-step relative imbalance of the momentum budget
};

/// v at nodes, p at nodes on half steps, strain-stress s at cell midpoints
/// with the segment force added cell-wise, s = f at the end faces.
SimResult simulate(const MeshConfig& mesh, const RodParams& params, const ControlSet& controls,
                   const StateSpec& state, const SimConfig& cfg);

/// Free rod with zero controls.
SimResult simulate_free(const MeshConfig& mesh, const RodParams& params, const StateSpec& state,
                        const SimConfig& cfg);

struct OracleComparison {
    double v_sup = 0.0;  ///< |v_sim(T) - v_ref(T)| over nodes
    double v_l2 = 0.0;
};

/// Differences of v at t = T against the reconstructed field grid.
OracleComparison compare(const SimResult& sim, const FieldGrid& fg);

/// Energy-norm distance of (v, p) at T from the target (v1, r1'), relative
/// to the energy norm of the initial state.
double energy_norm_error(const SimResult& sim, const StateSpec& state, const MeshConfig& mesh,
                         const RodParams& params = {});

struct RefinementStudy {
    std::vector<int> points;
    std::vector<double> errors;         ///< L2 difference of v(T) from the reconstruction
    std::vector<double> energy_errors;  ///< relative energy-norm distance from the target
    std::vector<double> orders;         ///< of `errors`, per successive pair
    std::vector<double> energy_orders;
    double min_order = 0.0;
    double finest_error = 0.0;
    double finest_energy_error = 0.0;
};

/// Runs `levels` resolutions ending at cfg.points_per_segment, halving the
/// spacing each time.
RefinementStudy refinement_study(const MeshConfig& mesh, const RodParams& params, const ControlSet& controls,
                                 const StateSpec& state, const FieldGrid& fg, const SimConfig& cfg,
                                 int levels = 3);

void write_terminal_csv(const std::string& path, const SimResult& sim);
void write_energy_csv(const std::string& path, const SimResult& sim);

}  // namespace rodctl

#endif
