#ifndef RODCTL_ENERGY_HPP
#define RODCTL_ENERGY_HPP

#include "rodctl/core.hpp"
#include "rodctl/edge_system.hpp"
#include "rodctl/fields.hpp"
#include "rodctl/mesh.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace rodctl {

/// Weight of every catalog entry on the piece grid [0, lambda]: the
/// cross-characteristic half-width of the entry's segment at the entry's
/// characteristic position. Jump entries weigh nothing.
struct EnergyWeights {
    MeshConfig mesh;
    Index samples = 0;
    Matrix nodal;     ///< N_v x P
    Matrix midpoint;  ///< N_v x (P - 1), cell averages of the nodal weights
};

EnergyWeights build_weights(const MeshConfig& mesh, Index samples = kDefaultSamples);

/// Discretized mean energy over x = [vec(Y); c], Y stored node by node
/// (x(i * N_s + f) = y_f(z_i)):
///
///   E(x) = 0.5 x' H x + q' x + constant,
///
/// with cell differences of the entries and the midpoint rule, subject to
/// G x = b from the essential boundary conditions.
struct QuadraticProgram {
    Index free_count = 0;
    Index constant_count = 0;
    Index samples = 0;
    double step = 0.0;
    double horizon = 0.0;
    Eigen::SparseMatrix<double> H;
    Vector q;
    double constant = 0.0;
    Eigen::SparseMatrix<double> G;
    Vector b;

    Index size() const { return free_count * samples + constant_count; }
    double objective(const Vector& x) const { return 0.5 * x.dot(H * x) + q.dot(x) + constant; }
};

QuadraticProgram assemble_qp(const Parametrization& par, const EssentialBC& bc, const EnergyWeights& weights);

/// Pack/unpack between (Y, c) and the QP vector.
Vector pack(const Matrix& Y, const Vector& c);
void unpack(const Vector& x, Index free_count, Index samples, Matrix& Y, Vector& c);

/// (1/T) sum_entries sum_cells weight * (entry difference)^2 / h, evaluated
/// directly from the entries.
double weighted_objective(const Parametrization& par, const EnergyWeights& weights, const Matrix& Y,
                          const Vector& c);

/// (1/T) * integral of (v_t^2 + v_x^2) / 2 over the domain, split along the
/// characteristic diagonals of every block.
double mean_energy(const FieldGrid& fields);

}  // namespace rodctl

#endif
