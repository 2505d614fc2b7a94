#ifndef RODCTL_OPTIMIZER_HPP
#define RODCTL_OPTIMIZER_HPP

#include "rodctl/core.hpp"
#include "rodctl/edge_system.hpp"
#include "rodctl/energy.hpp"

#include <string>

namespace rodctl {

enum class Method { QP, EulerLagrange };

const char* to_string(Method m);

struct Solution {
    Method method = Method::QP;
    Matrix Y;  ///< P x N_s free functions on the piece grid
    Vector c;  ///< terminal constants, one per segment
    Vector h;  ///< boundary multipliers, one per independent vertex row
    Matrix p;  ///< P x N_s conjugate vector K y' + A' g'
    double objective = 0.0;      ///< weighted mean energy
    double bc_residual = 0.0;    ///< max norm of the essential-condition residual
    double system_residual = 0.0;
    bool pseudo_inverse = false;  ///< the E-L path hit a singular K
    Vector alpha, beta;           ///< E-L path: y = y_p + alpha + beta z
};

/// KKT system of the QP, factored with a sparse LU.
Solution solve_qp(const QuadraticProgram& qp, const Parametrization& par, const EssentialBC& bc,
                  const EnergyWeights& weights);

/// Closed-form path: y(z) = -K^+ A' g(z) + alpha + beta z with K = A'A over
/// the wave rows, natural conditions K beta = C_i' h, C_i = (I - Pi) B_i
/// and Pi the projector onto the range of Bc.
Solution solve_euler_lagrange(const Parametrization& par, const EssentialBC& bc, const EnergyWeights& weights);

/// Conjugate vector sampled with FD derivatives: K y' + A' g'.
Matrix conjugate(const Parametrization& par, const Matrix& Y);

/// max_z |p(z) - p(0)| / (1 + |p(0)|).
double conjugate_variation(const Matrix& p);

struct SolverComparison {
    double objective_qp = 0.0;
    double objective_el = 0.0;
    double gap = 0.0;  ///< objective_el - objective_qp
    double bc_residual_qp = 0.0;
    double bc_residual_el = 0.0;
    double y_difference = 0.0;  ///< max abs over samples
    double conjugate_variation_el = 0.0;
    bool qp_not_worse = true;  ///< objective_qp <= objective_el + 1e-8
};

SolverComparison compare_solvers(const Solution& qp, const Solution& el);

}  // namespace rodctl

#endif
