#ifndef RODCTL_MESH_HPP
#define RODCTL_MESH_HPP

#include "rodctl/core.hpp"

#include <utility>
#include <vector>

namespace rodctl {

/// Physical rod data: linear density, tension stiffness, half-length.
struct RodParams {
    double rho = 1.0;
    double kappa = 1.0;
    double L = 1.0;

    void validate() const;
    /// tau* = L * sqrt(rho / kappa).
    double time_scale() const;
};

/// Returns dimensionless (t, x).
std::pair<double, double> nondimensionalize(const RodParams& params, double t_phys, double x_phys);

enum class Side { Plus, Minus };

inline int sign(Side s) { return s == Side::Plus ? 1 : -1; }
inline Side other(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }
inline const char* to_string(Side s) { return s == Side::Plus ? "+" : "-"; }

/// Characteristic mesh of the dimensionless domain (0, T) x (-1, 1) for N
/// segments and horizon T = M * lambda.
///
/// Index conventions: segments k run over J_s = {1-N, 3-N, ..., N-1},
/// interfaces n over J_x = {-N, 2-N, ..., N}, control inputs over J_c (J_s
/// plus the two end loads -N-1 and N+1), layer midpoints over J_d and mesh
/// instants over J_t = {0, 2, ..., 2M}.
struct MeshConfig {
    int N = 0;
    int M = 0;
    double lambda = 0.0;
    double T = 0.0;
    std::vector<int> J_s, J_x, J_c, J_d, J_t;

    double x(int n) const { return n * lambda / 2.0; }
    double t(int m) const { return m * lambda / 2.0; }
    double z_plus(int k) const { return (k - 1) * lambda / 2.0; }
    double z_minus(int k) const { return -(k + 1) * lambda / 2.0; }
    double z_shift(int k, Side s) const { return s == Side::Plus ? z_plus(k) : z_minus(k); }

    /// Offset of piece (k, m) on the characteristic axis of the given side.
    double piece_shift(int k, int m, Side s) const { return z_shift(k, s) + m * lambda / 2.0; }

    /// Position of segment k in J_s (0-based).
    int segment_position(int k) const { return (k + N - 1) / 2; }
    int interface_position(int n) const { return (n + N) / 2; }
    int layer_count() const { return M; }
};

MeshConfig build_mesh(int N, int M);

struct SystemCounts {
    long N_e = 0;  ///< edge constraints
    long N_w = 0;  ///< wave pieces
    long N_u = 0;  ///< control-jump pieces
    long N_v = 0;  ///< all function-valued unknowns
    long N_s = 0;  ///< variable surplus (free functions)
    long N_b = 0;  ///< vertex conditions as counted for the parity of N
};

SystemCounts counts(int N, int M);

/// Half the cross-characteristic measure of segment k's subdomain at the
/// characteristic coordinate zeta of the given side. Piecewise linear:
/// ramps 0 -> lambda over the first lambda of the domain, stays at lambda,
/// ramps back to 0 over the last lambda.
double delta_z_weight(const MeshConfig& mesh, int k, Side side, double zeta);

/// Domain [z_side_k, T - z_otherside_k] of delta_z_weight.
std::pair<double, double> delta_z_domain(const MeshConfig& mesh, int k, Side side);

}  // namespace rodctl

#endif
