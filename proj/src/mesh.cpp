#include "rodctl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rodctl {

void RodParams::validate() const {
    if (!(rho > 0.0)) throw InvalidArgument("rod: rho must be positive");
    if (!(kappa > 0.0)) throw InvalidArgument("rod: kappa must be positive");
    if (!(L > 0.0)) throw InvalidArgument("rod: L must be positive");
}

double RodParams::time_scale() const { return L * std::sqrt(rho / kappa); }

std::pair<double, double> nondimensionalize(const RodParams& params, double t_phys, double x_phys) {
    params.validate();
    return {t_phys / params.time_scale(), x_phys / params.L};
}

MeshConfig build_mesh(int N, int M) {
    if (N < 1) throw InvalidArgument("mesh: N must be >= 1, got " + std::to_string(N));
    if (M < 1) throw InvalidArgument("mesh: M must be >= 1, got " + std::to_string(M));
    MeshConfig mesh;
    mesh.N = N;
    mesh.M = M;
    mesh.lambda = 2.0 / N;
    mesh.T = M * mesh.lambda;
    for (int k = 1 - N; k <= N - 1; k += 2) mesh.J_s.push_back(k);
    for (int n = -N; n <= N; n += 2) mesh.J_x.push_back(n);
    mesh.J_c.push_back(-N - 1);
    mesh.J_c.insert(mesh.J_c.end(), mesh.J_s.begin(), mesh.J_s.end());
    mesh.J_c.push_back(N + 1);
    for (int l = 1; l <= 2 * M - 1; l += 2) mesh.J_d.push_back(l);
    for (int m = 0; m <= 2 * M; m += 2) mesh.J_t.push_back(m);
    return mesh;
}

SystemCounts counts(int N, int M) {
    build_mesh(N, M);
    SystemCounts c;
    const long n = N, m = M;
    c.N_e = 2 * m * n + 4 * n;
    c.N_w = 2 * (m + 1) * n;
    c.N_u = m * (n + 1);
    c.N_v = c.N_w + c.N_u;
    c.N_s = c.N_v - c.N_e;
    c.N_b = (N % 2 == 1) ? m * n + m - n + 1 : m * n + m - n;
    return c;
}

std::pair<double, double> delta_z_domain(const MeshConfig& mesh, int k, Side side) {
    return {mesh.z_shift(k, side), mesh.T - mesh.z_shift(k, other(side))};
}

double delta_z_weight(const MeshConfig& mesh, int k, Side side, double zeta) {
    const auto [lo, hi] = delta_z_domain(mesh, k, side);
    const double slack = 1e-12 * (1.0 + std::abs(hi - lo));
    if (zeta < lo - slack || zeta > hi + slack)
        throw DomainError("delta_z_weight: zeta outside the characteristic domain of segment " +
                          std::to_string(k));
    const double s = std::clamp(zeta - lo, 0.0, hi - lo);
    return std::max(0.0, std::min({s, mesh.lambda, (hi - lo) - s}));
}

}  // namespace rodctl
