#include "rodctl/optimizer.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <cmath>
#include <vector>

namespace rodctl {

const char* to_string(Method m) { return m == Method::QP ? "qp" : "euler_lagrange"; }

namespace {

double bc_residual(const EssentialBC& bc, const Matrix& Y, const Vector& c) {
    if (bc.B0.rows() == 0) return 0.0;
    return bc.residual(Y.row(0).transpose(), Y.row(Y.rows() - 1).transpose(), c).cwiseAbs().maxCoeff();
}

}  // namespace

Matrix conjugate(const Parametrization& par, const Matrix& Y) {
    const Index nw = par.catalog.wave_count();
    const Matrix Aw = par.A.topRows(nw);
    const Matrix K = Aw.transpose() * Aw;
    const Matrix dY = derivative_columns(Y, par.step());
    const Matrix dG = derivative_columns(par.g.topRows(nw).transpose(), par.step());
    return dY * K.transpose() + dG * Aw;
}

double conjugate_variation(const Matrix& p) {
    double worst = 0.0;
    const double ref = p.row(0).cwiseAbs().maxCoeff();
    for (Index i = 1; i < p.rows(); ++i) worst = std::max(worst, (p.row(i) - p.row(0)).cwiseAbs().maxCoeff());
    return worst / (1.0 + ref);
}

Solution solve_qp(const QuadraticProgram& qp, const Parametrization& par, const EssentialBC& bc,
                  const EnergyWeights& weights) {
    const Index n = qp.size();
    const Index m = qp.G.rows();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(qp.H.nonZeros() + 2 * qp.G.nonZeros()));
    for (Index k = 0; k < qp.H.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(qp.H, k); it; ++it)
            trips.emplace_back(it.row(), it.col(), it.value());
    for (Index k = 0; k < qp.G.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(qp.G, k); it; ++it) {
            trips.emplace_back(n + it.row(), it.col(), it.value());
            trips.emplace_back(it.col(), n + it.row(), it.value());
        }
    Eigen::SparseMatrix<double> kkt(n + m, n + m);
    kkt.setFromTriplets(trips.begin(), trips.end());
    kkt.makeCompressed();

    Vector rhs(n + m);
    rhs.head(n) = -qp.q;
    rhs.tail(m) = qp.b;

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(kkt);
    lu.factorize(kkt);
    if (lu.info() != Eigen::Success)
        throw SolverError("KKT factorization failed (" + lu.lastErrorMessage() + "); " + std::to_string(n) +
                          " primal and " + std::to_string(m) + " constraint rows");
    const Vector sol = lu.solve(rhs);
    const double residual = (kkt * sol - rhs).cwiseAbs().maxCoeff() / (1.0 + rhs.cwiseAbs().maxCoeff());
    if (!std::isfinite(residual) || residual > 1e-8)
        throw SolverError("KKT solve residual " + std::to_string(residual) +
                          " exceeds 1e-8; the system is numerically singular");

    Solution s;
    s.method = Method::QP;
    unpack(sol.head(n), qp.free_count, qp.samples, s.Y, s.c);
    s.h = -sol.tail(m);
    s.system_residual = residual;
    s.bc_residual = bc_residual(bc, s.Y, s.c);
    s.p = conjugate(par, s.Y);
    s.objective = weighted_objective(par, weights, s.Y, s.c);
    return s;
}

Solution solve_euler_lagrange(const Parametrization& par, const EssentialBC& bc, const EnergyWeights& weights) {
    const Index ns = par.free_count();
    const Index nc = par.Cg.cols();
    const Index nb = bc.B0.rows();
    const Index P = par.samples;
    const Index nw = par.catalog.wave_count();
    const double lambda = par.mesh.lambda;

    Solution s;
    s.method = Method::EulerLagrange;

    const Matrix Aw = par.A.topRows(nw);
    const Matrix K = Aw.transpose() * Aw;
    Eigen::JacobiSVD<Matrix> svd(K, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector sigma = svd.singularValues();
    const double cutoff = 1e-12 * (sigma.size() > 0 ? sigma(0) : 0.0);
    Vector inv_sigma = Vector::Zero(sigma.size());
    for (Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff)
            inv_sigma(i) = 1.0 / sigma(i);
        else
            s.pseudo_inverse = true;
    }
    const Matrix Kplus = svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();

    // Particular solution of K y'' = -A' g'': y_p(z) = -K^+ A' g(z).
    const Matrix Yp = -(Kplus * Aw.transpose() * par.g.topRows(nw)).transpose();

    Matrix proj = Matrix::Zero(nb, nb);
    if (nb > 0 && nc > 0) {
        Eigen::JacobiSVD<Matrix> bsvd(bc.Bc, Eigen::ComputeFullU);
        const Vector bs = bsvd.singularValues();
        const double bcut = 1e-12 * (bs.size() > 0 ? bs(0) : 0.0);
        for (Index i = 0; i < bs.size(); ++i)
            if (bs(i) > bcut) proj += bsvd.matrixU().col(i) * bsvd.matrixU().col(i).transpose();
    }
    const Matrix I = Matrix::Identity(nb, nb);
    const Matrix C0 = (I - proj) * bc.B0;
    const Matrix C1 = (I - proj) * bc.B1;

    const Index unknowns = 2 * ns + nc + nb;
    Matrix sys = Matrix::Zero(nb + 2 * ns, unknowns);
    Vector rhs = Vector::Zero(nb + 2 * ns);
    sys.block(0, 0, nb, ns) = bc.B1 - bc.B0;
    sys.block(0, ns, nb, ns) = lambda * bc.B1;
    sys.block(0, 2 * ns, nb, nc) = -bc.Bc;
    if (nb > 0)
        rhs.head(nb) = bc.b0 - bc.B1 * Yp.row(P - 1).transpose() + bc.B0 * Yp.row(0).transpose();
    sys.block(nb, ns, ns, ns) = K;
    sys.block(nb, 2 * ns + nc, ns, nb) = -C0.transpose();
    sys.block(nb + ns, ns, ns, ns) = K;
    sys.block(nb + ns, 2 * ns + nc, ns, nb) = -C1.transpose();

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys);
    cod.setThreshold(1e-13);
    const Vector x = cod.solve(rhs);
    s.system_residual = (sys * x - rhs).cwiseAbs().maxCoeff();

    s.alpha = x.segment(0, ns);
    s.beta = x.segment(ns, ns);
    s.c = x.segment(2 * ns, nc);
    s.h = x.segment(2 * ns + nc, nb);
    s.Y = Yp;
    const double h = par.step();
    for (Index i = 0; i < P; ++i) s.Y.row(i) += (s.alpha + (double(i) * h) * s.beta).transpose();
    s.bc_residual = bc_residual(bc, s.Y, s.c);
    s.p = conjugate(par, s.Y);
    s.objective = weighted_objective(par, weights, s.Y, s.c);
    return s;
}

SolverComparison compare_solvers(const Solution& qp, const Solution& el) {
    SolverComparison cmp;
    cmp.objective_qp = qp.objective;
    cmp.objective_el = el.objective;
    cmp.gap = el.objective - qp.objective;
    cmp.bc_residual_qp = qp.bc_residual;
    cmp.bc_residual_el = el.bc_residual;
    if (qp.Y.rows() == el.Y.rows() && qp.Y.cols() == el.Y.cols() && qp.Y.size() > 0)
        cmp.y_difference = (qp.Y - el.Y).cwiseAbs().maxCoeff();
    cmp.conjugate_variation_el = el.p.size() > 0 ? conjugate_variation(el.p) : 0.0;
    cmp.qp_not_worse = qp.objective <= el.objective + 1e-8;
    return cmp;
}

}  // namespace rodctl
