#include "rodctl/energy.hpp"
#include "rodctl/optimizer.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <random>

using namespace rodctl;

namespace {

const auto zero = [](double) { return 0.0; };

struct Setup {
    MeshConfig mesh;
    Parametrization par;
    EssentialBC bc;
    EnergyWeights w;
};

Setup setup(int N, int M, const StateSpec& st) {
    Setup s;
    s.mesh = build_mesh(N, M);
    s.par = eliminate(assemble_edge_constraints(s.mesh, st), s.mesh);
    s.bc = boundary_matrices(s.par, all_vertex_conditions(s.mesh));
    s.w = build_weights(s.mesh, s.par.samples);
    return s;
}

StateSpec scaled_cos3(int N, Index P, double a) {
    return make_state(N, P, [a](double x) { return a * std::cos(3 * x); },
                      [a](double x) { return -a * std::cos(3 * x); }, zero, zero);
}

StateSpec other_state(int N, Index P) {
    return make_state(N, P, [](double x) { return std::sin(x); }, [](double x) { return 0.5 * x * x; },
                      [](double x) { return 0.2 * x; }, zero);
}

Solution qp_solve(const Setup& s) { return solve_qp(assemble_qp(s.par, s.bc, s.w), s.par, s.bc, s.w); }

}  // namespace

TEST_CASE("zero data") {
    const Setup s = setup(4, 4, make_state(4, 33, zero, zero, zero, zero));
    const Solution qp = qp_solve(s);
    const Solution el = solve_euler_lagrange(s.par, s.bc, s.w);
    for (const Solution* sol : {&qp, &el}) {
        CHECK(sol->Y.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(sol->c.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(sol->objective) < 1e-12);
    }
    CHECK(el.alpha.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(el.beta.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(el.p.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("both solvers on the cos 3x example") {
    const Setup s = setup(4, 4, scaled_cos3(4, 65, 1.0));
    const Solution qp = qp_solve(s);
    const Solution el = solve_euler_lagrange(s.par, s.bc, s.w);
    CHECK(qp.objective > 0.0);
    CHECK(qp.bc_residual < 1e-9);
    CHECK(el.bc_residual < 1e-9);
    const SolverComparison cmp = compare_solvers(qp, el);
    CHECK(cmp.qp_not_worse);
    CHECK(cmp.conjugate_variation_el < 1e-8);
    MESSAGE("objective gap " << cmp.gap);
}

TEST_CASE("objective scales quadratically and the minimizer linearly") {
    const Setup a = setup(3, 3, scaled_cos3(3, 33, 1.0));
    const Setup b = setup(3, 3, scaled_cos3(3, 33, 2.0));
    const Solution sa = qp_solve(a), sb = qp_solve(b);
    CHECK(sb.objective == doctest::Approx(4.0 * sa.objective).epsilon(1e-10));
    CHECK((sb.Y - 2.0 * sa.Y).cwiseAbs().maxCoeff() < 1e-9);

    const Setup o = setup(3, 3, other_state(3, 33));
    StateSpec both = scaled_cos3(3, 33, 1.0);
    const StateSpec extra = other_state(3, 33);
    both.v0.values() += extra.v0.values();
    both.r0.values() += extra.r0.values();
    both.v1.values() += extra.v1.values();
    both.r1.values() += extra.r1.values();
    const Setup ab = setup(3, 3, both);
    const Solution so = qp_solve(o), sab = qp_solve(ab);
    CHECK((sab.Y - sa.Y - so.Y).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("the minimizer beats feasible perturbations") {
    const Setup s = setup(2, 2, scaled_cos3(2, 17, 1.0));
    const QuadraticProgram qp = assemble_qp(s.par, s.bc, s.w);
    const Solution sol = qp_solve(s);
    const Vector x = pack(sol.Y, sol.c);
    CHECK((Matrix(qp.G) * x - qp.b).cwiseAbs().maxCoeff() < 1e-9);
    const Eigen::FullPivLU<Matrix> lu(Matrix(qp.G));
    const Matrix kernel = lu.kernel();
    REQUIRE(kernel.cols() > 0);
    std::mt19937 rng(11);
    std::normal_distribution<double> normal;
    for (int draw = 0; draw < 10; ++draw) {
        const Vector d = kernel * Vector::NullaryExpr(kernel.cols(), [&] { return normal(rng); });
        CHECK(qp.objective(x + 1e-2 * d) >= qp.objective(x) - 1e-12);
    }
}

TEST_CASE("conjugate vector of an affine path") {
    Matrix p(5, 2);
    p << 1, 2, 1, 2, 1, 2, 1, 2, 1, 2;
    CHECK(conjugate_variation(p) == 0.0);
    p(3, 1) = 2.5;
    CHECK(conjugate_variation(p) > 0.1);
}
