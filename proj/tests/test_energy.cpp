#include "rodctl/energy.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace rodctl;

namespace {

const auto zero = [](double) { return 0.0; };

StateSpec cos3_state(int N, Index P) {
    return make_state(N, P, [](double x) { return std::cos(3 * x); }, [](double x) { return -std::cos(3 * x); },
                      zero, zero);
}

FieldGrid grid_from(const MeshConfig& mesh, Index P, double (*v)(double, double), double (*vt)(double, double),
                    double (*vx)(double, double)) {
    FieldGrid fg;
    fg.mesh = mesh;
    fg.samples = P;
    fg.step = mesh.lambda / double(P - 1);
    for (int l = 0; l < mesh.M; ++l)
        for (int k : mesh.J_s) {
            FieldBlock b;
            b.layer = l;
            b.segment = k;
            b.v.resize(P, P);
            b.vt.resize(P, P);
            b.vx.resize(P, P);
            for (Index i = 0; i < P; ++i)
                for (Index j = 0; j < P; ++j) {
                    const double t = fg.time(l, i), x = fg.abscissa(k, j);
                    b.v(i, j) = v(t, x);
                    b.vt(i, j) = vt(t, x);
                    b.vx(i, j) = vx(t, x);
                }
            fg.blocks.push_back(std::move(b));
        }
    return fg;
}

}  // namespace

TEST_CASE("weights") {
    const MeshConfig m = build_mesh(4, 4);
    const Index P = 33;
    const EnergyWeights w = build_weights(m, P);
    const UnknownCatalog cat(m);
    for (int k : m.J_s)
        for (Side s : {Side::Plus, Side::Minus}) {
            CHECK(w.nodal(cat.wave(k, 0, s), 0) == doctest::Approx(0.0));
            for (Index i = 0; i < P; ++i) CHECK(w.nodal(cat.wave(k, 2, s), i) == doctest::Approx(m.lambda));
        }
    for (Index j = cat.wave_count(); j < cat.size(); ++j) CHECK(w.nodal.row(j).cwiseAbs().maxCoeff() == 0.0);
    const double h = m.lambda / double(P - 1);
    CHECK(w.midpoint.sum() * h == doctest::Approx(4.0 * m.T).epsilon(1e-12));
    CHECK_THROWS_AS(build_weights(m, 32), InvalidArgument);
}

TEST_CASE("mean energy of simple fields") {
    const MeshConfig m = build_mesh(4, 4);
    const FieldGrid none = grid_from(
        m, 33, [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
        [](double, double) { return 0.0; });
    CHECK(mean_energy(none) == 0.0);
    const FieldGrid rigid = grid_from(
        m, 33, [](double, double) { return 3.0; }, [](double, double) { return 0.0; },
        [](double, double) { return 0.0; });
    CHECK(mean_energy(rigid) == 0.0);
    // v = cos(pi t) cos(pi x): the x integral of v_t^2 + v_x^2 is pi^2 at every t.
    const FieldGrid standing = grid_from(
        m, 129, [](double t, double x) { return std::cos(M_PI * t) * std::cos(M_PI * x); },
        [](double t, double x) { return -M_PI * std::sin(M_PI * t) * std::cos(M_PI * x); },
        [](double t, double x) { return -M_PI * std::cos(M_PI * t) * std::sin(M_PI * x); });
    CHECK(std::abs(mean_energy(standing) - M_PI * M_PI / 2) < 1e-6);
}

TEST_CASE("simpson over a block") {
    Matrix ones = Matrix::Ones(9, 9);
    CHECK(simpson_2d(ones, 0.125) == doctest::Approx(1.0));
    Matrix xy(9, 9);
    for (Index i = 0; i < 9; ++i)
        for (Index j = 0; j < 9; ++j) xy(i, j) = std::pow(i * 0.125, 2) * std::pow(j * 0.125, 3);
    CHECK(simpson_2d(xy, 0.125) == doctest::Approx(1.0 / 12));
}

TEST_CASE("quadratic program matches the direct objective") {
    const MeshConfig m = build_mesh(3, 2);
    const Index P = 17;
    const Parametrization par = eliminate(assemble_edge_constraints(m, cos3_state(3, P)), m);
    const EssentialBC bc = boundary_matrices(par, all_vertex_conditions(m));
    const EnergyWeights w = build_weights(m, P);
    const QuadraticProgram qp = assemble_qp(par, bc, w);
    CHECK(qp.size() == P * par.free_count() + 3);

    const Matrix H = Matrix(qp.H);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10 * eig.eigenvalues().maxCoeff());

    std::mt19937 rng(3);
    std::normal_distribution<double> normal;
    for (int draw = 0; draw < 5; ++draw) {
        const Matrix Y = Matrix::NullaryExpr(P, par.free_count(), [&] { return normal(rng); });
        const Vector c = Vector::NullaryExpr(3, [&] { return normal(rng); });
        const Vector x = pack(Y, c);
        CHECK(qp.objective(x) == doctest::Approx(weighted_objective(par, w, Y, c)).epsilon(1e-10));
        Matrix Y2;
        Vector c2;
        unpack(x, par.free_count(), P, Y2, c2);
        CHECK(Y2 == Y);
        CHECK(c2 == c);
    }
}
