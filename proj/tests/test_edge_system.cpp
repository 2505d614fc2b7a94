#include "rodctl/edge_system.hpp"
#include "rodctl/exact.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace rodctl;

namespace {

StateSpec cos3_state(int N, Index P = 33) {
    return make_state(N, P, [](double x) { return std::cos(3 * x); }, [](double x) { return -std::cos(3 * x); },
                      [](double) { return 0.0; }, [](double) { return 0.0; });
}

StateSpec zero_state(int N, Index P = 33) {
    const auto z = [](double) { return 0.0; };
    return make_state(N, P, z, z, z, z);
}

RationalMatrix to_rational(const Eigen::MatrixXi& m) {
    RationalMatrix out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace

TEST_CASE("row blocks") {
    const EdgeSystem s = assemble_edge_structure(build_mesh(4, 4));
    CHECK(s.rows.size() == 48);
    CHECK(s.block_count(EdgeRow::Block::Initial) == 8);
    CHECK(s.block_count(EdgeRow::Block::Terminal) == 8);
    CHECK(s.block_count(EdgeRow::Block::Boundary) == 8);
    CHECK(s.block_count(EdgeRow::Block::Interelement) == 24);
    const EdgeSystem one = assemble_edge_structure(build_mesh(1, 2));
    CHECK(one.block_count(EdgeRow::Block::Interelement) == 0);
    CHECK(one.rows.size() == 4 + 4);
}

TEST_CASE("coefficients are unit and sparse") {
    for (int N = 1; N <= 6; ++N)
        for (int M = 1; M <= 4; ++M) {
            const EdgeSystem s = assemble_edge_structure(build_mesh(N, M));
            REQUIRE(s.C.rows() == counts(N, M).N_e);
            REQUIRE(s.C.cols() == counts(N, M).N_v);
            for (Index i = 0; i < s.C.rows(); ++i) {
                const int nnz = static_cast<int>((s.C.row(i).array() != 0).count());
                REQUIRE(s.C.row(i).cwiseAbs().maxCoeff() == 1);
                REQUIRE(nnz <= (s.rows[i].block == EdgeRow::Block::Interelement ? 5 : 4));
            }
        }
}

TEST_CASE("catalog is a bijection") {
    const MeshConfig m = build_mesh(3, 3);
    const UnknownCatalog cat(m);
    CHECK(cat.size() == counts(3, 3).N_v);
    std::vector<int> seen(cat.size(), 0);
    for (int k : m.J_s)
        for (int mm : m.J_t)
            for (Side s : {Side::Plus, Side::Minus}) ++seen[cat.wave(k, mm, s)];
    for (int n : m.J_x)
        for (int mm = 0; mm < 2 * m.M; mm += 2) ++seen[cat.jump(n, mm)];
    for (int v : seen) CHECK(v == 1);
    CHECK(cat.label(cat.wave(-2, 0, Side::Plus)) == "w+(-2,0)");
}

TEST_CASE("initial rows hold for the half-sum and half-difference waves") {
    const int N = 4, M = 3;
    const MeshConfig m = build_mesh(N, M);
    const auto v0 = [](double x) { return std::sin(2 * x) + 0.3; };
    const auto r0 = [](double x) { return std::cos(x); };
    const auto zero = [](double) { return 0.0; };
    const EdgeSystem s = assemble_edge_constraints(m, make_state(N, 33, v0, r0, zero, zero));
    const Index P = s.samples;
    Matrix entries = Matrix::Zero(s.catalog.size(), P);
    for (int k : m.J_s)
        for (Index i = 0; i < P; ++i) {
            const double z = m.lambda * double(i) / double(P - 1);
            const double xp = m.z_plus(k) + z;
            const double xm = m.z_plus(k) + m.lambda - z;
            entries(s.catalog.wave(k, 0, Side::Plus), i) = 0.5 * (v0(xp) + r0(xp));
            entries(s.catalog.wave(k, 0, Side::Minus), i) = 0.5 * (v0(xm) - r0(xm));
        }
    const Matrix Cd = s.C.cast<double>();
    int checked = 0;
    for (Index r = 0; r < s.C.rows(); ++r) {
        if (s.rows[r].block != EdgeRow::Block::Initial) continue;
        CHECK(((Cd.row(r) * entries) - s.rhs.row(r)).cwiseAbs().maxCoeff() < 1e-12);
        ++checked;
    }
    CHECK(checked == 2 * N);
}

TEST_CASE("parametrization is exact") {
    for (auto [N, M] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{4, 4}, std::pair{5, 3}}) {
        const MeshConfig m = build_mesh(N, M);
        const EdgeSystem s = assemble_edge_constraints(m, cos3_state(N));
        const Parametrization par = eliminate(s, m);
        CHECK(par.free_count() == counts(N, M).N_s);
        const RationalMatrix C = to_rational(s.C);
        const RationalMatrix CA = C * par.A_exact;
        for (Index i = 0; i < CA.rows(); ++i)
            for (Index j = 0; j < CA.cols(); ++j) REQUIRE(CA(i, j) == 0);
        const RationalMatrix CG = C * par.gauge_exact;
        for (Index i = 0; i < CG.rows(); ++i)
            for (Index j = 0; j < CG.cols(); ++j) REQUIRE(CG(i, j) == s.gauge(i, j));
    }
}

TEST_CASE("random free functions satisfy every edge row") {
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    for (auto [N, M] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{4, 4}, std::pair{5, 3}}) {
        const MeshConfig m = build_mesh(N, M);
        const EdgeSystem s = assemble_edge_constraints(m, cos3_state(N));
        const Parametrization par = eliminate(s, m);
        for (int draw = 0; draw < 20; ++draw) {
            const Matrix Y = Matrix::NullaryExpr(par.samples, par.free_count(), [&] { return normal(rng); });
            const Vector c = Vector::NullaryExpr(N, [&] { return normal(rng); });
            REQUIRE(edge_residual(s, par.entries(Y, c), c) <= 1e-10);
        }
    }
}

TEST_CASE("zero data gives zero entries") {
    const MeshConfig m = build_mesh(4, 4);
    const EdgeSystem s = assemble_edge_constraints(m, zero_state(4));
    const Parametrization par = eliminate(s, m);
    const Matrix w = par.entries(Matrix::Zero(par.samples, par.free_count()), Vector::Zero(4));
    CHECK(w.cwiseAbs().maxCoeff() == 0.0);
    const EssentialBC bc = boundary_matrices(par, all_vertex_conditions(m));
    CHECK(bc.b0.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("vertex conditions") {
    CHECK(assemble_vertex_conditions(build_mesh(4, 4)).size() == 16);
    CHECK(assemble_vertex_conditions(build_mesh(3, 2)).size() == 6);
    CHECK(assemble_vertex_conditions(build_mesh(5, 3)).size() == 14);
    const MeshConfig m = build_mesh(4, 4);
    const Parametrization par = eliminate(assemble_edge_constraints(m, cos3_state(4)), m);
    const EssentialBC counted = boundary_matrices(par, assemble_vertex_conditions(m));
    CHECK(counted.rank <= 16);
    const EssentialBC full = boundary_matrices(par, all_vertex_conditions(m));
    CHECK(full.rank >= counted.rank);
    CHECK(full.dropped_inconsistency < 1e-12);
    CHECK(full.B0.rows() == full.rank);
}

TEST_CASE("feasibility") {
    CHECK_FALSE(feasibility_check(4, 1).feasible());
    CHECK(feasibility_check(4, 4).feasible());
    CHECK(feasibility_check(2, 2).feasible());
    const MeshConfig m = build_mesh(4, 1);
    CHECK_THROWS_AS(eliminate(assemble_edge_constraints(m, cos3_state(4)), m), InfeasibleError);
}

TEST_CASE("incompatible grids are rejected") {
    const StateSpec st = cos3_state(3);
    CHECK_THROWS_AS(assemble_edge_constraints(build_mesh(5, 2), st), ConfigurationError);
}

TEST_CASE("exact row reduction") {
    RationalMatrix m(3, 3);
    m << 2, 4, 6, 1, 3, 5, 3, 7, 11;
    CHECK(exact_rank(m) == 2);
    const RowBasis basis = row_basis(m);
    CHECK(basis.kept == std::vector<Index>{0, 1});
    CHECK(basis.dropped == std::vector<Index>{2});
    RationalMatrix kept(2, 3);
    kept << m.row(0), m.row(1);
    const RationalMatrix back = basis.combination * kept;
    CHECK(back == m);
    RationalMatrix r = m;
    const RrefResult res = rref_inplace(r, {2, 1, 0});
    CHECK(res.rank == 2);
    CHECK(res.pivot_columns == std::vector<Index>{2, 1});
    CHECK(r(0, 2) == 1);
    CHECK(r(1, 1) == 1);
    CHECK(r(0, 1) == 0);
    CHECK(r(2, 0) == 0);
}

TEST_CASE("matrix dumps keep exact rationals") {
    RationalMatrix m(1, 2);
    m << Rational(1, 3), Rational(-5, 7);
    const std::string path = "edge_system_dump_test.csv";
    write_matrix_csv(path, m);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "1/3,-5/7");
    std::remove(path.c_str());
}
