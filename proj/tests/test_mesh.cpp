#include "rodctl/mesh.hpp"
#include "rodctl/sampled_function.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rodctl;

TEST_CASE("mesh for N = M = 4") {
    const MeshConfig m = build_mesh(4, 4);
    CHECK(m.lambda == doctest::Approx(0.5));
    CHECK(m.T == doctest::Approx(2.0));
    CHECK(m.J_s == std::vector<int>{-3, -1, 1, 3});
    CHECK(m.x(4) == doctest::Approx(1.0));
}

TEST_CASE("smallest mesh") {
    const MeshConfig m = build_mesh(1, 1);
    CHECK(m.lambda == doctest::Approx(2.0));
    CHECK(m.T == doctest::Approx(2.0));
    CHECK(m.J_s == std::vector<int>{0});
    CHECK(m.J_x == std::vector<int>{-1, 1});
}

TEST_CASE("mesh instants and shifts for N = 3, M = 2") {
    const MeshConfig m = build_mesh(3, 2);
    const std::vector<double> expected{0.0, 1.0 / 3, 2.0 / 3, 1.0, 4.0 / 3};
    for (int i = 0; i <= 4; ++i) CHECK(m.t(i) == doctest::Approx(expected[i]));
    CHECK(m.z_plus(-2) == doctest::Approx(-1.0));
}

TEST_CASE("invalid mesh sizes") {
    CHECK_THROWS_AS(build_mesh(0, 2), InvalidArgument);
    CHECK_THROWS_AS(build_mesh(2, -1), InvalidArgument);
}

TEST_CASE("index sets and counts") {
    for (int N = 1; N <= 16; ++N)
        for (int M = 1; M <= 16; ++M) {
            const MeshConfig m = build_mesh(N, M);
            REQUIRE(m.J_s.size() == std::size_t(N));
            REQUIRE(m.J_x.size() == std::size_t(N + 1));
            REQUIRE(m.J_c.size() == std::size_t(N + 2));
            REQUIRE(m.J_t.size() == std::size_t(M + 1));
            const SystemCounts c = counts(N, M);
            REQUIRE(c.N_e == 4 * N + 2 * M * N);
            REQUIRE(c.N_w == 2 * N * (M + 1));
            REQUIRE(c.N_u == (N + 1) * M);
            REQUIRE(c.N_v == c.N_w + c.N_u);
            REQUIRE(c.N_s == c.N_v - c.N_e);
        }
    const SystemCounts c44 = counts(4, 4);
    CHECK(c44.N_e == 48);
    CHECK(c44.N_w == 40);
    CHECK(c44.N_u == 20);
    CHECK(c44.N_v == 60);
    CHECK(c44.N_s == 12);
    CHECK(c44.N_b == 16);
    CHECK(counts(2, 2).N_s == 2);
    CHECK(counts(5, 3).N_b == 14);
    CHECK(counts(3, 2).N_b == 6);
}

TEST_CASE("nondimensionalize") {
    auto [t1, x1] = nondimensionalize({1.0, 1.0, 1.0}, 2.0, 1.0);
    CHECK(t1 == doctest::Approx(2.0));
    CHECK(x1 == doctest::Approx(1.0));
    auto [t2, x2] = nondimensionalize({4.0, 1.0, 1.0}, 2.0, 0.0);
    CHECK(t2 == doctest::Approx(1.0));
    CHECK(x2 == doctest::Approx(0.0));
    auto [t3, x3] = nondimensionalize({1.0, 4.0, 2.0}, 1.0, -2.0);
    CHECK(t3 == doctest::Approx(1.0));
    CHECK(x3 == doctest::Approx(-1.0));
}

namespace {

// Half the measure of the cross coordinate over segment k's rectangle, by counting.
double delta_z_by_counting(const MeshConfig& m, int k, Side side, double zeta, int cells = 20000) {
    const double lo = m.x(k - 1), hi = m.x(k + 1);
    const double span = 2.0 * (m.T + 2.0);
    const double d = span / cells;
    double measure = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double other = -m.T - 2.0 + (i + 0.5) * d;
        const double t = 0.5 * (zeta + other);
        const double x = side == Side::Plus ? 0.5 * (zeta - other) : 0.5 * (other - zeta);
        if (t >= 0.0 && t <= m.T && x >= lo && x <= hi) measure += d;
    }
    return 0.5 * measure;
}

}  // namespace

TEST_CASE("delta z weight against a counting oracle") {
    for (auto [N, M] : {std::pair{4, 4}, std::pair{3, 2}, std::pair{2, 5}}) {
        const MeshConfig m = build_mesh(N, M);
        for (int k : m.J_s)
            for (Side side : {Side::Plus, Side::Minus}) {
                const auto [a, b] = delta_z_domain(m, k, side);
                CHECK(delta_z_weight(m, k, side, a) == doctest::Approx(0.0));
                CHECK(delta_z_weight(m, k, side, a + m.lambda / 2) == doctest::Approx(m.lambda / 2));
                CHECK(delta_z_weight(m, k, side, 0.5 * (a + b)) == doctest::Approx(m.lambda));
                for (int s = 1; s < 12; ++s) {
                    const double z = a + (b - a) * s / 12.0;
                    CHECK(delta_z_weight(m, k, side, z) ==
                          doctest::Approx(delta_z_by_counting(m, k, side, z)).epsilon(1e-3));
                    CHECK(delta_z_weight(m, k, side, z) ==
                          doctest::Approx(delta_z_weight(m, k, side, a + b - z)).epsilon(1e-12));
                }
                CHECK_THROWS_AS(delta_z_weight(m, k, side, b + 0.1), DomainError);
                // Trapezoid rule is exact with breakpoints at every multiple of lambda / 2.
                const int n = 2 * (M + 1);
                double area = 0.0;
                for (int s = 0; s < n; ++s) {
                    const double z0 = a + (b - a) * s / n, z1 = a + (b - a) * (s + 1) / n;
                    area += 0.5 * (z1 - z0) * (delta_z_weight(m, k, side, z0) + delta_z_weight(m, k, side, z1));
                }
                CHECK(area == doctest::Approx(m.lambda * m.T).epsilon(1e-10));
            }
    }
}

TEST_CASE("sampled function basics") {
    const auto f = SampledFunction::from_function(0.0, 1.0, 129, [](double x) { return std::sin(3 * x); });
    CHECK(f.size() == 129);
    CHECK(simpson(f) == doctest::Approx((1 - std::cos(3.0)) / 3).epsilon(1e-9));
    const SampledFunction d = derivative(f);
    for (Index i = 0; i < f.size(); ++i) CHECK(d[i] == doctest::Approx(3 * std::cos(3 * f.abscissa(i))).epsilon(2e-3));
    const SampledFunction d6 = derivative(f, 6);
    for (Index i = 0; i < f.size(); ++i) CHECK(std::abs(d6[i] - 3 * std::cos(3 * f.abscissa(i))) < 1e-9);
    const SampledFunction F = cumulative_integral(f);
    CHECK(F[F.size() - 1] == doctest::Approx(simpson(f)).epsilon(1e-7));
    const SampledFunction twice = reflect(reflect(f));
    CHECK(twice.values() == f.values());
    CHECK(reflect(f)[0] == f[f.size() - 1]);
}

TEST_CASE("derivative order is two for the default rule") {
    auto error = [](Index n) {
        const auto f = SampledFunction::from_function(0.0, 1.0, n, [](double x) { return std::exp(x); });
        const SampledFunction d = derivative(f);
        double e = 0.0;
        for (Index i = 0; i < n; ++i) e = std::max(e, std::abs(d[i] - std::exp(f.abscissa(i))));
        return e;
    };
    CHECK(std::log2(error(65) / error(129)) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("piecewise derivative respects kinks") {
    const Index n = 101;
    Vector v(n);
    const double h = 0.01;
    for (Index i = 0; i < n; ++i) v(i) = std::abs(double(i - 50) * h);
    const Vector d = piecewise_derivative(v, h, {50}, 6);
    CHECK(d(10) == doctest::Approx(-1.0));
    CHECK(d(90) == doctest::Approx(1.0));
    CHECK(d(50) == doctest::Approx(0.0));
    CHECK(std::abs(d(49) + 1.0) < 1e-10);
    CHECK(std::abs(d(51) - 1.0) < 1e-10);
}
