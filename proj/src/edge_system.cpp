#include "rodctl/edge_system.hpp"

#include "rodctl/exact.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

namespace rodctl {

// -- state ------------------------------------------------------------------

Index StateSpec::samples_per_piece(int N) const {
    const Index intervals = v0.size() - 1;
    if (N < 1 || intervals % N != 0)
        throw ConfigurationError("state grid with " + std::to_string(v0.size()) +
                                 " samples does not split into " + std::to_string(N) + " segments");
    return intervals / N + 1;
}

void StateSpec::check_compatible(const MeshConfig& mesh) const {
    for (const SampledFunction* f : {&v0, &r0, &v1, &r1}) {
        if (f->size() != v0.size())
            throw ConfigurationError("state profiles must share one grid");
        if (std::abs(f->lower() + 1.0) > 1e-12 || std::abs(f->upper() - 1.0) > 1e-12)
            throw ConfigurationError("state profiles must be sampled on [-1, 1]");
    }
    const Index p = samples_per_piece(mesh.N);
    if (p < 5 || p % 2 == 0)
        throw ConfigurationError("state grid gives " + std::to_string(p) +
                                 " samples per segment; need an odd count >= 5");
}

StateSpec make_state(int N, Index samples, const Profile& v0, const Profile& r0, const Profile& v1,
                     const Profile& r1) {
    if (samples < 5 || samples % 2 == 0)
        throw InvalidArgument("samples per piece must be odd and >= 5, got " + std::to_string(samples));
    const Index total = N * (samples - 1) + 1;
    auto sample = [&](const Profile& f) { return SampledFunction::from_function(-1.0, 1.0, total, f); };
    return StateSpec{sample(v0), sample(r0), sample(v1), sample(r1)};
}

SampledFunction potential_from_momentum(const SampledFunction& p) { return cumulative_integral(p); }

const char* to_string(DataSource s) {
    switch (s) {
        case DataSource::V0: return "v0";
        case DataSource::R0: return "r0";
        case DataSource::V1: return "v1";
        case DataSource::R1: return "r1";
    }
    return "?";
}

// -- catalog ----------------------------------------------------------------

UnknownCatalog::UnknownCatalog(const MeshConfig& mesh) : N_(mesh.N), M_(mesh.M) {
    for (int k : mesh.J_s)
        for (int m : mesh.J_t)
            for (Side s : {Side::Plus, Side::Minus}) entries_.push_back({Unknown::Kind::Wave, k, m, s});
    wave_count_ = size();
    for (int n : mesh.J_x)
        for (int m : mesh.J_t)
            if (m != 2 * mesh.M) entries_.push_back({Unknown::Kind::Jump, n, m, Side::Plus});
}

Index UnknownCatalog::wave(int k, int m, Side side) const {
    if (k < 1 - N_ || k > N_ - 1 || (k + N_ + 1) % 2 != 0 || m < 0 || m > 2 * M_ || m % 2 != 0)
        throw InvalidArgument("no wave entry for k=" + std::to_string(k) + ", m=" + std::to_string(m));
    const Index pos = (k + N_ - 1) / 2;
    return (pos * (M_ + 1) + m / 2) * 2 + (side == Side::Plus ? 0 : 1);
}

Index UnknownCatalog::jump(int n, int m) const {
    if (n < -N_ || n > N_ || (n + N_) % 2 != 0 || m < 0 || m > 2 * M_ - 2 || m % 2 != 0)
        throw InvalidArgument("no jump entry for n=" + std::to_string(n) + ", m=" + std::to_string(m));
    return wave_count_ + ((n + N_) / 2) * M_ + m / 2;
}

std::string UnknownCatalog::label(Index i) const {
    const Unknown& u = entries_[i];
    const std::string idx = "(" + std::to_string(u.index) + "," + std::to_string(u.m) + ")";
    if (u.kind == Unknown::Kind::Wave) return std::string("w") + rodctl::to_string(u.side) + idx;
    return "u" + idx;
}

// -- edge rows --------------------------------------------------------------

Index EdgeSystem::block_count(EdgeRow::Block b) const {
    return std::count_if(rows.begin(), rows.end(), [b](const EdgeRow& r) { return r.block == b; });
}

namespace {

const Rational kHalf(1, 2);

std::string pair_label(const char* name, int a, int b) {
    return std::string(name) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

EdgeSystem assemble_edge_structure(const MeshConfig& mesh) {
    EdgeSystem sys;
    sys.mesh = mesh;
    sys.catalog = UnknownCatalog(mesh);
    const auto& cat = sys.catalog;
    const int N = mesh.N, M = mesh.M;
    using Block = EdgeRow::Block;

    for (int k : mesh.J_s) {
        EdgeRow plus{Block::Initial, {{cat.wave(k, 0, Side::Plus), 1}},
                     {{DataSource::V0, kHalf, k, false}, {DataSource::R0, kHalf, k, false}}, {}, -1, 0,
                     pair_label("initial+", k, 0)};
        EdgeRow minus{Block::Initial, {{cat.wave(k, 0, Side::Minus), 1}},
                      {{DataSource::V0, kHalf, k, true}, {DataSource::R0, -kHalf, k, true}}, {}, -1, 0,
                      pair_label("initial-", k, 0)};
        sys.rows.push_back(std::move(plus));
        sys.rows.push_back(std::move(minus));
    }
    for (int k : mesh.J_s) {
        const int pos = mesh.segment_position(k);
        EdgeRow plus{Block::Terminal, {{cat.wave(k, 2 * M, Side::Plus), 1}},
                     {{DataSource::V1, kHalf, k, false}, {DataSource::R1, kHalf, k, false}}, {}, pos, kHalf,
                     pair_label("terminal+", k, 2 * M)};
        EdgeRow minus{Block::Terminal, {{cat.wave(k, 2 * M, Side::Minus), 1}},
                      {{DataSource::V1, kHalf, k, true}, {DataSource::R1, -kHalf, k, true}}, {}, pos, -kHalf,
                      pair_label("terminal-", k, 2 * M)};
        sys.rows.push_back(std::move(plus));
        sys.rows.push_back(std::move(minus));
    }
    for (int m = 0; m < 2 * M; m += 2) {
        EdgeRow right{Block::Boundary,
                      {{cat.wave(N - 1, m + 2, Side::Plus), 1},
                       {cat.wave(N - 1, m, Side::Minus), -1},
                       {cat.jump(N, m), -1}},
                      {}, {{DataSource::R0, Rational(1), 1.0}}, -1, 0, pair_label("boundary", N, m)};
        EdgeRow left{Block::Boundary,
                     {{cat.wave(1 - N, m, Side::Plus), 1},
                      {cat.wave(1 - N, m + 2, Side::Minus), -1},
                      {cat.jump(-N, m), 1}},
                     {}, {{DataSource::R0, Rational(1), -1.0}}, -1, 0, pair_label("boundary", -N, m)};
        sys.rows.push_back(std::move(right));
        sys.rows.push_back(std::move(left));
    }
    for (int n = 2 - N; n <= N - 2; n += 2) {
        for (int m = 0; m < 2 * M; m += 2) {
            const Index a = cat.wave(n - 1, m + 2, Side::Plus);
            const Index b = cat.wave(n - 1, m, Side::Minus);
            const Index c = cat.wave(n + 1, m, Side::Plus);
            const Index d = cat.wave(n + 1, m + 2, Side::Minus);
            sys.rows.push_back({Block::Interelement, {{a, 1}, {b, 1}, {c, -1}, {d, -1}}, {}, {}, -1, 0,
                                pair_label("displacement", n, m)});
            sys.rows.push_back({Block::Interelement,
                                {{a, 1}, {b, -1}, {c, -1}, {d, 1}, {cat.jump(n, m), -1}},
                                {}, {}, -1, 0, pair_label("potential", n, m)});
        }
    }

    const Index ne = static_cast<Index>(sys.rows.size());
    sys.C = Eigen::MatrixXi::Zero(ne, cat.size());
    sys.gauge = RationalMatrix::Zero(ne, N);
    for (Index i = 0; i < ne; ++i) {
        for (const auto& [col, coef] : sys.rows[i].coefs) sys.C(i, col) += coef;
        if (sys.rows[i].gauge_segment >= 0) sys.gauge(i, sys.rows[i].gauge_segment) = sys.rows[i].gauge_coef;
    }
    return sys;
}

EdgeSystem assemble_edge_constraints(const MeshConfig& mesh, const StateSpec& state) {
    state.check_compatible(mesh);
    EdgeSystem sys = assemble_edge_structure(mesh);
    const Index P = state.samples_per_piece(mesh.N);
    sys.samples = P;
    sys.rhs = Matrix::Zero(static_cast<Index>(sys.rows.size()), P);

    auto source = [&](DataSource s) -> const SampledFunction& {
        switch (s) {
            case DataSource::V0: return state.v0;
            case DataSource::R0: return state.r0;
            case DataSource::V1: return state.v1;
            case DataSource::R1: return state.r1;
        }
        return state.v0;
    };
    for (Index i = 0; i < static_cast<Index>(sys.rows.size()); ++i) {
        const EdgeRow& row = sys.rows[i];
        for (const DataTerm& t : row.data) {
            const Vector seg = source(t.source).values().segment(mesh.segment_position(t.segment) * (P - 1), P);
            const double c = to_double(t.coef);
            if (t.reflected)
                sys.rhs.row(i) += c * seg.reverse().transpose();
            else
                sys.rhs.row(i) += c * seg.transpose();
        }
        for (const ConstantTerm& t : row.constants) {
            const SampledFunction& f = source(t.source);
            const double value = t.x <= f.lower() ? f.front() : t.x >= f.upper() ? f.back() : f.at(t.x);
            sys.rhs.row(i).array() += to_double(t.coef) * value;
        }
    }
    return sys;
}

// -- vertex rows ------------------------------------------------------------

namespace {

VertexRow continuity(Index next, Index prev, std::string label) {
    return {{{next, false, 1}, {prev, true, -1}}, std::move(label)};
}

}  // namespace

std::vector<VertexRow> assemble_vertex_conditions(const MeshConfig& mesh) {
    const UnknownCatalog cat(mesh);
    const int N = mesh.N, M = mesh.M;
    std::vector<VertexRow> rows;
    for (int n = 2 - N; n <= N - 2; n += 2)
        for (int m = 2; m < 2 * M; m += 2)
            rows.push_back(continuity(cat.jump(n, m), cat.jump(n, m - 2), pair_label("u-junction", n, m)));
    if (N % 2 == 1) {
        for (Side s : {Side::Plus, Side::Minus})
            for (int m = 2; m <= 2 * M; m += 2)
                rows.push_back(continuity(cat.wave(0, m, s), cat.wave(0, m - 2, s),
                                          std::string("w") + to_string(s) + "-junction(0," + std::to_string(m) + ")"));
    } else {
        for (auto [k, s] : {std::pair{1, Side::Plus}, std::pair{-1, Side::Minus}})
            for (int m = 2; m < 2 * M; m += 2)
                rows.push_back(continuity(cat.wave(k, m, s), cat.wave(k, m - 2, s),
                                          std::string("w") + to_string(s) + "-junction(" + std::to_string(k) +
                                              "," + std::to_string(m) + ")"));
        rows.push_back({{{cat.jump(0, 0), false, 1}}, "u-origin(0,0)"});
    }
    return rows;
}

std::vector<VertexRow> closure_vertex_conditions(const MeshConfig& mesh) {
    const UnknownCatalog cat(mesh);
    const int M = mesh.M;
    std::vector<VertexRow> rows;
    for (int k : mesh.J_s)
        for (Side s : {Side::Plus, Side::Minus})
            for (int m = 2; m <= 2 * M; m += 2)
                rows.push_back(continuity(cat.wave(k, m, s), cat.wave(k, m - 2, s),
                                          std::string("w") + to_string(s) + "-junction(" + std::to_string(k) +
                                              "," + std::to_string(m) + ")"));
    for (int n : mesh.J_x) {
        rows.push_back({{{cat.jump(n, 0), false, 1}}, pair_label("u-origin", n, 0)});
        for (int m = 2; m < 2 * M; m += 2)
            rows.push_back(continuity(cat.jump(n, m), cat.jump(n, m - 2), pair_label("u-junction", n, m)));
    }
    return rows;
}

std::vector<VertexRow> all_vertex_conditions(const MeshConfig& mesh) {
    std::vector<VertexRow> rows = assemble_vertex_conditions(mesh);
    std::vector<VertexRow> closure = closure_vertex_conditions(mesh);
    rows.insert(rows.end(), closure.begin(), closure.end());
    return rows;
}

// -- elimination ------------------------------------------------------------

FeasibilityReport feasibility_check(int N, int M) {
    if (N < 1 || M < 1) return {Feasibility::Infeasible, "N and M must be positive"};
    if (M == 1)
        return {Feasibility::Infeasible,
                "horizon T = lambda is below the minimal controllability time; arbitrary states "
                "cannot be steered unless M >= 2"};
    return {};
}

std::vector<Index> elimination_order(const MeshConfig& mesh, const UnknownCatalog& catalog) {
    const int N = mesh.N, M = mesh.M;
    auto key = [&](Index j) {
        const Unknown& u = catalog[j];
        if (u.kind == Unknown::Kind::Wave && (u.m == 0 || u.m == 2 * M)) return std::tuple{0, 0, 0, j};
        if (u.kind == Unknown::Kind::Jump && std::abs(u.index) == N) return std::tuple{1, 0, 0, j};
        if (u.kind == Unknown::Kind::Jump) return std::tuple{2, -std::abs(u.index), 0, j};
        return std::tuple{3, -std::abs(u.index), u.m, j};
    };
    std::vector<Index> order(catalog.size());
    for (Index j = 0; j < catalog.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return key(a) < key(b); });
    return order;
}

namespace {

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
    RationalMatrix out = RationalMatrix::Zero(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (Index j = 0; j < b.cols(); ++j)
                if (!b(k, j).is_zero()) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

}  // namespace

Parametrization eliminate(const EdgeSystem& system, const MeshConfig& mesh) {
    const FeasibilityReport feas = feasibility_check(mesh.N, mesh.M);
    if (!feas.feasible()) throw InfeasibleError(feas.reason);

    const Index ne = system.C.rows();
    const Index nv = system.C.cols();
    RationalMatrix aug = RationalMatrix::Zero(ne, nv + ne);
    for (Index i = 0; i < ne; ++i) {
        for (Index j = 0; j < nv; ++j)
            if (system.C(i, j) != 0) aug(i, j) = system.C(i, j);
        aug(i, nv + i) = 1;
    }
    const std::vector<Index> order = elimination_order(mesh, system.catalog);
    const RrefResult rr = rref_inplace(aug, order);
    if (rr.rank != ne)
        throw InvariantViolation("edge system has rank " + std::to_string(rr.rank) + " < " +
                                 std::to_string(ne) + " rows");

    std::vector<Index> pivot_row(nv, -1);
    for (Index r = 0; r < rr.rank; ++r) pivot_row[rr.pivot_columns[r]] = r;

    Parametrization par;
    par.mesh = mesh;
    par.catalog = system.catalog;
    for (Index j : order)
        if (pivot_row[j] < 0) par.free_map.push_back(j);
    const Index ns = static_cast<Index>(par.free_map.size());
    if (ns != counts(mesh.N, mesh.M).N_s)
        throw InvariantViolation("elimination left " + std::to_string(ns) + " free entries, expected " +
                                 std::to_string(counts(mesh.N, mesh.M).N_s));

    par.A_exact = RationalMatrix::Zero(nv, ns);
    par.R_exact = RationalMatrix::Zero(nv, ne);
    for (Index f = 0; f < ns; ++f) par.A_exact(par.free_map[f], f) = 1;
    for (Index j = 0; j < nv; ++j) {
        const Index r = pivot_row[j];
        if (r < 0) continue;
        for (Index f = 0; f < ns; ++f) par.A_exact(j, f) = -aug(r, par.free_map[f]);
        par.R_exact.row(j) = aug.block(r, nv, 1, ne);
    }
    par.gauge_exact = multiply(par.R_exact, system.gauge);

    par.A = to_double(par.A_exact);
    par.Cg = to_double(par.gauge_exact);
    par.samples = system.samples;
    if (system.rhs.size() > 0) par.g = to_double(par.R_exact) * system.rhs;
    return par;
}

Matrix Parametrization::entries(const Matrix& Y, const Vector& c) const {
    Matrix w = A * Y.transpose() + g;
    w.colwise() += Cg * c;
    return w;
}

double edge_residual(const EdgeSystem& system, const Matrix& entries, const Vector& c) {
    Matrix res = system.C.cast<double>() * entries - system.rhs;
    res.colwise() -= to_double(system.gauge) * c;
    return res.cwiseAbs().maxCoeff();
}

// -- essential boundary conditions -----------------------------------------

Vector EssentialBC::residual(const Vector& y0, const Vector& y1, const Vector& c) const {
    return B1 * y1 - B0 * y0 - Bc * c - b0;
}

EssentialBC boundary_matrices(const Parametrization& par, const std::vector<VertexRow>& rows) {
    const Index ns = par.free_count();
    const Index nc = par.Cg.cols();
    const Index nr = static_cast<Index>(rows.size());
    RationalMatrix full = RationalMatrix::Zero(nr, 2 * ns + nc);
    Vector b0_all = Vector::Zero(nr);
    const Index last = par.samples - 1;
    for (Index i = 0; i < nr; ++i) {
        for (const VertexTerm& t : rows[i].terms) {
            const Rational coef(t.coef);
            for (Index f = 0; f < ns; ++f) {
                if (par.A_exact(t.column, f).is_zero()) continue;
                if (t.at_end)
                    full(i, ns + f) += coef * par.A_exact(t.column, f);
                else
                    full(i, f) -= coef * par.A_exact(t.column, f);
            }
            for (Index k = 0; k < nc; ++k) full(i, 2 * ns + k) -= coef * par.gauge_exact(t.column, k);
            if (par.g.size() > 0) b0_all(i) -= t.coef * par.g(t.column, t.at_end ? last : 0);
        }
    }

    const RowBasis basis = row_basis(full);
    EssentialBC bc;
    bc.rows_in = nr;
    bc.rank = static_cast<Index>(basis.kept.size());
    bc.exact.resize(bc.rank, full.cols());
    bc.b0.resize(bc.rank);
    for (Index r = 0; r < bc.rank; ++r) {
        bc.exact.row(r) = full.row(basis.kept[r]);
        bc.b0(r) = b0_all(basis.kept[r]);
        bc.labels.push_back(rows[basis.kept[r]].label);
    }
    const Matrix dense = to_double(bc.exact);
    bc.B0 = dense.leftCols(ns);
    bc.B1 = dense.middleCols(ns, ns);
    bc.Bc = dense.rightCols(nc);

    if (bc.rank > 0) {
        const Matrix comb = to_double(basis.combination);
        const Vector implied = comb * bc.b0;
        bc.dropped_inconsistency = (implied - b0_all).cwiseAbs().maxCoeff();
    } else if (nr > 0) {
        bc.dropped_inconsistency = b0_all.cwiseAbs().maxCoeff();
    }
    const double scale = 1.0 + (nr > 0 ? b0_all.cwiseAbs().maxCoeff() : 0.0);
    if (bc.dropped_inconsistency > 1e-8 * scale)
        throw InvariantViolation("dependent vertex conditions disagree on their data by " +
                                 std::to_string(bc.dropped_inconsistency));
    return bc;
}

// -- dumps ------------------------------------------------------------------

void write_matrix_csv(const std::string& path, const Eigen::MatrixXi& m) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
        out << '\n';
    }
}

void write_matrix_csv(const std::string& path, const RationalMatrix& m) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << to_string(m(i, j));
        out << '\n';
    }
}

void write_free_map_csv(const std::string& path, const Parametrization& par) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    out << "slot,column,entry\n";
    for (std::size_t f = 0; f < par.free_map.size(); ++f)
        out << f << ',' << par.free_map[f] << ',' << par.catalog.label(par.free_map[f]) << '\n';
}

}  // namespace rodctl
