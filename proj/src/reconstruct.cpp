#include "rodctl/reconstruct.hpp"

#include "rodctl/energy.hpp"

#include <Eigen/LU>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rodctl {

WaveTable waves_from_solution(const Parametrization& par, const Solution& sol) {
    const MeshConfig& mesh = par.mesh;
    const Index P = par.samples;
    WaveTable table;
    table.mesh = mesh;
    table.samples = P;
    table.entries = par.entries(sol.Y, sol.c);

    const Index length = (mesh.M + 1) * (P - 1) + 1;
    for (int k : mesh.J_s) {
        for (Side side : {Side::Plus, Side::Minus}) {
            Vector full(length);
            for (int m = 0; m <= 2 * mesh.M; m += 2) {
                const Vector piece = table.entries.row(par.catalog.wave(k, m, side)).transpose();
                const Index start = (m / 2) * (P - 1);
                if (m > 0) {
                    table.continuity_error = std::max(table.continuity_error, std::abs(full(start) - piece(0)));
                    const double joined = 0.5 * (full(start) + piece(0));
                    full.segment(start, P) = piece;
                    full(start) = joined;
                } else {
                    full.segment(start, P) = piece;
                }
            }
            (side == Side::Plus ? table.plus : table.minus).push_back(std::move(full));
        }
    }
    if (table.continuity_error > 1e-6)
        throw InvariantViolation("traveling waves break at a piece junction by " +
                                 std::to_string(table.continuity_error));
    return table;
}

std::vector<Matrix> jumps_from_table(const WaveTable& waves) {
    const MeshConfig& mesh = waves.mesh;
    const UnknownCatalog cat(mesh);
    std::vector<Matrix> jumps;
    for (int l = 0; l < mesh.M; ++l) {
        Matrix layer(mesh.N + 1, waves.samples);
        for (int n : mesh.J_x) layer.row(mesh.interface_position(n)) = waves.entries.row(cat.jump(n, 2 * l));
        jumps.push_back(std::move(layer));
    }
    return jumps;
}

ControlSet controls_from_jumps(const MeshConfig& mesh, const std::vector<Matrix>& jumps) {
    if (static_cast<int>(jumps.size()) != mesh.M)
        throw InvalidArgument("controls: expected one jump matrix per time layer");
    const int N = mesh.N;
    ControlSet set;
    set.mesh = mesh;
    set.samples = jumps.front().cols();
    set.step = mesh.lambda / double(set.samples - 1);

    // u_{n+1} - u_{n-1} = jump_n for n in J_x, sum_k u_k = 0.
    Matrix S = Matrix::Zero(N + 2, N + 2);
    for (int n : mesh.J_x) {
        const int row = mesh.interface_position(n);
        S(row, row + 1) = 1.0;
        S(row, row) = -1.0;
    }
    S.row(N + 1).setOnes();
    const Eigen::PartialPivLU<Matrix> lu(S);

    const int accuracy = static_cast<int>(std::min<Index>(6, set.samples - 1));
    for (const Matrix& layer : jumps) {
        if (layer.rows() != N + 1 || layer.cols() != set.samples)
            throw InvalidArgument("controls: jump matrices must be (N + 1) x P");
        Matrix rhs = Matrix::Zero(N + 2, set.samples);
        rhs.topRows(N + 1) = layer;
        Matrix u = lu.solve(rhs);
        Matrix f(N + 2, set.samples);
        for (Index k = 0; k < N + 2; ++k)
            f.row(k) = piecewise_derivative(u.row(k).transpose(), set.step, {}, accuracy).transpose();
        Matrix fj(N + 1, set.samples);
        for (Index n = 0; n < N + 1; ++n) fj.row(n) = f.row(n + 1) - f.row(n);
        set.jumps.push_back(layer);
        set.integrals.push_back(std::move(u));
        set.forces.push_back(std::move(f));
        set.force_jumps.push_back(std::move(fj));
    }
    return set;
}

namespace {

double cubic_in_row(const Matrix& m, Index row, double s) {
    const Index n = m.cols();
    const Index first = std::clamp<Index>(static_cast<Index>(std::floor(s)) - 1, 0, n - 4);
    double out = 0.0;
    for (Index a = 0; a < 4; ++a) {
        double basis = 1.0;
        for (Index b = 0; b < 4; ++b)
            if (b != a) basis *= (s - double(first + b)) / double(a - b);
        out += basis * m(row, first + a);
    }
    return out;
}

}  // namespace

double force_at(const ControlSet& controls, int k, double t) {
    const MeshConfig& mesh = controls.mesh;
    const int row = controls.control_position(k);
    const double tau = t / mesh.lambda;
    const double nearest = std::round(tau);
    const Index last = controls.samples - 1;
    if (tau < -1e-12 || tau > double(mesh.M) + 1e-12) throw DomainError("force_at: time outside [0, T]");
    if (std::abs(tau - nearest) < 1e-12) {
        const int l = static_cast<int>(nearest);
        if (l <= 0) return controls.forces.front()(row, 0);
        if (l >= mesh.M) return controls.forces.back()(row, last);
        return 0.5 * (controls.forces[l - 1](row, last) + controls.forces[l](row, 0));
    }
    const int l = std::min(static_cast<int>(std::floor(tau)), mesh.M - 1);
    const double s = (t - l * mesh.lambda) / controls.step;
    return cubic_in_row(controls.forces[l], row, s);
}

namespace {

// Block arrays indexed (i, j) = (time, space); waves kink on both diagonals.
std::vector<Index> diagonal_kinks(Index line, Index P) { return {line, P - 1 - line}; }

Matrix along_time(const Matrix& a, double h, int accuracy) {
    const Index P = a.rows();
    Matrix d(P, a.cols());
    for (Index j = 0; j < a.cols(); ++j) d.col(j) = piecewise_derivative(a.col(j), h, diagonal_kinks(j, P), accuracy);
    return d;
}

Matrix along_space(const Matrix& a, double h, int accuracy) {
    const Index P = a.cols();
    Matrix d(a.rows(), P);
    for (Index i = 0; i < a.rows(); ++i)
        d.row(i) = piecewise_derivative(a.row(i).transpose(), h, diagonal_kinks(i, P), accuracy).transpose();
    return d;
}

}  // namespace

FieldGrid fields(const WaveTable& waves, const ControlSet& controls, const MeshConfig& mesh) {
    const Index P = waves.samples;
    if (controls.samples != P) throw InvalidArgument("fields: waves and controls use different grids");
    FieldGrid fg;
    fg.mesh = mesh;
    fg.samples = P;
    fg.step = mesh.lambda / double(P - 1);
    const int accuracy = static_cast<int>(std::min<Index>(6, P - 1));
    for (int l = 0; l < mesh.M; ++l) {
        for (int k : mesh.J_s) {
            const int pos = mesh.segment_position(k);
            const Vector& wp = waves.plus[pos];
            const Vector& wm = waves.minus[pos];
            const Index a = l * (P - 1);
            const Index b = (l + 1) * (P - 1);
            const Vector u = controls.integrals[l].row(controls.control_position(k)).transpose();

            FieldBlock blk;
            blk.layer = l;
            blk.segment = k;
            blk.v.resize(P, P);
            blk.r.resize(P, P);
            for (Index i = 0; i < P; ++i)
                for (Index j = 0; j < P; ++j) {
                    const double plus = wp(a + i + j);
                    const double minus = wm(b + i - j);
                    blk.v(i, j) = plus + minus;
                    blk.r(i, j) = plus - minus + u(i);
                }
            blk.vt = along_time(blk.v, fg.step, accuracy);
            blk.vx = along_space(blk.v, fg.step, accuracy);
            blk.s = along_time(blk.r, fg.step, accuracy);
            blk.p = along_space(blk.r, fg.step, accuracy);
            blk.f = controls.forces[l].row(controls.control_position(k)).transpose();
            const Matrix strain = blk.s - blk.f.replicate(1, P);
            blk.e = 0.25 * (blk.vt.array().square() + blk.vx.array().square() + strain.array().square() +
                            blk.p.array().square())
                               .matrix();
            fg.blocks.push_back(std::move(blk));
        }
    }
    return fg;
}

double residual_Q(const FieldGrid& fg, const RodParams& params) {
    params.validate();
    // Box differences at cell centers, midpoint rule over the cells.
    const double h = fg.step;
    double total = 0.0;
    for (const FieldBlock& b : fg.blocks) {
        const Index P = b.v.cols();
        for (Index i = 0; i + 1 < P; ++i)
            for (Index j = 0; j + 1 < P; ++j) {
                const double vt = (b.v(i + 1, j) + b.v(i + 1, j + 1) - b.v(i, j) - b.v(i, j + 1)) / (2.0 * h);
                const double vx = (b.v(i, j + 1) + b.v(i + 1, j + 1) - b.v(i, j) - b.v(i + 1, j)) / (2.0 * h);
                const double rt = (b.r(i + 1, j) + b.r(i + 1, j + 1) - b.r(i, j) - b.r(i, j + 1)) / (2.0 * h);
                const double rx = (b.r(i, j + 1) + b.r(i + 1, j + 1) - b.r(i, j) - b.r(i + 1, j)) / (2.0 * h);
                const double f = 0.5 * (b.f(i) + b.f(i + 1));
                const double g = params.rho * vt - rx;
                const double hh = params.kappa * vx - rt + f;
                total += (g * g / (4.0 * params.rho) + hh * hh / (4.0 * params.kappa)) * h * h;
            }
    }
    return total;
}

TerminalConstant terminal_constant(const Solution& sol, const ControlSet& controls) {
    const MeshConfig& mesh = controls.mesh;
    const Matrix& last = controls.integrals.back();
    Vector values(mesh.N);
    for (int k : mesh.J_s) {
        const int pos = mesh.segment_position(k);
        values(pos) = sol.c(pos) + last(controls.control_position(k), controls.samples - 1);
    }
    return {values.mean(), values.maxCoeff() - values.minCoeff()};
}

TerminalErrors terminal_error(const FieldGrid& fg, const StateSpec& state, double c1) {
    const MeshConfig& mesh = fg.mesh;
    const Index P = fg.samples;
    TerminalErrors err;
    double v0_sq = 0, r0_sq = 0, v1_sq = 0, r1_sq = 0;
    const Vector w = simpson_weights<double>(P, fg.step);
    for (int k : mesh.J_s) {
        const Index offset = mesh.segment_position(k) * (P - 1);
        const FieldBlock& first = fg.block(0, k);
        const FieldBlock& last = fg.block(mesh.M - 1, k);
        const Vector dv0 = first.v.row(0).transpose() - state.v0.values().segment(offset, P);
        const Vector dr0 = first.r.row(0).transpose() - state.r0.values().segment(offset, P);
        const Vector dv1 = last.v.row(P - 1).transpose() - state.v1.values().segment(offset, P);
        const Vector dr1 =
            (last.r.row(P - 1).transpose() - state.r1.values().segment(offset, P)).array() - c1;
        err.v0_sup = std::max(err.v0_sup, dv0.cwiseAbs().maxCoeff());
        err.r0_sup = std::max(err.r0_sup, dr0.cwiseAbs().maxCoeff());
        err.v1_sup = std::max(err.v1_sup, dv1.cwiseAbs().maxCoeff());
        err.r1_sup = std::max(err.r1_sup, dr1.cwiseAbs().maxCoeff());
        v0_sq += w.dot(dv0.cwiseAbs2());
        r0_sq += w.dot(dr0.cwiseAbs2());
        v1_sq += w.dot(dv1.cwiseAbs2());
        r1_sq += w.dot(dr1.cwiseAbs2());
    }
    err.v0_l2 = std::sqrt(v0_sq);
    err.r0_l2 = std::sqrt(r0_sq);
    err.v1_l2 = std::sqrt(v1_sq);
    err.r1_l2 = std::sqrt(r1_sq);
    return err;
}

double interface_jump(const FieldGrid& fg) {
    const MeshConfig& mesh = fg.mesh;
    const Index P = fg.samples;
    double worst = 0.0;
    for (int l = 0; l < mesh.M; ++l)
        for (int k = 1 - mesh.N; k + 2 <= mesh.N - 1; k += 2) {
            const FieldBlock& left = fg.block(l, k);
            const FieldBlock& right = fg.block(l, k + 2);
            worst = std::max(worst, (left.v.col(P - 1) - right.v.col(0)).cwiseAbs().maxCoeff());
            worst = std::max(worst, (left.r.col(P - 1) - right.r.col(0)).cwiseAbs().maxCoeff());
        }
    return worst;
}

double boundary_force_error(const FieldGrid& fg, const ControlSet& controls) {
    const MeshConfig& mesh = fg.mesh;
    const Index P = fg.samples;
    double worst = 0.0;
    for (int l = 0; l < mesh.M; ++l) {
        const Vector left = fg.block(l, 1 - mesh.N).s.col(0) - controls.forces[l].row(0).transpose();
        const Vector right = fg.block(l, mesh.N - 1).s.col(P - 1) - controls.forces[l].row(mesh.N + 1).transpose();
        worst = std::max({worst, left.cwiseAbs().maxCoeff(), right.cwiseAbs().maxCoeff()});
    }
    return worst;
}

DiscontinuityReport force_discontinuities(const ControlSet& controls, int accuracy) {
    const MeshConfig& mesh = controls.mesh;
    const Index P = controls.samples;
    const double h = controls.step;
    const Index width = std::min<Index>(accuracy + 1, P);
    std::vector<double> offsets(width);

    // One-sided estimates from the left (window ending at i) and from the
    // right (window starting at i).
    for (Index j = 0; j < width; ++j) offsets[j] = -double(width - 1 - j);
    const Vector left_w = fd_weights(offsets, h);
    for (Index j = 0; j < width; ++j) offsets[j] = double(j);
    const Vector right_w = fd_weights(offsets, h);

    DiscontinuityReport rep;
    for (int l = 0; l < mesh.M; ++l) {
        const Matrix& u = controls.integrals[l];
        for (Index k = 0; k < u.rows(); ++k)
            for (Index i = width - 1; i + width <= P; ++i) {
                const double from_left = left_w.dot(u.row(k).segment(i - width + 1, width).transpose());
                const double from_right = right_w.dot(u.row(k).segment(i, width).transpose());
                rep.interior_max = std::max(rep.interior_max, std::abs(from_left - from_right));
            }
    }
    for (int l = 1; l < mesh.M; ++l) {
        const Matrix& before = controls.integrals[l - 1];
        const Matrix& after = controls.integrals[l];
        double jump = 0.0;
        for (Index k = 0; k < before.rows(); ++k) {
            const double from_left = left_w.dot(before.row(k).segment(P - width, width).transpose());
            const double from_right = right_w.dot(after.row(k).segment(0, width).transpose());
            jump = std::max(jump, std::abs(from_right - from_left));
        }
        rep.instants.push_back(l * mesh.lambda);
        rep.jump.push_back(jump);
    }
    return rep;
}

// -- CSV ----------------------------------------------------------------------

void write_controls_csv(const std::string& path, const ControlSet& controls) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    const MeshConfig& mesh = controls.mesh;
    out << "layer,i,t";
    for (int n : mesh.J_x) out << ",jump_u" << n;
    for (int k : mesh.J_c) out << ",u" << k;
    for (int k : mesh.J_c) out << ",f" << k;
    out << '\n' << std::setprecision(12);
    for (int l = 0; l < mesh.M; ++l)
        for (Index i = 0; i < controls.samples; ++i) {
            out << l << ',' << i << ',' << controls.time(l, i);
            for (Index n = 0; n < controls.jumps[l].rows(); ++n) out << ',' << controls.jumps[l](n, i);
            for (Index k = 0; k < controls.integrals[l].rows(); ++k) out << ',' << controls.integrals[l](k, i);
            for (Index k = 0; k < controls.forces[l].rows(); ++k) out << ',' << controls.forces[l](k, i);
            out << '\n';
        }
}

void write_fields_csv(const std::string& path, const FieldGrid& fg, Index stride) {
    if (stride < 1) throw InvalidArgument("fields csv: stride must be positive");
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    out << "layer,segment,i,j,t,x,v,r,p,s,e\n" << std::setprecision(12);
    const Index P = fg.samples;
    for (const FieldBlock& b : fg.blocks)
        for (Index i = 0; i < P; i += stride)
            for (Index j = 0; j < P; j += stride)
                out << b.layer << ',' << b.segment << ',' << i << ',' << j << ',' << fg.time(b.layer, i) << ','
                    << fg.abscissa(b.segment, j) << ',' << b.v(i, j) << ',' << b.r(i, j) << ',' << b.p(i, j) << ','
                    << b.s(i, j) << ',' << b.e(i, j) << '\n';
}

FieldGrid read_fields_csv(const std::string& path, const MeshConfig& mesh, Index samples) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read " + path);
    FieldGrid fg;
    fg.mesh = mesh;
    fg.samples = samples;
    fg.step = mesh.lambda / double(samples - 1);
    for (int l = 0; l < mesh.M; ++l)
        for (int k : mesh.J_s) {
            FieldBlock b;
            b.layer = l;
            b.segment = k;
            for (Matrix* m : {&b.v, &b.r, &b.p, &b.s, &b.e}) *m = Matrix::Zero(samples, samples);
            fg.blocks.push_back(std::move(b));
        }
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 11) throw ConfigurationError("fields csv: malformed row in " + path);
        const int l = static_cast<int>(vals[0]);
        const int k = static_cast<int>(vals[1]);
        const Index i = static_cast<Index>(vals[2]);
        const Index j = static_cast<Index>(vals[3]);
        if (l < 0 || l >= mesh.M || k < 1 - mesh.N || k > mesh.N - 1 || i >= samples || j >= samples)
            throw ConfigurationError("fields csv: row outside the grid in " + path);
        FieldBlock& b = fg.blocks[static_cast<std::size_t>(l * mesh.N + mesh.segment_position(k))];
        b.v(i, j) = vals[6];
        b.r(i, j) = vals[7];
        b.p(i, j) = vals[8];
        b.s(i, j) = vals[9];
        b.e(i, j) = vals[10];
    }
    return fg;
}

}  // namespace rodctl
