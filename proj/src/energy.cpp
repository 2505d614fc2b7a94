#include "rodctl/energy.hpp"

#include "rodctl/sampled_function.hpp"

#include <algorithm>
#include <string>

namespace rodctl {

double simpson_2d(const Matrix& values, double step) {
    const Vector wt = simpson_weights<double>(values.rows(), step);
    const Vector wx = simpson_weights<double>(values.cols(), step);
    return wt.dot(values * wx);
}

EnergyWeights build_weights(const MeshConfig& mesh, Index samples) {
    if (samples < 5 || samples % 2 == 0)
        throw InvalidArgument("weights: samples must be odd and >= 5");
    const UnknownCatalog cat(mesh);
    const double h = mesh.lambda / double(samples - 1);
    EnergyWeights w;
    w.mesh = mesh;
    w.samples = samples;
    w.nodal = Matrix::Zero(cat.size(), samples);
    for (Index j = 0; j < cat.wave_count(); ++j) {
        const Unknown& u = cat[j];
        const double shift = mesh.piece_shift(u.index, u.m, u.side);
        for (Index i = 0; i < samples; ++i)
            w.nodal(j, i) = delta_z_weight(mesh, u.index, u.side, shift + double(i) * h);
    }
    w.midpoint = 0.5 * (w.nodal.leftCols(samples - 1) + w.nodal.rightCols(samples - 1));
    return w;
}

Vector pack(const Matrix& Y, const Vector& c) {
    Vector x(Y.size() + c.size());
    Index pos = 0;
    for (Index i = 0; i < Y.rows(); ++i)
        for (Index f = 0; f < Y.cols(); ++f) x(pos++) = Y(i, f);
    x.tail(c.size()) = c;
    return x;
}

void unpack(const Vector& x, Index free_count, Index samples, Matrix& Y, Vector& c) {
    Y.resize(samples, free_count);
    Index pos = 0;
    for (Index i = 0; i < samples; ++i)
        for (Index f = 0; f < free_count; ++f) Y(i, f) = x(pos++);
    c = x.tail(x.size() - pos);
}

QuadraticProgram assemble_qp(const Parametrization& par, const EssentialBC& bc, const EnergyWeights& weights) {
    const Index P = par.samples;
    const Index ns = par.free_count();
    const Index nc = par.Cg.cols();
    if (weights.samples != P || weights.nodal.rows() != par.A.rows())
        throw InvalidArgument("assemble_qp: weights do not match the parametrization");
    if (bc.B0.cols() != ns || bc.Bc.cols() != nc)
        throw InvalidArgument("assemble_qp: boundary matrices do not match the parametrization");

    QuadraticProgram qp;
    qp.free_count = ns;
    qp.constant_count = nc;
    qp.samples = P;
    qp.step = par.step();
    qp.horizon = par.mesh.T;

    // Only entries that carry weight and depend on y enter the quadratic part.
    std::vector<Index> active;
    for (Index j = 0; j < par.A.rows(); ++j)
        if (weights.nodal.row(j).cwiseAbs().maxCoeff() > 0.0 && par.A.row(j).cwiseAbs().maxCoeff() > 0.0)
            active.push_back(j);
    Matrix A_act(static_cast<Index>(active.size()), ns);
    for (std::size_t a = 0; a < active.size(); ++a) A_act.row(a) = par.A.row(active[a]);

    const Matrix dg = par.g.rightCols(P - 1) - par.g.leftCols(P - 1);
    const double scale = 1.0 / (qp.horizon * qp.step);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(4 * (P - 1) * ns * ns));
    qp.q = Vector::Zero(qp.size());
    qp.constant = scale * (weights.midpoint.array() * dg.array().square()).sum();
    for (Index c = 0; c + 1 < P; ++c) {
        Vector omega(A_act.rows()), wdg(A_act.rows());
        for (std::size_t a = 0; a < active.size(); ++a) {
            omega(a) = weights.midpoint(active[a], c);
            wdg(a) = omega(a) * dg(active[a], c);
        }
        const Matrix K = A_act.transpose() * omega.asDiagonal() * A_act;
        const Vector l = A_act.transpose() * wdg;
        const Index a0 = c * ns, b0 = (c + 1) * ns;
        for (Index r = 0; r < ns; ++r)
            for (Index s = 0; s < ns; ++s) {
                const double v = 2.0 * scale * K(r, s);
                if (v == 0.0) continue;
                trips.emplace_back(a0 + r, a0 + s, v);
                trips.emplace_back(b0 + r, b0 + s, v);
                trips.emplace_back(a0 + r, b0 + s, -v);
                trips.emplace_back(b0 + r, a0 + s, -v);
            }
        qp.q.segment(b0, ns) += 2.0 * scale * l;
        qp.q.segment(a0, ns) -= 2.0 * scale * l;
    }
    qp.H.resize(qp.size(), qp.size());
    qp.H.setFromTriplets(trips.begin(), trips.end());

    std::vector<Eigen::Triplet<double>> gtrips;
    const Index last = (P - 1) * ns;
    const Index coff = P * ns;
    for (Index r = 0; r < bc.B0.rows(); ++r) {
        for (Index f = 0; f < ns; ++f) {
            if (bc.B0(r, f) != 0.0) gtrips.emplace_back(r, f, -bc.B0(r, f));
            if (bc.B1(r, f) != 0.0) gtrips.emplace_back(r, last + f, bc.B1(r, f));
        }
        for (Index k = 0; k < nc; ++k)
            if (bc.Bc(r, k) != 0.0) gtrips.emplace_back(r, coff + k, -bc.Bc(r, k));
    }
    qp.G.resize(bc.B0.rows(), qp.size());
    qp.G.setFromTriplets(gtrips.begin(), gtrips.end());
    qp.b = bc.b0;
    return qp;
}

double weighted_objective(const Parametrization& par, const EnergyWeights& weights, const Matrix& Y,
                          const Vector& c) {
    const Matrix w = par.entries(Y, c);
    const Index P = par.samples;
    const Matrix d = w.rightCols(P - 1) - w.leftCols(P - 1);
    return (weights.midpoint.array() * d.array().square()).sum() / (par.mesh.T * par.step());
}

namespace {

// Trapezoid over the pieces between kinks; values at an interior kink are
// replaced by one-sided quadratic extrapolation from each piece.
double kinked_trapezoid(const Vector& y, double h, std::vector<Index> kinks) {
    const Index n = y.size();
    kinks.push_back(0);
    kinks.push_back(n - 1);
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    double total = 0.0;
    for (std::size_t piece = 0; piece + 1 < kinks.size(); ++piece) {
        const Index lo = kinks[piece], hi = kinks[piece + 1];
        double first = y(lo), last = y(hi);
        if (hi - lo >= 3) {
            if (lo > 0) first = 3.0 * y(lo + 1) - 3.0 * y(lo + 2) + y(lo + 3);
            if (hi < n - 1) last = 3.0 * y(hi - 1) - 3.0 * y(hi - 2) + y(hi - 3);
        }
        total += h * (0.5 * (first + last) + y.segment(lo + 1, hi - lo - 1).sum());
    }
    return total;
}

}  // namespace

double mean_energy(const FieldGrid& fields) {
    const double h = fields.step;
    double total = 0.0;
    for (const FieldBlock& b : fields.blocks) {
        const Index P = b.vt.rows();
        const Matrix density = 0.5 * (b.vt.array().square() + b.vx.array().square()).matrix();
        Vector rows(P);
        for (Index i = 0; i < P; ++i) rows(i) = kinked_trapezoid(density.row(i).transpose(), h, {i, P - 1 - i});
        total += kinked_trapezoid(rows, h, {(P - 1) / 2});
    }
    return total / fields.mesh.T;
}

}  // namespace rodctl
