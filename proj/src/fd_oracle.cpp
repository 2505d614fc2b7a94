#include "rodctl/fd_oracle.hpp"

#include <cmath>
#include <fstream>
#include <algorithm>
#include <future>
#include <limits>
#include <iomanip>

namespace rodctl {

void SimConfig::validate() const {
    if (points_per_segment < 8)
        throw ConfigurationError("oracle: points per segment must be >= 8, got " +
                                 std::to_string(points_per_segment));
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw ConfigurationError("oracle: CFL number must lie in (0, 1], got " + std::to_string(cfl));
}

namespace {

// Profile on [-1, 1] evaluated segment by segment with cubic interpolation,
// so interface kinks of the data are never straddled.
class SegmentProfile {
  public:
    SegmentProfile(const SampledFunction& f, const MeshConfig& mesh) : mesh_(mesh), values_(f.values()) {
        samples_ = (values_.size() - 1) / mesh.N + 1;
        step_ = mesh.lambda / double(samples_ - 1);
    }

    double operator()(double x) const {
        const int pos = std::clamp(static_cast<int>(std::floor((x + 1.0) / mesh_.lambda)), 0, mesh_.N - 1);
        const double s = (x - (-1.0 + pos * mesh_.lambda)) / step_;
        const Index base = pos * (samples_ - 1);
        const Index first = std::clamp<Index>(static_cast<Index>(std::floor(s)) - 1, 0, samples_ - 4);
        double out = 0.0;
        for (Index a = 0; a < 4; ++a) {
            double basis = 1.0;
            for (Index b = 0; b < 4; ++b)
                if (b != a) basis *= (s - double(first + b)) / double(a - b);
            out += basis * values_(base + first + a);
        }
        return out;
    }

  private:
    MeshConfig mesh_;
    Vector values_;
    Index samples_ = 0;
    double step_ = 0.0;
};

SampledFunction profile_derivative(const SampledFunction& f, const MeshConfig& mesh) {
    const Index P = (f.size() - 1) / mesh.N + 1;
    std::vector<Index> kinks;
    for (int n = 1; n < mesh.N; ++n) kinks.push_back(n * (P - 1));
    const int accuracy = static_cast<int>(std::min<Index>(6, P - 1));
    return SampledFunction(f.lower(), f.upper(), piecewise_derivative(f.values(), f.step(), kinks, accuracy));
}

struct Forcing {
    std::vector<double> cell;  // per segment force
    double left = 0.0, right = 0.0;
};

template <typename ForceFn>
SimResult run(const MeshConfig& mesh, const RodParams& params, const StateSpec& state, const SimConfig& cfg,
              ForceFn&& force) {
    cfg.validate();
    params.validate();
    state.check_compatible(mesh);
    const int n = cfg.points_per_segment;
    const Index cells = static_cast<Index>(mesh.N) * n;
    const Index nodes = cells + 1;
    const double dx = mesh.lambda / n;
    const double speed = std::sqrt(params.kappa / params.rho);
    const long per_layer = static_cast<long>(std::ceil(mesh.lambda * speed / (cfg.cfl * dx) - 1e-9));
    const double dt = mesh.lambda / double(per_layer);
    const Index steps = static_cast<Index>(per_layer) * mesh.M;

    SimResult res;
    res.dx = dx;
    res.dt = dt;
    res.steps = steps;
    res.x.resize(nodes);
    for (Index j = 0; j < nodes; ++j) res.x(j) = -1.0 + double(j) * dx;

    const SegmentProfile v0(state.v0, mesh);
    const SegmentProfile p0(profile_derivative(state.r0, mesh), mesh);
    Vector v(nodes), p(nodes);
    for (Index j = 0; j < nodes; ++j) {
        v(j) = v0(res.x(j));
        p(j) = p0(res.x(j));
    }
    res.v0 = v;
    res.p0 = p;

    Vector mass = Vector::Constant(nodes, dx);
    mass(0) = mass(nodes - 1) = 0.5 * dx;

    Vector F(nodes), s(cells);
    auto nodal_force = [&](const Vector& vv, double t) {
        const Forcing f = force(t);
        for (Index c = 0; c < cells; ++c)
            s(c) = params.kappa * (vv(c + 1) - vv(c)) / dx + f.cell[static_cast<std::size_t>(c / n)];
        F(0) = s(0) - f.left;
        for (Index j = 1; j < cells; ++j) F(j) = s(j) - s(j - 1);
        F(nodes - 1) = f.right - s(cells - 1);
        return f;
    };
    auto energy = [&](const Vector& va, const Vector& vb, const Vector& ph) {
        double kinetic = 0.5 * (mass.array() * ph.array().square()).sum() / params.rho;
        double strain = 0.0;
        for (Index c = 0; c < cells; ++c) strain += (va(c + 1) - va(c)) * (vb(c + 1) - vb(c));
        return kinetic + 0.5 * params.kappa * strain / dx;
    };

    nodal_force(v, 0.0);
    p += (0.5 * dt) * F.cwiseQuotient(mass);
    for (Index step = 0; step < steps; ++step) {
        const Vector v_next = v + (dt / params.rho) * p;
        res.energy.push_back(energy(v, v_next, p));
        v = v_next;
        const double t = double(step + 1) * dt;
        const double weight = (step + 1 < steps) ? 1.0 : 0.5;
        const double before = mass.dot(p);
        const Forcing f = nodal_force(v, t);
        p += (weight * dt) * F.cwiseQuotient(mass);
        const double change = mass.dot(p) - before;
        const double expected = weight * dt * (f.right - f.left);
        const double scale = weight * dt * F.cwiseAbs().sum() + 1e-6 * mass.cwiseProduct(p).cwiseAbs().sum();
        if (scale > 0.0) res.momentum_defect = std::max(res.momentum_defect, std::abs(change - expected) / scale);
    }
    res.v = v;
    res.p = p;
    return res;
}

}  // namespace

SimResult simulate(const MeshConfig& mesh, const RodParams& params, const ControlSet& controls,
                   const StateSpec& state, const SimConfig& cfg) {
    if (controls.samples < 8) throw ConfigurationError("oracle: controls need at least 8 samples per layer");
    return run(mesh, params, state, cfg, [&](double t) {
        Forcing f;
        for (int k : mesh.J_s) f.cell.push_back(force_at(controls, k, t));
        f.left = force_at(controls, -mesh.N - 1, t);
        f.right = force_at(controls, mesh.N + 1, t);
        return f;
    });
}

SimResult simulate_free(const MeshConfig& mesh, const RodParams& params, const StateSpec& state,
                        const SimConfig& cfg) {
    return run(mesh, params, state, cfg, [&](double) {
        Forcing f;
        f.cell.assign(static_cast<std::size_t>(mesh.N), 0.0);
        return f;
    });
}

OracleComparison compare(const SimResult& sim, const FieldGrid& fg) {
    const MeshConfig& mesh = fg.mesh;
    const Index P = fg.samples;
    Vector terminal(mesh.N * (P - 1) + 1);
    for (int k : mesh.J_s)
        terminal.segment(mesh.segment_position(k) * (P - 1), P) = fg.block(mesh.M - 1, k).v.row(P - 1).transpose();
    const SegmentProfile ref(SampledFunction(-1.0, 1.0, terminal), mesh);
    OracleComparison out;
    double sq = 0.0;
    for (Index j = 0; j < sim.x.size(); ++j) {
        const double d = sim.v(j) - ref(sim.x(j));
        out.v_sup = std::max(out.v_sup, std::abs(d));
        const double w = (j == 0 || j + 1 == sim.x.size()) ? 0.5 : 1.0;
        sq += w * sim.dx * d * d;
    }
    out.v_l2 = std::sqrt(sq);
    return out;
}

double energy_norm_error(const SimResult& sim, const StateSpec& state, const MeshConfig& mesh,
                         const RodParams& params) {
    const SegmentProfile dv1(profile_derivative(state.v1, mesh), mesh);
    const SegmentProfile p1(profile_derivative(state.r1, mesh), mesh);
    const Index nodes = sim.x.size();
    double err = 0.0, ref = 0.0;
    for (Index c = 0; c + 1 < nodes; ++c) {
        const double mid = 0.5 * (sim.x(c) + sim.x(c + 1));
        const double strain = (sim.v(c + 1) - sim.v(c)) / sim.dx;
        const double strain0 = (sim.v0(c + 1) - sim.v0(c)) / sim.dx;
        err += params.kappa * std::pow(strain - dv1(mid), 2) * sim.dx;
        ref += params.kappa * strain0 * strain0 * sim.dx;
    }
    for (Index j = 0; j < nodes; ++j) {
        const double w = (j == 0 || j + 1 == nodes) ? 0.5 * sim.dx : sim.dx;
        err += w * std::pow(sim.p(j) - p1(sim.x(j)), 2) / params.rho;
        ref += w * sim.p0(j) * sim.p0(j) / params.rho;
    }
    if (ref <= 0.0) return std::sqrt(err);
    return std::sqrt(err / ref);
}

RefinementStudy refinement_study(const MeshConfig& mesh, const RodParams& params, const ControlSet& controls,
                                 const StateSpec& state, const FieldGrid& fg, const SimConfig& cfg, int levels) {
    if (levels < 2) throw InvalidArgument("refinement study needs at least two levels");
    RefinementStudy study;
    std::vector<std::future<std::pair<double, double>>> jobs;
    for (int i = levels - 1; i >= 0; --i) {
        SimConfig level = cfg;
        level.points_per_segment = std::max(8, cfg.points_per_segment >> i);
        study.points.push_back(level.points_per_segment);
        jobs.push_back(std::async(std::launch::async, [&, level] {
            const SimResult sim = simulate(mesh, params, controls, state, level);
            return std::pair{compare(sim, fg).v_l2, energy_norm_error(sim, state, mesh, params)};
        }));
    }
    for (auto& j : jobs) {
        const auto [v, e] = j.get();
        study.errors.push_back(v);
        study.energy_errors.push_back(e);
    }
    auto order = [&](const std::vector<double>& err, std::size_t i) {
        return std::log(err[i] / err[i + 1]) / std::log(double(study.points[i + 1]) / study.points[i]);
    };
    study.min_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
        study.orders.push_back(order(study.errors, i));
        study.energy_orders.push_back(order(study.energy_errors, i));
        study.min_order = std::min(study.min_order, study.orders.back());
    }
    study.finest_error = study.errors.back();
    study.finest_energy_error = study.energy_errors.back();
    return study;
}

void write_terminal_csv(const std::string& path, const SimResult& sim) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    out << "x,v,p\n" << std::setprecision(12);
    for (Index j = 0; j < sim.x.size(); ++j) out << sim.x(j) << ',' << sim.v(j) << ',' << sim.p(j) << '\n';
}

void write_energy_csv(const std::string& path, const SimResult& sim) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    out << "step,t,energy\n" << std::setprecision(12);
    for (std::size_t n = 0; n < sim.energy.size(); ++n)
        out << n << ',' << double(n) * sim.dt << ',' << sim.energy[n] << '\n';
}

}  // namespace rodctl
