#include "rodctl/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace rodctl {

using nlohmann::json;

double TrigTerm::operator()(double x) const { return a * std::cos(omega * x + phi); }

const char* to_string(Preset p) {
    switch (p) {
        case Preset::Cos3Example: return "cos3";
        case Preset::Zero: return "zero";
        case Preset::Trig: return "trig";
    }
    return "?";
}

namespace {

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
    return out;
}

class Checker {
  public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

    bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        for (const auto& [key, value] : j.items())
            if (!allowed.count(key)) fail(path + "." + key, "unknown key");
        return true;
    }

    std::optional<long long> integer(const json& j, const std::string& path, long long lo, long long hi) {
        if (!j.is_number_integer()) {
            fail(path, "expected an integer");
            return std::nullopt;
        }
        const long long v = j.get<long long>();
        if (v < lo || v > hi) {
            fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(v));
            return std::nullopt;
        }
        return v;
    }

    std::optional<double> number(const json& j, const std::string& path) {
        if (!j.is_number() || !std::isfinite(j.get<double>())) {
            fail(path, "expected a finite number");
            return std::nullopt;
        }
        return j.get<double>();
    }

    std::optional<double> positive(const json& j, const std::string& path) {
        auto v = number(j, path);
        if (v && *v <= 0.0) {
            fail(path, "must be positive");
            return std::nullopt;
        }
        return v;
    }

    std::optional<bool> boolean(const json& j, const std::string& path) {
        if (!j.is_boolean()) {
            fail(path, "expected true or false");
            return std::nullopt;
        }
        return j.get<bool>();
    }

    std::optional<std::string> string(const json& j, const std::string& path) {
        if (!j.is_string() || j.get<std::string>().empty()) {
            fail(path, "expected a non-empty string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }
};

const char* kProfileNames[4] = {"v0", "r0", "v1", "r1"};

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> messages)
    : ConfigurationError(join(messages)), messages_(std::move(messages)) {}

RunConfig validate_config(const std::string& text, const std::string& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigErrors({std::string("$: invalid JSON: ") + e.what()});
    }

    Checker c;
    RunConfig cfg;
    if (!c.object(root, "$", {"N", "M", "P", "preset", "trig", "profiles", "solver", "oracle", "rod", "output"}))
        throw ConfigErrors(c.errors);

    for (const char* key : {"N", "M"}) {
        if (!root.contains(key)) {
            c.fail(std::string("$.") + key, "required");
            continue;
        }
        if (auto v = c.integer(root[key], std::string("$.") + key, 1, 64))
            (std::string(key) == "N" ? cfg.N : cfg.M) = static_cast<int>(*v);
    }
    if (root.contains("P")) {
        if (auto v = c.integer(root["P"], "$.P", 9, 4097)) {
            if (*v % 2 == 0)
                c.fail("$.P", "must be odd, got " + std::to_string(*v));
            else
                cfg.samples = static_cast<Index>(*v);
        }
    }

    if (root.contains("preset") && root.contains("profiles")) c.fail("$.profiles", "conflicts with $.preset");
    if (root.contains("preset")) {
        if (auto name = c.string(root["preset"], "$.preset")) {
            if (*name == "cos3")
                cfg.preset = Preset::Cos3Example;
            else if (*name == "zero")
                cfg.preset = Preset::Zero;
            else if (*name == "trig")
                cfg.preset = Preset::Trig;
            else
                c.fail("$.preset", "unknown preset '" + *name + "' (cos3, zero, trig)");
        }
    }
    if (root.contains("trig")) {
        if (cfg.preset != Preset::Trig) c.fail("$.trig", "only allowed with preset 'trig'");
        if (c.object(root["trig"], "$.trig", {"v0", "r0", "v1", "r1"})) {
            for (int i = 0; i < 4; ++i) {
                if (!root["trig"].contains(kProfileNames[i])) continue;
                const std::string path = std::string("$.trig.") + kProfileNames[i];
                const json& t = root["trig"][kProfileNames[i]];
                if (!c.object(t, path, {"a", "omega", "phi"})) continue;
                if (t.contains("a"))
                    if (auto v = c.number(t["a"], path + ".a")) cfg.trig[i].a = *v;
                if (t.contains("omega"))
                    if (auto v = c.number(t["omega"], path + ".omega")) cfg.trig[i].omega = *v;
                if (t.contains("phi"))
                    if (auto v = c.number(t["phi"], path + ".phi")) cfg.trig[i].phi = *v;
            }
        }
    }
    if (root.contains("profiles")) {
        const json& p = root["profiles"];
        if (c.object(p, "$.profiles", {"v0", "r0", "p0", "v1", "r1", "p1"})) {
            ProfileFiles files;
            auto resolve = [&](const std::string& key, std::string& dst) {
                if (auto s = c.string(p[key], "$.profiles." + key)) {
                    const std::filesystem::path path(*s);
                    dst = (path.is_absolute() ? path : std::filesystem::path(base_dir) / path).string();
                }
            };
            for (const char* key : {"v0", "v1"}) {
                if (p.contains(key))
                    resolve(key, std::string(key) == "v0" ? files.v0 : files.v1);
                else
                    c.fail(std::string("$.profiles.") + key, "required");
            }
            for (int t = 0; t < 2; ++t) {
                const std::string r = t == 0 ? "r0" : "r1";
                const std::string pk = t == 0 ? "p0" : "p1";
                std::string& dst = t == 0 ? files.r0 : files.r1;
                bool& momentum = t == 0 ? files.r0_is_momentum : files.r1_is_momentum;
                if (p.contains(r) && p.contains(pk))
                    c.fail("$.profiles." + pk, "conflicts with $.profiles." + r);
                else if (p.contains(r))
                    resolve(r, dst);
                else if (p.contains(pk)) {
                    resolve(pk, dst);
                    momentum = true;
                } else
                    c.fail("$.profiles." + r, "required (or " + pk + ")");
            }
            cfg.profiles = files;
        }
    }
    if (!cfg.preset && !cfg.profiles && !root.contains("preset") && !root.contains("profiles"))
        cfg.preset = Preset::Cos3Example;

    if (root.contains("solver")) {
        if (auto s = c.string(root["solver"], "$.solver")) {
            if (*s == "qp")
                cfg.solver = SolverChoice::QP;
            else if (*s == "el" || *s == "euler_lagrange")
                cfg.solver = SolverChoice::EL;
            else if (*s == "both")
                cfg.solver = SolverChoice::Both;
            else
                c.fail("$.solver", "unknown solver '" + *s + "' (qp, el, both)");
        }
    }

    if (root.contains("oracle")) {
        const json& o = root["oracle"];
        if (o.is_boolean()) {
            cfg.oracle.enabled = o.get<bool>();
        } else if (c.object(o, "$.oracle", {"enabled", "points_per_segment", "cfl", "levels"})) {
            cfg.oracle.enabled = true;
            if (o.contains("enabled"))
                if (auto v = c.boolean(o["enabled"], "$.oracle.enabled")) cfg.oracle.enabled = *v;
            if (o.contains("points_per_segment"))
                if (auto v = c.integer(o["points_per_segment"], "$.oracle.points_per_segment", 8, 100000))
                    cfg.oracle.sim.points_per_segment = static_cast<int>(*v);
            if (o.contains("cfl"))
                if (auto v = c.number(o["cfl"], "$.oracle.cfl")) {
                    if (*v <= 0.0 || *v > 1.0)
                        c.fail("$.oracle.cfl", "must lie in (0, 1]");
                    else
                        cfg.oracle.sim.cfl = *v;
                }
            if (o.contains("levels"))
                if (auto v = c.integer(o["levels"], "$.oracle.levels", 2, 8)) cfg.oracle.levels = static_cast<int>(*v);
        }
    }

    if (root.contains("rod") && c.object(root["rod"], "$.rod", {"rho", "kappa", "L"})) {
        const json& r = root["rod"];
        if (r.contains("rho"))
            if (auto v = c.positive(r["rho"], "$.rod.rho")) cfg.rod.rho = *v;
        if (r.contains("kappa"))
            if (auto v = c.positive(r["kappa"], "$.rod.kappa")) cfg.rod.kappa = *v;
        if (r.contains("L"))
            if (auto v = c.positive(r["L"], "$.rod.L")) cfg.rod.L = *v;
    }

    if (root.contains("output") && c.object(root["output"], "$.output", {"dir", "fields_stride", "dump_matrices"})) {
        const json& o = root["output"];
        if (o.contains("dir"))
            if (auto v = c.string(o["dir"], "$.output.dir")) cfg.out_dir = *v;
        if (o.contains("fields_stride"))
            if (auto v = c.integer(o["fields_stride"], "$.output.fields_stride", 1, 4096)) cfg.fields_stride = *v;
        if (o.contains("dump_matrices"))
            if (auto v = c.boolean(o["dump_matrices"], "$.output.dump_matrices")) cfg.dump_matrices = *v;
    }

    if (!c.errors.empty()) throw ConfigErrors(c.errors);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigErrors({path + ": cannot open"});
    std::stringstream buf;
    buf << in.rdbuf();
    return validate_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

SampledFunction read_profile_csv(const std::string& path, int N, Index samples) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError(path + ": cannot open profile");
    std::vector<double> xs, ys;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, y;
        if (!(row >> x >> y)) {
            if (xs.empty() && lineno == 1) continue;
            throw ConfigurationError(path + ":" + std::to_string(lineno) + ": expected two numbers");
        }
        if (!xs.empty() && x <= xs.back())
            throw ConfigurationError(path + ":" + std::to_string(lineno) + ": x must increase strictly");
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.size() < 4) throw ConfigurationError(path + ": need at least 4 samples");
    if (std::abs(xs.front() + 1.0) > 1e-9 || std::abs(xs.back() - 1.0) > 1e-9)
        throw ConfigurationError(path + ": samples must span [-1, 1]");

    const auto n = static_cast<Index>(xs.size());
    auto eval = [&](double x) {
        const Index upper = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
        const Index first = std::clamp<Index>(upper - 2, 0, n - 4);
        double out = 0.0;
        for (Index a = 0; a < 4; ++a) {
            double basis = 1.0;
            for (Index b = 0; b < 4; ++b)
                if (b != a) basis *= (x - xs[first + b]) / (xs[first + a] - xs[first + b]);
            out += basis * ys[first + a];
        }
        return out;
    };
    return SampledFunction::from_function(-1.0, 1.0, N * (samples - 1) + 1, eval);
}

StateSpec build_state(const RunConfig& cfg) { return build_state(cfg, cfg.N); }

StateSpec build_state(const RunConfig& cfg, int N) {
    const Index P = cfg.samples;
    if (cfg.profiles) {
        const ProfileFiles& f = *cfg.profiles;
        StateSpec st;
        st.v0 = read_profile_csv(f.v0, N, P);
        st.r0 = read_profile_csv(f.r0, N, P);
        st.v1 = read_profile_csv(f.v1, N, P);
        st.r1 = read_profile_csv(f.r1, N, P);
        if (f.r0_is_momentum) st.r0 = potential_from_momentum(st.r0);
        if (f.r1_is_momentum) st.r1 = potential_from_momentum(st.r1);
        return st;
    }
    const auto zero = [](double) { return 0.0; };
    switch (cfg.preset.value_or(Preset::Cos3Example)) {
        case Preset::Cos3Example:
            return make_state(N, P, [](double x) { return std::cos(3.0 * x); },
                              [](double x) { return -std::cos(3.0 * x); }, zero, zero);
        case Preset::Zero: return make_state(N, P, zero, zero, zero, zero);
        case Preset::Trig: return make_state(N, P, cfg.trig[0], cfg.trig[1], cfg.trig[2], cfg.trig[3]);
    }
    throw InvalidArgument("unknown preset");
}

}  // namespace rodctl
