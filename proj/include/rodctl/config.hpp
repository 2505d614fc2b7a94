#ifndef RODCTL_CONFIG_HPP
#define RODCTL_CONFIG_HPP

#include "rodctl/edge_system.hpp"
#include "rodctl/fd_oracle.hpp"
#include "rodctl/mesh.hpp"
#include "rodctl/pipeline.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rodctl {

/// a cos(omega x + phi)
struct TrigTerm {
    double a = 0.0;
    double omega = 0.0;
    double phi = 0.0;

    double operator()(double x) const;
};

enum class Preset { Cos3Example, Zero, Trig };

const char* to_string(Preset p);

/// Two-column CSV profiles. r0 / r1 may instead be given as momentum
/// densities p0 / p1, integrated from x = -1.
struct ProfileFiles {
    std::string v0, r0, v1, r1;
    bool r0_is_momentum = false;
    bool r1_is_momentum = false;
};

struct OracleConfig {
    bool enabled = false;
    SimConfig sim;
    int levels = 3;
};

struct RunConfig {
    int N = 0;
    int M = 0;
    Index samples = kDefaultSamples;
    std::optional<Preset> preset;
    std::array<TrigTerm, 4> trig;  ///< v0, r0, v1, r1
    std::optional<ProfileFiles> profiles;
    SolverChoice solver = SolverChoice::Both;
    OracleConfig oracle;
    RodParams rod;
    std::string out_dir = "out";
    Index fields_stride = 4;
    bool dump_matrices = false;
};

/// Collects every violation with its key path.
class ConfigErrors : public ConfigurationError {
  public:
    explicit ConfigErrors(std::vector<std::string> messages);
    const std::vector<std::string>& messages() const { return messages_; }

  private:
    std::vector<std::string> messages_;
};

/// Parses and checks a JSON config. Relative profile paths are resolved
/// against `base_dir`.
RunConfig validate_config(const std::string& text, const std::string& base_dir = ".");

RunConfig load_config(const std::string& path);

/// Sampled initial and terminal data for (N, P) of the config.
StateSpec build_state(const RunConfig& cfg);
StateSpec build_state(const RunConfig& cfg, int N);

/// Reads a two-column CSV (x, value); a non-numeric first line is a header.
SampledFunction read_profile_csv(const std::string& path, int N, Index samples);

}  // namespace rodctl

#endif
