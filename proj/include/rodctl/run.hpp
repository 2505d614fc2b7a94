#ifndef RODCTL_RUN_HPP
#define RODCTL_RUN_HPP

#include "rodctl/config.hpp"
#include "rodctl/pipeline.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rodctl {

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitConfig = 2,
    kExitInfeasible = 3,
    kExitInvariant = 4,
};

struct SolveRun {
    int exit_code = kExitOk;
    nlohmann::ordered_json summary;
    std::optional<Outcome> outcome;
    std::optional<RefinementStudy> oracle;
    std::vector<std::string> written;
};

/// Summary document without the timestamp field.
nlohmann::ordered_json describe(const RunConfig& cfg);

/// Solves one configuration. With `write` the summary, controls, fields and
/// (optionally) matrix dumps go to cfg.out_dir.
SolveRun run_solve(const RunConfig& cfg, bool write = true);

struct Range {
    int first = 0;
    int last = 0;
};

/// "A:B" or "A".
Range parse_range(const std::string& text);

struct SweepCell {
    int M = 0;
    int N = 0;
    double TE = 0.0;
    double E = 0.0;
    double seconds = 0.0;
    std::string status;  ///< "ok", "infeasible" or "failed: <reason>"
    bool ok() const { return status == "ok"; }
};

struct MonotonicityReport {
    double slack = 1e-9;
    std::vector<std::string> violations;
    std::vector<std::string> checked;  ///< sequences compared, e.g. "N=3 over M"
    bool isochrone_decreasing = true;
    bool monotone() const { return violations.empty(); }
};

struct SweepResult {
    std::vector<SweepCell> cells;  ///< sorted by (M, N)
    MonotonicityReport report;
    const SweepCell* find(int M, int N) const;
};

SweepResult run_sweep(const RunConfig& cfg, Range m_range, Range n_range, unsigned workers = 0);

MonotonicityReport check_monotonicity(const std::vector<SweepCell>& cells, double slack = 1e-9);

void write_sweep_csv(const std::string& path, const SweepResult& sweep);

/// UTC, ISO 8601.
std::string timestamp_now();

}  // namespace rodctl

#endif
