#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gsgd/config.hpp"
#include "gsgd/optimizer.hpp"

namespace gsgd::cli {

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitDiverged = 2;

/// Output directory: config value unless the GSGD_OUT environment variable
/// overrides it.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

/// Executes one run and writes <out>/run.csv, <out>/probes.csv,
/// <out>/config.echo. Returns kExitDiverged when the run aborted.
int cmd_run(const std::filesystem::path& config_path, std::ostream& log);
int run_experiment(const ExperimentConfig& config, std::ostream& log);

struct CounterexampleReport {
    double max_diag_gap = 0.0;      // max_k |u_k - v_k|
    double max_abs_u = 0.0;         // max_k |u_k|
    double terminal_stationarity = 0.0;
    double distance_to_stationary = 0.0;  // distance of the terminal point to (-10, 20)
};

/// signSGD on |2u+v| + |u+10| from (eps0, eps0) with eta_k = min(1/3,
/// eta0/sqrt(k+1)), plus-side kink selection, diagonal tie, no noise.
/// Requires eps0 in (0, 1/3) and eta0 <= 1/3.
CounterexampleReport run_counterexample(double eps0, double eta0, std::size_t horizon);
int cmd_counterexample(double eps0, double eta0, std::size_t horizon, std::ostream& out);

/// Prints one pass/flag line per stepsize assumption; exit 0 when all
/// whitelisted symbolic checks pass.
int cmd_validate(const std::filesystem::path& config_path, std::ostream& out);

/// Runs the (seed, c) grid of the sweep block on a bounded worker pool and
/// writes <out>/sweep.csv with rows sorted by (seed, c).
int cmd_sweep(const std::filesystem::path& config_path, std::ostream& log);

}  // namespace gsgd::cli
