#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpo/config.hpp"
#include "kpo/experiments.hpp"
#include "kpo/linear.hpp"
#include "kpo/output.hpp"
#include "kpo/twa.hpp"

namespace kpo {

// Process exit codes of the kpo CLI. Stable; documented in the README.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,    // unexpected error
  kExitConfig = 2,     // usage, config file, or invalid parameter
  kExitNumerical = 3,  // blowup, NaN, eigensolver failure, below threshold
  kExitGuard = 4,      // size guard (e.g. brute force n > 24)
};

// Maps the current exception (call from a catch block) to an exit code.
int exit_code_for_current_exception();

struct CommandOptions {
  std::filesystem::path out_dir;
  int threads = 1;
};

// Written files, in write order.
using WrittenFiles = std::vector<std::filesystem::path>;

WrittenFiles cmd_spectrum(const RunConfig& config, const CommandOptions& opts);
WrittenFiles cmd_single_kpo(const RunConfig& config, const CommandOptions& opts);
WrittenFiles cmd_threshold_curve(const RunConfig& config,
                                 const CommandOptions& opts);
WrittenFiles cmd_meanfield_sweep(const RunConfig& config,
                                 const CommandOptions& opts);
WrittenFiles cmd_twa_sweep(const RunConfig& config, const CommandOptions& opts);
WrittenFiles cmd_twa_hist(const RunConfig& config, const CommandOptions& opts);

// "kpo <command> master_seed=<seed> config=<canonical compact JSON>", with
// output_dir left out so relocated reruns stay byte-identical.
std::string fingerprint(const std::string& command, const RunConfig& config);

// Table builders behind the commands.
CsvTable spectrum_table(const IsingSpectrum& spectrum);
CsvTable threshold_curve_table(const std::vector<ThresholdCurvePoint>& curve);
CsvTable trajectory_table(const TrajectoryRecord& record);
CsvTable sweep_long_table(const SweepResult& result);
CsvTable sweep_matrix_table(const SweepResult& result);
CsvTable histogram_table(const EnergyHistogram& histogram);

nlohmann::json to_json(const ThresholdReport& report);
nlohmann::json histogram_metadata(const HistogramPanel& panel,
                                  const RunConfig& config);

}  // namespace kpo
