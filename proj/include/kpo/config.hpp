#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpo/experiments.hpp"
#include "kpo/ising.hpp"
#include "kpo/linear.hpp"
#include "kpo/meanfield.hpp"
#include "kpo/twa.hpp"

namespace kpo {

// Either a generated graph or a dense CSV matrix on disk.
struct GraphSource {
  std::optional<GraphSpec> spec;
  std::string csv_path;  // resolved against the config file's directory

  bool operator==(const GraphSource&) const = default;
};

struct RunConfig {
  GraphSource graph;
  KpoParams params;
  std::optional<SweepGrid> grid;
  SdeConfig sde;
  IntegratorConfig integrator;
  int meanfield_repeats = 50;
  std::vector<double> hist_deltas{-0.2, 0.0, 0.2};
  double hist_g_factor = kHistogramThresholdFactor;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

enum class ConfigMode { kStrict, kLenient };

struct ParsedConfig {
  RunConfig config;
  std::vector<std::string> warnings;  // ignored keys in lenient mode
};

// Default axes used when a config has no grid section.
SweepGrid default_sweep_grid();              // 61 deltas x 61 G in [0.4, 0.8]
std::vector<double> default_curve_deltas();  // 121 deltas in [-0.3, 0.3]

// Parses JSON text. base_dir resolves a relative graph.csv path. Every
// failure is a ConfigError naming the offending field (or the line and
// column for syntax errors).
ParsedConfig parse_config_text(const std::string& text,
                               const std::filesystem::path& base_dir = {},
                               ConfigMode mode = ConfigMode::kStrict);
ParsedConfig parse_config(const std::filesystem::path& path,
                          ConfigMode mode = ConfigMode::kStrict);

// Canonical JSON form: every section written out, axes as explicit lists.
nlohmann::json config_to_json(const RunConfig& config);
std::string write_config(const RunConfig& config);

CouplingMatrix load_graph(const RunConfig& config);

}  // namespace kpo
