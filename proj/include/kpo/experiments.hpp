#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpo/ising.hpp"
#include "kpo/linear.hpp"
#include "kpo/meanfield.hpp"
#include "kpo/twa.hpp"

namespace kpo {

// (G, delta) grid. Exactly one of gs (absolute pump values) and g_relative
// (multipliers of the delta-dependent threshold G_th(delta)) is non-empty.
struct SweepGrid {
  std::vector<double> deltas;
  std::vector<double> gs;
  std::vector<double> g_relative;

  void validate() const;
  bool relative() const { return !g_relative.empty(); }
  std::size_t g_count() const {
    return relative() ? g_relative.size() : gs.size();
  }
  // Pump value of row ig at delta index id; g_th holds G_th per delta.
  double g_at(std::size_t ig, std::size_t id,
              const std::vector<double>& g_th) const;

  bool operator==(const SweepGrid&) const = default;
};

// `count` points from start to stop inclusive.
std::vector<double> linspace(double start, double stop, int count);

// Row-major cell storage: cell (ig, id) at ig * deltas.size() + id.
struct SweepResult {
  SweepGrid grid;
  std::vector<double> g_th_per_delta;
  std::vector<double> g;            // pump value per cell
  std::vector<double> mean_energy;  // NaN for masked cells
  std::vector<int> n_ok;            // successful repeats (mean-field) or 1/0
  std::vector<int> n_failed;        // non-converged or blown-up repeats
  std::vector<bool> masked;
  int n_repeats = 0;

  std::size_t index(std::size_t ig, std::size_t id) const {
    return ig * grid.deltas.size() + id;
  }
  std::size_t masked_count() const;
};

// A cell is masked when G < G_th(delta) - kMaskSlack.
inline constexpr double kMaskSlack = 1e-12;

// Mean-field (G, delta) map. Each unmasked cell integrates n_repeats
// trajectories from random_initial(n, kDefaultInitialScale,
// derive_seed(master_seed, {kInitial, cell, repeat})), reads out spins from
// converged final states and averages ising_energy. Non-converged repeats are
// counted in n_failed and excluded; a cell with no converged repeat is masked.
SweepResult meanfield_sweep(const CouplingMatrix& J, const SweepGrid& grid,
                            const KpoParams& params_base, int n_repeats,
                            std::uint64_t master_seed,
                            const IntegratorConfig& integrator = {},
                            int threads = 1);

// TWA (G, delta) map: cell mean energy of run_distribution with master seed
// derive_seed(master_seed, {cell}).
SweepResult twa_sweep(const CouplingMatrix& J, const SweepGrid& grid,
                      const KpoParams& params_base, const SdeConfig& cfg,
                      std::uint64_t master_seed, int threads = 1);

inline constexpr double kHistogramThresholdFactor = 1.001;

struct HistogramPanel {
  double delta = 0.0;
  double g_th = 0.0;
  double g = 0.0;
  std::uint64_t master_seed = 0;
  DistributionRun run;
};

// For each delta: G = g_factor * G_th(delta), then run_distribution with
// master seed derive_seed(master_seed, {panel index}).
std::vector<HistogramPanel> figure3_histograms(
    const CouplingMatrix& J, const std::vector<double>& deltas,
    const KpoParams& params_base, const SdeConfig& cfg,
    std::uint64_t master_seed, int threads = 1,
    double g_factor = kHistogramThresholdFactor);

}  // namespace kpo
