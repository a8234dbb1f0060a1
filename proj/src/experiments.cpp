#include "kpo/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "kpo/errors.hpp"
#include "kpo/parallel.hpp"

namespace kpo {

namespace {

void require_increasing(const std::vector<double>& axis, const char* name) {
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (!(axis[i] > axis[i - 1]))
      throw InvalidArgument(std::string("grid.") + name +
                            " must be strictly increasing");
}

std::vector<double> thresholds(const CouplingMatrix& J,
                               const std::vector<double>& deltas,
                               const KpoParams& base) {
  std::vector<double> out;
  out.reserve(deltas.size());
  for (double d : deltas) {
    KpoParams p = base;
    p.delta = d;
    out.push_back(threshold(p, J));
  }
  return out;
}

SweepResult prepare(const CouplingMatrix& J, const SweepGrid& grid,
                    const KpoParams& base, int n_repeats) {
  grid.validate();
  base.validate();
  SweepResult r;
  r.grid = grid;
  r.n_repeats = n_repeats;
  r.g_th_per_delta = thresholds(J, grid.deltas, base);
  const std::size_t cells = grid.g_count() * grid.deltas.size();
  r.g.resize(cells);
  r.mean_energy.assign(cells, std::nan(""));
  r.n_ok.assign(cells, 0);
  r.n_failed.assign(cells, 0);
  r.masked.assign(cells, false);
  for (std::size_t ig = 0; ig < grid.g_count(); ++ig)
    for (std::size_t id = 0; id < grid.deltas.size(); ++id) {
      const std::size_t c = r.index(ig, id);
      r.g[c] = grid.g_at(ig, id, r.g_th_per_delta);
      r.masked[c] = r.g[c] < r.g_th_per_delta[id] - kMaskSlack;
    }
  return r;
}

}  // namespace

void SweepGrid::validate() const {
  if (deltas.empty()) throw InvalidArgument("grid.deltas must be non-empty");
  if (gs.empty() == g_relative.empty())
    throw InvalidArgument("grid needs exactly one of g and g_relative");
  require_increasing(deltas, "deltas");
  require_increasing(gs, "g");
  require_increasing(g_relative, "g_relative");
  for (double g : gs)
    if (!(g >= 0.0)) throw InvalidArgument("grid.g values must be >= 0");
  for (double m : g_relative)
    if (!(m >= 0.0))
      throw InvalidArgument("grid.g_relative values must be >= 0");
}

double SweepGrid::g_at(std::size_t ig, std::size_t id,
                       const std::vector<double>& g_th) const {
  return relative() ? g_relative[ig] * g_th[id] : gs[ig];
}

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw InvalidArgument("linspace: count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> out(count);
  // Weighted form keeps symmetric ranges symmetric and hits both ends exactly.
  const double m = count - 1;
  for (int i = 0; i < count; ++i) out[i] = (start * (m - i) + stop * i) / m;
  return out;
}

std::size_t SweepResult::masked_count() const {
  return static_cast<std::size_t>(std::count(masked.begin(), masked.end(), true));
}

SweepResult meanfield_sweep(const CouplingMatrix& J, const SweepGrid& grid,
                            const KpoParams& params_base, int n_repeats,
                            std::uint64_t master_seed,
                            const IntegratorConfig& integrator, int threads) {
  if (n_repeats < 1)
    throw InvalidArgument("meanfield_sweep: n_repeats must be >= 1");
  integrator.validate();
  SweepResult r = prepare(J, grid, params_base, n_repeats);
  IntegratorConfig cfg = integrator;
  cfg.record_stride = std::max(cfg.record_stride, 1 << 30);

  std::vector<std::size_t> active;
  for (std::size_t c = 0; c < r.g.size(); ++c)
    if (!r.masked[c]) active.push_back(c);

  // energy per (active cell, repeat); NaN marks a failed repeat
  const auto reps = static_cast<std::size_t>(n_repeats);
  std::vector<double> energy(active.size() * reps, std::nan(""));
  const std::size_t n_delta = grid.deltas.size();
  parallel_for(energy.size(), threads, [&](std::size_t task) {
    const std::size_t c = active[task / reps];
    const std::size_t rep = task % reps;
    KpoParams p = params_base;
    p.delta = grid.deltas[c % n_delta];
    p.g = r.g[c];
    const AmplitudeState a0 = random_initial(
        J.size(), kDefaultInitialScale,
        derive_seed(master_seed, {tag(Stream::kInitial), c, rep}));
    try {
      const TrajectoryRecord rec = integrate(a0, p, J, cfg);
      if (!rec.converged) return;
      if (auto s = try_readout_spins(rec.final)) energy[task] = ising_energy(J, *s);
    } catch (const NumericalError&) {
    }
  });

  for (std::size_t a = 0; a < active.size(); ++a) {
    const std::size_t c = active[a];
    double sum = 0.0;
    int ok = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const double e = energy[a * reps + rep];
      if (std::isnan(e)) continue;
      sum += e;
      ++ok;
    }
    r.n_ok[c] = ok;
    r.n_failed[c] = n_repeats - ok;
    if (ok == 0)
      r.masked[c] = true;
    else
      r.mean_energy[c] = sum / ok;
  }
  return r;
}

SweepResult twa_sweep(const CouplingMatrix& J, const SweepGrid& grid,
                      const KpoParams& params_base, const SdeConfig& cfg,
                      std::uint64_t master_seed, int threads) {
  cfg.validate();
  SweepResult r = prepare(J, grid, params_base, cfg.n_repeats);
  const std::size_t n_delta = grid.deltas.size();
  parallel_for(r.g.size(), threads, [&](std::size_t c) {
    if (r.masked[c]) return;
    KpoParams p = params_base;
    p.delta = grid.deltas[c % n_delta];
    p.g = r.g[c];
    try {
      const DistributionRun run =
          run_distribution(J, p, cfg, derive_seed(master_seed, {c}), 1);
      r.mean_energy[c] = run.histogram.mean_energy();
      r.n_failed[c] = static_cast<int>(run.failed.size());
      r.n_ok[c] = cfg.n_repeats - r.n_failed[c];
    } catch (const NumericalError&) {
      r.n_failed[c] = cfg.n_repeats;
    }
  });
  for (std::size_t c = 0; c < r.g.size(); ++c)
    if (!r.masked[c] && r.n_ok[c] == 0) r.masked[c] = true;
  return r;
}

std::vector<HistogramPanel> figure3_histograms(
    const CouplingMatrix& J, const std::vector<double>& deltas,
    const KpoParams& params_base, const SdeConfig& cfg,
    std::uint64_t master_seed, int threads, double g_factor) {
  if (deltas.empty())
    throw InvalidArgument("figure3_histograms: no detunings given");
  std::vector<HistogramPanel> panels;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    HistogramPanel panel;
    panel.delta = deltas[i];
    KpoParams p = params_base;
    p.delta = deltas[i];
    panel.g_th = threshold(p, J);
    panel.g = g_factor * panel.g_th;
    p.g = panel.g;
    panel.master_seed = derive_seed(master_seed, {i});
    panel.run = run_distribution(J, p, cfg, panel.master_seed, threads);
    panels.push_back(std::move(panel));
  }
  return panels;
}

}  // namespace kpo
