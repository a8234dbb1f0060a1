#include "kpo/commands.hpp"

#include <cmath>
#include <numbers>

#include "kpo/errors.hpp"
#include "kpo/meanfield.hpp"
#include "kpo/rng.hpp"

namespace kpo {

using nlohmann::json;

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const InvalidArgument&) {
    return kExitConfig;
  } catch (const SizeGuardError&) {
    return kExitGuard;
  } catch (const NumericalError&) {
    return kExitNumerical;
  } catch (const BelowThresholdError&) {
    return kExitNumerical;
  } catch (...) {
    return kExitFailure;
  }
}

std::string fingerprint(const std::string& command, const RunConfig& config) {
  // Where the files go is not a parameter of the run.
  json j = config_to_json(config);
  j.erase("output_dir");
  return "kpo " + command + " master_seed=" +
         std::to_string(config.master_seed) + " config=" + j.dump();
}

CsvTable spectrum_table(const IsingSpectrum& spectrum) {
  CsvTable t({"energy", "degeneracy"});
  for (const auto& l : spectrum.levels)
    t.add_row(std::vector<std::string>{format_number(l.energy),
                                       std::to_string(l.degeneracy)});
  return t;
}

CsvTable threshold_curve_table(const std::vector<ThresholdCurvePoint>& curve) {
  CsvTable t({"delta", "energy", "g_th", "degenerate"});
  for (const auto& p : curve)
    t.add_row(std::vector<std::string>{format_number(p.delta),
                                       format_number(p.energy),
                                       format_number(p.g_th),
                                       p.degenerate ? "1" : "0"});
  return t;
}

CsvTable trajectory_table(const TrajectoryRecord& record) {
  const int n = record.final.size();
  std::vector<std::string> header{"time"};
  for (int j = 1; j <= n; ++j) header.push_back("X_" + std::to_string(j));
  for (int j = 1; j <= n; ++j) header.push_back("Y_" + std::to_string(j));
  CsvTable t(header);
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    std::vector<double> row{record.times[i]};
    const AmplitudeState& s = record.states[i];
    for (int j = 0; j < n; ++j) row.push_back(s[j].real());
    for (int j = 0; j < n; ++j) row.push_back(s[j].imag());
    t.add_row(row);
  }
  return t;
}

CsvTable sweep_long_table(const SweepResult& r) {
  CsvTable t({"delta", "g", "mean_energy", "n_ok", "masked"});
  for (std::size_t ig = 0; ig < r.grid.g_count(); ++ig)
    for (std::size_t id = 0; id < r.grid.deltas.size(); ++id) {
      const std::size_t c = r.index(ig, id);
      t.add_row(std::vector<std::string>{
          format_number(r.grid.deltas[id]), format_number(r.g[c]),
          format_number(r.mean_energy[c]), std::to_string(r.n_ok[c]),
          r.masked[c] ? "1" : "0"});
    }
  return t;
}

CsvTable sweep_matrix_table(const SweepResult& r) {
  std::vector<std::string> header{r.grid.relative() ? "g_relative" : "g"};
  for (double d : r.grid.deltas) header.push_back(format_number(d));
  CsvTable t(header);
  for (std::size_t ig = 0; ig < r.grid.g_count(); ++ig) {
    std::vector<double> row{r.grid.relative() ? r.grid.g_relative[ig]
                                              : r.grid.gs[ig]};
    for (std::size_t id = 0; id < r.grid.deltas.size(); ++id)
      row.push_back(r.mean_energy[r.index(ig, id)]);
    t.add_row(row);
  }
  return t;
}

CsvTable histogram_table(const EnergyHistogram& h) {
  CsvTable t({"energy", "probability", "count"});
  for (std::size_t i = 0; i < h.support.size(); ++i)
    t.add_row(std::vector<std::string>{format_number(h.support[i]),
                                       format_number(h.mass[i]),
                                       std::to_string(h.counts[i])});
  return t;
}

json to_json(const ThresholdReport& report) {
  json states = json::array();
  for (const auto& s : report.selected_states) states.push_back(s.spins());
  return {{"g_th", report.g_th},
          {"z_min", report.z_min},
          {"selected_states", states},
          {"selected_energy", report.selected_energy},
          {"degenerate", report.degenerate}};
}

json histogram_metadata(const HistogramPanel& panel, const RunConfig& config) {
  json failed = json::array();
  for (const auto& f : panel.run.failed)
    failed.push_back({{"repeat", f.repeat}, {"reason", f.reason}});
  const SdeConfig& sde = config.sde;
  return {{"params",
           {{"delta", panel.delta},
            {"g", panel.g},
            {"u", config.params.u},
            {"gamma", config.params.gamma}}},
          {"g_th", panel.g_th},
          {"g_factor", config.hist_g_factor},
          {"master_seed", config.master_seed},
          {"panel_seed", panel.master_seed},
          {"total_samples", panel.run.histogram.total_samples},
          {"discarded", panel.run.discarded},
          {"failed_repeats", failed},
          {"sde",
           {{"dt", sde.dt},
            {"t_final", sde.t_final},
            {"sample_interval", sde.sample_interval},
            {"n_repeats", sde.n_repeats},
            {"burn_in", sde.burn_in},
            {"noise_scale", sde.noise_scale},
            {"initial_scale", sde.initial_scale}}}};
}

namespace {

std::filesystem::path emit(const CommandOptions& opts, const std::string& name,
                           CsvTable table, const std::string& banner) {
  table.add_comment(banner);
  const auto path = opts.out_dir / name;
  write_file_atomic(path, table.str());
  return path;
}

std::filesystem::path emit_json(const CommandOptions& opts,
                                const std::string& name, const json& j) {
  const auto path = opts.out_dir / name;
  write_file_atomic(path, j.dump(2) + "\n");
  return path;
}

std::filesystem::path emit_coupling(const CommandOptions& opts,
                                    const CouplingMatrix& J) {
  const auto path = opts.out_dir / "coupling.csv";
  write_file_atomic(path, coupling_to_csv(J));
  return path;
}

}  // namespace

WrittenFiles cmd_spectrum(const RunConfig& config, const CommandOptions& opts) {
  const CouplingMatrix J = load_graph(config);
  const IsingSpectrum spectrum = enumerate_spectrum(J);
  return {emit_coupling(opts, J),
          emit(opts, "spectrum.csv", spectrum_table(spectrum),
               fingerprint("spectrum", config))};
}

WrittenFiles cmd_single_kpo(const RunConfig& config,
                            const CommandOptions& opts) {
  const FixedPoint fp = single_kpo_fixed_point(config.params);
  const AmplitudeState a0 = random_initial(
      1, kDefaultInitialScale,
      derive_seed(config.master_seed, {tag(Stream::kInitial)}));
  const TrajectoryRecord rec = integrate(a0, config.params, config.integrator);
  const Complex final = rec.final[0];
  // Fold the numerical phase onto the closed-form branch (phi ~ phi + pi).
  double phase = std::arg(final);
  if (phase < 0.0) phase += std::numbers::pi;
  const json summary = {{"closed_form", {{"R", fp.radius}, {"phi", fp.phase}}},
                        {"integrated",
                         {{"R", std::abs(final)},
                          {"phi", phase},
                          {"converged", rec.converged},
                          {"final_time", rec.final_time}}},
                        {"master_seed", config.master_seed}};
  return {emit(opts, "single_kpo_trajectory.csv", trajectory_table(rec),
               fingerprint("single-kpo", config)),
          emit_json(opts, "single_kpo.json", summary)};
}

WrittenFiles cmd_threshold_curve(const RunConfig& config,
                                 const CommandOptions& opts) {
  const CouplingMatrix J = load_graph(config);
  const std::vector<double> deltas =
      config.grid ? config.grid->deltas : default_curve_deltas();
  const auto curve = threshold_energy_curve(J, deltas, config.params.gamma);
  WrittenFiles files{emit_coupling(opts, J),
                     emit(opts, "threshold_curve.csv",
                          threshold_curve_table(curve),
                          fingerprint("threshold-curve", config))};
  try {
    const ThresholdReport report =
        state_at_threshold(J, config.params.delta, config.params.gamma);
    json j = to_json(report);
    j["delta"] = config.params.delta;
    files.push_back(emit_json(opts, "threshold_report.json", j));
  } catch (const AmbiguousSignError& e) {
    files.push_back(emit_json(
        opts, "threshold_report.json",
        {{"delta", config.params.delta}, {"ambiguous", true}, {"error", e.what()}}));
  }
  return files;
}

WrittenFiles cmd_meanfield_sweep(const RunConfig& config,
                                 const CommandOptions& opts) {
  const CouplingMatrix J = load_graph(config);
  const SweepGrid grid = config.grid.value_or(default_sweep_grid());
  const SweepResult r =
      meanfield_sweep(J, grid, config.params, config.meanfield_repeats,
                      config.master_seed, config.integrator, opts.threads);
  const std::string banner = fingerprint("meanfield-sweep", config);
  return {emit_coupling(opts, J),
          emit(opts, "meanfield_sweep_long.csv", sweep_long_table(r), banner),
          emit(opts, "meanfield_sweep_matrix.csv", sweep_matrix_table(r),
               banner)};
}

WrittenFiles cmd_twa_sweep(const RunConfig& config, const CommandOptions& opts) {
  const CouplingMatrix J = load_graph(config);
  const SweepGrid grid = config.grid.value_or(default_sweep_grid());
  const SweepResult r = twa_sweep(J, grid, config.params, config.sde,
                                  config.master_seed, opts.threads);
  const std::string banner = fingerprint("twa-sweep", config);
  return {emit_coupling(opts, J),
          emit(opts, "twa_sweep_long.csv", sweep_long_table(r), banner),
          emit(opts, "twa_sweep_matrix.csv", sweep_matrix_table(r), banner)};
}

WrittenFiles cmd_twa_hist(const RunConfig& config, const CommandOptions& opts) {
  const CouplingMatrix J = load_graph(config);
  const auto panels =
      figure3_histograms(J, config.hist_deltas, config.params, config.sde,
                         config.master_seed, opts.threads, config.hist_g_factor);
  WrittenFiles files{emit_coupling(opts, J)};
  const std::string banner = fingerprint("twa-hist", config);
  for (const auto& panel : panels) {
    const std::string stem = "twa_hist_delta_" + format_number(panel.delta);
    files.push_back(emit(opts, stem + ".csv",
                         histogram_table(panel.run.histogram), banner));
    files.push_back(
        emit_json(opts, stem + ".json", histogram_metadata(panel, config)));
  }
  return files;
}

}  // namespace kpo
