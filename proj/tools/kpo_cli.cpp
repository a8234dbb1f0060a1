// kpo: command-line front end for the Kerr parametric oscillator Ising
// selector simulator.
//
//   kpo <subcommand> --config PATH [--seed N] [--out DIR] [--threads N]
//                    [--strict | --lenient]
//
// Exit codes: 0 success, 1 unexpected error, 2 config/usage error,
// 3 numerical failure, 4 size-guard violation.

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "kpo/commands.hpp"
#include "kpo/config.hpp"
#include "kpo/errors.hpp"
#include "kpo/parallel.hpp"

namespace {

using Command = std::function<kpo::WrittenFiles(const kpo::RunConfig&,
                                                const kpo::CommandOptions&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"spectrum", kpo::cmd_spectrum},
      {"single-kpo", kpo::cmd_single_kpo},
      {"threshold-curve", kpo::cmd_threshold_curve},
      {"meanfield-sweep", kpo::cmd_meanfield_sweep},
      {"twa-sweep", kpo::cmd_twa_sweep},
      {"twa-hist", kpo::cmd_twa_hist},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr parametric oscillator Ising selector simulator"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool lenient = false;

  for (const auto& [name, command] : commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--threads", threads,
                    "worker threads; results do not depend on it "
                    "(default: $KPO_THREADS or hardware concurrency)");
    auto* strict_flag = sub->add_flag("--strict", "reject unknown config keys (default)");
    sub->add_flag("--lenient", lenient, "warn about unknown config keys instead")
        ->excludes(strict_flag);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kpo::kExitOk : kpo::kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();
  try {
    kpo::ParsedConfig parsed = kpo::parse_config(
        config_path, lenient ? kpo::ConfigMode::kLenient : kpo::ConfigMode::kStrict);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    kpo::RunConfig& config = parsed.config;
    if (sub->count("--seed")) config.master_seed = seed;
    if (!out_dir.empty()) config.output_dir = out_dir;

    kpo::CommandOptions opts;
    opts.out_dir = config.output_dir;
    opts.threads = kpo::resolve_threads(threads);
    for (const auto& path : commands().at(name)(config, opts))
      std::cout << path.string() << "\n";
    return kpo::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "kpo " << name << ": " << e.what() << "\n";
    return kpo::exit_code_for_current_exception();
  }
}
