#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "superrad/superrad.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Run configuration file (key = value)");
  cmd->add_option("--out", opts.out_dir, "Output directory (overrides output_dir)");
  cmd->add_option("--set", opts.overrides, "Override a config key, key=value (repeatable)");
}

superrad::RunConfig load(const CommonOptions& opts) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& text : opts.overrides) overrides.push_back(superrad::parse_override(text));
  if (opts.out_dir) overrides.emplace_back("output_dir", *opts.out_dir);
  std::optional<std::filesystem::path> path;
  if (opts.config_path) path = *opts.config_path;
  return superrad::load_config(path, overrides);
}

int run_simulate(const CommonOptions& opts) {
  const auto config = load(opts);
  const auto run = superrad::simulate(config);
  superrad::write_run_files(run, config.output_dir);
  std::cout << superrad::summary_line(run) << '\n';
  return 0;
}

int run_sweep(const CommonOptions& opts, const std::string& axis_text,
              const std::string& values_text, const std::optional<int>& workers,
              const std::string& observable_text) {
  auto config = load(opts);
  if (workers) {
    config.workers = *workers;
    config.check();
  }
  const auto axis = superrad::parse_axis(axis_text);
  if (!axis) throw superrad::ConfigError("unknown axis '" + axis_text + "'");
  const auto observable = superrad::parse_observable(observable_text);
  if (!observable) throw superrad::ConfigError("unknown observable '" + observable_text + "'");
  const auto values = superrad::parse_values(values_text);

  const std::filesystem::path out = config.output_dir;
  const auto sweep = superrad::run_sweep(config, *axis, values, *observable, out);
  superrad::write_sweep_file(sweep, config, out);
  for (const auto& p : sweep.points) {
    std::cout << superrad::to_string(*axis) << '=' << superrad::format_double(p.axis_value)
              << " peak_intensity=" << superrad::format_double(p.peak_intensity)
              << " total_energy=" << superrad::format_double(p.total_energy)
              << " excitation_energy=" << superrad::format_double(p.excitation_energy) << '\n';
  }
  std::cout << "exponent(" << superrad::to_string(*observable)
            << ")=" << superrad::format_double(sweep.fit.exponent)
            << " stderr=" << superrad::format_double(sweep.fit.standard_error) << '\n';
  return 0;
}

int run_validate() {
  const auto results = superrad::validation::validate_suite();
  superrad::validation::print_report(std::cout, results);
  for (const auto& r : results) {
    if (!r.pass) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-electron driven Dicke superradiance simulator"};
  app.require_subcommand(1);

  CommonOptions simulate_opts;
  auto* simulate = app.add_subcommand("simulate", "Run one electron-train + decay simulation");
  add_common(simulate, simulate_opts);

  CommonOptions sweep_opts;
  std::string axis;
  std::string values;
  std::optional<int> workers;
  std::string observable = "peak_intensity";
  auto* sweep = app.add_subcommand("sweep", "Sweep N_a, N_e or sigma and fit a power law");
  add_common(sweep, sweep_opts);
  sweep->add_option("--axis", axis, "n_atoms | n_electrons | sigma")->required();
  sweep->add_option("--values", values, "Comma list, integer ranges as a..b")->required();
  sweep->add_option("--workers", workers, "Concurrent sweep points");
  sweep->add_option("--observable", observable,
                    "peak_intensity | excitation_energy | total_energy");

  auto* validate = app.add_subcommand("validate", "Run the invariant and oracle batteries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(simulate_opts);
    if (sweep->parsed()) return run_sweep(sweep_opts, axis, values, workers, observable);
    if (validate->parsed()) return run_validate();
  } catch (const superrad::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const superrad::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const superrad::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
