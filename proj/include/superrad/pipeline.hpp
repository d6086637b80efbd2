#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "superrad/config.hpp"
#include "superrad/decay.hpp"
#include "superrad/dicke.hpp"
#include "superrad/electron.hpp"
#include "superrad/error.hpp"
#include "superrad/fit.hpp"
#include "superrad/scattering.hpp"

namespace superrad {

struct RunOutcome {
  RunConfig config;
  Coupling coupling;
  ElectronState electron;
  AtomicDensityMatrix rho_post;
  std::vector<double> excitation_trajectory;  // empty when interaction is off
  double excitation = 0.0;                    // of rho_post, units of hbar omega0
  IntensityTrace trace;
  Peak peak;
};

inline Coupling resolve_coupling(const RunConfig& config) {
  if (config.g) return {*config.g, false};
  return coupling_from_physical(*config.physical);
}

// Electron comb -> moments -> scattering matrix -> N_e interactions -> decay.
inline RunOutcome simulate(const RunConfig& config) {
  config.check();
  const DickeSpace space(config.n_atoms);
  const Coupling coupling = resolve_coupling(config);
  ElectronState electron = build_comb(config.sigma, config.phi, config.cutoff);

  const AtomicDensityMatrix rho0 = config.initial_state == InitialState::inverted
                                       ? dicke_state(space, space.n_atoms())
                                       : ground_state(space);
  InteractionResult interaction{rho0, {}};
  if (config.interaction) {
    const MomentTable table = moments(electron, 2 * space.n_atoms());
    const ScatteringMatrix scattering = scattering_matrix(space, coupling.g);
    interaction = interact_many(rho0, scattering, table, config.n_electrons);
  }

  const DecayParams params{config.gamma, config.hbar_omega0, config.decay_mode};
  IntensityTrace trace = evolve(interaction.rho, params, config.t_end, config.dt_max);
  const Peak peak = peak_intensity(trace);
  const double excitation = excitation_energy(interaction.rho);

  RunOutcome outcome{config,
                     coupling,
                     std::move(electron),
                     std::move(interaction.rho),
                     std::move(interaction.excitation_trajectory),
                     excitation,
                     std::move(trace),
                     peak};
  return outcome;
}

inline Metadata run_metadata(const RunOutcome& run) {
  const auto& c = run.config;
  return {{"n_atoms", std::to_string(c.n_atoms)},
          {"n_electrons", std::to_string(c.interaction ? c.n_electrons : 0)},
          {"sigma", format_double(c.sigma)},
          {"phi", format_double(run.electron.phi())},
          {"g_re", format_double(run.coupling.g.real())},
          {"g_im", format_double(run.coupling.g.imag())},
          {"gamma", format_double(c.gamma)},
          {"mode", to_string(c.decay_mode)}};
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

inline void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace detail

// intensity.csv, rho_post.csv and spectrum.csv, each headed by the run
// metadata.
inline void write_run_files(const RunOutcome& run, const std::filesystem::path& dir) {
  detail::ensure_directory(dir);
  const Metadata metadata = run_metadata(run);

  IntensityTrace trace = run.trace;
  trace.metadata = metadata;
  const auto intensity_path = dir / "intensity.csv";
  auto intensity = detail::open_output(intensity_path);
  write_intensity_csv(intensity, trace);
  detail::close_output(intensity, intensity_path);

  const auto rho_path = dir / "rho_post.csv";
  auto rho = detail::open_output(rho_path);
  write_density_csv(rho, run.rho_post, metadata);
  detail::close_output(rho, rho_path);

  const auto spectrum_path = dir / "spectrum.csv";
  auto spectrum = detail::open_output(spectrum_path);
  write_spectrum_csv(spectrum, run.electron, metadata);
  detail::close_output(spectrum, spectrum_path);
}

inline std::string summary_line(const RunOutcome& run) {
  std::ostringstream os;
  os << "n_atoms=" << run.config.n_atoms
     << " n_electrons=" << (run.config.interaction ? run.config.n_electrons : 0)
     << " sigma=" << format_double(run.config.sigma)
     << " g=" << format_double(run.coupling.g.real()) << (run.coupling.g.imag() < 0 ? "" : "+")
     << format_double(run.coupling.g.imag()) << "i"
     << " mode=" << to_string(run.config.decay_mode)
     << " excitation=" << format_double(run.excitation)
     << " t_peak=" << format_double(run.peak.time)
     << " peak_intensity=" << format_double(run.peak.intensity)
     << " total_emitted=" << format_double(run.trace.total_emitted);
  if (run.coupling.underflow) os << " coupling_underflow=1";
  return os.str();
}

enum class SweepAxis { n_atoms, n_electrons, sigma };
enum class Observable { peak_intensity, excitation_energy, total_energy };

inline const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::n_atoms:
      return "n_atoms";
    case SweepAxis::n_electrons:
      return "n_electrons";
    case SweepAxis::sigma:
      return "sigma";
  }
  return "unknown";
}

inline const char* to_string(Observable observable) {
  switch (observable) {
    case Observable::peak_intensity:
      return "peak_intensity";
    case Observable::excitation_energy:
      return "excitation_energy";
    case Observable::total_energy:
      return "total_energy";
  }
  return "unknown";
}

inline std::optional<SweepAxis> parse_axis(std::string_view text) {
  if (text == "n_atoms") return SweepAxis::n_atoms;
  if (text == "n_electrons") return SweepAxis::n_electrons;
  if (text == "sigma") return SweepAxis::sigma;
  return std::nullopt;
}

inline std::optional<Observable> parse_observable(std::string_view text) {
  if (text == "peak_intensity") return Observable::peak_intensity;
  if (text == "excitation_energy") return Observable::excitation_energy;
  if (text == "total_energy") return Observable::total_energy;
  return std::nullopt;
}

// Comma-separated numbers; integer ranges may be written a..b.
inline std::vector<double> parse_values(std::string_view text) {
  std::vector<double> values;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = detail::trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (token.empty()) throw ConfigError("empty entry in value list");
    if (const auto dots = token.find(".."); dots != std::string_view::npos) {
      const int first = detail::parse_int("values", detail::trim(token.substr(0, dots)));
      const int last = detail::parse_int("values", detail::trim(token.substr(dots + 2)));
      if (last < first) throw ConfigError("descending range in value list");
      for (int v = first; v <= last; ++v) values.push_back(v);
    } else {
      values.push_back(detail::parse_double("values", token));
    }
  }
  return values;
}

struct SweepPoint {
  double axis_value = 0.0;
  double peak_intensity = 0.0;
  double total_energy = 0.0;
  double excitation_energy = 0.0;
};

inline double observe(const SweepPoint& point, Observable observable) {
  switch (observable) {
    case Observable::peak_intensity:
      return point.peak_intensity;
    case Observable::excitation_energy:
      return point.excitation_energy;
    case Observable::total_energy:
      return point.total_energy;
  }
  return 0.0;
}

struct SweepResult {
  SweepAxis axis;
  Observable observable;
  std::vector<SweepPoint> points;  // ascending axis value
  PowerLawFit fit;
  double fit_min = 0.0;
  double fit_max = 0.0;
};

inline RunConfig config_for_point(RunConfig config, SweepAxis axis, double value) {
  const auto as_count = [&](const char* name) {
    if (value != std::floor(value) || value < 1.0 || value > 1e6) {
      throw ConfigError(std::string(name) + " sweep values must be positive integers");
    }
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::n_atoms:
      config.n_atoms = as_count("n_atoms");
      break;
    case SweepAxis::n_electrons:
      config.n_electrons = as_count("n_electrons");
      break;
    case SweepAxis::sigma:
      config.sigma = value;
      break;
  }
  config.check();
  return config;
}

inline std::string point_directory_name(SweepAxis axis, double value) {
  return std::string(to_string(axis)) + "_" + format_double(value);
}

// One full pipeline per axis value, run on up to config.workers threads.
// Results are ordered by axis value regardless of completion order. When
// out_dir is set each point's files go to out_dir/points/<axis>_<value>/.
inline SweepResult run_sweep(const RunConfig& config, SweepAxis axis,
                             std::vector<double> values, Observable observable,
                             const std::optional<std::filesystem::path>& out_dir = std::nullopt) {
  config.check();
  std::sort(values.begin(), values.end());
  if (values.size() < 3) throw ConfigError("a sweep needs at least 3 axis values");
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw ConfigError("duplicate sweep axis value");
  }

  std::vector<RunConfig> configs;
  configs.reserve(values.size());
  for (double v : values) configs.push_back(config_for_point(config, axis, v));

  SweepResult result{axis, observable, std::vector<SweepPoint>(values.size()), {}, 0.0, 0.0};
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        const RunOutcome run = simulate(configs[i]);
        if (out_dir) write_run_files(run, *out_dir / "points" / point_directory_name(axis, values[i]));
        result.points[i] = {values[i], run.peak.intensity, run.trace.total_emitted, run.excitation};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(config.workers), values.size());
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  result.fit_min = config.fit_min.value_or(values.front());
  result.fit_max = config.fit_max.value_or(values.back());
  std::vector<double> xs, ys;
  for (const auto& point : result.points) {
    if (point.axis_value >= result.fit_min && point.axis_value <= result.fit_max) {
      xs.push_back(point.axis_value);
      ys.push_back(observe(point, observable));
    }
  }
  if (xs.size() < 3) throw ConfigError("fit range holds fewer than 3 sweep points");
  if (xs.front() <= 0.0) throw ConfigError("fit range includes a non-positive axis value; set fit_min");
  result.fit = fit_power_law(xs, ys);
  return result;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& sweep, Metadata metadata = {}) {
  metadata.emplace_back("axis", to_string(sweep.axis));
  metadata.emplace_back("observable", to_string(sweep.observable));
  metadata.emplace_back("fit_min", format_double(sweep.fit_min));
  metadata.emplace_back("fit_max", format_double(sweep.fit_max));
  metadata.emplace_back("exponent", format_double(sweep.fit.exponent));
  metadata.emplace_back("exponent_stderr", format_double(sweep.fit.standard_error));
  write_metadata(os, metadata);
  os << "axis_value,peak_intensity,total_energy,excitation_energy\n";
  for (const auto& p : sweep.points) {
    os << format_double(p.axis_value) << ',' << format_double(p.peak_intensity) << ','
       << format_double(p.total_energy) << ',' << format_double(p.excitation_energy) << '\n';
  }
}

inline void write_sweep_file(const SweepResult& sweep, const RunConfig& base,
                             const std::filesystem::path& dir) {
  detail::ensure_directory(dir);
  Metadata metadata = {{"n_atoms", std::to_string(base.n_atoms)},
                       {"n_electrons", std::to_string(base.n_electrons)},
                       {"sigma", format_double(base.sigma)},
                       {"phi", format_double(base.phi)},
                       {"gamma", format_double(base.gamma)},
                       {"mode", to_string(base.decay_mode)}};
  if (base.g) {
    metadata.insert(metadata.begin() + 4, {"g_im", format_double(base.g->imag())});
    metadata.insert(metadata.begin() + 4, {"g_re", format_double(base.g->real())});
  }
  const auto path = dir / "sweep.csv";
  auto out = detail::open_output(path);
  write_sweep_csv(out, sweep, std::move(metadata));
  detail::close_output(out, path);
}

}  // namespace superrad
