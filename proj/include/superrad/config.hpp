#pragma once

#include <charconv>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "superrad/decay.hpp"
#include "superrad/error.hpp"
#include "superrad/scattering.hpp"

// Run configuration files are flat `key = value` lines. Blank lines and
// anything after `#` are ignored; `[section]` headers may be used to group
// keys but do not namespace them, so every key appears at most once per
// file. Recognised keys:
//
//   n_atoms, n_electrons           positive integers
//   g_re, g_im                     dimensionless coupling (either or both)
//   d_perp, d_par, omega0, v,      physical coupling parameters (SI); mutually
//   r_perp                         exclusive with g_re/g_im
//   sigma, phi, cutoff             comb electron
//   decay_mode                     collective | independent
//   gamma, hbar_omega0             decay rate and photon energy
//   t_end, dt_max                  decay integration window and max step
//   initial_state                  ground | inverted
//   interaction                    on | off (off skips the electrons)
//   output_dir, workers            output directory, sweep worker threads
//   fit_min, fit_max               sweep fit sub-range (axis values, inclusive)
namespace superrad {

enum class InitialState { ground, inverted };

struct RunConfig {
  int n_atoms = 15;
  int n_electrons = 1;
  std::optional<std::complex<double>> g;
  std::optional<PhysicalParams> physical;
  double sigma = 0.0;
  double phi = 0.0;
  int cutoff = 8;
  DecayMode decay_mode = DecayMode::collective;
  double gamma = 1.0;
  double hbar_omega0 = 1.0;
  double t_end = 2.0;
  double dt_max = 1e-3;
  InitialState initial_state = InitialState::ground;
  bool interaction = true;
  std::string output_dir = "out";
  int workers = 1;
  std::optional<double> fit_min;
  std::optional<double> fit_max;

  void check() const {
    if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
    if (n_electrons < 1) throw ConfigError("n_electrons must be >= 1");
    if (g.has_value() == physical.has_value()) {
      throw ConfigError("exactly one of g_re/g_im or the physical parameters is required");
    }
    if (physical) {
      try {
        physical->check();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 0");
    if (!std::isfinite(phi)) throw ConfigError("phi must be finite");
    if (cutoff < 1) throw ConfigError("cutoff must be >= 1");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be > 0");
    if (!(hbar_omega0 > 0.0) || !std::isfinite(hbar_omega0))
      throw ConfigError("hbar_omega0 must be > 0");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be > 0");
    if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw ConfigError("dt_max must be > 0");
    if (workers < 1) throw ConfigError("workers must be >= 1");
  }
};

// Raw key -> value table, before type conversion.
using ConfigEntries = std::map<std::string, std::string>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("key '" + key + "': expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

inline int parse_int(const std::string& key, std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

inline bool parse_switch(const std::string& key, std::string_view text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ConfigError("key '" + key + "': expected on/off, got '" + std::string(text) + "'");
}

inline constexpr std::string_view kCouplingKeys[] = {"g_re", "g_im"};
inline constexpr std::string_view kPhysicalKeys[] = {"d_perp", "d_par", "omega0", "v", "r_perp"};

inline bool is_coupling_key(std::string_view key) {
  for (auto k : kCouplingKeys)
    if (k == key) return true;
  return false;
}

inline bool is_physical_key(std::string_view key) {
  for (auto k : kPhysicalKeys)
    if (k == key) return true;
  return false;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

inline const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    t["n_atoms"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.n_atoms = parse_int(k, v); };
    t["n_electrons"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.n_electrons = parse_int(k, v); };
    t["g_re"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      c.g = std::complex<double>(parse_double(k, v), c.g.value_or(0.0).imag());
    };
    t["g_im"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      c.g = std::complex<double>(c.g.value_or(0.0).real(), parse_double(k, v));
    };
    const auto physical = [](double PhysicalParams::*field) {
      return [field](RunConfig& c, const std::string& k, std::string_view v) {
        if (!c.physical) c.physical = PhysicalParams{};
        (*c.physical).*field = parse_double(k, v);
      };
    };
    t["d_perp"] = physical(&PhysicalParams::d_perp);
    t["d_par"] = physical(&PhysicalParams::d_par);
    t["omega0"] = physical(&PhysicalParams::omega0);
    t["v"] = physical(&PhysicalParams::v);
    t["r_perp"] = physical(&PhysicalParams::r_perp);
    t["sigma"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.sigma = parse_double(k, v); };
    t["phi"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.phi = parse_double(k, v); };
    t["cutoff"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.cutoff = parse_int(k, v); };
    t["decay_mode"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      const auto mode = parse_decay_mode(v);
      if (!mode) throw ConfigError("key '" + k + "': expected collective or independent");
      c.decay_mode = *mode;
    };
    t["gamma"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.gamma = parse_double(k, v); };
    t["hbar_omega0"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.hbar_omega0 = parse_double(k, v); };
    t["t_end"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.t_end = parse_double(k, v); };
    t["dt_max"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.dt_max = parse_double(k, v); };
    t["initial_state"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      if (v == "ground") {
        c.initial_state = InitialState::ground;
      } else if (v == "inverted") {
        c.initial_state = InitialState::inverted;
      } else {
        throw ConfigError("key '" + k + "': expected ground or inverted");
      }
    };
    t["interaction"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.interaction = parse_switch(k, v); };
    t["output_dir"] = [](RunConfig& c, const std::string&, std::string_view v) { c.output_dir = std::string(v); };
    t["workers"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.workers = parse_int(k, v); };
    t["fit_min"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.fit_min = parse_double(k, v); };
    t["fit_max"] = [](RunConfig& c, const std::string& k, std::string_view v) { c.fit_max = parse_double(k, v); };
    return t;
  }();
  return table;
}

}  // namespace detail

inline ConfigEntries parse_config_entries(std::istream& in) {
  ConfigEntries entries;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError("line " + std::to_string(line_number) + ": unterminated section header");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected key = value");
    }
    std::string key(detail::trim(text.substr(0, eq)));
    const std::string value(detail::trim(text.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    if (!detail::setters().contains(key)) {
      throw ConfigError("line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
    if (!entries.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_number) + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

// Overrides replace file entries. Setting either coupling form drops the
// other form coming from the file.
inline void apply_overrides(ConfigEntries& entries,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  bool coupling = false;
  bool physical = false;
  for (const auto& [key, value] : overrides) {
    if (!detail::setters().contains(key)) throw ConfigError("unknown override key '" + key + "'");
    coupling = coupling || detail::is_coupling_key(key);
    physical = physical || detail::is_physical_key(key);
  }
  if (coupling && physical) {
    throw ConfigError("overrides set both g and physical coupling parameters");
  }
  std::erase_if(entries, [&](const auto& entry) {
    return (coupling && detail::is_physical_key(entry.first)) ||
           (physical && detail::is_coupling_key(entry.first));
  });
  for (const auto& [key, value] : overrides) entries[key] = value;
}

inline RunConfig build_config(const ConfigEntries& entries) {
  RunConfig config;
  for (const auto& [key, value] : entries) {
    detail::setters().find(key)->second(config, key, value);
  }
  config.check();
  return config;
}

// `key=value` as given on the command line.
inline std::pair<std::string, std::string> parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(text) + "' is not key=value");
  }
  return {std::string(detail::trim(text.substr(0, eq))),
          std::string(detail::trim(text.substr(eq + 1)))};
}

inline RunConfig load_config(const std::optional<std::filesystem::path>& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
  ConfigEntries entries;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file '" + path->string() + "'");
    entries = parse_config_entries(in);
  }
  apply_overrides(entries, overrides);
  return build_config(entries);
}

inline RunConfig parse_config(std::string_view text) {
  std::istringstream in{std::string(text)};
  return build_config(parse_config_entries(in));
}

}  // namespace superrad
