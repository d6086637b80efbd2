#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "superrad/csv.hpp"
#include "superrad/dicke.hpp"
#include "superrad/error.hpp"
#include "superrad/expm.hpp"

namespace superrad {

enum class DecayMode { collective, independent };

inline const char* to_string(DecayMode mode) {
  return mode == DecayMode::collective ? "collective" : "independent";
}

inline std::optional<DecayMode> parse_decay_mode(std::string_view text) {
  if (text == "collective") return DecayMode::collective;
  if (text == "independent") return DecayMode::independent;
  return std::nullopt;
}

struct DecayParams {
  double gamma = 1.0;        // single-atom spontaneous emission rate
  double hbar_omega0 = 1.0;  // photon energy
  DecayMode mode = DecayMode::collective;

  void check() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw std::invalid_argument("DecayParams: gamma must be > 0");
    if (!(hbar_omega0 > 0.0) || !std::isfinite(hbar_omega0))
      throw std::invalid_argument("DecayParams: hbar_omega0 must be > 0");
  }
};

struct IntensityTrace {
  std::vector<double> times;
  std::vector<double> intensity;  // units of hbar_omega0 * gamma
  double total_emitted = 0.0;     // integral of intensity over the grid
  double initial_excitation = 0.0;
  double final_excitation = 0.0;
  Metadata metadata;
};

struct Peak {
  double time;
  double intensity;
};

// Earliest grid point of maximum intensity.
inline Peak peak_intensity(const IntensityTrace& trace) {
  if (trace.intensity.empty() || trace.times.size() != trace.intensity.size()) {
    throw std::invalid_argument("peak_intensity: empty or inconsistent trace");
  }
  const auto it = std::max_element(trace.intensity.begin(), trace.intensity.end());
  const auto i = static_cast<std::size_t>(it - trace.intensity.begin());
  return {trace.times[i], *it};
}

inline void write_intensity_csv(std::ostream& os, const IntensityTrace& trace) {
  write_metadata(os, trace.metadata);
  os << "t,intensity\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    os << format_double(trace.times[i]) << ',' << format_double(trace.intensity[i]) << '\n';
  }
}

// Composite Simpson on a uniform grid; a trailing odd panel uses the 3/8 rule.
inline double integrate_uniform(std::span<const double> values, double step) {
  const std::size_t intervals = values.empty() ? 0 : values.size() - 1;
  if (intervals == 0) return 0.0;
  if (intervals == 1) return 0.5 * step * (values[0] + values[1]);
  const std::size_t simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    sum += step / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
  }
  if (simpson_end != intervals) {
    const std::size_t i = simpson_end;
    sum += 3.0 * step / 8.0 *
           (values[i] + 3.0 * values[i + 1] + 3.0 * values[i + 2] + values[i + 3]);
  }
  return sum;
}

// Collective (Dicke) decay of the symmetric subspace:
//   d rho^{mn}/dt = -gamma/2 (a_m + a_n) rho^{mn}
//                   + gamma sqrt(a_{m+1} a_{n+1}) rho^{(m+1)(n+1)},
// a_m = m (N - m + 1).
class MasterEquation {
 public:
  MasterEquation(DickeSpace space, double gamma) : space_(space), gamma_(gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("MasterEquation: gamma must be > 0");
    rates_.resize(static_cast<std::size_t>(space.dim()) + 1, 0.0);
    for (int m = 0; m <= space.n_atoms(); ++m) {
      rates_[static_cast<std::size_t>(m)] = m * (space.n_atoms() - m + 1.0);
    }
  }

  const DickeSpace& space() const noexcept { return space_; }
  double gamma() const noexcept { return gamma_; }

  // a_m; zero for m > N.
  double rate(int m) const noexcept { return rates_[static_cast<std::size_t>(m)]; }

  ComplexMatrix rhs(const ComplexMatrix& rho) const {
    const int dim = space_.dim();
    ComplexMatrix out(dim, dim);
    for (int m = 0; m < dim; ++m) {
      for (int n = 0; n < dim; ++n) {
        std::complex<double> value = -0.5 * gamma_ * (rate(m) + rate(n)) * rho(m, n);
        if (m + 1 < dim && n + 1 < dim) {
          value += gamma_ * std::sqrt(rate(m + 1) * rate(n + 1)) * rho(m + 1, n + 1);
        }
        out(m, n) = value;
      }
    }
    return out;
  }

  void rk4_step(ComplexMatrix& rho, double h) const {
    const ComplexMatrix k1 = rhs(rho);
    const ComplexMatrix k2 = rhs(rho + 0.5 * h * k1);
    const ComplexMatrix k3 = rhs(rho + 0.5 * h * k2);
    const ComplexMatrix k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // Real generator acting on rho flattened row-major (index m * dim + n).
  Eigen::MatrixXd generator() const {
    const int dim = space_.dim();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(dim * dim, dim * dim);
    for (int m = 0; m < dim; ++m) {
      for (int n = 0; n < dim; ++n) {
        l(m * dim + n, m * dim + n) = -0.5 * gamma_ * (rate(m) + rate(n));
        if (m + 1 < dim && n + 1 < dim) {
          l(m * dim + n, (m + 1) * dim + n + 1) = gamma_ * std::sqrt(rate(m + 1) * rate(n + 1));
        }
      }
    }
    return l;
  }

  // I = hbar omega0 sum_m m [gamma a_m rho^{mm} - gamma a_{m+1} rho^{(m+1)(m+1)}].
  double intensity(const ComplexMatrix& rho, double hbar_omega0) const {
    const int dim = space_.dim();
    double sum = 0.0;
    for (int m = 1; m < dim; ++m) {
      double flow = rate(m) * rho(m, m).real();
      if (m + 1 < dim) flow -= rate(m + 1) * rho(m + 1, m + 1).real();
      sum += m * flow;
    }
    return hbar_omega0 * gamma_ * sum;
  }

  // Default RK4 step: keeps h times the fastest rate near 0.05.
  double default_step() const {
    const double n = space_.n_atoms();
    return 0.1 / (gamma_ * n * (n + 1.0) / 2.0);
  }

 private:
  DickeSpace space_;
  double gamma_;
  std::vector<double> rates_;
};

struct CollectiveEvolution {
  std::vector<double> snapshot_times;
  std::vector<AtomicDensityMatrix> snapshots;  // first is rho0, last is rho(t_end)
  IntensityTrace trace;
  double step = 0.0;
};

namespace detail {

inline double diagonal_energy(const ComplexMatrix& rho) {
  double energy = 0.0;
  for (int m = 1; m < rho.rows(); ++m) energy += m * rho(m, m).real();
  return energy;
}

inline Metadata decay_metadata(const DickeSpace& space, const DecayParams& params) {
  return {{"n_atoms", std::to_string(space.n_atoms())},
          {"gamma", format_double(params.gamma)},
          {"mode", to_string(params.mode)}};
}

inline void finish_trace(IntensityTrace& trace, double step, double e0, double e_end,
                         double hbar_omega0) {
  trace.total_emitted = integrate_uniform(trace.intensity, step);
  trace.initial_excitation = e0 * hbar_omega0;
  trace.final_excitation = e_end * hbar_omega0;
}

}  // namespace detail

inline constexpr double kLocalErrorTolerance = 1e-10;
inline constexpr int kMaxStepHalvings = 12;

// Fixed-step classical RK4 integration of the Dicke master equation from 0 to
// t_end. The uniform step starts at min(dt_max, default_step()) adjusted to
// land on t_end; every step is checked against two half steps and the whole
// run is repeated with half the step while the local error estimate exceeds
// local_tolerance. snapshot_stride > 0 stores every stride-th density matrix.
inline CollectiveEvolution evolve_collective(const AtomicDensityMatrix& rho0,
                                             const DecayParams& params, double t_end,
                                             double dt_max, int snapshot_stride = 0,
                                             double local_tolerance = kLocalErrorTolerance) {
  params.check();
  if (!(t_end > 0.0)) throw std::invalid_argument("evolve_collective: t_end must be > 0");
  if (!(dt_max > 0.0)) throw std::invalid_argument("evolve_collective: dt_max must be > 0");
  require_valid(rho0, "evolve_collective");

  const MasterEquation equation(rho0.space(), params.gamma);
  const double h0 = std::min(dt_max, equation.default_step());
  auto steps = static_cast<long>(std::ceil(t_end / h0 - 1e-9));
  if (steps < 1) steps = 1;

  for (int halving = 0; halving <= kMaxStepHalvings; ++halving, steps *= 2) {
    const double h = t_end / static_cast<double>(steps);
    CollectiveEvolution result;
    result.step = h;
    result.trace.times.reserve(static_cast<std::size_t>(steps) + 1);
    result.trace.intensity.reserve(static_cast<std::size_t>(steps) + 1);

    ComplexMatrix rho = rho0.entries();
    result.trace.times.push_back(0.0);
    result.trace.intensity.push_back(equation.intensity(rho, params.hbar_omega0));
    result.snapshot_times.push_back(0.0);
    result.snapshots.push_back(rho0);

    bool rejected = false;
    for (long i = 1; i <= steps; ++i) {
      ComplexMatrix full = rho;
      equation.rk4_step(full, h);
      ComplexMatrix halves = rho;
      equation.rk4_step(halves, 0.5 * h);
      equation.rk4_step(halves, 0.5 * h);
      const double local_error = (halves - full).cwiseAbs().maxCoeff() * 16.0 / 15.0;
      if (local_error > local_tolerance) {
        rejected = true;
        break;
      }
      rho = std::move(full);
      const double t = static_cast<double>(i) * h;
      result.trace.times.push_back(t);
      result.trace.intensity.push_back(equation.intensity(rho, params.hbar_omega0));
      if (i == steps || (snapshot_stride > 0 && i % snapshot_stride == 0)) {
        result.snapshot_times.push_back(t);
        result.snapshots.emplace_back(rho0.space(), rho);
      }
    }
    if (rejected) continue;

    result.trace.metadata = detail::decay_metadata(rho0.space(), params);
    detail::finish_trace(result.trace, h, detail::diagonal_energy(rho0.entries()),
                         detail::diagonal_energy(rho), params.hbar_omega0);
    return result;
  }
  throw NumericError("evolve_collective: local error above " +
                     format_double(local_tolerance) + " at the minimum step " +
                     format_double(t_end / static_cast<double>(steps / 2)));
}

// Same grid semantics as evolve_collective but each step applies the exact
// propagator exp(L dt) of the flattened linear system.
inline CollectiveEvolution evolve_collective_exact(const AtomicDensityMatrix& rho0,
                                                   const DecayParams& params, double t_end,
                                                   double dt, int snapshot_stride = 0) {
  params.check();
  if (!(t_end > 0.0)) throw std::invalid_argument("evolve_collective_exact: t_end must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_collective_exact: dt must be > 0");
  require_valid(rho0, "evolve_collective_exact");

  const MasterEquation equation(rho0.space(), params.gamma);
  const int dim = rho0.dim();
  auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  if (steps < 1) steps = 1;
  const double h = t_end / static_cast<double>(steps);
  const Eigen::MatrixXd step_map = expm((equation.generator() * h).eval());

  // Row-major flattening matches MasterEquation::generator().
  using RowMajor = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor flat = rho0.entries();
  Eigen::VectorXcd state = Eigen::Map<Eigen::VectorXcd>(flat.data(), dim * dim);

  CollectiveEvolution result;
  result.step = h;
  const auto unflatten = [dim](const Eigen::VectorXcd& v) {
    return ComplexMatrix(Eigen::Map<const RowMajor>(v.data(), dim, dim));
  };
  result.trace.times.push_back(0.0);
  result.trace.intensity.push_back(equation.intensity(rho0.entries(), params.hbar_omega0));
  result.snapshot_times.push_back(0.0);
  result.snapshots.push_back(rho0);
  ComplexMatrix rho = rho0.entries();
  for (long i = 1; i <= steps; ++i) {
    state = step_map.cast<std::complex<double>>() * state;
    rho = unflatten(state);
    const double t = static_cast<double>(i) * h;
    result.trace.times.push_back(t);
    result.trace.intensity.push_back(equation.intensity(rho, params.hbar_omega0));
    if (i == steps || (snapshot_stride > 0 && i % snapshot_stride == 0)) {
      result.snapshot_times.push_back(t);
      result.snapshots.emplace_back(rho0.space(), rho);
    }
  }
  result.trace.metadata = detail::decay_metadata(rho0.space(), params);
  detail::finish_trace(result.trace, h, detail::diagonal_energy(rho0.entries()),
                       detail::diagonal_energy(rho), params.hbar_omega0);
  return result;
}

// Atoms decaying independently: the mean excitation relaxes as e^{-gamma t}
// whatever the correlations, so I(t) = hbar omega0 gamma E0 e^{-gamma t}.
inline IntensityTrace evolve_independent(const AtomicDensityMatrix& rho0,
                                         const DecayParams& params, double t_end,
                                         double dt_max) {
  params.check();
  if (!(t_end > 0.0)) throw std::invalid_argument("evolve_independent: t_end must be > 0");
  if (!(dt_max > 0.0)) throw std::invalid_argument("evolve_independent: dt_max must be > 0");
  const double e0 = excitation_energy(rho0);

  auto steps = static_cast<long>(std::ceil(t_end / dt_max - 1e-9));
  if (steps < 1) steps = 1;
  const double h = t_end / static_cast<double>(steps);

  IntensityTrace trace;
  trace.times.reserve(static_cast<std::size_t>(steps) + 1);
  trace.intensity.reserve(static_cast<std::size_t>(steps) + 1);
  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * h;
    trace.times.push_back(t);
    trace.intensity.push_back(params.hbar_omega0 * params.gamma * e0 * std::exp(-params.gamma * t));
  }
  const double remaining = std::exp(-params.gamma * t_end);
  trace.total_emitted = params.hbar_omega0 * e0 * (1.0 - remaining);
  trace.initial_excitation = params.hbar_omega0 * e0;
  trace.final_excitation = params.hbar_omega0 * e0 * remaining;
  trace.metadata = detail::decay_metadata(rho0.space(), params);
  return trace;
}

// Dispatch on params.mode.
inline IntensityTrace evolve(const AtomicDensityMatrix& rho0, const DecayParams& params,
                             double t_end, double dt_max) {
  if (params.mode == DecayMode::independent) {
    return evolve_independent(rho0, params, t_end, dt_max);
  }
  return evolve_collective(rho0, params, t_end, dt_max).trace;
}

}  // namespace superrad
