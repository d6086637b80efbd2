#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "superrad/csv.hpp"

namespace superrad {

// Electron wavefunction on the energy ladder |E_0 + n hbar omega0>,
// n in [-cutoff, cutoff].
class ElectronState {
 public:
  // Arbitrary (normalised internally) ladder amplitudes; amplitudes[i] is
  // c_{i - cutoff}. sigma and phi are NaN for states not built as combs.
  static ElectronState from_amplitudes(std::vector<std::complex<double>> amplitudes) {
    if (amplitudes.empty() || amplitudes.size() % 2 == 0) {
      throw std::invalid_argument(
          "ElectronState: amplitude count must be odd (symmetric ladder)");
    }
    const int cutoff = static_cast<int>(amplitudes.size() / 2);
    return ElectronState(std::nan(""), std::nan(""), cutoff, cutoff,
                         std::move(amplitudes));
  }

  double sigma() const noexcept { return sigma_; }
  double phi() const noexcept { return phi_; }
  int cutoff() const noexcept { return cutoff_; }
  int requested_cutoff() const noexcept { return requested_cutoff_; }
  bool cutoff_adjusted() const noexcept { return cutoff_ != requested_cutoff_; }

  std::span<const std::complex<double>> amplitudes() const noexcept {
    return amplitudes_;
  }

  // Zero outside the stored ladder range.
  std::complex<double> amplitude(int n) const noexcept {
    if (n < -cutoff_ || n > cutoff_) return {};
    return amplitudes_[static_cast<std::size_t>(n + cutoff_)];
  }

 private:
  friend ElectronState build_comb(double, double, int);

  ElectronState(double sigma, double phi, int cutoff, int requested_cutoff,
                std::vector<std::complex<double>> amplitudes)
      : sigma_(sigma),
        phi_(phi),
        cutoff_(cutoff),
        requested_cutoff_(requested_cutoff),
        amplitudes_(std::move(amplitudes)) {
    double norm2 = 0.0;
    for (const auto& c : amplitudes_) norm2 += std::norm(c);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
      throw std::invalid_argument("ElectronState: zero or non-finite norm");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& c : amplitudes_) c *= scale;
  }

  double sigma_;
  double phi_;
  int cutoff_;
  int requested_cutoff_;
  std::vector<std::complex<double>> amplitudes_;
};

// Ladder half-width actually used for a comb of bandwidth sigma: the dropped
// tail carries probability below e^{-36}.
inline int comb_cutoff(double sigma, int requested) {
  return std::max({static_cast<int>(std::ceil(6.0 * sigma)), 8, requested});
}

// Comb electron c_n ∝ exp(i phi n) exp(-n^2 / (2 sigma^2)). sigma = 0 is the
// single-peak (unshaped) electron.
inline ElectronState build_comb(double sigma, double phi, int cutoff = 8) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("build_comb: sigma must be finite and >= 0");
  }
  if (cutoff < 1) throw std::invalid_argument("build_comb: cutoff must be >= 1");
  if (!std::isfinite(phi)) throw std::invalid_argument("build_comb: phi must be finite");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  double reduced_phi = std::fmod(phi, two_pi);
  if (reduced_phi < 0.0) reduced_phi += two_pi;

  const int n_max = comb_cutoff(sigma, cutoff);
  std::vector<std::complex<double>> amplitudes(2 * static_cast<std::size_t>(n_max) + 1);
  if (sigma == 0.0) {
    amplitudes[static_cast<std::size_t>(n_max)] = 1.0;
  } else {
    for (int n = -n_max; n <= n_max; ++n) {
      const double envelope = std::exp(-0.5 * n * n / (sigma * sigma));
      amplitudes[static_cast<std::size_t>(n + n_max)] =
          std::polar(envelope, reduced_phi * n);
    }
  }
  return ElectronState(sigma, reduced_phi, n_max, cutoff, std::move(amplitudes));
}

// Bunching factors M_j = <b^j> for j in [-j_max, j_max], b lowering the
// electron energy by one quantum.
class MomentTable {
 public:
  // values[i] holds M_{i - j_max}.
  MomentTable(int j_max, std::vector<std::complex<double>> values)
      : j_max_(j_max), values_(std::move(values)) {
    if (j_max < 1) throw std::invalid_argument("MomentTable: j_max must be >= 1");
    if (values_.size() != 2 * static_cast<std::size_t>(j_max) + 1) {
      throw std::invalid_argument("MomentTable: expected 2*j_max+1 values");
    }
    if (values_[static_cast<std::size_t>(j_max_)] != std::complex<double>(1.0, 0.0)) {
      throw std::invalid_argument("MomentTable: M_0 must equal 1");
    }
    for (int j = 1; j <= j_max_; ++j) {
      const auto plus = (*this)[j];
      if (std::abs(plus - std::conj((*this)[-j])) > 1e-12) {
        throw std::invalid_argument("MomentTable: M_{-j} != conj(M_j) at j=" +
                                    std::to_string(j));
      }
      if (std::abs(plus) > 1.0 + 1e-12) {
        throw std::invalid_argument("MomentTable: |M_j| > 1 at j=" + std::to_string(j));
      }
    }
  }

  // All |M_j| = 1 with arg M_j = j phi: the infinitely wide comb.
  static MomentTable ideal_comb(int j_max, double phi) {
    std::vector<std::complex<double>> values(2 * static_cast<std::size_t>(j_max) + 1);
    for (int j = -j_max; j <= j_max; ++j) {
      values[static_cast<std::size_t>(j + j_max)] =
          j == 0 ? std::complex<double>(1.0) : std::polar(1.0, j * phi);
    }
    return {j_max, std::move(values)};
  }

  // M_j = delta_{j0}: no coherence between ladder rungs.
  static MomentTable incoherent(int j_max) {
    std::vector<std::complex<double>> values(2 * static_cast<std::size_t>(j_max) + 1);
    values[static_cast<std::size_t>(j_max)] = 1.0;
    return {j_max, std::move(values)};
  }

  int j_max() const noexcept { return j_max_; }

  std::complex<double> operator[](int j) const {
    return values_[static_cast<std::size_t>(j + j_max_)];
  }

  std::complex<double> at(int j) const {
    if (j < -j_max_ || j > j_max_) {
      throw std::out_of_range("MomentTable: j=" + std::to_string(j) +
                              " outside +-" + std::to_string(j_max_));
    }
    return (*this)[j];
  }

 private:
  int j_max_;
  std::vector<std::complex<double>> values_;
};

// M_j = sum_n conj(c_n) c_{n+j}.
inline MomentTable moments(const ElectronState& state, int j_max) {
  if (j_max < 1) throw std::invalid_argument("moments: j_max must be >= 1");
  std::vector<std::complex<double>> values(2 * static_cast<std::size_t>(j_max) + 1);
  values[static_cast<std::size_t>(j_max)] = 1.0;
  const int cutoff = state.cutoff();
  for (int j = 1; j <= j_max; ++j) {
    std::complex<double> sum{};
    for (int n = -cutoff; n + j <= cutoff; ++n) {
      sum += std::conj(state.amplitude(n)) * state.amplitude(n + j);
    }
    values[static_cast<std::size_t>(j_max + j)] = sum;
    values[static_cast<std::size_t>(j_max - j)] = std::conj(sum);
  }
  return {j_max, std::move(values)};
}

// Columns n,prob with prob = |c_n|^2.
inline void write_spectrum_csv(std::ostream& os, const ElectronState& state,
                               const Metadata& metadata = {}) {
  write_metadata(os, metadata);
  os << "n,prob\n";
  for (int n = -state.cutoff(); n <= state.cutoff(); ++n) {
    os << n << ',' << format_double(std::norm(state.amplitude(n))) << '\n';
  }
}

}  // namespace superrad
