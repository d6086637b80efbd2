#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "superrad/dicke.hpp"
#include "superrad/electron.hpp"
#include "superrad/error.hpp"

namespace superrad {

namespace constants {
inline constexpr double kElementaryCharge = 1.602176634e-19;   // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kReducedPlanck = 1.054571817e-34;      // J s
inline constexpr double kSpeedOfLight = 299792458.0;           // m/s
}  // namespace constants

// Geometry and transition parameters of a single electron passing the atoms.
struct PhysicalParams {
  double d_perp = 0.0;  // transverse dipole moment, C m
  double d_par = 0.0;   // dipole component along the trajectory, C m
  double omega0 = 0.0;  // transition angular frequency, rad/s
  double v = 0.0;       // electron velocity, m/s
  double r_perp = 0.0;  // impact parameter, m

  void check() const {
    if (!(d_perp >= 0.0) || !std::isfinite(d_perp))
      throw std::invalid_argument("PhysicalParams: d_perp must be >= 0");
    if (!std::isfinite(d_par)) throw std::invalid_argument("PhysicalParams: d_par must be finite");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
      throw std::invalid_argument("PhysicalParams: omega0 must be > 0");
    if (!(v > 0.0)) throw std::invalid_argument("PhysicalParams: v must be > 0");
    if (!(v < constants::kSpeedOfLight))
      throw std::invalid_argument("PhysicalParams: v must be below the speed of light");
    if (!(r_perp > 0.0) || !std::isfinite(r_perp))
      throw std::invalid_argument("PhysicalParams: r_perp must be > 0");
  }
};

struct Coupling {
  std::complex<double> g;
  bool underflow = false;  // K_0, K_1 underflowed; g is exactly zero
};

// g = (e omega0 / 2 pi eps0 hbar v^2) [d_perp K_1(x) + i d_par K_0(x)],
// x = omega0 r_perp / v.
inline Coupling coupling_from_physical(const PhysicalParams& p) {
  p.check();
  const double x = p.omega0 * p.r_perp / p.v;
  // K_nu(x) ~ sqrt(pi / 2x) e^{-x} drops below the smallest normal double
  // near x = 705.
  if (x > 700.0) return {{0.0, 0.0}, true};
  const double k0 = std::cyl_bessel_k(0.0, x);
  const double k1 = std::cyl_bessel_k(1.0, x);
  if (k0 == 0.0 && k1 == 0.0) return {{0.0, 0.0}, true};
  const double prefactor =
      constants::kElementaryCharge * p.omega0 /
      (2.0 * std::numbers::pi * constants::kVacuumPermittivity *
       constants::kReducedPlanck * p.v * p.v);
  return {{prefactor * p.d_perp * k1, prefactor * p.d_par * k0}, false};
}

// Largest accepted |g|; beyond it the trigonometric powers change sign and
// the single-exponential propagator is no longer a small-coupling result.
inline constexpr double kMaxCouplingMagnitude = std::numbers::pi / 2.0;

// Single-electron scattering matrix in the Dicke basis:
//   <k|U|m> = b^{k-m} S_km,
// where b lowers the electron energy by one quantum and U = exp(-i(g b S_+ +
// g* b^dag S_-)). Columns are orthonormal.
class ScatteringMatrix {
 public:
  ScatteringMatrix(DickeSpace space, std::complex<double> g, ComplexMatrix entries)
      : space_(space), g_(g), entries_(std::move(entries)) {
    if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
      throw std::invalid_argument("ScatteringMatrix: entries do not match Dicke space");
    }
  }

  const DickeSpace& space() const noexcept { return space_; }
  std::complex<double> g() const noexcept { return g_; }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  std::complex<double> operator()(int k, int m) const { return entries_(k, m); }

 private:
  DickeSpace space_;
  std::complex<double> g_;
  ComplexMatrix entries_;
};

namespace detail {

inline std::vector<double> log_factorials(int n) {
  std::vector<double> table(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) table[static_cast<std::size_t>(i)] = std::lgamma(i + 1.0);
  return table;
}

}  // namespace detail

// Closed-form rotation matrix of the symmetric subspace. The k-sum is done
// in log space, so N up to a few hundred stays finite:
//   S_km = (-i e^{i arg g})^{k-m} sqrt(k! m! (N-m)! (N-k)!)
//          sum_j (-1)^j cos|g|^{N-k+m-2j} sin|g|^{k-m+2j}
//                / (j! (m-j)! (k-m+j)! (N-k-j)!)
// with terms whose factorial arguments are negative dropped.
inline ScatteringMatrix scattering_matrix(DickeSpace space, std::complex<double> g) {
  const double magnitude = std::abs(g);
  if (!std::isfinite(magnitude)) throw NumericError("scattering_matrix: non-finite g");
  if (magnitude >= kMaxCouplingMagnitude) {
    throw NumericError("scattering_matrix: |g| = " + format_double(magnitude) +
                       " must stay below pi/2");
  }
  const int n = space.n_atoms();
  const int dim = space.dim();
  if (magnitude == 0.0) {
    return {space, g, ComplexMatrix::Identity(dim, dim)};
  }

  const auto lf = detail::log_factorials(n);
  const auto log_fact = [&lf](int i) { return lf[static_cast<std::size_t>(i)]; };
  const double log_cos = std::log(std::cos(magnitude));
  const double log_sin = std::log(std::sin(magnitude));
  const double phase_step = std::arg(g) - std::numbers::pi / 2.0;

  ComplexMatrix entries(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (int m = 0; m < dim; ++m) {
      const double log_norm =
          0.5 * (log_fact(k) + log_fact(m) + log_fact(n - m) + log_fact(n - k));
      double sum = 0.0;
      for (int j = std::max(0, m - k); j <= std::min(m, n - k); ++j) {
        const int cos_power = n - k + m - 2 * j;
        const int sin_power = k - m + 2 * j;
        double log_term = log_norm - log_fact(j) - log_fact(m - j) -
                          log_fact(k - m + j) - log_fact(n - k - j);
        if (cos_power > 0) log_term += cos_power * log_cos;
        if (sin_power > 0) log_term += sin_power * log_sin;
        const double term = std::exp(log_term);
        sum += (j % 2 == 0) ? term : -term;
      }
      entries(k, m) = std::polar(1.0, (k - m) * phase_step) * sum;
    }
  }
  return {space, g, std::move(entries)};
}

// Post-interaction density matrix after one electron with moments M:
//   rho_f^{kl} = sum_{m,n} M_{(k-m)-(l-n)} S_km rho^{mn} conj(S_ln).
inline AtomicDensityMatrix interact_one(const AtomicDensityMatrix& rho,
                                        const ScatteringMatrix& scattering,
                                        const MomentTable& moments) {
  if (!(rho.space() == scattering.space())) {
    throw std::invalid_argument("interact_one: density and scattering matrices differ in N_a");
  }
  const int n = rho.space().n_atoms();
  if (moments.j_max() < 2 * n) {
    throw NumericError("interact_one: moment table j_max = " +
                       std::to_string(moments.j_max()) + " < 2 N_a = " +
                       std::to_string(2 * n));
  }
  require_valid(rho, "interact_one");

  const int dim = rho.dim();
  const ComplexMatrix& s = scattering.entries();
  const ComplexMatrix& r = rho.entries();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) {
      std::complex<double> acc{};
      for (int m = 0; m < dim; ++m) {
        const std::complex<double> left = s(k, m);
        if (left == 0.0) continue;
        for (int nn = 0; nn < dim; ++nn) {
          acc += moments[(k - m) - (l - nn)] * left * r(m, nn) * std::conj(s(l, nn));
        }
      }
      out(k, l) = acc;
    }
  }
  // Remove roundoff asymmetry.
  ComplexMatrix hermitian = 0.5 * (out + out.adjoint());
  return {rho.space(), std::move(hermitian)};
}

struct InteractionResult {
  AtomicDensityMatrix rho;
  std::vector<double> excitation_trajectory;  // after each electron
};

// Electrons interact one after another; each may carry its own moments.
inline InteractionResult interact_many(const AtomicDensityMatrix& rho0,
                                       const ScatteringMatrix& scattering,
                                       std::span<const MomentTable> train) {
  if (train.empty()) throw std::invalid_argument("interact_many: empty electron train");
  InteractionResult result{rho0, {}};
  result.excitation_trajectory.reserve(train.size());
  for (const auto& moments : train) {
    result.rho = interact_one(result.rho, scattering, moments);
    result.excitation_trajectory.push_back(excitation_energy(result.rho));
  }
  return result;
}

// n_electrons identical electrons.
inline InteractionResult interact_many(const AtomicDensityMatrix& rho0,
                                       const ScatteringMatrix& scattering,
                                       const MomentTable& moments, int n_electrons) {
  if (n_electrons < 1) throw std::invalid_argument("interact_many: n_electrons must be >= 1");
  InteractionResult result{rho0, {}};
  result.excitation_trajectory.reserve(static_cast<std::size_t>(n_electrons));
  for (int i = 0; i < n_electrons; ++i) {
    result.rho = interact_one(result.rho, scattering, moments);
    result.excitation_trajectory.push_back(excitation_energy(result.rho));
  }
  return result;
}

}  // namespace superrad
