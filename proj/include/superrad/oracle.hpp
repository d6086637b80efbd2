#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "superrad/dicke.hpp"
#include "superrad/electron.hpp"
#include "superrad/error.hpp"
#include "superrad/expm.hpp"

// Brute-force reference for the single-electron interaction: the electron
// ladder is materialised explicitly, the full propagator exp(-i H) is
// exponentiated numerically and the electron is traced out. Meant for small
// N_a only.
namespace superrad::oracle {

inline constexpr int kMaxAtoms = 6;
inline constexpr double kLeakTolerance = 1e-12;

// Density matrix on ladder ⊗ Dicke space. Row/column index of
// |E_n> ⊗ |m> is (n + ladder_cutoff) * (N_a + 1) + m.
class JointState {
 public:
  JointState(int ladder_cutoff, DickeSpace space, ComplexMatrix entries)
      : ladder_cutoff_(ladder_cutoff), space_(space), entries_(std::move(entries)) {
    if (ladder_cutoff < 1) throw std::invalid_argument("JointState: ladder_cutoff must be >= 1");
    const auto dim = static_cast<Eigen::Index>(ladder_size()) * space_.dim();
    if (entries_.rows() != dim || entries_.cols() != dim) {
      throw std::invalid_argument("JointState: entries have the wrong dimension");
    }
  }

  int ladder_cutoff() const noexcept { return ladder_cutoff_; }
  int ladder_size() const noexcept { return 2 * ladder_cutoff_ + 1; }
  const DickeSpace& space() const noexcept { return space_; }
  const ComplexMatrix& entries() const noexcept { return entries_; }

  Eigen::Index index(int ladder, int m) const noexcept {
    return static_cast<Eigen::Index>(ladder + ladder_cutoff_) * space_.dim() + m;
  }

 private:
  int ladder_cutoff_;
  DickeSpace space_;
  ComplexMatrix entries_;
};

// H = g b ⊗ S_+ + conj(g) b^dag ⊗ S_-, with b|E_n> = |E_{n-1}> (falling off
// the truncated ladder maps to zero) and <m+1|S_+|m> = sqrt((m+1)(N_a-m)).
inline ComplexMatrix build_generator(DickeSpace space, std::complex<double> g,
                                     int ladder_cutoff) {
  if (ladder_cutoff < 1) throw std::invalid_argument("build_generator: ladder_cutoff must be >= 1");
  const int atoms = space.n_atoms();
  const int dim_a = space.dim();
  const auto dim = static_cast<Eigen::Index>(2 * ladder_cutoff + 1) * dim_a;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  if (g == 0.0) return h;
  const auto at = [&](int ladder, int m) {
    return static_cast<Eigen::Index>(ladder + ladder_cutoff) * dim_a + m;
  };
  for (int ladder = -ladder_cutoff + 1; ladder <= ladder_cutoff; ++ladder) {
    for (int m = 0; m < atoms; ++m) {
      const double raise = std::sqrt(static_cast<double>((m + 1) * (atoms - m)));
      // <E_{n-1}, m+1| g b S_+ |E_n, m>
      h(at(ladder - 1, m + 1), at(ladder, m)) = g * raise;
      h(at(ladder, m), at(ladder - 1, m + 1)) = std::conj(g) * raise;
    }
  }
  return h;
}

inline JointState make_joint_state(const AtomicDensityMatrix& rho,
                                   const ElectronState& electron, int ladder_cutoff) {
  if (ladder_cutoff < electron.cutoff()) {
    throw std::invalid_argument("make_joint_state: ladder shorter than the electron support");
  }
  const int dim_a = rho.dim();
  const auto ladder_size = 2 * ladder_cutoff + 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ladder_size);
  for (int n = -electron.cutoff(); n <= electron.cutoff(); ++n) {
    psi(n + ladder_cutoff) = electron.amplitude(n);
  }
  const ComplexMatrix electron_rho = psi * psi.adjoint();
  ComplexMatrix joint(static_cast<Eigen::Index>(ladder_size) * dim_a,
                      static_cast<Eigen::Index>(ladder_size) * dim_a);
  for (int a = 0; a < ladder_size; ++a) {
    for (int b = 0; b < ladder_size; ++b) {
      joint.block(a * dim_a, b * dim_a, dim_a, dim_a) = electron_rho(a, b) * rho.entries();
    }
  }
  return {ladder_cutoff, rho.space(), std::move(joint)};
}

// exp(-i H) for the given coupling on the state's ladder.
inline ComplexMatrix propagator(const DickeSpace& space, std::complex<double> g,
                                int ladder_cutoff) {
  const ComplexMatrix h = build_generator(space, g, ladder_cutoff);
  return expm((std::complex<double>(0.0, -1.0) * h).eval());
}

inline JointState propagate(const JointState& state, std::complex<double> g) {
  const ComplexMatrix u = propagator(state.space(), g, state.ladder_cutoff());
  ComplexMatrix evolved = u * state.entries() * u.adjoint();
  return {state.ladder_cutoff(), state.space(), std::move(evolved)};
}

inline AtomicDensityMatrix trace_out_electron(const JointState& state) {
  const int dim_a = state.space().dim();
  ComplexMatrix reduced = ComplexMatrix::Zero(dim_a, dim_a);
  for (int a = 0; a < state.ladder_size(); ++a) {
    reduced += state.entries().block(a * dim_a, a * dim_a, dim_a, dim_a);
  }
  return {state.space(), std::move(reduced)};
}

inline double mean_ladder_index(const JointState& state) {
  double mean = 0.0;
  for (int n = -state.ladder_cutoff(); n <= state.ladder_cutoff(); ++n) {
    for (int m = 0; m < state.space().dim(); ++m) {
      const auto i = state.index(n, m);
      mean += n * state.entries()(i, i).real();
    }
  }
  return mean;
}

// Probability of finding the electron within `rungs` of either ladder end.
inline double edge_probability(const JointState& state, int rungs) {
  double p = 0.0;
  for (int n = -state.ladder_cutoff(); n <= state.ladder_cutoff(); ++n) {
    if (std::abs(n) <= state.ladder_cutoff() - rungs) continue;
    for (int m = 0; m < state.space().dim(); ++m) {
      const auto i = state.index(n, m);
      p += state.entries()(i, i).real();
    }
  }
  return p;
}

inline int default_ladder_cutoff(const ElectronState& electron, const DickeSpace& space) {
  return electron.cutoff() + space.n_atoms() + 4;
}

inline AtomicDensityMatrix brute_force_interact(const AtomicDensityMatrix& rho,
                                                const ElectronState& electron,
                                                std::complex<double> g, int ladder_cutoff) {
  if (rho.space().n_atoms() > kMaxAtoms) {
    throw std::invalid_argument("brute_force_interact: N_a = " +
                                std::to_string(rho.space().n_atoms()) + " exceeds " +
                                std::to_string(kMaxAtoms));
  }
  if (ladder_cutoff < electron.cutoff() + rho.space().n_atoms()) {
    throw std::invalid_argument("brute_force_interact: ladder cutoff below electron cutoff + N_a");
  }
  require_valid(rho, "brute_force_interact");
  const JointState evolved = propagate(make_joint_state(rho, electron, ladder_cutoff), g);
  const double leak = edge_probability(evolved, 2);
  if (leak > kLeakTolerance) {
    throw NumericError("brute_force_interact: " + format_double(leak) +
                       " probability at the ladder edge; cutoff too small");
  }
  return trace_out_electron(evolved);
}

inline AtomicDensityMatrix brute_force_interact(const AtomicDensityMatrix& rho,
                                                const ElectronState& electron,
                                                std::complex<double> g) {
  return brute_force_interact(rho, electron, g,
                              default_ladder_cutoff(electron, rho.space()));
}

}  // namespace superrad::oracle
