#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "superrad/decay.hpp"
#include "superrad/dicke.hpp"
#include "superrad/electron.hpp"
#include "superrad/oracle.hpp"
#include "superrad/scattering.hpp"

// Invariant batteries behind `superrad validate`.
namespace superrad::validation {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;      // largest observed deviation
  double tolerance = 0.0;
  std::string detail;
};

using ScatteringFactory = std::function<ScatteringMatrix(DickeSpace, std::complex<double>)>;

inline double column_orthonormality_error(const ScatteringMatrix& s) {
  const auto dim = s.entries().cols();
  return (s.entries().adjoint() * s.entries() - ComplexMatrix::Identity(dim, dim))
      .cwiseAbs()
      .maxCoeff();
}

inline CheckResult check_unitarity() {
  CheckResult r{"unitarity N_a=1..30 |g|={0.01,0.1,0.5}", true, 0.0, 1e-10, ""};
  for (int n = 1; n <= 30; ++n) {
    for (double magnitude : {0.01, 0.1, 0.5}) {
      for (double phase : {0.0, 0.9}) {
        const double err =
            column_orthonormality_error(scattering_matrix(DickeSpace(n), std::polar(magnitude, phase)));
        r.worst = std::max(r.worst, err);
      }
    }
  }
  r.pass = r.worst <= r.tolerance;
  return r;
}

// interact_one against the brute-force joint evolution for N_a in {1,2,3},
// g in {0.05, 0.1+0.05i}, sigma in {0,1,3}, phi = 0.7.
inline CheckResult check_oracle_equivalence(const ScatteringFactory& factory = scattering_matrix) {
  CheckResult r{"oracle equivalence (18 cases)", true, 0.0, 1e-8, ""};
  const auto start = std::chrono::steady_clock::now();
  for (int n = 1; n <= 3; ++n) {
    const DickeSpace space(n);
    for (std::complex<double> g : {std::complex<double>(0.05, 0.0), std::complex<double>(0.1, 0.05)}) {
      for (double sigma : {0.0, 1.0, 3.0}) {
        const ElectronState electron = build_comb(sigma, 0.7);
        const auto rho0 = ground_state(space);
        const auto fast = interact_one(rho0, factory(space, g), moments(electron, 2 * n));
        const auto slow = oracle::brute_force_interact(rho0, electron, g);
        r.worst = std::max(r.worst, (fast.entries() - slow.entries()).cwiseAbs().maxCoeff());
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char runtime[48];
  std::snprintf(runtime, sizeof(runtime), "runtime %.3f s", seconds);
  r.detail = runtime;
  r.pass = r.worst <= r.tolerance && seconds < 60.0;
  return r;
}

// Ten sequential comb electrons at N_a = 15, g = 0.1, sigma = 3.
inline CheckResult check_sequential_validity() {
  CheckResult r{"validity through 10 electrons (N_a=15, g=0.1, sigma=3)", true, 0.0, 1e-12, ""};
  const DickeSpace space(15);
  const auto scattering = scattering_matrix(space, 0.1);
  const auto table = moments(build_comb(3.0, 0.0), 30);
  AtomicDensityMatrix rho = ground_state(space);
  for (int i = 0; i < 10; ++i) {
    const double trace_before = rho.entries().trace().real();
    rho = interact_one(rho, scattering, table);
    r.worst = std::max(r.worst, std::abs(rho.entries().trace().real() - trace_before));
    if (!validate(rho).ok()) {
      r.pass = false;
      r.detail = "invalid after electron " + std::to_string(i + 1);
    }
  }
  r.pass = r.pass && r.worst <= r.tolerance;
  return r;
}

// Emitted energy against the drop in excitation energy, and RK4 against the
// exact propagator on the same grid.
inline std::vector<CheckResult> check_decay() {
  std::vector<CheckResult> out;
  CheckResult energy{"energy conservation (N_a=15, 10 comb electrons)", true, 0.0, 1e-3, ""};
  CheckResult cross{"RK4 vs exact propagator (N_a=6)", true, 0.0, 1e-8, ""};

  const DickeSpace space(15);
  const auto table = moments(build_comb(3.0, 0.0), 30);
  const auto rho = interact_many(ground_state(space), scattering_matrix(space, 0.1), table, 10).rho;
  const auto run = evolve_collective(rho, DecayParams{}, 3.0, 1e-3);
  const double released = run.trace.initial_excitation - run.trace.final_excitation;
  energy.worst = std::abs(run.trace.total_emitted - released) / released;
  energy.pass = energy.worst <= energy.tolerance;
  out.push_back(energy);

  const DickeSpace small(6);
  const auto rho_small =
      interact_many(ground_state(small), scattering_matrix(small, 0.3), moments(build_comb(2.0, 0.4), 12), 3)
          .rho;
  const auto rk4 = evolve_collective(rho_small, DecayParams{}, 2.0, 1e-2);
  const auto exact = evolve_collective_exact(rho_small, DecayParams{}, 2.0, rk4.step);
  for (std::size_t i = 0; i < rk4.trace.intensity.size(); ++i) {
    cross.worst = std::max(cross.worst, std::abs(rk4.trace.intensity[i] - exact.trace.intensity[i]));
  }
  cross.pass = cross.worst <= cross.tolerance;
  out.push_back(cross);
  return out;
}

inline std::vector<CheckResult> validate_suite() {
  std::vector<CheckResult> results;
  results.push_back(check_unitarity());
  results.push_back(check_oracle_equivalence());
  results.push_back(check_sequential_validity());
  for (auto& r : check_decay()) results.push_back(std::move(r));
  return results;
}

inline void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-4s  %-58s %12s %10s  %s\n", "", "check", "worst", "tol", "");
  os << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof(line), "%-4s  %-58s %12.3e %10.1e  %s\n", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.worst, r.tolerance, r.detail.c_str());
    os << line;
  }
}

}  // namespace superrad::validation
