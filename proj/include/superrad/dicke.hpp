#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "superrad/csv.hpp"

namespace superrad {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Symmetric (permutation-invariant) subspace of N two-level atoms. Basis
// state |m> holds m excitations; |0> is all atoms in the ground state.
class DickeSpace {
 public:
  explicit DickeSpace(int n_atoms) : n_atoms_(n_atoms) {
    if (n_atoms < 1) {
      throw std::invalid_argument("DickeSpace: n_atoms must be >= 1, got " +
                                  std::to_string(n_atoms));
    }
  }

  int n_atoms() const noexcept { return n_atoms_; }
  int dim() const noexcept { return n_atoms_ + 1; }

  friend bool operator==(const DickeSpace&, const DickeSpace&) = default;

 private:
  int n_atoms_;
};

namespace tolerance {
inline constexpr double kHermiticity = 1e-12;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPositivity = 1e-9;
}  // namespace tolerance

// Density matrix rho^{mn} over the Dicke basis. Construction only checks
// the shape; physical validity is reported by validate().
class AtomicDensityMatrix {
 public:
  AtomicDensityMatrix(DickeSpace space, ComplexMatrix entries)
      : space_(space), entries_(std::move(entries)) {
    if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
      throw std::invalid_argument(
          "AtomicDensityMatrix: entries are " +
          std::to_string(entries_.rows()) + "x" +
          std::to_string(entries_.cols()) + " but the Dicke space has dim " +
          std::to_string(space_.dim()));
    }
  }

  const DickeSpace& space() const noexcept { return space_; }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  int dim() const noexcept { return space_.dim(); }
  Complex operator()(int m, int n) const { return entries_(m, n); }

 private:
  DickeSpace space_;
  ComplexMatrix entries_;
};

inline AtomicDensityMatrix ground_state(DickeSpace space) {
  ComplexMatrix rho = ComplexMatrix::Zero(space.dim(), space.dim());
  rho(0, 0) = 1.0;
  return {space, std::move(rho)};
}

// |m><m|; m = n_atoms gives the fully inverted ensemble.
inline AtomicDensityMatrix dicke_state(DickeSpace space, int m) {
  if (m < 0 || m > space.n_atoms()) {
    throw std::invalid_argument("dicke_state: level out of range");
  }
  ComplexMatrix rho = ComplexMatrix::Zero(space.dim(), space.dim());
  rho(m, m) = 1.0;
  return {space, std::move(rho)};
}

enum class Invariant { hermiticity, trace, positivity };

inline const char* to_string(Invariant invariant) {
  switch (invariant) {
    case Invariant::hermiticity:
      return "hermiticity";
    case Invariant::trace:
      return "trace";
    case Invariant::positivity:
      return "positivity";
  }
  return "unknown";
}

struct Violation {
  Invariant invariant;
  double excess;  // |deviation| for hermiticity/trace, -lambda_min for PSD
};

struct ValidityReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }

  bool contains(Invariant invariant) const noexcept {
    for (const auto& v : violations) {
      if (v.invariant == invariant) return true;
    }
    return false;
  }
};

inline ValidityReport validate(const DickeSpace& space,
                               const ComplexMatrix& entries) {
  if (entries.rows() != space.dim() || entries.cols() != space.dim()) {
    throw std::invalid_argument("validate: entries do not match Dicke space");
  }
  ValidityReport report;

  const double hermiticity = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (hermiticity > tolerance::kHermiticity) {
    report.violations.push_back({Invariant::hermiticity, hermiticity});
  }

  const double trace_error = std::abs(entries.trace() - Complex(1.0, 0.0));
  if (trace_error > tolerance::kTrace) {
    report.violations.push_back({Invariant::trace, trace_error});
  }

  // Eigenvalues of the Hermitian part; the anti-Hermitian part is already
  // covered by the hermiticity check.
  const ComplexMatrix hermitian_part = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part,
                                                      Eigen::EigenvaluesOnly);
  const double lambda_min = solver.eigenvalues().minCoeff();
  if (lambda_min < -tolerance::kPositivity) {
    report.violations.push_back({Invariant::positivity, -lambda_min});
  }
  return report;
}

inline ValidityReport validate(const AtomicDensityMatrix& rho) {
  return validate(rho.space(), rho.entries());
}

inline void require_valid(const AtomicDensityMatrix& rho, const char* where) {
  const auto report = validate(rho);
  if (!report.ok()) {
    std::string message = std::string(where) + ": invalid density matrix (";
    for (std::size_t i = 0; i < report.violations.size(); ++i) {
      if (i) message += ", ";
      message += to_string(report.violations[i].invariant);
      message += ' ' + format_double(report.violations[i].excess);
    }
    throw std::invalid_argument(message + ")");
  }
}

// Mean number of excitations, sum_m m rho^{mm}, in units of hbar*omega0.
inline double excitation_energy(const AtomicDensityMatrix& rho) {
  require_valid(rho, "excitation_energy");
  double energy = 0.0;
  for (int m = 1; m < rho.dim(); ++m) energy += m * rho(m, m).real();
  return energy;
}

inline double purity(const AtomicDensityMatrix& rho) {
  return (rho.entries() * rho.entries()).trace().real();
}

// Columns m,n,re,im in row-major order.
inline void write_density_csv(std::ostream& os, const AtomicDensityMatrix& rho,
                              const Metadata& metadata = {}) {
  write_metadata(os, metadata);
  os << "m,n,re,im\n";
  for (int m = 0; m < rho.dim(); ++m) {
    for (int n = 0; n < rho.dim(); ++n) {
      os << m << ',' << n << ',' << format_double(rho(m, n).real()) << ','
         << format_double(rho(m, n).imag()) << '\n';
    }
  }
}

}  // namespace superrad
