#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace superrad {

// exp(A) by scaling and squaring with a truncated Taylor series. A is scaled
// by 2^-s until ||A||_1 <= 1/2; the degree-18 remainder is then bounded by
// 0.5^19 / 19! e^{0.5} < 1e-22 relative, so the result is accurate to
// roundoff accumulated over the s squarings.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(
    const Eigen::MatrixBase<Derived>& a) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");

  constexpr int kTaylorDegree = 18;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm)) throw std::invalid_argument("expm: non-finite matrix");

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);

  const auto n = a.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= kTaylorDegree; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace superrad
