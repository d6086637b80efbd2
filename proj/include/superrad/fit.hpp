#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "superrad/error.hpp"

namespace superrad {

struct PowerLawFit {
  double exponent = 0.0;
  double standard_error = 0.0;
  double log_prefactor = 0.0;  // y ≈ exp(log_prefactor) x^exponent
  int points = 0;
};

// Ordinary least squares of log y on log x; the standard error comes from
// the residual variance with n - 2 degrees of freedom.
inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit_power_law: at least 3 points required");
  const auto n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw NumericError("fit_power_law: non-positive value cannot be log-transformed");
    }
    mean_x += std::log(x[i]);
    mean_y += std::log(y[i]);
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - mean_y);
  }
  if (sxx == 0.0) throw NumericError("fit_power_law: all x values coincide");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = mean_y - fit.exponent * mean_x;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - (fit.log_prefactor + fit.exponent * std::log(x[i]));
    ssr += r * r;
  }
  fit.standard_error = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  fit.points = static_cast<int>(x.size());
  return fit;
}

}  // namespace superrad
