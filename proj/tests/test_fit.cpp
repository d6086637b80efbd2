#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "superrad/fit.hpp"

namespace superrad {
namespace {

TEST(PowerLawFit, ExactPowerLaw) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  const auto fit = fit_power_law(x, y);
  EXPECT_NEAR(fit.exponent, 2.0, 1e-13);
  EXPECT_NEAR(fit.standard_error, 0.0, 1e-12);
  EXPECT_NEAR(std::exp(fit.log_prefactor), 3.0, 1e-12);
  EXPECT_EQ(fit.points, 5);
}

TEST(PowerLawFit, StandardErrorFromResiduals) {
  // log y = 1.5 log x + r with residuals +-0.1 alternating around the line.
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  const double r[] = {0.1, -0.1, -0.1, 0.1};
  for (std::size_t i = 0; i < x.size(); ++i) y.push_back(std::exp(1.5 * std::log(x[i]) + r[i]));
  const auto fit = fit_power_law(x, y);
  EXPECT_NEAR(fit.exponent, 1.5, 1e-12);
  // SSR = 0.04, Sxx = 5 (ln 2)^2, dof = 2.
  EXPECT_NEAR(fit.standard_error, std::sqrt(0.04 / 2.0 / (5.0 * std::pow(std::log(2.0), 2))), 1e-12);
}

TEST(PowerLawFit, RejectsDegenerateInput) {
  EXPECT_THROW(fit_power_law(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
               std::invalid_argument);
  EXPECT_THROW(fit_power_law(std::vector<double>{1, 2, 3}, std::vector<double>{1, 0, 2}),
               NumericError);
  EXPECT_THROW(fit_power_law(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}),
               NumericError);
}

}  // namespace
}  // namespace superrad
