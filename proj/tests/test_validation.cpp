#include <gtest/gtest.h>

#include <sstream>

#include "superrad/validation.hpp"

namespace superrad::validation {
namespace {

TEST(ValidateSuite, FreshBuildPasses) {
  const auto results = validate_suite();
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) EXPECT_TRUE(r.pass) << r.name << " worst=" << r.worst;
  std::ostringstream os;
  print_report(os, results);
  EXPECT_EQ(os.str().find("FAIL"), std::string::npos);
}

// Mutation: flip the phase convention of the scattering matrix (equivalently
// the sign of i in every off-diagonal entry). The oracle battery must notice.
TEST(ValidateSuite, OracleCatchesPhaseSignMutation) {
  const ScatteringFactory mutated = [](DickeSpace space, std::complex<double> g) {
    const auto good = scattering_matrix(space, g);
    return ScatteringMatrix(space, g, good.entries().conjugate());
  };
  const auto result = check_oracle_equivalence(mutated);
  EXPECT_FALSE(result.pass);
  EXPECT_GT(result.worst, 1e-4);
}

}  // namespace
}  // namespace superrad::validation
