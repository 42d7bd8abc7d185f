#include <gtest/gtest.h>

#include "halftime/errors.hpp"
#include "halftime/verify.hpp"

using namespace halftime;
using namespace halftime::verify;

namespace {

bool all_passed(const std::vector<Check>& checks, const std::string& prefix) {
  bool any = false;
  for (const auto& c : checks) {
    if (c.property.rfind(prefix, 0) != 0) continue;
    any = true;
    if (!c.passed) return false;
  }
  return any;
}

}  // namespace

TEST(Verify, QuickRunPasses) {
  const auto checks = run({.quick = true});
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.property << ": " << c.measured;
  EXPECT_GE(checks.size(), 12u);
}

TEST(Verify, SingularMatrixFailsValuation) {
  const auto checks = run({.quick = true, .fault = Fault::singular_matrix});
  EXPECT_FALSE(all_passed(checks, "valuation/"));
  EXPECT_TRUE(all_passed(checks, "distance/"));
  for (const auto& c : checks) {
    if (c.property.rfind("valuation/", 0) == 0) {
      EXPECT_NE(c.measured.find("singular"), std::string::npos);
    }
  }
}

TEST(Verify, WeakCodeFailsDistanceWithMeasuredValue) {
  const auto checks = run({.quick = true, .fault = Fault::weak_code});
  EXPECT_TRUE(all_passed(checks, "valuation/"));
  for (const auto& c : checks) {
    if (c.property.rfind("distance/", 0) != 0) continue;
    EXPECT_FALSE(c.passed) << c.property;
    EXPECT_NE(c.measured.find("distance "), std::string::npos);
  }
}

TEST(Verify, FaultNames) {
  EXPECT_EQ(parse_fault("singular-matrix"), Fault::singular_matrix);
  EXPECT_EQ(parse_fault("weak-code"), Fault::weak_code);
  EXPECT_THROW(parse_fault("other"), UsageError);
}

TEST(Verify, FormatHasOneLinePerCheck) {
  const std::vector<Check> checks = {{"a", true, "x", "y"}, {"b", false, "x", "z"}};
  const auto text = format_checks(checks);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find("FAIL b"), std::string::npos);
}
