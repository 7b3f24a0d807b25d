#include <doctest.h>

#include <algorithm>

#include "threshold_lab/verify.hpp"

using namespace threshold_lab;

namespace {

bool passed(const std::vector<CheckResult>& rs, const std::string& prefix) {
  auto it = std::find_if(rs.begin(), rs.end(), [&](const CheckResult& c) { return c.name.rfind(prefix, 0) == 0; });
  REQUIRE(it != rs.end());
  return it->passed;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("fast level passes") {
  const auto rs = run_verify(VerifyLevel::Fast);
  CHECK(rs.size() == 12);
  for (const auto& c : rs) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
}

TEST_CASE("a sign error in p3 is caught") {
  CoreHooks hooks = CoreHooks::defaults();
  hooks.joint_bichromatic = [](const OverlapPointd& p, int k) {
    // Wrong sign on the gamma^k correction.
    return joint_bichromatic(p, k) - 2 * std::pow(p.gamma, k);
  };
  const auto rs = run_verify(VerifyLevel::Fast, hooks);
  CHECK_FALSE(passed(rs, "identity: p3(a,a,a) = s(a)"));
  CHECK(passed(rs, "identity: g_nae(a) = g_nae(1-a)"));
}

TEST_CASE("an asymmetric g_nae is caught") {
  CoreHooks hooks = CoreHooks::defaults();
  hooks.log_g_nae = [](double a, const Params& p) { return log_g_nae(a, p) + 1e-9 * a; };
  const auto rs = run_verify(VerifyLevel::Fast, hooks);
  CHECK_FALSE(passed(rs, "identity: g_nae(a) = g_nae(1-a)"));
  CHECK_FALSE(passed(rs, "identity: ln g_r(1/2,1/2,g) = ln g_nae(2g)"));
  CHECK(passed(rs, "identity: p3(a,a,a) = s(a)"));
}

}
