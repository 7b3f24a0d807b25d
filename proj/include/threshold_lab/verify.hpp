#pragma once

// Named invariant checks across all modules, as run by `threshold_lab verify`.

#include <functional>
#include <string>
#include <vector>

#include "threshold_lab/core_math.hpp"

namespace threshold_lab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The evaluators the identity checks exercise. Replaceable so that a harness
// can inject a faulty implementation and confirm the suite catches it.
struct CoreHooks {
  std::function<double(double, int)> single_bichromatic;
  std::function<double(const OverlapPointd&, int)> joint_bichromatic;
  std::function<double(double, const Params&)> log_g_nae;
  std::function<double(const OverlapPointd&, const Params&)> log_g_r;

  static CoreHooks defaults();
};

enum class VerifyLevel { Fast, Full };

std::vector<CheckResult> run_verify(VerifyLevel level, const CoreHooks& hooks = CoreHooks::defaults(),
                                    int threads = 1);

}  // namespace threshold_lab
