#pragma once

// Seeded Monte Carlo estimates of Pr[H_k(n, m) is 2-colorable].
//
// Trial t of a run with master seed s generates its instance from the stream
// SplitMix64::derive_seed(s, t). The same (s, t) pair is reused across edge
// densities, so within a curve the instance at a larger m extends the one at
// a smaller m edge-for-edge.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "threshold_lab/core_math.hpp"

namespace threshold_lab {

struct ExperimentRecord {
  int k = 0;
  int n = 0;
  long m = 0;
  double r = 0.0;
  std::uint64_t master_seed = 0;
  int trial = 0;
  bool colorable = false;
  long decisions = 0;
  double elapsed_ms = 0.0;
};

struct McOptions {
  int threads = 1;
  // Wall-clock timing makes output run-dependent; off by default.
  bool record_timing = false;
};

struct McEstimate {
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal approximation
  std::vector<ExperimentRecord> records;
};

McEstimate mc_probability(int n, int k, long m, int trials, std::uint64_t master_seed,
                          const McOptions& options = {});
/// Same, with m = edges_for(r, n).
McEstimate mc_probability(const Params& params, int n, int trials, std::uint64_t master_seed,
                          const McOptions& options = {});

struct CurvePoint {
  double r = 0.0;
  long m = 0;
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;
};

struct McCurve {
  std::vector<CurvePoint> points;
  std::vector<ExperimentRecord> records;
};

/// One estimate per density; `r_grid` must be strictly increasing.
McCurve mc_curve(int k, std::span<const double> r_grid, int n, int trials,
                 std::uint64_t master_seed, const McOptions& options = {});

void write_jsonl(std::ostream& os, std::span<const ExperimentRecord> records);

struct MomentCheck {
  int n = 0;
  int k = 0;
  long m = 0;
  int trials = 0;
  double mean_x = 0.0;
  double se_x = 0.0;
  double mean_x2 = 0.0;
  double se_x2 = 0.0;
  double exact_first = 0.0;
  double exact_second = 0.0;
  double z_first = 0.0;
  double z_second = 0.0;
  bool agree = true;  // both within 4 standard errors
};

/// Sample moments of the coloring count against the exact sums (n <= 20).
MomentCheck mc_moment_check(int n, int k, long m, int trials, std::uint64_t master_seed,
                            int threads = 1);

}  // namespace threshold_lab
