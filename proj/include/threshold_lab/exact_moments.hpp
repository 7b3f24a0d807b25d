#pragma once

// First and second moments of the number X of proper 2-colorings of a random
// k-uniform hypergraph with m edges drawn independently, uniformly and with
// replacement. "Exact" forms use the finite-n hypergeometric edge
// probabilities; "asymptotic" forms substitute the continuous s and p3.
// Every sum is returned as a natural log.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "threshold_lab/core_math.hpp"

namespace threshold_lab {

inline constexpr int kMaxSumVertices = 400;

struct CellCounts {
  int z1 = 0;  // black in both
  int z2 = 0;  // black in the first only
  int z3 = 0;  // black in the second only
  int z4 = 0;  // white in both

  int n() const { return z1 + z2 + z3 + z4; }
  OverlapPointd overlap() const {
    const double nn = n();
    return {(z1 + z2) / nn, (z1 + z3) / nn, z1 / nn};
  }
  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

enum class MomentMode { Exact, Asymptotic };

std::string to_string(MomentMode mode);

struct MomentReport {
  int n = 0;
  Params params;
  long m = 0;
  double log_first = 0.0;
  double log_second = 0.0;
  double log_ratio = 0.0;  // log_second - 2 log_first
  MomentMode mode = MomentMode::Exact;

  /// Second-moment lower bound on Pr[X > 0]: E[X]^2 / E[X^2].
  double probability_lower_bound() const;
};

/// m = floor(r n + 1/2).
long edges_for(double r, int n);

double exact_first_moment(int n, int k, long m);
double exact_second_moment(int n, int k, long m, int threads = 1);

/// ln sum_z C(n,z) s(z/n)^m with m = edges_for(r, n).
double asym_first_sum(int n, const Params& params);
/// ln sum over compositions of multinomial(n; z) p3(z)^m.
double asym_second_sum(int n, const Params& params, int threads = 1);

struct RatioSumReport {
  double log_sum = 0.0;
  CellCounts max_term;  // composition carrying the largest term
  double log_max_term = 0.0;
};

/// ln sum over compositions of multinomial(n; z) (1/4)^n (p3(z)/q^2)^m.
/// Throws ResourceError when n exceeds kMaxSumVertices.
RatioSumReport asym_ratio_sum_report(int n, const Params& params, int threads = 1);
double asym_ratio_sum(int n, const Params& params, int threads = 1);

MomentReport compute_moments(int n, int k, long m, MomentMode mode, int threads = 1);

struct BruteForceMoments {
  double first = 0.0;   // E[X]
  double second = 0.0;  // E[X^2]
  std::uint64_t sum_x = 0;
  std::uint64_t sum_x2 = 0;
  std::uint64_t sequences = 0;
};

/// Averages X and X^2 over every equiprobable edge sequence. Limited to
/// C(n,k)^m <= 1e6 and n <= 20.
BruteForceMoments brute_force_moments(int n, int k, int m);

enum class LaplaceDims { One, Three };

/// (n, ln S_n - n ln g_max) for each n. One: S = first-moment sum, g the
/// first-moment rate. Three: S = ratio sum, g = g_r.
std::vector<std::pair<int, double>> laplace_check(std::span<const int> n_list,
                                                  const Params& params, LaplaceDims dims,
                                                  int threads = 1);

}  // namespace threshold_lab
