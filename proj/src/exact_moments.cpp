#include "threshold_lab/exact_moments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "threshold_lab/log_math.hpp"
#include "threshold_lab/threshold_bounds.hpp"

namespace threshold_lab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_instance(int n, int k, long m, const char* what) {
  if (k < 3) throw DomainError(std::string(what) + ": k must be >= 3");
  if (k > n) {
    throw DomainError(std::string(what) + ": k = " + std::to_string(k) + " exceeds n = " +
                      std::to_string(n));
  }
  if (m < 0) throw DomainError(std::string(what) + ": m must be >= 0");
}

void check_sum_size(int n, const char* what) {
  if (n > kMaxSumVertices) {
    throw ResourceError("n <= " + std::to_string(kMaxSumVertices),
                        std::string(what) + ": n = " + std::to_string(n) +
                            " exceeds the composition-sum guard n <= " +
                            std::to_string(kMaxSumVertices));
  }
}

// m ln(1 + excess), with the m = 0 and non-positive-probability cases pinned.
double log_prob_power(long m, double excess) {
  if (m == 0) return 0.0;
  if (!(excess > -1.0)) return kNegInf;
  return double(m) * std::log1p(excess);
}

struct SliceResult {
  LogSumAccumulator acc;
  double max_term = kNegInf;
  CellCounts argmax;
};

// Sum over all compositions z1+z2+z3+z4 = n of
//   multinomial(n; z) * (1 + excess(z))^m * exp(offset),
// where excess(z) = -mono[z1+z2] - mono[z3+z4] - mono[z1+z3] - mono[z2+z4]
//                   + mono[z1] + mono[z2] + mono[z3] + mono[z4]
// and mono[a] is the probability that an edge lands inside a set of a vertices.
// Slices by z1 are independent; they are folded in z1 order so the result is
// the same for any worker count.
SliceResult composition_sum(int n, long m, const std::vector<double>& mono, double offset,
                            int threads) {
  const LogFactorials lf(n);
  const double ln_nfact = lf(n);
  auto slice = [&](int z1) {
    SliceResult out;
    for (int z2 = 0; z1 + z2 <= n; ++z2) {
      const double ea = mono[z1 + z2] + mono[n - z1 - z2];
      for (int z3 = 0; z1 + z2 + z3 <= n; ++z3) {
        const int z4 = n - z1 - z2 - z3;
        const double excess = -ea - mono[z1 + z3] - mono[n - z1 - z3] + mono[z1] + mono[z2] +
                              mono[z3] + mono[z4];
        const double lp = log_prob_power(m, excess);
        if (lp == kNegInf) continue;
        const double term = ln_nfact - lf(z1) - lf(z2) - lf(z3) - lf(z4) + lp + offset;
        out.acc.add(term);
        if (term > out.max_term) {
          out.max_term = term;
          out.argmax = {z1, z2, z3, z4};
        }
      }
    }
    return out;
  };

  std::vector<SliceResult> slices(static_cast<std::size_t>(n) + 1);
  const int workers = std::clamp(threads, 1, n + 1);
  if (workers == 1) {
    for (int z1 = 0; z1 <= n; ++z1) slices[z1] = slice(z1);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int z1 = next++; z1 <= n; z1 = next++) slices[z1] = slice(z1);
      });
    }
    for (auto& t : pool) t.join();
  }

  SliceResult total;
  for (const auto& s : slices) {
    total.acc.merge(s.acc);
    if (s.max_term > total.max_term) {
      total.max_term = s.max_term;
      total.argmax = s.argmax;
    }
  }
  return total;
}

// mono[a] = C(a,k) / C(n,k): a uniformly drawn k-subset lies inside a given a-set.
std::vector<double> hypergeometric_mono(int n, int k) {
  const LogFactorials lf(n);
  const double denom = lf.choose(n, k);
  std::vector<double> mono(static_cast<std::size_t>(n) + 1);
  for (int a = 0; a <= n; ++a) mono[a] = a < k ? 0.0 : std::exp(lf.choose(a, k) - denom);
  return mono;
}

// mono[a] = (a/n)^k: k independent vertex draws all land in a given a-set.
std::vector<double> power_mono(int n, int k) {
  std::vector<double> mono(static_cast<std::size_t>(n) + 1);
  for (int a = 0; a <= n; ++a) mono[a] = std::pow(double(a) / n, k);
  return mono;
}

double first_sum(int n, long m, const std::vector<double>& mono) {
  const LogFactorials lf(n);
  LogSumAccumulator acc;
  for (int z = 0; z <= n; ++z) {
    const double lp = log_prob_power(m, -(mono[z] + mono[n - z]));
    if (lp == kNegInf) continue;
    acc.add(lf.choose(n, z) + lp);
  }
  return acc.value();
}

}  // namespace

std::string to_string(MomentMode mode) { return mode == MomentMode::Exact ? "EXACT" : "ASYMPTOTIC"; }

double MomentReport::probability_lower_bound() const {
  return std::exp(2.0 * log_first - log_second);
}

long edges_for(double r, int n) { return static_cast<long>(std::floor(r * n + 0.5)); }

double exact_first_moment(int n, int k, long m) {
  check_instance(n, k, m, "exact_first_moment");
  return first_sum(n, m, hypergeometric_mono(n, k));
}

double exact_second_moment(int n, int k, long m, int threads) {
  check_instance(n, k, m, "exact_second_moment");
  check_sum_size(n, "exact_second_moment");
  return composition_sum(n, m, hypergeometric_mono(n, k), 0.0, threads).acc.value();
}

double asym_first_sum(int n, const Params& params) {
  params.validate();
  if (n < 1) throw DomainError("asym_first_sum: n must be >= 1");
  return first_sum(n, edges_for(params.r, n), power_mono(n, params.k));
}

double asym_second_sum(int n, const Params& params, int threads) {
  params.validate();
  if (n < 1) throw DomainError("asym_second_sum: n must be >= 1");
  check_sum_size(n, "asym_second_sum");
  return composition_sum(n, edges_for(params.r, n), power_mono(n, params.k), 0.0, threads)
      .acc.value();
}

RatioSumReport asym_ratio_sum_report(int n, const Params& params, int threads) {
  params.validate();
  if (n < 4) throw DomainError("asym_ratio_sum: n must be >= 4");
  check_sum_size(n, "asym_ratio_sum");
  const long m = edges_for(params.r, n);
  const double offset = -n * std::log(4.0) - 2.0 * double(m) * log_q(params.k);
  const SliceResult s = composition_sum(n, m, power_mono(n, params.k), offset, threads);
  return {s.acc.value(), s.argmax, s.max_term};
}

double asym_ratio_sum(int n, const Params& params, int threads) {
  return asym_ratio_sum_report(n, params, threads).log_sum;
}

MomentReport compute_moments(int n, int k, long m, MomentMode mode, int threads) {
  check_instance(n, k, m, "compute_moments");
  check_sum_size(n, "compute_moments");
  MomentReport rep;
  rep.n = n;
  rep.m = m;
  rep.params = {k, double(m) / n};
  rep.mode = mode;
  const auto mono = mode == MomentMode::Exact ? hypergeometric_mono(n, k) : power_mono(n, k);
  rep.log_first = first_sum(n, m, mono);
  rep.log_second = composition_sum(n, m, mono, 0.0, threads).acc.value();
  rep.log_ratio = rep.log_second - 2.0 * rep.log_first;
  return rep;
}

BruteForceMoments brute_force_moments(int n, int k, int m) {
  check_instance(n, k, m, "brute_force_moments");
  if (n > 20) throw ResourceError("2^n <= 2^20", "brute_force_moments: n must be <= 20");
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) == k) subsets.push_back(mask);
  }
  double seqs = 1.0;
  for (int i = 0; i < m; ++i) seqs *= double(subsets.size());
  if (seqs > 1e6) {
    throw ResourceError("C(n,k)^m <= 1e6",
                        "brute_force_moments: C(n,k)^m = " + std::to_string(seqs) +
                            " exceeds the guard C(n,k)^m <= 1e6");
  }

  // proper[e] is a bitset over all 2^n colorings: bit c set iff edge e is
  // bichromatic under coloring c.
  const std::size_t colorings = std::size_t{1} << n;
  const std::size_t words = (colorings + 63) / 64;
  std::vector<std::vector<std::uint64_t>> proper(subsets.size(),
                                                 std::vector<std::uint64_t>(words, 0));
  for (std::size_t e = 0; e < subsets.size(); ++e) {
    for (std::size_t c = 0; c < colorings; ++c) {
      const std::uint32_t black = static_cast<std::uint32_t>(c) & subsets[e];
      if (black != 0 && black != subsets[e]) proper[e][c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }

  BruteForceMoments out;
  std::vector<std::vector<std::uint64_t>> level(static_cast<std::size_t>(m) + 1,
                                                std::vector<std::uint64_t>(words, 0));
  for (std::size_t c = 0; c < colorings; ++c) level[0][c / 64] |= std::uint64_t{1} << (c % 64);
  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == m) {
      std::uint64_t x = 0;
      for (auto w : level[depth]) x += std::popcount(w);
      out.sum_x += x;
      out.sum_x2 += x * x;
      ++out.sequences;
      return;
    }
    for (const auto& edge : proper) {
      for (std::size_t w = 0; w < words; ++w) level[depth + 1][w] = level[depth][w] & edge[w];
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  out.first = double(out.sum_x) / double(out.sequences);
  out.second = double(out.sum_x2) / double(out.sequences);
  return out;
}

std::vector<std::pair<int, double>> laplace_check(std::span<const int> n_list,
                                                  const Params& params, LaplaceDims dims,
                                                  int threads) {
  params.validate();
  std::vector<std::pair<int, double>> out;
  out.reserve(n_list.size());
  if (dims == LaplaceDims::One) {
    auto log_g = [&](double a) { return log_first_moment_g(a, params); };
    const double log_gmax = maximize_scalar(log_g, 0.0, 1.0).second;
    for (int n : n_list) out.emplace_back(n, asym_first_sum(n, params) - n * log_gmax);
  } else {
    const double log_gmax = maximize_gr(params).log_value;
    for (int n : n_list) out.emplace_back(n, asym_ratio_sum(n, params, threads) - n * log_gmax);
  }
  return out;
}

}  // namespace threshold_lab
