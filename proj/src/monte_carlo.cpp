#include "threshold_lab/monte_carlo.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "threshold_lab/exact_moments.hpp"
#include "threshold_lab/hypergraph.hpp"
#include "threshold_lab/rng.hpp"

namespace threshold_lab {

namespace {

// Runs body(t) for t in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(int count, int threads, Body&& body) {
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    for (int t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int t = next++; t < count; t = next++) body(t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

McEstimate mc_probability(int n, int k, long m, int trials, std::uint64_t master_seed,
                          const McOptions& options) {
  if (trials < 1) throw DomainError("mc_probability: trials must be >= 1");
  McEstimate est;
  est.records.resize(static_cast<std::size_t>(trials));
  parallel_for(trials, options.threads, [&](int t) {
    const auto start = std::chrono::steady_clock::now();
    const Hypergraph h = generate(n, k, m, SplitMix64::derive_seed(master_seed, t));
    const SolveResult res = is_2colorable(h);
    auto& rec = est.records[t];
    rec = {k, n, m, double(m) / n, master_seed, t, res.colorable, res.decisions, 0.0};
    if (options.record_timing) {
      rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  });
  long hits = 0;
  for (const auto& rec : est.records) hits += rec.colorable;
  est.p_hat = double(hits) / trials;
  est.ci_halfwidth = 1.96 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / trials);
  return est;
}

McEstimate mc_probability(const Params& params, int n, int trials, std::uint64_t master_seed,
                          const McOptions& options) {
  params.validate();
  McEstimate est = mc_probability(n, params.k, edges_for(params.r, n), trials, master_seed, options);
  for (auto& rec : est.records) rec.r = params.r;
  return est;
}

McCurve mc_curve(int k, std::span<const double> r_grid, int n, int trials,
                 std::uint64_t master_seed, const McOptions& options) {
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1])) throw DomainError("mc_curve: r grid must be strictly increasing");
  }
  McCurve curve;
  for (double r : r_grid) {
    McEstimate est = mc_probability(Params{k, r}, n, trials, master_seed, options);
    curve.points.push_back({r, edges_for(r, n), est.p_hat, est.ci_halfwidth});
    curve.records.insert(curve.records.end(), est.records.begin(), est.records.end());
  }
  return curve;
}

void write_jsonl(std::ostream& os, std::span<const ExperimentRecord> records) {
  for (const auto& rec : records) {
    nlohmann::ordered_json j;
    j["k"] = rec.k;
    j["n"] = rec.n;
    j["m"] = rec.m;
    j["r"] = rec.r;
    j["master_seed"] = rec.master_seed;
    j["trial"] = rec.trial;
    j["colorable"] = rec.colorable;
    j["decisions"] = rec.decisions;
    j["elapsed_ms"] = rec.elapsed_ms;
    os << j.dump() << '\n';
  }
}

MomentCheck mc_moment_check(int n, int k, long m, int trials, std::uint64_t master_seed,
                            int threads) {
  if (n > 20) throw ResourceError("n <= 20", "mc_moment_check: n = " + std::to_string(n) + " exceeds n <= 20");
  if (trials < 1) throw DomainError("mc_moment_check: trials must be >= 1");
  std::vector<double> xs(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](int t) {
    xs[t] = double(count_colorings(generate(n, k, m, SplitMix64::derive_seed(master_seed, t))));
  });

  MomentCheck out;
  out.n = n;
  out.k = k;
  out.m = m;
  out.trials = trials;
  double s1 = 0, s2 = 0;
  for (double x : xs) {
    s1 += x;
    s2 += x * x;
  }
  out.mean_x = s1 / trials;
  out.mean_x2 = s2 / trials;
  double v1 = 0, v2 = 0;
  for (double x : xs) {
    v1 += (x - out.mean_x) * (x - out.mean_x);
    v2 += (x * x - out.mean_x2) * (x * x - out.mean_x2);
  }
  const double denom = trials > 1 ? double(trials - 1) : 1.0;
  out.se_x = std::sqrt(v1 / denom / trials);
  out.se_x2 = std::sqrt(v2 / denom / trials);
  out.exact_first = std::exp(exact_first_moment(n, k, m));
  out.exact_second = std::exp(exact_second_moment(n, k, m));

  // A zero standard error means X was constant; demand agreement to rounding.
  auto within = [](double mean, double se, double exact, double& z) {
    if (se == 0.0) {
      z = 0.0;
      return std::abs(mean - exact) <= 1e-9 * std::max(1.0, std::abs(exact));
    }
    z = (mean - exact) / se;
    return std::abs(z) <= 4.0;
  };
  out.agree = within(out.mean_x, out.se_x, out.exact_first, out.z_first) &
              within(out.mean_x2, out.se_x2, out.exact_second, out.z_second);
  return out;
}

}  // namespace threshold_lab
