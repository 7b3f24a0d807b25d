#include "threshold_lab/threshold_bounds.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "threshold_lab/rng.hpp"

namespace threshold_lab {

std::string to_string(Binding b) { return b == Binding::Hessian ? "HESSIAN" : "TANGENCY"; }

GnaeReport maximize_gnae(const Params& params, double exclusion_radius) {
  params.validate();
  if (!(exclusion_radius >= 0.0 && exclusion_radius <= 0.4)) {
    throw DomainError("maximize_gnae: exclusion_radius must lie in [0, 0.4]");
  }
  auto f = [&](double a) { return log_g_nae(a, params); };

  GnaeReport rep;
  auto [x, v] = maximize_scalar(f, 0.0, 0.5);
  rep.argmax = x;
  rep.log_value = v;
  if (exclusion_radius > 0.0) {
    auto [xs, vs] = maximize_scalar(f, 0.0, 0.5 - exclusion_radius);
    rep.secondary_argmax = xs;
    rep.log_secondary_max = vs;
    if (vs > rep.log_value) {
      rep.argmax = xs;
      rep.log_value = vs;
    }
  } else {
    rep.secondary_argmax = rep.argmax;
    rep.log_secondary_max = rep.log_value;
  }
  rep.value = std::exp(rep.log_value);
  rep.secondary_max = std::exp(rep.log_secondary_max);
  rep.n_starts = 1;
  return rep;
}

double hessian_bound(int k) {
  Params{k, 1.0}.validate();
  const double q = q_of(k);
  return std::ldexp(q * q, 2 * k) / (4.0 * k * (k - 1));
}

double upper_bound(int k) {
  Params{k, 1.0}.validate();
  return std::log(2.0) / -log_q(k);
}

double tangency_bound(int k, double tol, double exclusion) {
  Params{k, 1.0}.validate();
  if (!(tol > 0.0)) throw DomainError("tangency_bound: tol must be positive");
  auto below_one = [&](double r) {
    const Params p{k, r};
    auto f = [&](double a) { return log_g_nae(a, p); };
    return maximize_scalar(f, 0.0, 0.5 - exclusion).second <= 0.0;
  };
  double lo = 1.0;
  double hi = upper_bound(k);
  if (!below_one(lo) || below_one(hi)) {
    std::ostringstream os;
    os.precision(17);
    os << "tangency_bound(k=" << k << "): bracket [" << lo << ", " << hi
       << "] does not straddle the tangency density";
    throw BracketError(lo, hi, os.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (below_one(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BoundsRow lower_bound(int k, double tol) {
  BoundsRow row;
  row.k = k;
  row.hessian_bound = hessian_bound(k);
  row.tangency_bound = tangency_bound(k, tol);
  row.upper = upper_bound(k);
  row.lower = std::min(row.hessian_bound, row.tangency_bound);
  // Within tol of each other counts as the Hessian constraint binding.
  row.binding = row.tangency_bound < row.hessian_bound - tol ? Binding::Tangency : Binding::Hessian;
  return row;
}

std::vector<BoundsRow> bounds_table(int k_min, int k_max, double tol, int threads) {
  if (k_min < 3 || k_max > 20 || k_min > k_max) {
    std::ostringstream os;
    os << "bounds_table: need 3 <= k_min <= k_max <= 20, got [" << k_min << ", " << k_max << "]";
    throw DomainError(os.str());
  }
  const int count = k_max - k_min + 1;
  std::vector<BoundsRow> rows(count);
  const int workers = std::clamp(threads, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) rows[i] = lower_bound(k_min + i, tol);
    return rows;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          rows[i] = lower_bound(k_min + i, tol);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

namespace {

using Cells = Eigen::Vector4d;

constexpr double kTieTol = 1e-12;
constexpr double kMinStep = 1e-10;
constexpr int kMaxEvalsPerAscent = 400000;

double log_gr_cells(const Cells& c, const Params& params) {
  return log_g_r(OverlapPointd::from_cells(c), params);
}

bool lex_less(const OverlapPointd& a, const OverlapPointd& b) {
  return std::tie(a.alpha, a.beta, a.gamma) < std::tie(b.alpha, b.beta, b.gamma);
}

double l1_from_center(const OverlapPointd& p) {
  return std::abs(p.alpha - 0.5) + std::abs(p.beta - 0.5);
}

struct Candidate {
  OverlapPointd point;
  double log_value = -std::numeric_limits<double>::infinity();
};

// True if `c` should replace `best` (strictly better, or tied and lexicographically smaller).
bool better(const Candidate& c, const Candidate& best) {
  if (c.log_value > best.log_value + kTieTol) return true;
  if (c.log_value >= best.log_value - kTieTol && c.log_value > -HUGE_VAL) {
    return lex_less(c.point, best.point);
  }
  return false;
}

// Pairwise mass-transfer ascent on the four cell masses. Each move shifts up
// to `step` of mass from one cell to another, clipped so masses stay >= 0.
// `allowed` rejects moves into a forbidden region.
template <typename Allowed>
Candidate ascend(Cells cells, const Params& params, double initial_step, Allowed&& allowed) {
  double f = log_gr_cells(cells, params);
  double step = initial_step;
  int evals = 1;
  while (step > kMinStep && evals < kMaxEvalsPerAscent) {
    bool improved = false;
    for (int i = 0; i < 4 && !improved; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        const double t = std::min(step, cells(j));
        if (t <= 0.0) continue;
        Cells cand = cells;
        cand(i) += t;
        cand(j) -= t;
        if (!allowed(OverlapPointd::from_cells(cand))) continue;
        const double fc = log_gr_cells(cand, params);
        ++evals;
        if (fc > f) {
          cells = cand;
          f = fc;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {OverlapPointd::from_cells(cells), f};
}

Cells cells_of(const OverlapPointd& p) { return p.cells().cwiseMax(0.0); }

}  // namespace

GrReport maximize_gr(const Params& params, const GrOptions& options) {
  params.validate();
  if (options.grid_per_axis < 32) throw DomainError("maximize_gr: grid_per_axis must be >= 32");
  if (options.n_starts < 8) throw DomainError("maximize_gr: n_starts must be >= 8");
  const int g = options.grid_per_axis;
  const double radius = options.exclusion_radius;
  auto outside = [&](const OverlapPointd& p) { return l1_from_center(p) > radius; };

  // Coarse scan; keep the best few points overall and outside the neighborhood.
  constexpr std::size_t kSeeds = 6;
  std::vector<Candidate> top, top_out;
  auto keep = [&](std::vector<Candidate>& pool, const Candidate& c) {
    auto pos = std::find_if(pool.begin(), pool.end(),
                            [&](const Candidate& o) { return better(c, o); });
    if (pos == pool.end() && pool.size() >= kSeeds) return;
    pool.insert(pos, c);
    if (pool.size() > kSeeds) pool.pop_back();
  };
  for (int i = 0; i <= g; ++i) {
    const double a = double(i) / g;
    for (int j = 0; j <= g; ++j) {
      const double b = double(j) / g;
      const double lo = std::max(0.0, a + b - 1.0);
      const double hi = std::min(a, b);
      const int steps = hi > lo ? g : 0;
      for (int l = 0; l <= steps; ++l) {
        const double c = steps ? lo + (hi - lo) * l / steps : lo;
        const OverlapPointd p{a, b, c};
        const Candidate cand{p, log_g_r(p, params)};
        keep(top, cand);
        if (outside(p)) keep(top_out, cand);
      }
    }
  }

  GrReport rep;
  Candidate best{symmetric_point(), log_g_r(symmetric_point(), params)};
  Candidate best_out;
  for (const auto& c : top) {
    if (better(c, best)) best = c;
  }
  for (const auto& c : top_out) {
    if (better(c, best_out)) best_out = c;
  }

  auto record_local = [&](const Candidate& c) {
    if (better(c, best)) best = c;
    if (outside(c.point) && better(c, best_out)) best_out = c;
    const bool seen = std::any_of(rep.local_maxima.begin(), rep.local_maxima.end(),
                                  [&](const OverlapPointd& q) {
                                    return (q.vector() - c.point.vector()).cwiseAbs().maxCoeff() < 1e-6;
                                  });
    if (!seen) rep.local_maxima.push_back(c.point);
  };
  const double step0 = 1.0 / g;
  auto anywhere = [](const OverlapPointd&) { return true; };
  for (const auto& c : top) record_local(ascend(cells_of(c.point), params, step0, anywhere));

  // Random interior restarts: uniform on the simplex via normalized exponentials.
  SplitMix64 rng(options.seed);
  for (int s = 0; s < options.n_starts; ++s) {
    Cells w;
    for (int i = 0; i < 4; ++i) w(i) = -std::log1p(-rng.uniform());
    w /= w.sum();
    record_local(ascend(w, params, step0, anywhere));
  }

  // Constrained ascents for the best value away from alpha = beta = 1/2.
  for (const auto& c : top_out) {
    const Candidate end = ascend(cells_of(c.point), params, step0, outside);
    if (better(end, best_out)) best_out = end;
  }

  rep.argmax = best.point;
  rep.log_value = best.log_value;
  rep.value = std::exp(best.log_value);
  rep.secondary_argmax = best_out.point;
  rep.log_secondary_max = best_out.log_value;
  rep.secondary_max = std::exp(best_out.log_value);
  rep.n_starts = options.n_starts;
  return rep;
}

DerivativeReport hessian_fd_det(const Params& params, double step) {
  params.validate();
  const OverlapPointd center = symmetric_point();
  const Eigen::Vector3d x0 = center.vector();
  auto g = [&](const Eigen::Vector3d& x) {
    return std::exp(log_g_r(OverlapPointd::from_vector(x), params));
  };
  const double h = step;
  const Eigen::Matrix3d e = Eigen::Matrix3d::Identity() * h;

  DerivativeReport rep;
  rep.point = center;
  const double f0 = g(x0);
  for (int i = 0; i < 3; ++i) {
    const double fp = g(x0 + e.col(i));
    const double fm = g(x0 - e.col(i));
    rep.gradient(i) = (fp - fm) / (2 * h);
    rep.hessian(i, i) = (fp - 2 * f0 + fm) / (h * h);
    for (int j = 0; j < i; ++j) {
      const double v = (g(x0 + e.col(i) + e.col(j)) - g(x0 + e.col(i) - e.col(j)) -
                        g(x0 - e.col(i) + e.col(j)) + g(x0 - e.col(i) - e.col(j))) /
                       (4 * h * h);
      rep.hessian(i, j) = v;
      rep.hessian(j, i) = v;
    }
  }
  rep.det = rep.hessian.determinant();
  return rep;
}

AbHalfReport verify_abhalf(const Params& params, int grid) {
  params.validate();
  if (grid < 100) throw DomainError("verify_abhalf: grid must be >= 100");
  AbHalfReport rep;
  const double q = q_of(params.k);
  std::ostringstream os;
  os.precision(17);

  // phi strictly decreasing in x on gamma < x < 1, for a few held-fixed p.
  for (double p_const : {q * q, 0.5 * q, q}) {
    for (int j = 0; j < grid && rep.phi_decreasing; ++j) {
      const double gamma = double(j) / grid;
      double prev = phi(gamma + (1.0 - gamma) / grid, gamma, p_const, params);
      for (int l = 2; l < grid; ++l) {
        const double x = gamma + (1.0 - gamma) * l / grid;
        const double cur = phi(x, gamma, p_const, params);
        if (!(cur < prev)) {
          rep.phi_decreasing = false;
          os << "phi not decreasing at x=" << x << " gamma=" << gamma << " p=" << p_const;
          break;
        }
        prev = cur;
      }
    }
  }

  // psi strictly decreasing in alpha on 0 < alpha <= 1/2, gamma <= alpha/2,
  // and zero at alpha = 1/2.
  for (int j = 1; j <= grid; ++j) {
    const double gamma = 0.25 * j / grid;
    bool have_prev = false;
    double prev = 0.0;
    for (int l = 1; l <= grid; ++l) {
      const double alpha = 0.5 * l / grid;
      if (gamma > 0.5 * alpha) continue;
      const double cur = psi(alpha, gamma, params);
      if (have_prev && !(cur < prev) && rep.psi_decreasing) {
        rep.psi_decreasing = false;
        if (rep.counterexample.empty() && os.str().empty()) {
          os << "psi not decreasing at alpha=" << alpha << " gamma=" << gamma;
        }
      }
      prev = cur;
      have_prev = true;
    }
    const double at_half = psi(0.5, gamma, params);
    if (std::abs(at_half) > 1e-10 && rep.psi_root_at_half) {
      rep.psi_root_at_half = false;
      if (os.str().empty()) os << "psi(1/2, " << gamma << ") = " << at_half;
    }
  }
  rep.counterexample = os.str();
  return rep;
}

}  // namespace threshold_lab
