#include "threshold_lab/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "threshold_lab/exact_moments.hpp"
#include "threshold_lab/monte_carlo.hpp"
#include "threshold_lab/rng.hpp"
#include "threshold_lab/threshold_bounds.hpp"

namespace threshold_lab {

CoreHooks CoreHooks::defaults() {
  return {
      [](double a, int k) { return threshold_lab::single_bichromatic(a, k); },
      [](const OverlapPointd& p, int k) { return threshold_lab::joint_bichromatic(p, k); },
      [](double a, const Params& p) { return threshold_lab::log_g_nae(a, p); },
      [](const OverlapPointd& pt, const Params& p) { return threshold_lab::log_g_r(pt, p); },
  };
}

namespace {

constexpr int kIdentityPoints = 1000;
constexpr double kIdentityTol = 1e-12;
constexpr std::uint64_t kIdentitySeed = 20020601;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CheckResult max_error_check(std::string name, double worst, double tol, const std::string& where) {
  return {std::move(name), worst <= tol, "max |error| " + fmt(worst) + " (tol " + fmt(tol) + ")" + where};
}

// Random (k, r) with k in [3, 12] and r in (0, upper_bound(k)].
Params random_params(SplitMix64& rng) {
  const int k = 3 + static_cast<int>(rng.below(10));
  return {k, upper_bound(k) * (1.0 - rng.uniform())};
}

std::vector<CheckResult> identity_checks(const CoreHooks& h) {
  std::vector<CheckResult> out;
  SplitMix64 rng(kIdentitySeed);
  double e_diag = 0, e_indep = 0, e_restrict = 0, e_sym = 0, e_norm = 0;
  for (int i = 0; i < kIdentityPoints; ++i) {
    const Params p = random_params(rng);
    const double a = rng.uniform(), b = rng.uniform(), g = 0.5 * rng.uniform();
    e_diag = std::max(e_diag, std::abs(h.joint_bichromatic({a, a, a}, p.k) - h.single_bichromatic(a, p.k)));
    e_indep = std::max(e_indep, std::abs(h.joint_bichromatic({a, b, a * b}, p.k) -
                                         h.single_bichromatic(a, p.k) * h.single_bichromatic(b, p.k)));
    e_restrict = std::max(e_restrict, std::abs(h.log_g_r({0.5, 0.5, g}, p) - h.log_g_nae(2 * g, p)));
    e_sym = std::max(e_sym, std::abs(h.log_g_nae(a, p) - h.log_g_nae(1.0 - a, p)));
    e_norm = std::max({e_norm, std::abs(h.log_g_r(symmetric_point(), p)), std::abs(h.log_g_nae(0.5, p))});
  }
  out.push_back(max_error_check("identity: p3(a,a,a) = s(a)", e_diag, kIdentityTol, ""));
  out.push_back(max_error_check("identity: p3(a,b,ab) = s(a)s(b)", e_indep, kIdentityTol, ""));
  out.push_back(max_error_check("identity: ln g_r(1/2,1/2,g) = ln g_nae(2g)", e_restrict, kIdentityTol, ""));
  out.push_back(max_error_check("identity: g_nae(a) = g_nae(1-a)", e_sym, kIdentityTol, ""));
  out.push_back(max_error_check("identity: g_r(1/2,1/2,1/4) = g_nae(1/2) = 1", e_norm, kIdentityTol, ""));
  return out;
}

// Lower bounds used to place the derivative checks; reused across checks.
const std::map<int, double>& lower_bounds() {
  static const std::map<int, double> lbs = [] {
    std::map<int, double> m;
    for (const auto& row : bounds_table(3, 12)) m[row.k] = row.lower;
    return m;
  }();
  return lbs;
}

std::vector<CheckResult> derivative_checks() {
  std::vector<CheckResult> out;
  double worst_g2 = 0, worst_det = 0;
  std::string where_g2, where_det;
  for (const auto& [k, lb] : lower_bounds()) {
    for (double frac : {0.5, 0.9}) {
      const Params p{k, frac * lb};
      const double h = kFdStep;
      auto g = [&](double a) { return first_moment_g(a, p); };
      const double fd = (g(0.5 + h) - 2 * g(0.5) + g(0.5 - h)) / (h * h);
      const double closed = first_moment_g2_closed(p);
      const double e2 = std::abs(fd / closed - 1.0);
      if (e2 > worst_g2) {
        worst_g2 = e2;
        where_g2 = " at k=" + std::to_string(k) + " r=" + fmt(p.r);
      }
      const double ed = std::abs(hessian_fd_det(p).det / hessian_det_closed(p) - 1.0);
      if (ed > worst_det) {
        worst_det = ed;
        where_det = " at k=" + std::to_string(k) + " r=" + fmt(p.r);
      }
    }
  }
  out.push_back(max_error_check("closed form: g''(1/2) vs finite differences (rel)", worst_g2, 1e-4, where_g2));
  out.push_back(max_error_check("closed form: Hessian determinant vs finite differences (rel)", worst_det, 1e-4,
                                where_det));

  bool flips = true;
  std::string flip_detail = "sign flips at 2^{2k}q^2/(4k(k-1)) for k = 3..12";
  for (int k = 3; k <= 12; ++k) {
    const double hb = hessian_bound(k);
    const double below = hessian_fd_det({k, 0.99 * hb}).det;
    const double above = hessian_fd_det({k, 1.01 * hb}).det;
    if (!(below < 0 && above > 0)) {
      flips = false;
      flip_detail = "no sign flip at k=" + std::to_string(k) + ": det(0.99b)=" + fmt(below) +
                    " det(1.01b)=" + fmt(above);
      break;
    }
  }
  out.push_back({"closed form: Hessian determinant sign flip", flips, flip_detail});
  return out;
}

struct TableEntry {
  int k;
  double lower;
  double upper;
};

constexpr std::array<TableEntry, 7> kReferenceBounds = {{
    {3, 1.5, 2.409},
    {4, 49.0 / 12.0, 5.191},
    {5, 9.973, 10.740},
    {7, 43.432, 44.014},
    {9, 176.570, 177.099},
    {11, 708.925, 709.436},
    {12, 1418.712, 1419.219},
}};

std::vector<CheckResult> bounds_checks() {
  std::vector<CheckResult> out;
  double worst = 0;
  std::string where;
  for (const auto& e : kReferenceBounds) {
    const BoundsRow row = lower_bound(e.k);
    for (auto [got, want] : {std::pair{row.lower, e.lower}, std::pair{row.upper, e.upper}}) {
      if (std::abs(got - want) > worst) {
        worst = std::abs(got - want);
        where = " at k=" + std::to_string(e.k);
      }
    }
  }
  out.push_back(max_error_check("bounds: reference table reproduced", worst, 1e-3, where));

  bool thm = true;
  std::string detail = "lower_bound(k) >= 2^{k-1} ln 2 - ln 2 / 2 - 1 for k = 5..12";
  for (const auto& [k, lb] : lower_bounds()) {
    if (k < 5) continue;
    const double target = std::ldexp(std::log(2.0), k - 1) - std::log(2.0) / 2 - 1.0;
    if (!(lb >= target)) {
      thm = false;
      detail = "k=" + std::to_string(k) + ": " + fmt(lb) + " < " + fmt(target);
    }
  }
  out.push_back({"bounds: finite-k asymptotic lower bound", thm, detail});

  for (const Params& p : {Params{3, 1.4}, Params{7, 40.0}}) {
    const AbHalfReport rep = verify_abhalf(p);
    out.push_back({"extrema: phi/psi monotonicity at k=" + std::to_string(p.k) + " r=" + fmt(p.r), rep.passed(),
                   rep.passed() ? "phi and psi strictly decreasing, psi(1/2) = 0" : rep.counterexample});
  }
  return out;
}

std::vector<CheckResult> full_checks(int threads) {
  std::vector<CheckResult> out;

  double worst = 0;
  for (int n = 3; n <= 6; ++n) {
    for (int m = 0; m <= 3; ++m) {
      const BruteForceMoments bf = brute_force_moments(n, 3, m);
      worst = std::max(worst, std::abs(std::exp(exact_first_moment(n, 3, m)) / bf.first - 1.0));
      worst = std::max(worst, std::abs(std::exp(exact_second_moment(n, 3, m)) / bf.second - 1.0));
    }
  }
  out.push_back(max_error_check("moments: exact sums vs brute force (rel)", worst, 1e-10, ""));

  {
    std::vector<double> vals;
    for (int n : {40, 80, 120, 160, 200}) vals.push_back(asym_ratio_sum(n, {3, 1.4}, threads));
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    out.push_back({"moments: ratio sum bounded at k=3 r=1.4", *hi - *lo < std::log(2.0),
                   "spread " + fmt(*hi - *lo) + " (limit ln 2)"});
    const double growth = asym_ratio_sum(200, {3, 2.0}, threads) - asym_ratio_sum(100, {3, 2.0}, threads);
    out.push_back({"moments: ratio sum grows at k=3 r=2", growth > std::log(10.0),
                   "ln S(200) - ln S(100) = " + fmt(growth) + " (need > ln 10)"});
  }

  {
    const MomentCheck mc = mc_moment_check(12, 3, 6, 10000, 7, threads);
    out.push_back({"moments: Monte Carlo vs exact at n=12 k=3 m=6", mc.agree,
                   "z(E[X]) = " + fmt(mc.z_first) + ", z(E[X^2]) = " + fmt(mc.z_second)});
  }

  {
    std::vector<int> ns;
    for (int n = 100; n <= 1000; n += 100) ns.push_back(n);
    const auto seq = laplace_check(ns, {3, 1.0}, LaplaceDims::One);
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (const auto& [n, v] : seq) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.push_back({"laplace: one-dimensional band at k=3 r=1", hi - lo < 1.0, "band width " + fmt(hi - lo)});
  }
  {
    const std::array<int, 5> ns{40, 80, 120, 160, 200};
    const auto seq = laplace_check(ns, {3, 1.4}, LaplaceDims::Three, threads);
    // Non-diverging: increments shrink and the total drift stays below ln 2.
    bool bounded = seq.back().second - seq.front().second < std::log(2.0);
    for (std::size_t i = 2; i < seq.size(); ++i) {
      bounded = bounded && (seq[i].second - seq[i - 1].second) < (seq[i - 1].second - seq[i - 2].second);
    }
    out.push_back({"laplace: three-dimensional sum bounded at k=3 r=1.4", bounded,
                   "drift " + fmt(seq.back().second - seq.front().second)});
  }

  {
    bool ok = true;
    std::string detail = "no competitor above 1 - 1e-6 off alpha = beta = 1/2";
    for (int k = 3; k <= 7 && ok; ++k) {
      for (double frac : {0.5, 0.95}) {
        GrOptions opt;
        opt.exclusion_radius = 1e-3;
        const Params p{k, frac * lower_bounds().at(k)};
        const GrReport rep = maximize_gr(p, opt);
        if (!(rep.secondary_max < 1.0 - 1e-6)) {
          ok = false;
          detail = "k=" + std::to_string(k) + " r=" + fmt(p.r) + ": secondary " + fmt(rep.secondary_max);
          break;
        }
      }
    }
    out.push_back({"extrema: maximizer stays at alpha = beta = 1/2", ok, detail});
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_verify(VerifyLevel level, const CoreHooks& hooks, int threads) {
  std::vector<CheckResult> out = identity_checks(hooks);
  for (auto* group : {&derivative_checks, &bounds_checks}) {
    auto part = group();
    out.insert(out.end(), part.begin(), part.end());
  }
  if (level == VerifyLevel::Full) {
    auto part = full_checks(threads);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace threshold_lab
