#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace threshold_lab {

template <typename F>
std::pair<double, double> maximize_scalar(F&& f, double lo, double hi, int scan_points,
                                          double xtol) {
  if (scan_points < 2) scan_points = 2;
  const double h = (hi - lo) / double(scan_points - 1);
  int best = 0;
  double best_val = f(lo);
  for (int i = 1; i < scan_points; ++i) {
    const double x = (i == scan_points - 1) ? hi : lo + h * i;
    const double v = f(x);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + h * std::max(best - 1, 0);
  double b = (best + 1 >= scan_points) ? hi : lo + h * (best + 1);
  double best_x = (best == scan_points - 1) ? hi : lo + h * best;

  // Golden-section refinement inside the bracketing triple.
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  if (fm > best_val) {
    best_val = fm;
    best_x = xm;
  }
  if (f1 > best_val) {
    best_val = f1;
    best_x = x1;
  }
  if (f2 > best_val) {
    best_val = f2;
    best_x = x2;
  }
  return {best_x, best_val};
}

}  // namespace threshold_lab
