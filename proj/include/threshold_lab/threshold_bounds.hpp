#pragma once

// Maximization of the second-moment rate functions and the per-k density
// bounds they imply.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "threshold_lab/core_math.hpp"

namespace threshold_lab {

inline constexpr double kDefaultBoundsTol = 1e-4;
inline constexpr double kTangencyExclusion = 1e-3;
inline constexpr int kScanPoints = 4096;
inline constexpr double kFdStep = 1e-4;

enum class Binding { Hessian, Tangency };

std::string to_string(Binding b);

/// One row of the bounds table.
struct BoundsRow {
  int k = 0;
  double lower = 0.0;
  double upper = 0.0;
  double hessian_bound = 0.0;
  double tangency_bound = 0.0;
  Binding binding = Binding::Hessian;

  double gap() const { return upper - lower; }
};

/// Result of a maximization. `Point` is `double` for the one-dimensional
/// NAE rate and `OverlapPointd` for the overlap simplex. Values are g, not
/// ln g; the log forms are kept alongside since g underflows for large r.
template <typename Point>
struct MaximizerReport {
  Point argmax{};
  double value = 0.0;
  double log_value = 0.0;
  Point secondary_argmax{};
  double secondary_max = 0.0;
  double log_secondary_max = 0.0;
  int n_starts = 0;
  // End points of every local ascent (simplex case only).
  std::vector<Point> local_maxima;
};

using GnaeReport = MaximizerReport<double>;
using GrReport = MaximizerReport<OverlapPointd>;

struct DerivativeReport {
  OverlapPointd point;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
  double det = 0.0;
};

/// Scan-then-golden-section maximizer of a scalar function on [lo, hi].
/// Returns (argmax, value). Ties on the scan go to the smallest abscissa.
template <typename F>
std::pair<double, double> maximize_scalar(F&& f, double lo, double hi, int scan_points = kScanPoints,
                                          double xtol = 1e-10);

/// Maximizes g_nae over [0, 1/2]. `secondary_max` is the maximum over
/// [0, 1/2 - exclusion_radius] (set to the global value when the radius is 0).
GnaeReport maximize_gnae(const Params& params, double exclusion_radius = kTangencyExclusion);

/// Largest r (to within tol) with max over [0, 1/2 - delta] of g_nae <= 1.
double tangency_bound(int k, double tol = kDefaultBoundsTol, double exclusion = kTangencyExclusion);

/// 2^{2k} q^2 / (4k(k-1)): where the Hessian determinant at the symmetric point changes sign.
double hessian_bound(int k);

/// Root of 2 q^r = 1, the first-moment bound.
double upper_bound(int k);

BoundsRow lower_bound(int k, double tol = kDefaultBoundsTol);

/// Rows for k_min..k_max; distinct k may be computed on up to `threads` workers.
std::vector<BoundsRow> bounds_table(int k_min, int k_max, double tol = kDefaultBoundsTol,
                                    int threads = 1);

struct GrOptions {
  int grid_per_axis = 64;
  int n_starts = 16;
  // Points with |alpha - 1/2| + |beta - 1/2| <= this feed `value` only.
  double exclusion_radius = 0.01;
  std::uint64_t seed = 0x5eedULL;
};

GrReport maximize_gr(const Params& params, const GrOptions& options = {});

/// Central finite-difference gradient and Hessian of ln g_r at the symmetric point.
DerivativeReport hessian_fd_det(const Params& params, double step = kFdStep);

struct AbHalfReport {
  bool phi_decreasing = true;
  bool psi_decreasing = true;
  bool psi_root_at_half = true;
  std::string counterexample;

  bool passed() const { return phi_decreasing && psi_decreasing && psi_root_at_half; }
};

/// Grid checks of the derivative-sign arguments that confine extrema of g_r
/// to alpha = beta = 1/2.
AbHalfReport verify_abhalf(const Params& params, int grid = 200);

}  // namespace threshold_lab

#include "threshold_lab/detail/maximize_scalar.hpp"
