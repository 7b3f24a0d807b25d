#pragma once

// Closed-form moment functions for random k-uniform hypergraph 2-coloring.
//
// Everything here is a pure function of its arguments. Objectives are
// evaluated in log space so that large (k, r) pairs (k = 12 puts r near
// 1419) never form (p/q^2)^r directly. All evaluators are templated on the
// scalar type; `double` is the working precision, `long double` is handy for
// cross-checks.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {

/// Problem family: uniformity k and edge density r (edges per vertex).
struct Params {
  int k = 3;
  double r = 1.0;

  void validate() const {
    if (k < 3) throw DomainError("Params: k must be >= 3, got " + std::to_string(k));
    if (!(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream os;
      os << "Params: r must be positive and finite, got " << r;
      throw DomainError(os.str());
    }
  }
};

/// Overlap of two colorings: alpha and beta are the black fractions of each,
/// gamma the fraction black in both. The four cell masses
/// (gamma, alpha-gamma, beta-gamma, 1-alpha-beta+gamma) form a distribution.
template <typename Scalar = double>
struct OverlapPoint {
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

  Scalar alpha{0.5};
  Scalar beta{0.5};
  Scalar gamma{0.25};

  static OverlapPoint from_vector(const Vector3& v) { return {v(0), v(1), v(2)}; }
  /// Point with cell masses (z1, z2, z3, z4) / n.
  static OverlapPoint from_cells(const Vector4& c) {
    return {c(0) + c(1), c(0) + c(2), c(0)};
  }

  Vector3 vector() const { return Vector3(alpha, beta, gamma); }
  Vector4 cells() const {
    return Vector4(gamma, alpha - gamma, beta - gamma, Scalar(1) - alpha - beta + gamma);
  }

  /// True if every cell mass lies in [-slack, 1 + slack].
  bool feasible(Scalar slack = Scalar(0)) const {
    const Vector4 c = cells();
    return (c.array() >= -slack).all() && (c.array() <= Scalar(1) + slack).all() &&
           std::isfinite(static_cast<double>(alpha)) && std::isfinite(static_cast<double>(beta)) &&
           std::isfinite(static_cast<double>(gamma));
  }

  friend bool operator==(const OverlapPoint&, const OverlapPoint&) = default;
};

using OverlapPointd = OverlapPoint<double>;

/// The symmetric point (1/2, 1/2, 1/4): two independent balanced colorings.
template <typename Scalar = double>
constexpr OverlapPoint<Scalar> symmetric_point() {
  return {Scalar(0.5), Scalar(0.5), Scalar(0.25)};
}

namespace detail {

// Cell masses may come out a few ulps negative from rounding.
inline constexpr double kCellSlack = 1e-12;
// x ln x is taken as 0 below this (the 0^0 = 1 convention).
inline constexpr double kZeroMass = 1e-300;

template <typename Scalar>
Scalar xlogx(Scalar x) {
  return x <= Scalar(kZeroMass) ? Scalar(0) : x * std::log(x);
}

template <typename Scalar>
void require_unit(Scalar x, const char* what) {
  if (!(x >= Scalar(0) && x <= Scalar(1))) {
    std::ostringstream os;
    os << what << ": argument " << static_cast<double>(x) << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

template <typename Scalar>
void require_simplex(const OverlapPoint<Scalar>& pt, const char* what) {
  if (!pt.feasible(Scalar(kCellSlack))) {
    std::ostringstream os;
    os << what << ": (" << static_cast<double>(pt.alpha) << ", " << static_cast<double>(pt.beta)
       << ", " << static_cast<double>(pt.gamma) << ") is outside the overlap simplex";
    throw DomainError(os.str());
  }
}

template <typename Scalar>
Scalar ipow(Scalar x, int k) {
  return std::pow(x, k);
}

// Probability that an edge is monochromatic under both colorings, minus the
// probability it is monochromatic under either. 1 + this is p3.
template <typename Scalar>
Scalar joint_mono_excess(const OverlapPoint<Scalar>& pt, int k) {
  const auto c = pt.cells().cwiseMax(Scalar(0)).eval();
  const Scalar a = pt.alpha, b = pt.beta;
  return -ipow(a, k) - ipow(Scalar(1) - a, k) - ipow(b, k) - ipow(Scalar(1) - b, k) +
         ipow(c(0), k) + ipow(c(1), k) + ipow(c(2), k) + ipow(c(3), k);
}

}  // namespace detail

/// q = 1 - 2^(1-k): probability a uniform random coloring leaves an edge bichromatic.
template <typename Scalar = double>
Scalar q_of(int k) {
  if (k < 2) throw DomainError("q_of: k must be >= 2, got " + std::to_string(k));
  return Scalar(1) - std::ldexp(Scalar(1), 1 - k);
}

template <typename Scalar = double>
Scalar log_q(int k) {
  if (k < 2) throw DomainError("log_q: k must be >= 2, got " + std::to_string(k));
  return std::log1p(-std::ldexp(Scalar(1), 1 - k));
}

/// s(alpha): probability a random edge (k independent vertex draws) is
/// bichromatic under a coloring with an alpha fraction of black vertices.
template <typename Scalar>
Scalar single_bichromatic(Scalar alpha, int k) {
  detail::require_unit(alpha, "single_bichromatic");
  if (k < 2) throw DomainError("single_bichromatic: k must be >= 2");
  return Scalar(1) - detail::ipow(alpha, k) - detail::ipow(Scalar(1) - alpha, k);
}

/// NAE pair probability: both of two assignments agreeing on an alpha
/// fraction of variables satisfy a random NAE clause.
template <typename Scalar>
Scalar nae_pair_prob(Scalar alpha, int k) {
  detail::require_unit(alpha, "nae_pair_prob");
  if (k < 2) throw DomainError("nae_pair_prob: k must be >= 2");
  const Scalar w = std::ldexp(Scalar(1), 1 - k);
  return Scalar(1) - w * (Scalar(2) - detail::ipow(alpha, k) - detail::ipow(Scalar(1) - alpha, k));
}

/// p(alpha, beta, gamma): probability a random edge is bichromatic under both
/// colorings of an overlap pair (inclusion-exclusion over the four cells).
template <typename Scalar>
Scalar joint_bichromatic(const OverlapPoint<Scalar>& pt, int k) {
  detail::require_simplex(pt, "joint_bichromatic");
  return Scalar(1) + detail::joint_mono_excess(pt, k);
}

/// ln g_nae(alpha) = -ln 2 + H(alpha) + r (ln p_nae(alpha) - 2 ln q),
/// with H the natural-log binary entropy. Equals 0 at alpha = 1/2.
template <typename Scalar>
Scalar log_g_nae(Scalar alpha, const Params& params) {
  detail::require_unit(alpha, "log_g_nae");
  const int k = params.k;
  const Scalar r = Scalar(params.r);
  const Scalar w = std::ldexp(Scalar(1), 1 - k);
  const Scalar mono = detail::ipow(alpha, k) + detail::ipow(Scalar(1) - alpha, k);
  const Scalar deficit = w * (Scalar(2) - mono);  // 1 - p_nae
  if (!(deficit < Scalar(1))) throw DomainError("log_g_nae: p_nae is not positive");
  const Scalar entropy = -detail::xlogx(alpha) - detail::xlogx(Scalar(1) - alpha);
  return -std::log(Scalar(2)) + entropy + r * (std::log1p(-deficit) - Scalar(2) * log_q<Scalar>(k));
}

/// ln g_r(alpha, beta, gamma) = r (ln p - 2 ln q) - ln 4 - sum_cells x ln x.
/// Returns -infinity where p vanishes.
template <typename Scalar>
Scalar log_g_r(const OverlapPoint<Scalar>& pt, const Params& params) {
  detail::require_simplex(pt, "log_g_r");
  const int k = params.k;
  const Scalar excess = detail::joint_mono_excess(pt, k);  // p - 1
  if (!(excess > Scalar(-1))) return -std::numeric_limits<Scalar>::infinity();
  const auto c = pt.cells().cwiseMax(Scalar(0)).eval();
  const Scalar entropy = -c.unaryExpr([](Scalar x) { return detail::xlogx(x); }).sum();
  return Scalar(params.r) * (std::log1p(excess) - Scalar(2) * log_q<Scalar>(k)) -
         std::log(Scalar(4)) + entropy;
}

/// ln of the first-moment rate g(alpha) = s(alpha)^r / (alpha^alpha (1-alpha)^(1-alpha));
/// -infinity where s vanishes.
template <typename Scalar>
Scalar log_first_moment_g(Scalar alpha, const Params& params) {
  const Scalar sv = single_bichromatic(alpha, params.k);
  if (sv <= Scalar(0)) return -std::numeric_limits<Scalar>::infinity();
  const Scalar entropy = -detail::xlogx(alpha) - detail::xlogx(Scalar(1) - alpha);
  return Scalar(params.r) * std::log(sv) + entropy;
}

/// g(alpha) itself; g(1/2) = 2 q^r.
template <typename Scalar>
Scalar first_moment_g(Scalar alpha, const Params& params) {
  return std::exp(log_first_moment_g(alpha, params));
}

/// Closed form of g''(1/2) for the first-moment rate; negative for k > 1.
template <typename Scalar = double>
Scalar first_moment_g2_closed(const Params& params) {
  const int k = params.k;
  const Scalar r = Scalar(params.r);
  const Scalar w = std::ldexp(Scalar(1), 1 - k);
  return Scalar(-8) * std::exp((r - Scalar(1)) * log_q<Scalar>(k)) *
         (Scalar(1) + w * (Scalar(k) * Scalar(k - 1) * r - Scalar(1)));
}

/// Determinant of the 3x3 matrix of second derivatives of g_r (in alpha,
/// beta, gamma) at the symmetric point. Negative iff 4k(k-1)r < 2^(2k) q^2.
template <typename Scalar = double>
Scalar hessian_det_closed(const Params& params) {
  const int k = params.k;
  const Scalar r = Scalar(params.r);
  const Scalar q = q_of<Scalar>(k);
  const Scalar kk = Scalar(k);
  const Scalar lead = std::ldexp(Scalar(1), k) - Scalar(2) - Scalar(2) * kk * r + Scalar(2) * kk * kk * r;
  const Scalar q2 = q * q;
  // 256 lead^2 / (2^{4k} q^4) * (4k(k-1)r - 2^{2k} q^2), grouped to stay in range.
  const Scalar scaled_lead = std::ldexp(lead, -2 * k) / q2;
  return Scalar(256) * scaled_lead * scaled_lead *
         (Scalar(4) * kk * Scalar(k - 1) * r - std::ldexp(q2, 2 * k));
}

/// phi(x) = -ln(x - gamma) + (k r / p) (-x^(k-1) + (1-x)^(k-1) + (x-gamma)^(k-1)),
/// with p held fixed at `p_const`.
template <typename Scalar>
Scalar phi(Scalar x, Scalar gamma, Scalar p_const, const Params& params) {
  if (!(x > gamma) || !(x < Scalar(1))) {
    std::ostringstream os;
    os << "phi: need gamma < x < 1, got x = " << static_cast<double>(x)
       << ", gamma = " << static_cast<double>(gamma);
    throw DomainError(os.str());
  }
  if (!(p_const > Scalar(0))) throw DomainError("phi: p_const must be positive");
  const int k = params.k;
  const Scalar coef = Scalar(k) * Scalar(params.r) / p_const;
  return -std::log(x - gamma) +
         coef * (-detail::ipow(x, k - 1) + detail::ipow(Scalar(1) - x, k - 1) +
                 detail::ipow(x - gamma, k - 1));
}

/// psi(alpha) = (d/dalpha + d/dgamma) ln g_r(alpha, alpha, gamma), with p
/// evaluated at (alpha, alpha, gamma). Vanishes at alpha = 1/2.
template <typename Scalar>
Scalar psi(Scalar alpha, Scalar gamma, const Params& params) {
  if (!(gamma > Scalar(0))) throw DomainError("psi: gamma must be positive");
  const Scalar rest = Scalar(1) - Scalar(2) * alpha + gamma;
  if (!(rest > Scalar(0)) || !(alpha > Scalar(0)) || alpha > Scalar(0.5) || gamma > alpha) {
    std::ostringstream os;
    os << "psi: (alpha, gamma) = (" << static_cast<double>(alpha) << ", "
       << static_cast<double>(gamma) << ") outside the admissible region";
    throw DomainError(os.str());
  }
  const int k = params.k;
  const Scalar p = joint_bichromatic(OverlapPoint<Scalar>{alpha, alpha, gamma}, k);
  const Scalar coef = Scalar(k) * Scalar(params.r) / p;
  return -std::log(gamma) + std::log(rest) +
         coef * (Scalar(-2) * detail::ipow(alpha, k - 1) +
                 Scalar(2) * detail::ipow(Scalar(1) - alpha, k - 1) - detail::ipow(rest, k - 1) +
                 detail::ipow(gamma, k - 1));
}

}  // namespace threshold_lab
