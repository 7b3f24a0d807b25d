#include <doctest.h>

#include <cmath>

#include "threshold_lab/core_math.hpp"

using namespace threshold_lab;

TEST_SUITE("core_math") {

TEST_CASE("q and the single-edge probability") {
  CHECK(q_of(3) == doctest::Approx(0.75));
  CHECK(q_of(12) == doctest::Approx(1.0 - 1.0 / 2048));
  CHECK(single_bichromatic(0.5, 3) == doctest::Approx(0.75));
  CHECK(single_bichromatic(0.0, 5) == 0.0);
  CHECK(single_bichromatic(1.0, 5) == 0.0);
  CHECK(single_bichromatic(0.3, 4) == doctest::Approx(1 - std::pow(0.3, 4) - std::pow(0.7, 4)));
}

TEST_CASE("nae pair probability at the balanced point is q^2") {
  for (int k = 3; k <= 12; ++k) {
    CHECK(nae_pair_prob(0.5, k) == doctest::Approx(q_of(k) * q_of(k)).epsilon(1e-14));
  }
  CHECK(nae_pair_prob(0.0, 3) == doctest::Approx(0.75));
}

TEST_CASE("joint probability at the symmetric point") {
  for (int k = 3; k <= 12; ++k) {
    CHECK(joint_bichromatic(symmetric_point(), k) == doctest::Approx(q_of(k) * q_of(k)).epsilon(1e-14));
  }
}

TEST_CASE("joint probability for identical colorings") {
  CHECK(joint_bichromatic(OverlapPointd{0.3, 0.3, 0.3}, 4) == doctest::Approx(single_bichromatic(0.3, 4)));
}

TEST_CASE("objectives vanish at the symmetric point") {
  const Params p{7, 40.0};
  CHECK(std::abs(log_g_nae(0.5, p)) < 1e-13);
  CHECK(std::abs(log_g_r(symmetric_point(), p)) < 1e-13);
}

TEST_CASE("log_g_nae is finite at the boundary") {
  const Params p{3, 1.4};
  const double v = log_g_nae(0.0, p);
  CHECK(std::isfinite(v));
  CHECK(v < 0);
}

TEST_CASE("log_g_r is -inf when p vanishes") {
  // Two identical all-black colorings: every edge monochromatic.
  CHECK(log_g_r(OverlapPointd{1.0, 1.0, 1.0}, Params{3, 1.0}) == -INFINITY);
}

TEST_CASE("first moment rate at one half") {
  const Params p{5, 3.0};
  CHECK(first_moment_g(0.5, p) == doctest::Approx(2 * std::pow(q_of(5), 3.0)));
}

TEST_CASE("hessian determinant changes sign at the bound") {
  for (int k = 3; k <= 12; ++k) {
    const double q = q_of(k);
    const double b = std::ldexp(q * q, 2 * k) / (4.0 * k * (k - 1));
    CHECK(hessian_det_closed(Params{k, 0.9 * b}) < 0);
    CHECK(hessian_det_closed(Params{k, 1.1 * b}) > 0);
  }
}

TEST_CASE("long double evaluators agree with double") {
  const OverlapPoint<long double> pl{0.4L, 0.45L, 0.2L};
  const OverlapPointd pd{0.4, 0.45, 0.2};
  const Params p{6, 15.0};
  CHECK(static_cast<double>(log_g_r(pl, p)) == doctest::Approx(log_g_r(pd, p)).epsilon(1e-12));
}

TEST_CASE("overlap point conversions") {
  const OverlapPointd pt{0.6, 0.3, 0.2};
  const Eigen::Vector4d c = pt.cells();
  CHECK(c.sum() == doctest::Approx(1.0));
  CHECK(OverlapPointd::from_cells(c).alpha == doctest::Approx(0.6));
  CHECK(OverlapPointd::from_cells(c).beta == doctest::Approx(0.3));
  CHECK(OverlapPointd::from_vector(pt.vector()) == pt);
  CHECK(pt.feasible());
  CHECK_FALSE(OverlapPointd{0.2, 0.2, 0.3}.feasible());
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(Params({2, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS(Params({3, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS(Params({3, NAN}).validate(), DomainError);
  CHECK_THROWS_AS(log_g_nae(1.5, Params{3, 1.0}), DomainError);
  CHECK_THROWS_AS(log_g_r(OverlapPointd{0.2, 0.2, 0.5}, Params{3, 1.0}), DomainError);
  CHECK_THROWS_AS(phi(0.1, 0.2, 0.5, Params{3, 1.0}), DomainError);
  CHECK_THROWS_AS(phi(0.3, 0.2, 0.0, Params{3, 1.0}), DomainError);
  CHECK_THROWS_AS(psi(0.3, 0.0, Params{3, 1.0}), DomainError);
  CHECK_THROWS_AS(psi(0.6, 0.2, Params{3, 1.0}), DomainError);
}

TEST_CASE("psi vanishes at one half") {
  for (double g : {0.05, 0.1, 0.2, 0.25}) CHECK(std::abs(psi(0.5, g, Params{4, 3.0})) < 1e-10);
}

}
