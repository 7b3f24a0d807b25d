#include <doctest.h>

#include <cmath>

#include "threshold_lab/threshold_bounds.hpp"

using namespace threshold_lab;

TEST_SUITE("threshold_bounds") {

TEST_CASE("upper bound solves 2 q^r = 1") {
  for (int k = 3; k <= 12; ++k) {
    const double u = upper_bound(k);
    CHECK(2 * std::pow(q_of(k), u) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(upper_bound(3) == doctest::Approx(2.40942).epsilon(1e-5));
}

TEST_CASE("hessian bound rationals") {
  CHECK(hessian_bound(3) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(hessian_bound(4) == doctest::Approx(49.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("k = 3 and 4 are hessian-bound") {
  for (int k : {3, 4}) {
    const BoundsRow row = lower_bound(k);
    CHECK(row.binding == Binding::Hessian);
    CHECK(row.lower == row.hessian_bound);
  }
}

TEST_CASE("k = 5 is tangency-bound") {
  const BoundsRow row = lower_bound(5);
  CHECK(row.binding == Binding::Tangency);
  CHECK(row.lower == doctest::Approx(9.973).epsilon(1e-4));
  CHECK(row.lower < row.upper);
}

TEST_CASE("bounds table rows are ordered and thread-invariant") {
  const auto one = bounds_table(3, 8, kDefaultBoundsTol, 1);
  const auto four = bounds_table(3, 8, kDefaultBoundsTol, 4);
  REQUIRE(one.size() == 6);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].k == int(i) + 3);
    CHECK(one[i].lower == four[i].lower);
    CHECK(one[i].upper == four[i].upper);
  }
}

TEST_CASE("bounds table rejects bad ranges") {
  CHECK_THROWS_AS(bounds_table(5, 4), DomainError);
  CHECK_THROWS_AS(bounds_table(2, 4), DomainError);
  CHECK_THROWS_AS(bounds_table(3, 21), DomainError);
}

TEST_CASE("maximize_gnae below and above the tangency bound") {
  const double t = tangency_bound(5);
  const GnaeReport below = maximize_gnae({5, t - 0.05});
  CHECK(below.argmax == doctest::Approx(0.5));
  CHECK(below.secondary_max < 1.0);
  const GnaeReport above = maximize_gnae({5, t + 0.05});
  CHECK(above.secondary_max > 1.0);
  CHECK(above.secondary_argmax < 0.1);
}

TEST_CASE("maximize_scalar on a parabola") {
  auto [x, v] = maximize_scalar([](double t) { return -(t - 0.3) * (t - 0.3); }, 0.0, 1.0, 64);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("maximize_gr finds the symmetric point") {
  const GrReport rep = maximize_gr({3, 1.4});
  CHECK(rep.argmax.alpha == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.argmax.beta == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.argmax.gamma == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.secondary_max < 1.0);
  CHECK(rep.n_starts >= 16);
}

TEST_CASE("maximize_gr is deterministic") {
  const GrReport a = maximize_gr({4, 3.0});
  const GrReport b = maximize_gr({4, 3.0});
  CHECK(a.argmax == b.argmax);
  CHECK(a.secondary_max == b.secondary_max);
}

TEST_CASE("finite-difference hessian is symmetric with zero gradient") {
  const DerivativeReport d = hessian_fd_det({6, 10.0});
  CHECK(d.gradient.norm() < 1e-6);
  CHECK((d.hessian - d.hessian.transpose()).norm() < 1e-6 * d.hessian.norm());
}

TEST_CASE("verify_abhalf passes below the bound") {
  CHECK(verify_abhalf({3, 1.4}).passed());
  CHECK(verify_abhalf({5, 9.0}, 100).passed());
}

}
