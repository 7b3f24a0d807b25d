#include <doctest.h>

#include <cmath>

#include "threshold_lab/exact_moments.hpp"
#include "threshold_lab/log_math.hpp"

using namespace threshold_lab;

TEST_SUITE("exact_moments") {

TEST_CASE("single edge on three vertices") {
  CHECK(std::exp(exact_first_moment(3, 3, 1)) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(std::exp(exact_second_moment(3, 3, 1)) == doctest::Approx(36.0).epsilon(1e-14));
  const BruteForceMoments bf = brute_force_moments(3, 3, 1);
  CHECK(bf.first == 6.0);
  CHECK(bf.second == 36.0);
  CHECK(bf.sequences == 1);
}

TEST_CASE("no edges: every coloring is proper") {
  CHECK(exact_first_moment(5, 3, 0) == doctest::Approx(5 * std::log(2.0)));
  CHECK(exact_second_moment(5, 3, 0) == doctest::Approx(10 * std::log(2.0)));
}

TEST_CASE("brute force agrees for small cases") {
  for (int n = 3; n <= 6; ++n) {
    for (int m = 0; m <= 3; ++m) {
      const BruteForceMoments bf = brute_force_moments(n, 3, m);
      CHECK(std::exp(exact_first_moment(n, 3, m)) == doctest::Approx(bf.first).epsilon(1e-10));
      CHECK(std::exp(exact_second_moment(n, 3, m)) == doctest::Approx(bf.second).epsilon(1e-10));
    }
  }
  const BruteForceMoments bf4 = brute_force_moments(6, 4, 2);
  CHECK(std::exp(exact_second_moment(6, 4, 2)) == doctest::Approx(bf4.second).epsilon(1e-10));
}

TEST_CASE("brute force guard") {
  CHECK_THROWS_AS(brute_force_moments(12, 3, 8), ResourceError);
}

TEST_CASE("edges_for rounds half up") {
  CHECK(edges_for(1.4, 40) == 56);
  CHECK(edges_for(1.25, 2) == 3);
  CHECK(edges_for(0.1, 4) == 0);
}

TEST_CASE("second moment dominates first squared") {
  const MomentReport rep = compute_moments(30, 3, 30, MomentMode::Exact);
  CHECK(rep.log_ratio >= 0);
  CHECK(rep.probability_lower_bound() <= 1.0);
  CHECK(rep.probability_lower_bound() > 0.0);
}

TEST_CASE("second moment sums are thread-invariant") {
  const double a = exact_second_moment(120, 3, 150, 1);
  const double b = exact_second_moment(120, 3, 150, 3);
  const double c = exact_second_moment(120, 3, 150, 8);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(asym_ratio_sum(90, {3, 1.4}, 1) == asym_ratio_sum(90, {3, 1.4}, 5));
}

TEST_CASE("ratio sum peaks at the balanced composition") {
  const RatioSumReport rep = asym_ratio_sum_report(80, {3, 1.4});
  CHECK(rep.max_term == CellCounts{20, 20, 20, 20});
  CHECK(rep.log_sum >= rep.log_max_term);
}

TEST_CASE("asymptotic sums track the exact ones") {
  const MomentReport exact = compute_moments(200, 3, 200, MomentMode::Exact);
  const MomentReport asym = compute_moments(200, 3, 200, MomentMode::Asymptotic);
  CHECK(asym.mode == MomentMode::Asymptotic);
  CHECK(std::abs(exact.log_first - asym.log_first) < 1.5);
}

TEST_CASE("composition sums refuse large n") {
  CHECK_THROWS_AS(asym_ratio_sum(401, {3, 1.0}), ResourceError);
  CHECK_THROWS_AS(exact_second_moment(500, 3, 10), ResourceError);
}

TEST_CASE("cell counts overlap") {
  const CellCounts c{2, 3, 1, 4};
  CHECK(c.n() == 10);
  CHECK(c.overlap().alpha == doctest::Approx(0.5));
  CHECK(c.overlap().beta == doctest::Approx(0.3));
  CHECK(c.overlap().gamma == doctest::Approx(0.2));
}

TEST_CASE("log-sum accumulator") {
  LogSumAccumulator a, b;
  CHECK(a.empty());
  CHECK(a.value() == -INFINITY);
  a.add(std::log(3.0));
  a.add(-INFINITY);
  b.add(std::log(5.0));
  b.add(1000.0);
  a.merge(b);
  CHECK(a.value() == doctest::Approx(1000.0));
  LogSumAccumulator c;
  c.add(std::log(1.0));
  c.add(std::log(2.0));
  CHECK(c.value() == doctest::Approx(std::log(3.0)));
}

TEST_CASE("log factorials") {
  const LogFactorials lf(20);
  CHECK(lf(0) == 0.0);
  CHECK(lf(5) == doctest::Approx(std::log(120.0)));
  CHECK(lf.choose(10, 3) == doctest::Approx(std::log(120.0)));
}

TEST_CASE("laplace check in one dimension stays flat") {
  const std::array<int, 3> ns{100, 200, 400};
  const auto seq = laplace_check(ns, {3, 1.0}, LaplaceDims::One);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0].first == 100);
  CHECK(std::abs(seq[2].second - seq[0].second) < 1.0);
}

}
