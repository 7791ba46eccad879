#include "doctest.h"

#include <Eigen/Dense>
#include <chrono>
#include <thread>

#include "placement/error.hpp"
#include "placement/metrics.hpp"

using namespace placement;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("mae") {
  CHECK(mae(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
  CHECK(mae(vec({0, 1}), vec({1, 0})) == 1.0);
  // |0.1| + |0.1| + 0 over 3
  CHECK(mae(vec({0.2, 0.4, 0.9}), vec({0.1, 0.5, 0.9})) == doctest::Approx(0.2 / 3.0).epsilon(1e-12));
  CHECK(mae(vec({0.2, 0.4, 0.9}), vec({0.1, 0.5, 0.9})) == doctest::Approx(0.0667).epsilon(0.001));
  CHECK_THROWS_AS(mae(vec({1, 2}), vec({1})), ShapeError);
}

TEST_CASE("accuracy as R^2 percent") {
  CHECK(accuracy_pct(vec({0, 1, 2}), vec({0, 1, 2})) == 100.0);
  const auto y = vec({3, 5, 10, -1});
  CHECK(accuracy_pct(y, Eigen::VectorXd::Constant(4, y.mean())) == 0.0);
  // SSres = 1, SStot = 2
  CHECK(accuracy_pct(vec({0, 1, 2}), vec({0, 1, 1})) == doctest::Approx(50.0).epsilon(1e-14));
  CHECK_THROWS_AS(accuracy_pct(vec({1, 1, 1}), vec({1, 2, 3})), DomainError);
  CHECK_THROWS_AS(accuracy_pct(vec({1, 2, 3}), vec({1, 2})), ShapeError);
}

TEST_CASE("median and timing") {
  CHECK(median({1.0, 1.2, 9.0}) == 1.2);
  CHECK(median({9.0, 1.0, 1.2}) == 1.2);
  CHECK(median({1.0, 2.0, 3.0, 4.0}) == 2.5);
  CHECK(median({7.0}) == 7.0);
  CHECK_THROWS_AS(median({}), DomainError);

  int calls = 0;
  const double t = time_fit([&] {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }, 1);
  CHECK(calls == 2);  // warm-up plus one timed run
  CHECK(t >= 0.004);
  CHECK(t < 1.0);

  calls = 0;
  time_fit([&] { ++calls; }, 3);
  CHECK(calls == 4);
  CHECK_THROWS_AS(time_fit([] {}, 0), DomainError);
}
