#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gmcwalk/stats.hpp"

using namespace gmcwalk::stats;

TEST_CASE("mean and standard error") {
  auto m = mean_se({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(m.count == 4);
}

TEST_CASE("Kolmogorov distribution") {
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967).epsilon(1e-7));
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(5.0) < 1e-20);
}

TEST_CASE("KS tests") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(2000), y(2000), z(2000);
  for (auto& v : x) v = u(gen);
  for (auto& v : y) v = u(gen);
  for (auto& v : z) v = u(gen) * 0.9;
  auto uniform_cdf = [](double t) { return std::clamp(t, 0.0, 1.0); };
  CHECK(ks_one_sample(x, uniform_cdf).p_value > 0.001);
  CHECK(ks_one_sample(z, uniform_cdf).p_value < 1e-6);
  CHECK(ks_two_sample(x, y).p_value > 0.001);
  CHECK(ks_two_sample(x, z).p_value < 1e-6);
  CHECK(ks_one_sample({0.5}, uniform_cdf).statistic == doctest::Approx(0.5));
}

TEST_CASE("linear fit") {
  auto f = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-7));
}
