#include <cmath>

#include "doctest.h"
#include "gmcwalk/gmc.hpp"
#include "gmcwalk/stats.hpp"

using namespace gmcwalk;

TEST_CASE("L2 thresholds") {
  auto [t2, m2] = l2_thresholds(2, 1.0);
  CHECK(t2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(m2 == doctest::Approx(2.0));
  auto [t1, m1] = l2_thresholds(1, 1.0);
  CHECK(t1 == doctest::Approx(1.0));
  CHECK(m1 == doctest::Approx(std::sqrt(2.0)));
  auto [t4, m4] = l2_thresholds(2, 4.0);
  CHECK(t4 == doctest::Approx(std::sqrt(0.5)));
  CHECK(m4 == doctest::Approx(1.0));
  CHECK_THROWS_AS(l2_thresholds(3, 1.0), DomainError);
  CHECK_THROWS_AS(l2_thresholds(2, 0.5), DomainError);
  CHECK(GammaParam{1.0, 2, 1.0}.timechange_regime());
  CHECK_FALSE(GammaParam{1.5, 2, 1.0}.timechange_regime());
  CHECK(GammaParam{1.5, 2, 1.0}.measure_regime());
}

TEST_CASE("weights at gamma zero") {
  auto w = LatticeWindow::rectangle(4, {0, 0}, {2, 2});
  auto factor = factorize(build_covariance(w, KernelSpec::lattice_rw(4, 1.0)));
  RngStream rng(1);
  auto field = sample_field(factor, w, rng, 1)[0];
  auto weights = gmc_weights(field, w, {0.0, 2, 1.0});
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(weights.density(i) == 1.0);
    CHECK(weights.mass(i) == w.cell_mass());
  }
  CHECK(weights.total_mass() == doctest::Approx(w.mass()));
}

TEST_CASE("weight validation") {
  auto w = LatticeWindow::rectangle(4, {0, 0}, {1, 0});
  FieldSample broken{{0.1, 0.2}, {1.0}};
  CHECK_THROWS_WITH_AS(gmc_weights(broken, w, {0.5, 2, 1.0}), doctest::Contains("variance unavailable"), DomainError);
  FieldSample ok{{0.1, 0.2}, {1.0, 1.0}};
  CHECK_THROWS_AS(gmc_weights(ok, w, {2.5, 2, 1.0}), DomainError);
  CHECK(gmc_weights(ok, w, {1.6, 2, 1.0}).above_timechange_regime);
}

TEST_CASE("site masses have mean equal to the cell mass") {
  auto w = LatticeWindow::rectangle(16, {0, 0}, {2, 2});
  auto k = build_covariance(w, KernelSpec::lattice_rw(16, 1.0));
  auto factor = factorize(k);
  RngStream rng(77);
  const std::size_t n = 100000;
  const GammaParam gamma{0.8, 2, 1.0};
  std::vector<double> site0, total;
  for (const auto& f : sample_field(factor, w, rng, n)) {
    auto weights = gmc_weights(f, w, gamma);
    site0.push_back(weights.mass(0));
    total.push_back(weights.total_mass());
  }
  auto m = stats::mean_se(site0);
  const double lognormal_se =
      w.cell_mass() * std::sqrt(std::expm1(gamma.gamma * gamma.gamma * k(0, 0))) / std::sqrt(double(n));
  CHECK(std::abs(m.mean - w.cell_mass()) < 5.0 * lognormal_se);
  auto t = stats::mean_se(total);
  CHECK(std::abs(t.mean - w.mass()) < 5.0 * t.se);
}

TEST_CASE("second moment of the chaos mass") {
  auto w = LatticeWindow::rectangle(16, {0, 0}, {3, 3});
  const auto spec = KernelSpec::lattice_rw(16, 1.0);
  std::vector<std::size_t> all(w.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(second_moment_mass(w, spec, {0.0, 2, 1.0}, all) == doctest::Approx(w.mass() * w.mass()));

  // two-site closed form
  auto k = build_covariance(w, spec);
  const double g = 0.9;
  const double m = w.cell_mass();
  const double two = m * m * (std::exp(g * g * k(0, 0)) + 2.0 * std::exp(g * g * k(0, 5)) + std::exp(g * g * k(5, 5)));
  CHECK(second_moment_mass(w, spec, {g, 2, 1.0}, {0, 5}) == doctest::Approx(two).epsilon(1e-13));

  // strictly increasing in gamma
  double previous = 0.0;
  for (double gg : {0.0, 0.3, 0.6, 0.9, 1.2}) {
    const double v = second_moment_mass(w, spec, {gg, 2, 1.0}, all);
    CHECK(v > previous);
    previous = v;
  }

  // Monte Carlo agreement
  auto factor = factorize(k);
  RngStream rng(8);
  std::vector<double> squares;
  const GammaParam gamma{0.6, 2, 1.0};
  for (const auto& f : sample_field(factor, w, rng, 100000)) {
    const double mass = gmc_weights(f, w, gamma).total_mass();
    squares.push_back(mass * mass);
  }
  auto s = stats::mean_se(squares);
  CHECK(std::abs(s.mean - second_moment_mass(w, spec, gamma, all)) < 3.0 * s.se);
}
