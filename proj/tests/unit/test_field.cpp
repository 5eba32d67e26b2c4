#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gmcwalk/field.hpp"

using namespace gmcwalk;
using std::numbers::pi;

TEST_CASE("window geometry") {
  auto w = LatticeWindow::rectangle(4, {-1, -1}, {1, 1});
  CHECK(w.size() == 9);
  CHECK(w.cell_mass() == doctest::Approx(0.25));
  CHECK(w.mass() == doctest::Approx(2.25));
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w.snap(w.position(i)) == w.site(i));
    CHECK(w.index_of(w.site(i)) == i);
  }
  CHECK_FALSE(w.index_of({5, 5}).has_value());
  CHECK_THROWS_AS(LatticeWindow::lattice_sites(4, {{0, 0}, {0, 0}}), DomainError);

  auto g = LatticeWindow::grid1d(0.1, -3, 3);
  CHECK(g.cell_mass() == doctest::Approx(0.1));
  CHECK(g.snap({0.3, 0.0}) == Site{3, 0});
  CHECK(g.snap({-0.05, 0.0}) == Site{-1, 0});
}

TEST_CASE("single-site covariance") {
  auto w = LatticeWindow::lattice_sites(1, {{0, 0}});
  auto k = build_covariance(w, KernelSpec::lattice_rw(1, 1.0));
  REQUIRE(k.rows() == 1);
  CHECK(k(0, 0) == doctest::Approx(pi * green_lattice(1, 1.0, {0, 0}, {0, 0}, 1e-12).value));
}

TEST_CASE("limit fields are rejected") {
  auto w = LatticeWindow::grid1d(0.1, 0, 3);
  CHECK_THROWS_AS(build_covariance(w, KernelSpec::cauchy1d(1.0)), NotSamplable);
  CHECK_THROWS_AS(build_covariance(w, KernelSpec::stable1d(1.0, 1.0)), NotSamplable);
  auto w2 = LatticeWindow::rectangle(4, {0, 0}, {1, 1});
  try {
    build_covariance(w2, KernelSpec::bm2d(1.0));
    FAIL("expected NotSamplable");
  } catch (const NotSamplable& e) {
    CHECK(std::string(e.what()).find("not samplable") != std::string::npos);
  }
  CHECK_THROWS_AS(build_covariance(w2, KernelSpec::lattice_rw(16, 1.0)), DomainError);
}

TEST_CASE("covariance is symmetric, stationary and positive semidefinite") {
  auto w = LatticeWindow::rectangle(16, {0, 0}, {9, 9});
  auto k = build_covariance(w, KernelSpec::lattice_rw(16, 1.0));
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const double maxdiag = k.diagonal().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * maxdiag);
  // entries depend only on site differences
  auto idx = [&](Site s) { return static_cast<Eigen::Index>(*w.index_of(s)); };
  CHECK(k(idx({0, 0}), idx({2, 4})) == k(idx({5, 3}), idx({7, 7})));
  CHECK(k(idx({1, 1}), idx({1, 1})) == k(idx({8, 2}), idx({8, 2})));
  // correlation strictly below one for distinct sites
  const double rho = k(idx({0, 0}), idx({1, 1})) / std::sqrt(k(idx({0, 0}), idx({0, 0})) * k(idx({1, 1}), idx({1, 1})));
  CHECK(rho < 1.0);
  CHECK(rho > 0.0);

  auto g = LatticeWindow::grid1d(0.05, 0, 59);
  auto ks = build_covariance(g, KernelSpec::stable1d(1.5, 1.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_s(ks, Eigen::EigenvaluesOnly);
  CHECK(eig_s.eigenvalues().minCoeff() >= -1e-10 * ks.diagonal().maxCoeff());
  CHECK(ks(0, 0) == doctest::Approx(pi * green_stable(1.5, 1.0, 0.0)));
}

TEST_CASE("jitter ladder") {
  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  auto f = factorize(singular);
  CHECK(f.jitter > 0.0);
  CHECK(f.jitter <= 1e-8);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(factorize(indefinite), FactorizationError);
  Eigen::MatrixXd good = Eigen::MatrixXd::Identity(3, 3);
  CHECK(factorize(good).jitter == 0.0);
}

TEST_CASE("field samples have the prescribed moments") {
  auto w = LatticeWindow::rectangle(4, {0, 0}, {4, 1});
  REQUIRE(w.size() == 10);
  auto k = build_covariance(w, KernelSpec::lattice_rw(4, 1.0));
  auto factor = factorize(k);
  RngStream rng(2024);
  const std::size_t n = 100000;
  auto samples = sample_field(factor, w, rng, n);
  Eigen::MatrixXd x(w.size(), n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < w.size(); ++i) x(i, c) = samples[c].value[i];
  const Eigen::VectorXd mean = x.rowwise().mean();
  const Eigen::MatrixXd cov = x * x.transpose() / double(n);
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    CHECK(std::abs(mean(i)) < 4.0 * std::sqrt(k(i, i) / n));
    for (Eigen::Index j = 0; j < k.rows(); ++j) {
      const double band = 5.0 * std::sqrt(k(i, i) * k(j, j) + k(i, j) * k(i, j)) / std::sqrt(double(n));
      CHECK(std::abs(cov(i, j) - k(i, j)) < band);
    }
  }
  CHECK(samples[0].variance[3] == k(3, 3));
}

TEST_CASE("sampling is reproducible") {
  auto w = LatticeWindow::rectangle(4, {0, 0}, {2, 2});
  auto factor = factorize(build_covariance(w, KernelSpec::lattice_rw(4, 1.0)));
  RngStream a(99), b(99);
  CHECK(sample_field(factor, w, a, 1)[0].value == sample_field(factor, w, b, 1)[0].value);
}

TEST_CASE("lazy field reproduces the joint law") {
  auto kernel = std::make_shared<FieldKernel>(KernelSpec::lattice_rw(4, 1.0));
  const std::vector<Site> order{{0, 0}, {1, 1}, {2, 0}, {0, 0}};
  const int n = 60000;
  Eigen::MatrixXd x(3, n);
  for (int c = 0; c < n; ++c) {
    LazyField field(kernel, derive_seed(5, 0, c));
    for (int i = 0; i < 3; ++i) x(i, c) = field.value(order[i]);
    CHECK_MESSAGE(field.value(order[3]) == x(0, c), "revisiting a site returns the stored value");
    CHECK(field.size() == 3);
  }
  const Eigen::MatrixXd cov = x * x.transpose() / double(n);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double kij = kernel->covariance(order[i], order[j]);
      const double band = 5.0 * std::sqrt(kernel->variance() * kernel->variance() + kij * kij) / std::sqrt(double(n));
      CHECK(std::abs(cov(i, j) - kij) < band);
    }
  }
}
