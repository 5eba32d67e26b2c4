#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gmcwalk/kernels.hpp"

using namespace gmcwalk;
using std::numbers::pi;
namespace bq = boost::math::quadrature;

namespace {

// Independent oracles built on Boost quadrature.
double laplace_oracle(const std::function<double(double)>& p, double lambda) {
  bq::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return std::exp(-lambda * t) * p(t); }, 1e-14);
}

double stable_density_oracle(double alpha, double t, double r) {
  auto f = [&](double th) { return std::cos(th * r) * std::exp(-0.5 * t * std::pow(th, alpha)); };
  const double cut = std::pow(80.0 / t, 1.0 / alpha);
  return bq::gauss_kronrod<double, 61>::integrate(f, 0.0, cut, 20, 1e-15) / pi;
}

// (1/pi) int_0^inf cos(r theta) / (1 + theta^alpha / 2) d theta, tabulated
// with mpmath.quadosc at 30 digits.
struct StableGreenReference {
  double alpha, r, value;
};
constexpr StableGreenReference kStableGreenTable[] = {
    {1.0, 0.05, 1.18798113866},   {1.0, 0.5, 0.218601199722},  {1.0, 2.0, 0.0316260961057},
    {1.0, 7.0, 0.00315713606726}, {1.3, 0.05, 0.992008383489}, {1.3, 0.5, 0.27278865558},
    {1.3, 2.0, 0.0353474292311},  {1.3, 7.0, 0.00207071791616}, {1.5, 0.05, 0.870669731932},
    {1.5, 0.5, 0.301808775677},   {1.5, 2.0, 0.0373103173832}, {1.5, 7.0, 0.00137496880704},
    {2.0, 0.05, 0.658833607747},  {2.0, 0.5, 0.348652215276},  {2.0, 2.0, 0.0417940742011},
    {2.0, 7.0, 3.54967815239e-5},
};

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(KernelSpec::bm2d(0.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::stable1d(2.5, 1.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::stable1d(0.9, 1.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::lattice_rw(0, 1.0), DomainError);
  CHECK(KernelSpec::bm2d(1.0).dimension() == 2);
  CHECK(KernelSpec::cauchy1d(1.0).dimension() == 1);
  CHECK(KernelSpec::stable1d(1.5, 1.0).hurst() == doctest::Approx(0.25));
  CHECK(KernelSpec::stable1d(1.5, 1.0).strongly_recurrent());
  CHECK_FALSE(KernelSpec::bm2d(1.0).strongly_recurrent());
  CHECK(KernelSpec::lattice_rw(4, 1.0).strongly_recurrent());
}

TEST_CASE("heat kernels: closed forms") {
  const auto bm = KernelSpec::bm2d(1.0);
  CHECK(heat_kernel(bm, 1.0, {0.3, 0.1}, {0.3, 0.1}) == doctest::Approx(1.0 / (2 * pi)));
  CHECK_THROWS_AS(heat_kernel(bm, 0.0, {0, 0}, {0, 0}), DomainError);
  CHECK_THROWS_AS(heat_kernel(bm, -1.0, {0, 0}, {0, 0}), DomainError);

  for (double t : {0.3, 1.0, 4.0}) {
    CHECK(stable_density(2.0, t, 0.0) == doctest::Approx(1.0 / std::sqrt(2 * pi * t)).epsilon(1e-10));
    const double r = 0.8;
    CHECK(stable_density(2.0, t, r) ==
          doctest::Approx(std::exp(-r * r / (2 * t)) / std::sqrt(2 * pi * t)).epsilon(1e-9));
    // alpha = 1 is the Cauchy law with scale t/2
    const double s = t / 2;
    CHECK(stable_density(1.0, t, r) == doctest::Approx(s / (pi * (r * r + s * s))).epsilon(1e-8));
  }
}

TEST_CASE("stable density against an independent inversion") {
  CHECK(std::abs(stable_density(1.5, 1.0, 0.7) - stable_density_oracle(1.5, 1.0, 0.7)) < 1e-8);
  for (double alpha : {1.1, 1.3, 1.8}) {
    for (double r : {0.0, 0.4, 2.5, 9.0}) {
      CHECK(std::abs(stable_density(alpha, 0.6, r) - stable_density_oracle(alpha, 0.6, r)) < 1e-8);
    }
  }
}

TEST_CASE("continuum heat kernels integrate to one") {
  bq::exp_sinh<double> half_line;
  for (double alpha : {1.2, 1.5, 2.0}) {
    const double mass =
        2.0 * half_line.integrate([&](double r) { return stable_density(alpha, 1.0, r); }, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
  const auto bm = KernelSpec::bm2d(1.0);
  const double radial = half_line.integrate(
      [&](double r) { return 2 * pi * r * heat_kernel(bm, 0.7, {0, 0}, {r, 0}); }, 1e-12);
  CHECK(radial == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lattice heat kernel is a probability density on cells") {
  const int n = 4;
  const auto spec = KernelSpec::lattice_rw(n, 1.0);
  double total = 0.0;
  const double h = 1.0 / std::sqrt(double(n));
  for (int i = -40; i <= 40; ++i) {
    for (int j = -40; j <= 40; ++j) {
      total += heat_kernel(spec, 1.0, {0, 0}, {i * h, j * h}) / n;
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // symmetry in the two arguments
  CHECK(heat_kernel(spec, 0.5, {0, 0}, {2 * h, 0}) == heat_kernel(spec, 0.5, {2 * h, 0}, {0, 0}));
}

TEST_CASE("log decomposition matches the Laplace integral") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> radius(0.05, 3.0), order(0.3, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double r = radius(gen);
    const double lambda = order(gen);
    const auto bm = KernelSpec::bm2d(lambda);
    const double g = green_continuum(bm, {0.0, 0.0}, {r, 0.0});
    const double oracle = laplace_oracle(
        [&](double t) { return std::exp(-r * r / (2 * t)) / (2 * pi * t); }, lambda);
    CHECK(g == doctest::Approx(oracle).epsilon(1e-6));

    const auto cauchy = KernelSpec::cauchy1d(lambda);
    const double gc = green_continuum(cauchy, {0.0, 0.0}, {r, 0.0});
    const double oracle_c =
        laplace_oracle([&](double t) { return t / (pi * (r * r + t * t)); }, lambda);
    CHECK(gc == doctest::Approx(oracle_c).epsilon(1e-6));
  }
}

TEST_CASE("planar remainder at unit distance is K0") {
  const auto bm = KernelSpec::bm2d(1.0);
  CHECK(log_remainder(bm, 1.0) == doctest::Approx(std::cyl_bessel_k(0.0, std::sqrt(2.0))).epsilon(1e-10));
  CHECK(pi * green_continuum(bm, {0, 0}, {0, 1}) ==
        doctest::Approx(std::cyl_bessel_k(0.0, std::sqrt(2.0))).epsilon(1e-10));
  CHECK(log_remainder(bm, 2.5) == doctest::Approx(std::cyl_bessel_k(0.0, 2.5 * std::sqrt(2.0))).epsilon(1e-10));
}

TEST_CASE("continuum Green's function is symmetric and diverges on the diagonal") {
  const auto bm = KernelSpec::bm2d(1.0);
  CHECK(green_continuum(bm, {0.1, 0.2}, {0.5, -0.3}) == green_continuum(bm, {0.5, -0.3}, {0.1, 0.2}));
  CHECK_THROWS_AS(green_continuum(bm, {0.1, 0.2}, {0.1, 0.2}), DiagonalDivergence);
  CHECK_THROWS_AS(green_continuum(KernelSpec::lattice_rw(4, 1.0), {0, 0}, {1, 0}), DomainError);
}

TEST_CASE("remainder h is bounded and converges at the origin") {
  for (auto spec : {KernelSpec::bm2d(1.0), KernelSpec::cauchy1d(1.0)}) {
    double lo = 1e300, hi = -1e300;
    for (double r = 1e-6; r <= 10.0; r *= 1.2) {
      const double h = log_remainder(spec, r);
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
    CHECK(std::isfinite(lo));
    CHECK(hi - lo < 5.0);
  }
  const auto cauchy = KernelSpec::cauchy1d(1.0);
  double previous = 0.0, previous_step = 1e9;
  for (int k = 4; k <= 24; k += 4) {
    const double r = std::ldexp(1.0, -k);
    const double h = pi * green_continuum(cauchy, {0, 0}, {r, 0}) - std::log(1.0 / r);
    if (k > 4) {
      const double step = std::abs(h - previous);
      CHECK(step < previous_step);
      previous_step = step;
    }
    previous = h;
  }
  CHECK(previous_step < 1e-5);
}

TEST_CASE("stable Green's function") {
  for (double lambda : {0.5, 1.0, 3.0}) {
    CHECK(green_stable(2.0, lambda, 0.0) == doctest::Approx(1.0 / std::sqrt(2 * lambda)).epsilon(1e-9));
  }
  // diagonal against the closed form 2^{1/a} lambda^{1/a - 1} / (a sin(pi/a))
  for (double alpha : {1.2, 1.5, 1.9}) {
    for (double lambda : {0.5, 2.0}) {
      const double closed = std::pow(2.0, 1 / alpha) * std::pow(lambda, 1 / alpha - 1) /
                            (alpha * std::sin(pi / alpha));
      CHECK(green_stable(alpha, lambda, 0.0) == doctest::Approx(closed).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(green_stable(1.0, 1.0, 0.0), DiagonalDivergence);
  CHECK_THROWS_AS(green_stable(2.2, 1.0, 0.3), DomainError);

  for (const auto& ref : kStableGreenTable) {
    CHECK(green_stable(ref.alpha, 1.0, ref.r) == doctest::Approx(ref.value).epsilon(1e-8));
  }
  // alpha = 2 closed form e^{-sqrt(2 lambda) r} / sqrt(2 lambda)
  CHECK(green_stable(2.0, 1.0, 1.3) ==
        doctest::Approx(std::exp(-std::sqrt(2.0) * 1.3) / std::sqrt(2.0)).epsilon(1e-9));
  // Laplace consistency with the stable density
  const double via_density = laplace_oracle([](double t) { return stable_density(1.5, t, 0.8); }, 1.0);
  CHECK(green_stable(1.5, 1.0, 0.8) == doctest::Approx(via_density).epsilon(1e-6));
}

TEST_CASE("stable Green's bound holds on a grid") {
  int violations = 0;
  for (double alpha : {1.0, 1.25, 1.5, 1.75, 2.0}) {
    for (int i = 0; i < 20; ++i) {
      const double r = 0.05 * std::pow(1.3, i);
      for (double lambda : {0.5, 1.0}) {
        if (std::abs(green_stable(alpha, lambda, r)) > green_stable_bound(lambda, r)) ++violations;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("published diagonal constant differs from the integral") {
  const double reported = stable_diagonal_reflection_value(1.5);
  CHECK(reported == doctest::Approx(1.0 / (3.0 * std::sin(pi / 1.5))));
  CHECK(std::abs(reported - green_stable(1.5, 1.0, 0.0)) > 0.1);
}

TEST_CASE("random walk step probabilities") {
  CHECK(rw_step_prob(0, {0, 0}) == 1.0);
  CHECK(rw_step_prob(1, {1, 1}) == 0.25);
  CHECK(rw_step_prob(1, {1, 0}) == 0.0);
  CHECK(rw_step_prob(2, {0, 0}) == 0.25);
  CHECK(rw_step_prob(3, {5, 1}) == 0.0);
  for (int k = 0; k <= 12; ++k) {
    double total = 0.0;
    for (int a = -k; a <= k; ++a)
      for (int b = -k; b <= k; ++b) total += rw_step_prob(k, {a, b});
    CHECK(total == 1.0);
  }
  // the large-k branch agrees with the exact branch where they overlap
  CHECK(signed_step_prob(60, 4) == doctest::Approx(std::exp(std::lgamma(61.0) - std::lgamma(33.0) -
                                                           std::lgamma(29.0) - 60 * std::log(2.0))));
}

TEST_CASE("lattice Green's function series") {
  // first three nonzero terms at n = 1, lambda = 1
  const double head = 0.5 + 0.25 / 8 + (9.0 / 64) / 32;
  auto partial = green_lattice_offset(1, 1.0, {0, 0}, 0.2);
  CHECK(partial.terms <= 3);
  auto full = green_lattice(1, 1.0, {0, 0}, {0, 0}, 1e-12);
  double oracle = 0.0;
  for (int k = 0; k < 200; k += 2) {
    double c = 1.0;  // C(k, k/2) / 2^k
    for (int i = 1; i <= k / 2; ++i) c *= double(k / 2 + i) / (4.0 * i);
    oracle += c * c * std::pow(0.5, k + 1);
  }
  CHECK(full.value > head);
  CHECK(full.value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(full.tail_bound <= 1e-12);

  // Laplace consistency with the lattice heat kernel
  const auto spec = KernelSpec::lattice_rw(4, 1.0);
  const double h = 0.5;
  const double via_heat = bq::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return t == 0.0 ? 0.0 : std::exp(-t) * heat_kernel(spec, t, {0, 0}, {2 * h, 0}); },
      0.0, 45.0, 15, 1e-14);
  CHECK(green_lattice(4, 1.0, {0, 0}, {2 * h, 0}, 1e-13).value ==
        doctest::Approx(via_heat).epsilon(1e-7));

  // symmetry and the odd sublattice
  CHECK(green_lattice(16, 1.0, {0, 0}, {0.5, 0.25}, 1e-12).value ==
        green_lattice(16, 1.0, {0.5, 0.25}, {0, 0}, 1e-12).value);
  CHECK(green_lattice_offset(16, 1.0, {1, 0}, 1e-12).value == 0.0);
  CHECK_THROWS_AS(green_lattice_offset(64, 1e-6, {0, 0}, 1e-14, 1000), ConvergenceError);
}

TEST_CASE("snap map") {
  CHECK(lattice_snap(4, {0.5, -0.5}) == Site{1, -1});
  CHECK(lattice_snap(4, {0.74, 0.2}) == Site{1, 0});
  for (int k = -20; k <= 20; ++k) {
    const double x = k / std::sqrt(7.0);
    CHECK(lattice_snap(7, {x, x}) == Site{k, k});
  }
}
