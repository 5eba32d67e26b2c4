#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gmcwalk/skorokhod.hpp"

using namespace gmcwalk;

namespace {

CadlagPath indicator(double at, double height = 1.0, double horizon = 1.0) {
  return CadlagPath::scalar(horizon, {0.0, at}, {0.0, height});
}

CadlagPath random_path(std::mt19937_64& gen, int jumps, double horizon = 1.0) {
  std::uniform_real_distribution<double> u(0.02, horizon - 0.02), v(-1.0, 1.0);
  std::vector<double> t{0.0};
  for (int i = 0; i < jumps; ++i) t.push_back(u(gen));
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<double> vals;
  for (std::size_t i = 0; i < t.size(); ++i) vals.push_back(v(gen));
  return CadlagPath::scalar(horizon, t, vals).simplified();
}

// Move the jumps of a to new times, keeping values.
CadlagPath moved(const CadlagPath& a, const std::vector<double>& times) {
  std::vector<double> t{0.0};
  t.insert(t.end(), times.begin(), times.end());
  std::vector<double> vals;
  for (const auto& v : a.values()) vals.push_back(v[0]);
  return CadlagPath::scalar(a.horizon(), t, vals);
}

// J1 over warps sending each jump of a (two jumps) to candidate times,
// piecewise linear between. Candidates: own times, b's jump times and a grid.
double j1_brute(const CadlagPath& a, const CadlagPath& b) {
  std::vector<double> cand(a.times().begin() + 1, a.times().end());
  cand.insert(cand.end(), b.times().begin() + 1, b.times().end());
  for (int k = 1; k < 400; ++k) cand.push_back(k / 400.0);
  std::sort(cand.begin(), cand.end());
  const auto& u = a.times();
  double best = sup_distance(a, b);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (u.size() == 2) {
      best = std::min(best, std::max(std::abs(cand[i] - u[1]), sup_distance(moved(a, {cand[i]}), b)));
      continue;
    }
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      const double shift = std::max(std::abs(cand[i] - u[1]), std::abs(cand[j] - u[2]));
      if (shift >= best) continue;
      best = std::min(best, std::max(shift, sup_distance(moved(a, {cand[i], cand[j]}), b)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("oscillation moduli") {
  auto ind = indicator(0.5);
  CHECK(osc_v(ind, 1.0, 0.5, 0.1) == 1.0);
  CHECK(osc_v(ind, 1.0, 0.2, 0.1) == 0.0);
  CHECK(osc_v(ind, 1.0, 0.45, 0.05) == 1.0);

  // monotone staircases have zero w-oscillation
  auto stairs = CadlagPath::scalar(1.0, {0.0, 0.2, 0.21, 0.5}, {0.0, 1.0, 2.0, 5.0});
  CHECK(osc_w(stairs, 1.0, 0.3) == 0.0);
  // a spike narrower than the window
  auto spike = CadlagPath::scalar(1.0, {0.0, 0.5, 0.55}, {0.0, 1.0, 0.0});
  CHECK(osc_w(spike, 1.0, 0.1) == doctest::Approx(1.0));
  CHECK(osc_w(spike, 1.0, 0.02) == 0.0);

  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = random_path(gen, 6);
    for (double delta : {0.01, 0.05, 0.2}) {
      double v = 0.0;
      for (int k = 0; k <= 1000; ++k) v = std::max(v, osc_v(p, 1.0, k / 1000.0, delta));
      CHECK(osc_w(p, 1.0, delta) <= v + 1e-12);
    }
  }

  // vector paths
  CadlagPath planar(1.0, {0.0, 0.4, 0.45}, {{0, 0}, {1, 0}, {1, 1}}, 2);
  CHECK(osc_v(planar, 1.0, 0.42, 0.1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(osc_w(planar, 1.0, 0.1) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("J1 closed forms") {
  CHECK(d_j1(indicator(0.5), indicator(0.5), 1.0).value == 0.0);
  for (int n : {4, 10, 100}) {
    auto r = d_j1(indicator(0.5), indicator(0.5 + 1.0 / n), 1.0);
    CHECK(r.kind == MetricKind::exact);
    CHECK(r.value == doctest::Approx(1.0 / n));
    CHECK(r.value <= 2.0 / n);
  }
  // one jump each: match the jumps or leave them where they are
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> t(0.05, 0.95), h(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    double u = t(gen), w = t(gen), h1 = h(gen), h2 = h(gen);
    if (u > w) {
      std::swap(u, w);
      std::swap(h1, h2);
    }
    const double expected =
        std::min(std::max(w - u, std::abs(h1 - h2)), std::max(std::abs(h1), std::abs(h1 - h2)));
    CHECK(d_j1(indicator(u, h1), indicator(w, h2), 1.0).value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("J1 against brute-force warps") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 25; ++trial) {
    auto a = random_path(gen, 1 + trial % 2);
    auto b = random_path(gen, 1 + (trial / 2) % 3);
    auto r = d_j1(a, b, 1.0);
    const double brute = j1_brute(a, b);
    CHECK(r.value <= brute + 1e-12);
    CHECK(brute <= r.value + 2.5e-3);
    CHECK(d_j1(b, a, 1.0).value == doctest::Approx(r.value).epsilon(1e-12));
    // the warp is an increasing map of [0, T] onto itself
    REQUIRE(r.warp.size() >= 2);
    CHECK(r.warp.front() == std::pair<double, double>{0.0, 0.0});
    CHECK(r.warp.back() == std::pair<double, double>{1.0, 1.0});
    for (std::size_t i = 1; i < r.warp.size(); ++i) {
      CHECK(r.warp[i].first >= r.warp[i - 1].first);
      CHECK(r.warp[i].second >= r.warp[i - 1].second);
    }
  }
}

TEST_CASE("M1 separates staircases from single jumps") {
  for (int n : {4, 16, 64}) {
    auto jump = indicator(0.5);
    auto stairs = CadlagPath::scalar(1.0, {0.0, 0.5, 0.5 + 1.0 / n}, {0.0, 0.5, 1.0});
    CHECK(d_j1(jump, stairs, 1.0).value >= 0.5 - 1e-12);
    auto m = d_m1(jump, stairs, 1.0);
    CHECK(m.kind == MetricKind::upper_bound);
    CHECK(m.value <= 1.0 / n + 1e-3);
  }
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_path(gen, 3), b = random_path(gen, 3);
    CHECK(d_m1(a, b, 1.0).value <= d_j1(a, b, 1.0).value + 1e-9);
  }
  CadlagPath planar(1.0, {0.0}, {{0, 0}}, 2);
  CHECK_THROWS_AS(d_m1(planar, planar, 1.0), DomainError);
}

TEST_CASE("L1 and whole-line distances") {
  CHECK(l1_distance(indicator(0.3), indicator(0.7), 1.0) == doctest::Approx(0.4));
  CHECK(l1_distance(indicator(0.3, 2.0), indicator(0.3, -1.0), 1.0) == doctest::Approx(2.1));

  auto a = CadlagPath::scalar(10.0, {0.0, 1.0}, {0.0, 1.0});
  auto same = d_j1_whole_line(a, a);
  CHECK(same.value == 0.0);
  CHECK(same.truncation_bound == doctest::Approx(std::exp(-8.0)));
  auto b = CadlagPath::scalar(10.0, {0.0, 1.1}, {0.0, 1.0});
  auto d = d_j1_whole_line(a, b);
  // d^T is 0 before the first jump, 1 while only one jump is in the window
  // and 0.1 once both are
  const double expected = (std::exp(-1.0) - std::exp(-1.1)) + 0.1 * (std::exp(-1.1) - std::exp(-8.0));
  CHECK(d.value == doctest::Approx(expected).epsilon(1e-9));
  CHECK(d_m1_whole_line(a, b).value <= d.value + 1e-9);
}
