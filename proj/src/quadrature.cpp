#include "gmcwalk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "gmcwalk/common.hpp"

namespace gmcwalk::quad {
namespace {

// Kronrod abscissae (descending) and weights; Gauss weights sit on the odd
// Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  Segment s{a, b, resk * half, std::abs((resk - resg) * half)};
  if (!std::isfinite(s.value)) s.error = std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
  if (a == b) return {};
  if (b < a) {
    Result r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (intervals >= opts.max_intervals) {
      throw QuadratureError("adaptive Gauss-Kronrod did not converge on [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]",
                            error);
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval collapsed to adjacent doubles; nothing left to refine.
      heap.push(worst);
      break;
    }
    Segment left = kronrod15(f, worst.a, mid);
    Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
    if (intervals % 64 == 0) {
      // Re-sum to keep cancellation drift out of the running totals.
      auto copy = heap;
      total = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  if (!std::isfinite(total)) {
    throw QuadratureError("integrand is not finite on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]",
                          error);
  }
  return {total, error, intervals};
}

Result integrate_to_infinity(const Integrand& f, double a, const Options& opts) {
  auto mapped = [&](double u) {
    const double one_minus = 1.0 - u;
    if (one_minus <= 0.0) return 0.0;
    const double x = a + u / one_minus;
    const double v = f(x) / (one_minus * one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

Result integrate_oscillatory(const Integrand& f, double omega, Trig trig,
                             const Options& opts, int max_lobes) {
  if (!(omega > 0.0)) throw DomainError("oscillatory quadrature needs omega > 0");
  const double period_half = std::numbers::pi / omega;
  auto lobe_start = [&](int k) {
    if (k == 0) return 0.0;
    return trig == Trig::sine ? k * period_half : (k - 0.5) * period_half;
  };
  auto integrand = [&](double x) {
    return f(x) * (trig == Trig::sine ? std::sin(omega * x) : std::cos(omega * x));
  };

  constexpr int kLevels = 12;
  constexpr int kMinLobes = 4 + kLevels;
  std::vector<double> partial;
  partial.reserve(256);
  double sum = 0.0;
  double lobe_error = 0.0;
  double previous_estimate = std::numeric_limits<double>::quiet_NaN();
  int settled = 0;
  Options lobe_opts = opts;
  lobe_opts.abs_tol = opts.abs_tol * 0.1;

  for (int k = 0; k < max_lobes; ++k) {
    const Result lobe = integrate(integrand, lobe_start(k), lobe_start(k + 1), lobe_opts);
    sum += lobe.value;
    lobe_error += lobe.error;
    partial.push_back(sum);
    if (static_cast<int>(partial.size()) < kMinLobes) continue;

    std::array<double, kLevels + 1> window;
    std::copy(partial.end() - (kLevels + 1), partial.end(), window.begin());
    for (int level = 0; level < kLevels; ++level) {
      for (int i = 0; i < kLevels - level; ++i) window[i] = 0.5 * (window[i] + window[i + 1]);
    }
    const double estimate = window[0];
    const double change = std::abs(estimate - previous_estimate);
    previous_estimate = estimate;
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(estimate));
    // Three consecutive quiet updates guard against a lucky coincidence.
    settled = change <= tol ? settled + 1 : 0;
    if (settled >= 3) return {estimate, change + lobe_error, k + 1};
  }
  throw QuadratureError("oscillatory lobe series did not converge",
                        std::isfinite(previous_estimate) ? std::abs(previous_estimate - sum)
                                                         : lobe_error);
}

}  // namespace gmcwalk::quad
