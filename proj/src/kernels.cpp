#include "gmcwalk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gmcwalk/quadrature.hpp"

namespace gmcwalk {
namespace {

using std::numbers::pi;

constexpr double kLogRange = 60.0;  // t = e^s, s in [-60, 60]

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(v));
  }
}

void require_alpha(double alpha) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw DomainError("stability index alpha must lie in [1, 2], got " + std::to_string(alpha));
  }
}

double log_plus_inverse(double r) { return r < 1.0 ? -std::log(r) : 0.0; }

// Exact binomial for small k; returns C(k, m) as a double (exact for k <= 50).
double small_binomial(std::int64_t k, std::int64_t m) {
  m = std::min(m, k - m);
  std::uint64_t c = 1;
  for (std::int64_t i = 1; i <= m; ++i) c = c * static_cast<std::uint64_t>(k - m + i) / i;
  return static_cast<double>(c);
}

double log_signed_step_prob(std::int64_t k, std::int64_t a) {
  const std::int64_t up = (k + a) / 2;
  const std::int64_t down = (k - a) / 2;
  return std::lgamma(k + 1.0) - std::lgamma(up + 1.0) - std::lgamma(down + 1.0) -
         k * std::numbers::ln2;
}

// Integral of f over [0, b] split at powers of two, so that a huge first
// lobe does not hide structure near the origin from the Kronrod nodes.
quad::Result integrate_multiscale(const quad::Integrand& f, double b, const quad::Options& o) {
  quad::Result total;
  double lo = 0.0;
  double hi = std::min(b, 1.0 / 64.0);
  while (true) {
    const auto piece = quad::integrate(f, lo, hi, o);
    total.value += piece.value;
    total.error += piece.error;
    total.intervals += piece.intervals;
    if (hi >= b) break;
    lo = hi;
    hi = std::min(b, 2.0 * hi);
  }
  return total;
}

// Large-r expansion of the stable density (convergent for alpha < 1,
// asymptotic above). Returns NaN when the smallest term is not negligible.
double stable_tail_series(double alpha, double t, double r) {
  const double c = 0.5 * t;
  double sum = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double log_mag = std::lgamma(alpha * k + 1.0) - std::lgamma(k + 1.0) +
                           k * std::log(c) - (alpha * k + 1.0) * std::log(r);
    const double mag = std::exp(log_mag);
    if (mag > last) break;
    last = mag;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * mag * std::sin(pi * alpha * k / 2.0);
    if (mag < 1e-17 * std::abs(sum)) return sum / pi;
  }
  if (last < 1e-13 * std::abs(sum) || last < 1e-300) return sum / pi;
  return std::numeric_limits<double>::quiet_NaN();
}

double lattice_heat(int n, double t, const Site& delta) {
  const double mean = n * t;
  const std::int64_t reach = std::max(std::abs(delta.i), std::abs(delta.j));
  if ((delta.i - delta.j) % 2 != 0) return 0.0;
  const std::int64_t k_hi =
      static_cast<std::int64_t>(mean + 40.0 * std::sqrt(mean) + 60.0) + reach;
  double sum = 0.0;
  for (std::int64_t k = reach; k <= k_hi; ++k) {
    if ((k - delta.i) % 2 != 0) continue;
    const double log_pois = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
    sum += rw_step_prob(k, delta) * std::exp(log_pois);
  }
  return n * sum;
}

// h(w) for planar Brownian motion, from its integral representation.
double bm2d_remainder(double lambda, double w) {
  const quad::Options opts{1e-14, 1e-12, 4000};
  if (w > 1.0) {
    auto f = [&](double s) {
      const double t = std::exp(s);
      return 0.5 * std::exp(-lambda * t - w * w / (2.0 * t));
    };
    return quad::integrate(f, -kLogRange, kLogRange, opts).value;
  }
  auto unit = [&](double s) {
    const double t = std::exp(s);
    return 0.5 * std::exp(-lambda * t - 1.0 / (2.0 * t));
  };
  auto correction = [&](double s) {
    const double t = std::exp(s);
    return 0.5 * std::expm1(-lambda * t) *
           (std::exp(-w * w / (2.0 * t)) - std::exp(-1.0 / (2.0 * t)));
  };
  return quad::integrate(unit, -kLogRange, kLogRange, opts).value +
         quad::integrate(correction, -kLogRange, kLogRange, opts).value;
}

// h(w) for the Cauchy process with density t / (pi (r^2 + t^2)).
double cauchy_remainder(double lambda, double w) {
  const quad::Options opts{1e-14, 1e-12, 4000};
  if (w > 1.0) {
    auto f = [&](double s) {
      const double t = std::exp(s);
      return std::exp(-lambda * w * t) * t * t / (1.0 + t * t);
    };
    return quad::integrate(f, -kLogRange, kLogRange, opts).value;
  }
  auto unit = [&](double s) {
    const double t = std::exp(s);
    return std::exp(-lambda * t) * t * t / (1.0 + t * t);
  };
  auto correction = [&](double s) {
    const double t = std::exp(s);
    // (e^{-lambda w t} - e^{-lambda t}) (t/(1+t^2) - 1/t) * t
    const double diff = -std::exp(-lambda * w * t) * std::expm1(-lambda * (1.0 - w) * t);
    return -diff / (1.0 + t * t);
  };
  return quad::integrate(unit, -kLogRange, kLogRange, opts).value +
         quad::integrate(correction, -kLogRange, kLogRange, opts).value;
}

}  // namespace

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::bm2d: return "bm2d";
    case KernelFamily::cauchy1d: return "cauchy1d";
    case KernelFamily::stable1d: return "stable1d";
    case KernelFamily::lattice_rw: return "lattice_rw";
  }
  return "unknown";
}

KernelSpec::KernelSpec(KernelFamily family, int dimension, double lambda, double alpha, int scale)
    : family_(family), dimension_(dimension), lambda_(lambda), alpha_(alpha), scale_(scale) {
  require_positive(lambda, "resolvent order lambda");
}

KernelSpec KernelSpec::bm2d(double lambda) { return {KernelFamily::bm2d, 2, lambda, 2.0, 0}; }

KernelSpec KernelSpec::cauchy1d(double lambda) {
  return {KernelFamily::cauchy1d, 1, lambda, 1.0, 0};
}

KernelSpec KernelSpec::stable1d(double alpha, double lambda) {
  require_alpha(alpha);
  return {KernelFamily::stable1d, 1, lambda, alpha, 0};
}

KernelSpec KernelSpec::lattice_rw(int n, double lambda) {
  if (n < 1) throw DomainError("lattice scale n must be >= 1, got " + std::to_string(n));
  return {KernelFamily::lattice_rw, 2, lambda, 2.0, n};
}

bool KernelSpec::strongly_recurrent() const {
  switch (family_) {
    case KernelFamily::lattice_rw: return true;
    case KernelFamily::stable1d: return alpha_ > 1.0;
    default: return false;
  }
}

Site lattice_snap(int n, const Point& x) {
  const double root = std::sqrt(static_cast<double>(n));
  // The 1e-9 nudge keeps i_n idempotent on sites whose coordinates were
  // produced as k / sqrt(n) in floating point.
  return {static_cast<std::int64_t>(std::floor(root * x[0] + 1e-9)),
          static_cast<std::int64_t>(std::floor(root * x[1] + 1e-9))};
}

double stable_density(double alpha, double t, double r) {
  require_alpha(alpha);
  require_positive(t, "time t");
  r = std::abs(r);
  // Truncation: tail of int e^{-(t/2) theta^alpha} beyond Theta is at most
  // e^{-(t/2) Theta^alpha} / ((t/2) alpha Theta^{alpha - 1}).
  auto tail = [&](double theta) {
    return std::exp(-0.5 * t * std::pow(theta, alpha)) /
           (0.5 * t * alpha * std::pow(theta, alpha - 1.0));
  };
  double cutoff = 1.0;
  while (tail(cutoff) > 1e-12) cutoff *= 1.25;

  if (r * cutoff > 400.0 * pi && alpha < 2.0) {
    const double tail_value = stable_tail_series(alpha, t, r);
    if (std::isfinite(tail_value)) return std::max(0.0, tail_value);
  }
  if (alpha == 2.0 && r * r > 80.0 * t) {
    return std::exp(-r * r / (2.0 * t)) / std::sqrt(2.0 * pi * t);
  }
  auto f = [&](double theta) {
    return std::cos(r * theta) * std::exp(-0.5 * t * std::pow(theta, alpha));
  };
  const quad::Options opts{1e-15, 1e-12, 4000};
  double total = 0.0;
  const double piece = r > 0.0 ? std::min(cutoff, pi / r) : cutoff;
  for (double lo = 0.0; lo < cutoff; lo += piece) {
    total += quad::integrate(f, lo, std::min(cutoff, lo + piece), opts).value;
  }
  return std::max(0.0, total / pi);
}

double heat_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y) {
  require_positive(t, "time t");
  switch (spec.family()) {
    case KernelFamily::bm2d: {
      const double r2 = std::pow(x[0] - y[0], 2) + std::pow(x[1] - y[1], 2);
      return std::exp(-r2 / (2.0 * t)) / (2.0 * pi * t);
    }
    case KernelFamily::cauchy1d: {
      const double r = x[0] - y[0];
      return t / (pi * (r * r + t * t));
    }
    case KernelFamily::stable1d:
      return stable_density(spec.alpha(), t, x[0] - y[0]);
    case KernelFamily::lattice_rw: {
      const int n = spec.scale();
      return lattice_heat(n, t, lattice_snap(n, y) - lattice_snap(n, x));
    }
  }
  throw DomainError("unknown kernel family");
}

double log_remainder(const KernelSpec& spec, double r) {
  require_positive(r, "distance r");
  switch (spec.family()) {
    case KernelFamily::bm2d: return bm2d_remainder(spec.lambda(), r);
    case KernelFamily::cauchy1d: return cauchy_remainder(spec.lambda(), r);
    default:
      throw DomainError(std::string("log decomposition is defined for bm2d and cauchy1d, not ") +
                        to_string(spec.family()));
  }
}

double green_continuum(const KernelSpec& spec, const Point& x, const Point& y) {
  if (spec.family() != KernelFamily::bm2d && spec.family() != KernelFamily::cauchy1d) {
    throw DomainError(std::string("green_continuum expects bm2d or cauchy1d, got ") +
                      to_string(spec.family()));
  }
  const double r = spec.dimension() == 2 ? distance(x, y) : std::abs(x[0] - y[0]);
  if (r == 0.0) {
    throw DiagonalDivergence("diagonal divergence: the continuum Green's function is infinite at x == y");
  }
  return (log_plus_inverse(r) + log_remainder(spec, r)) / pi;
}

double green_stable(double alpha, double lambda, double r) {
  require_alpha(alpha);
  require_positive(lambda, "resolvent order lambda");
  r = std::abs(r);
  const quad::Options opts{1e-15, 1e-11, 6000};
  if (r == 0.0) {
    if (alpha <= 1.0) {
      throw DiagonalDivergence("diagonal divergence: the stable Green's function is finite on the diagonal only for alpha > 1");
    }
    // Numerical part up to Theta, then the tail of 2 theta^{-alpha} /
    // (1 + 2 lambda theta^{-alpha}) expanded as a geometric series.
    const double theta_cut = std::max(1.0, std::pow(8.0 * lambda, 1.0 / alpha));
    auto f = [&](double theta) { return 1.0 / (lambda + 0.5 * std::pow(theta, alpha)); };
    double head = integrate_multiscale(f, theta_cut, opts).value;
    double tail = 0.0;
    const double q = -2.0 * lambda * std::pow(theta_cut, -alpha);
    double factor = 2.0 * std::pow(theta_cut, 1.0 - alpha);
    for (int j = 0; j < 200; ++j) {
      const double term = factor / (alpha * (j + 1) - 1.0);
      tail += term;
      if (std::abs(term) < 1e-17 * std::abs(tail)) break;
      factor *= q;
    }
    return (head + tail) / pi;
  }
  auto amplitude = [&](double theta) {
    const double denom = lambda + 0.5 * std::pow(theta, alpha);
    return alpha * std::pow(theta, alpha - 1.0) / (denom * denom);
  };
  // First lobe [0, pi/r] integrated across scales, then the alternating tail.
  const double first_end = pi / r;
  const double head = integrate_multiscale(
      [&](double th) { return amplitude(th) * std::sin(r * th); }, first_end, opts).value;
  auto shifted = [&](double u) { return amplitude(u + first_end); };
  // sin(r (u + pi/r)) = -sin(r u)
  const double rest = -quad::integrate_oscillatory(shifted, r, quad::Trig::sine, opts).value;
  return (head + rest) / (2.0 * pi * r);
}

double green_stable_bound(double lambda, double r) {
  return (1.0 / (lambda * lambda) + 4.0) / (2.0 * pi * r);
}

double stable_diagonal_reflection_value(double alpha) {
  return 1.0 / (2.0 * alpha * std::sin(pi / alpha));
}

double signed_step_prob(std::int64_t k, std::int64_t a) {
  if (k < 0) throw DomainError("step count must be nonnegative");
  a = std::abs(a);
  if (a > k || (k + a) % 2 != 0) return 0.0;
  if (k <= 50) return small_binomial(k, (k + a) / 2) / std::ldexp(1.0, static_cast<int>(k));
  return std::exp(log_signed_step_prob(k, a));
}

double rw_step_prob(std::int64_t k, const Site& delta) {
  return signed_step_prob(k, delta.i) * signed_step_prob(k, delta.j);
}

SeriesResult green_lattice_offset(int n, double lambda, const Site& delta, double tol,
                                  std::int64_t max_terms) {
  if (n < 1) throw DomainError("lattice scale n must be >= 1");
  require_positive(lambda, "resolvent order lambda");
  require_positive(tol, "series tolerance");
  const std::int64_t a = std::abs(delta.i);
  const std::int64_t b = std::abs(delta.j);
  const double rho = n / (n + lambda);
  const double prefactor = n / (n + lambda);
  // Bound on the remaining terms after index K: (n / lambda) rho^{K+1}.
  auto tail_after = [&](std::int64_t k) { return (n / lambda) * std::pow(rho, k + 1.0); };
  if ((a + b) % 2 != 0) {
    // Unreachable sublattice: every term vanishes.
    return {0.0, 0.0, 0};
  }
  std::int64_t k = std::max(a, b);
  double sum = 0.0;
  std::int64_t terms = 0;
  // Work in logs for the leading term, then a ratio recurrence in steps of 2.
  double log_term = (k <= 50 ? std::log(rw_step_prob(k, delta))
                             : log_signed_step_prob(k, a) + log_signed_step_prob(k, b)) +
                    k * std::log(rho);
  double term = std::exp(log_term);
  while (true) {
    sum += term;
    ++terms;
    const double bound = tail_after(k + 1);
    if (bound <= tol) {
      return {prefactor * sum, prefactor * bound, terms};
    }
    if (terms >= max_terms) {
      throw ConvergenceError("lattice Green's series hit max_terms", prefactor * bound);
    }
    // b(k+2, a) / b(k, a) = (k+2)(k+1) / (4 ((k+2+a)/2) ((k+2-a)/2))
    const double kk = static_cast<double>(k);
    const double ratio_a = (kk + 2.0) * (kk + 1.0) /
                           (4.0 * ((kk + 2.0 + a) / 2.0) * ((kk + 2.0 - a) / 2.0));
    const double ratio_b = (kk + 2.0) * (kk + 1.0) /
                           (4.0 * ((kk + 2.0 + b) / 2.0) * ((kk + 2.0 - b) / 2.0));
    term *= ratio_a * ratio_b * rho * rho;
    k += 2;
  }
}

SeriesResult green_lattice(int n, double lambda, const Point& x, const Point& y, double tol) {
  return green_lattice_offset(n, lambda, lattice_snap(n, y) - lattice_snap(n, x), tol);
}

std::string to_string(const Site& s) {
  return "(" + std::to_string(s.i) + ", " + std::to_string(s.j) + ")";
}

std::string to_string(const Point& p) {
  return "(" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ")";
}

}  // namespace gmcwalk
