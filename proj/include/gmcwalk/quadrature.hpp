#pragma once

#include <functional>

namespace gmcwalk::quad {

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Throws
/// QuadratureError carrying the achieved error estimate when the interval
/// budget runs out before the tolerance is met.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [a, inf) via x = a + u / (1 - u).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opts = {});

enum class Trig { sine, cosine };

/// Integral of f(x) * trig(omega x) over [0, inf) for f eventually monotone
/// and decaying. The range is cut at the zeros of the trig factor, each
/// lobe is integrated adaptively, and the alternating lobe series is summed
/// with repeated averaging of partial sums.
Result integrate_oscillatory(const Integrand& f, double omega, Trig trig,
                             const Options& opts = {}, int max_lobes = 20000);

}  // namespace gmcwalk::quad
