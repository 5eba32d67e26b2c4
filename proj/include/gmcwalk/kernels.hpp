#pragma once

#include <cstdint>

#include "gmcwalk/common.hpp"

/// Heat kernels and lambda-order Green's functions of the processes used by
/// the toolkit: planar Brownian motion, the Cauchy process, symmetric
/// alpha-stable processes on R and the diagonal-step continuous-time random
/// walk on (1/sqrt(n))Z^2.
///
/// Conventions:
///   bm2d       p(t,x,y) = exp(-|x-y|^2 / 2t) / (2 pi t)
///   cauchy1d   p(t,x,y) = t / (pi (|x-y|^2 + t^2)), the normalization under
///              which pi g_lambda = log(1/r) + bounded
///   stable1d   characteristic function exp(-(t/2)|theta|^alpha); alpha = 1 is
///              the Cauchy process run at half speed
///   lattice_rw rate-n jumps by (+-1, +-1)/sqrt(n); kernels are densities
///              with respect to the cell mass 1/n
namespace gmcwalk {

enum class KernelFamily { bm2d, cauchy1d, stable1d, lattice_rw };

const char* to_string(KernelFamily family);

class KernelSpec {
 public:
  static KernelSpec bm2d(double lambda);
  static KernelSpec cauchy1d(double lambda);
  static KernelSpec stable1d(double alpha, double lambda);
  static KernelSpec lattice_rw(int n, double lambda);

  KernelFamily family() const { return family_; }
  int dimension() const { return dimension_; }
  double lambda() const { return lambda_; }
  /// Stability index; 2 for bm2d and lattice_rw, 1 for cauchy1d.
  double alpha() const { return alpha_; }
  /// Lattice scale n (lattice_rw only; 0 otherwise).
  int scale() const { return scale_; }
  /// H = alpha/2 - d/2.
  double hurst() const { return alpha_ / 2.0 - dimension_ / 2.0; }
  /// True when the Green's function is finite on the diagonal.
  bool strongly_recurrent() const;

 private:
  KernelSpec(KernelFamily family, int dimension, double lambda, double alpha, int scale);
  KernelFamily family_;
  int dimension_;
  double lambda_;
  double alpha_;
  int scale_;
};

/// Transition density p(t, x, y). For lattice_rw the value is
/// n * P_{x_n}(Z_t = y_n), the density with respect to the cell mass.
double heat_kernel(const KernelSpec& spec, double t, const Point& x, const Point& y);

/// Density of the symmetric alpha-stable law with characteristic function
/// exp(-(t/2)|theta|^alpha) at distance r, by truncated Fourier inversion.
double stable_density(double alpha, double t, double r);

/// lambda-order Green's function g of bm2d or cauchy1d (not multiplied by
/// pi), built from the log decomposition pi g = log+(1/r) + h(r).
/// Throws DiagonalDivergence when x == y.
double green_continuum(const KernelSpec& spec, const Point& x, const Point& y);

/// The bounded remainder h(r) = pi g(r) - log+(1/r) for bm2d / cauchy1d,
/// computed from its own integral representation.
double log_remainder(const KernelSpec& spec, double r);

/// lambda-order Green's function of the stable1d family at distance r,
/// (1/pi) int_0^inf cos(r theta) / (lambda + theta^alpha / 2) d theta,
/// evaluated in its integrated-by-parts (absolutely convergent) form.
/// Throws DiagonalDivergence for r == 0 and alpha <= 1.
double green_stable(double alpha, double lambda, double r);

/// Upper bound ((1/lambda^2) + 4) / (2 pi r) on |green_stable| off the
/// diagonal.
double green_stable_bound(double lambda, double r);

/// 1 / (2 alpha sin(pi / alpha)), the published closed form for the stable
/// diagonal. Kept for comparison reports; it disagrees with the integral.
double stable_diagonal_reflection_value(double alpha);

/// P(S_k = delta) for the diagonal-step walk S on Z^2.
double rw_step_prob(std::int64_t k, const Site& delta);

/// One-dimensional factor: P(sum of k independent +-1 steps = a).
double signed_step_prob(std::int64_t k, std::int64_t a);

struct SeriesResult {
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t terms = 0;
};

/// Poissonized lattice Green's function
///   g^n(x, y) = n * sum_k P(S_k = delta) n^k / (n + lambda)^(k+1)
/// with delta = floor(sqrt(n) y) - floor(sqrt(n) x), truncated once the
/// geometric tail bound drops below tol.
SeriesResult green_lattice(int n, double lambda, const Point& x, const Point& y, double tol);
SeriesResult green_lattice_offset(int n, double lambda, const Site& delta, double tol,
                                  std::int64_t max_terms = 50'000'000);

/// Snap map i_n of (1/sqrt(n))Z^2: x -> floor(sqrt(n) x) componentwise.
Site lattice_snap(int n, const Point& x);

}  // namespace gmcwalk
