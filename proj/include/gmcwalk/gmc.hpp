#pragma once

#include <utility>
#include <vector>

#include "gmcwalk/field.hpp"

namespace gmcwalk {

/// Chaos parameter gamma with the domination constant C* of the kernel
/// family (C* = 1 for both worked examples).
struct GammaParam {
  double gamma = 0.0;
  int dimension = 2;
  double c_star = 1.0;

  /// gamma < sqrt(d / C*): the clock has a finite second moment.
  bool timechange_regime() const;
  /// gamma < sqrt(2d / C*): the chaos measure converges in L^2.
  bool measure_regime() const;
};

/// (sqrt(d / C*), sqrt(2d / C*)).
std::pair<double, double> l2_thresholds(int dimension, double c_star);

/// Per-site chaos density stored in log form, log w = gamma X - gamma^2 var / 2.
struct GmcWeights {
  std::vector<double> log_density;
  double cell_mass = 0.0;
  bool above_timechange_regime = false;

  double density(std::size_t i) const;
  double mass(std::size_t i) const { return density(i) * cell_mass; }
  double total_mass() const;
};

GmcWeights gmc_weights(const FieldSample& field, const LatticeWindow& window,
                       const GammaParam& gamma);

/// E[mu(A)^2] = sum_{x, y in A} exp(gamma^2 K(x, y)) * cell_mass^2, with
/// A given by window indices.
double second_moment_mass(const LatticeWindow& window, const KernelSpec& spec,
                          const GammaParam& gamma, const std::vector<std::size_t>& region);

}  // namespace gmcwalk
