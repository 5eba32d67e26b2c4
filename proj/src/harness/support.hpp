#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gmcwalk/clock.hpp"
#include "gmcwalk/harness.hpp"
#include "gmcwalk/stats.hpp"

namespace gmcwalk::harness::detail {

// Stream ids keep the random inputs of different experiment parts apart.
enum Stream : std::uint64_t {
  kWalk = 1,
  kField = 2,
  kFlip = 3,
  kIncrement = 4,
  kProperty = 5,
  kFdd = 6,
};

inline Quantity measured(std::string name, double v, Provenance p = Provenance::monte_carlo) {
  return {std::move(name), v, p};
}

inline Verdict se_verdict(std::string claim, std::string description, double mean, double se,
                          double expected, Provenance expected_from, double k) {
  Verdict v;
  v.claim = std::move(claim);
  v.description = std::move(description);
  v.measured = {measured("mean", mean), measured("se", se)};
  v.expected = {{"value", expected, expected_from}};
  v.band_kind = "se";
  v.band = k;
  v.passed = std::abs(mean - expected) < k * se;
  return v;
}

inline bool strictly_decreasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] < x[i - 1])) return false;
  }
  return x.size() >= 2;
}

inline Verdict report(std::string claim, std::string description, std::vector<Quantity> values,
                      std::string note = {}) {
  Verdict v;
  v.claim = std::move(claim);
  v.description = std::move(description);
  v.mode = Mode::report_only;
  v.passed = true;
  v.measured = std::move(values);
  v.note = std::move(note);
  return v;
}

/// Lattice field kernel pi g^n_lambda shared by every replica of a run.
inline std::shared_ptr<const FieldKernel> lattice_kernel(int n, double lambda) {
  return std::make_shared<const FieldKernel>(KernelSpec::lattice_rw(n, lambda));
}

inline std::shared_ptr<const FieldKernel> stable_kernel(double alpha, double lambda, double h) {
  return std::make_shared<const FieldKernel>(KernelSpec::stable1d(alpha, lambda), h);
}

/// Chaos density of a fresh lazily sampled field, snapped with `grid`.
inline LazyGmcDensity lazy_density(const std::shared_ptr<const FieldKernel>& kernel,
                                   const LatticeWindow& grid, double gamma, std::uint64_t seed) {
  return LazyGmcDensity(std::make_shared<LazyField>(kernel, seed), grid, gamma);
}

inline stats::MeanSe summarize(const std::vector<double>& x) { return stats::mean_se(x); }

}  // namespace gmcwalk::harness::detail
