#include "gmcwalk/gmc.hpp"

#include <cmath>

namespace gmcwalk {

std::pair<double, double> l2_thresholds(int dimension, double c_star) {
  if (dimension != 1 && dimension != 2) throw DomainError("dimension must be 1 or 2");
  if (!(c_star >= 1.0)) throw DomainError("domination constant C* must be >= 1");
  return {std::sqrt(dimension / c_star), std::sqrt(2.0 * dimension / c_star)};
}

bool GammaParam::timechange_regime() const {
  return gamma < l2_thresholds(dimension, c_star).first;
}

bool GammaParam::measure_regime() const {
  return gamma < l2_thresholds(dimension, c_star).second;
}

double GmcWeights::density(std::size_t i) const { return std::exp(log_density.at(i)); }

double GmcWeights::total_mass() const {
  double total = 0.0;
  for (double lw : log_density) total += std::exp(lw);
  return total * cell_mass;
}

GmcWeights gmc_weights(const FieldSample& field, const LatticeWindow& window,
                       const GammaParam& gamma) {
  if (gamma.gamma < 0.0) throw DomainError("gamma must be nonnegative");
  if (!gamma.measure_regime()) {
    throw DomainError("gamma = " + std::to_string(gamma.gamma) +
                      " is outside the measure-convergence regime");
  }
  if (field.value.size() != window.size()) throw DomainError("field size does not match the window");
  GmcWeights w;
  w.cell_mass = window.cell_mass();
  w.above_timechange_regime = !gamma.timechange_regime();
  w.log_density.resize(window.size());
  const double g = gamma.gamma;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (i >= field.variance.size() || !std::isfinite(field.variance[i])) {
      throw DomainError("variance unavailable at site " + to_string(window.site(i)));
    }
    w.log_density[i] = g == 0.0 ? 0.0 : g * field.value[i] - 0.5 * g * g * field.variance[i];
  }
  return w;
}

double second_moment_mass(const LatticeWindow& window, const KernelSpec& spec,
                          const GammaParam& gamma, const std::vector<std::size_t>& region) {
  const FieldKernel kernel(spec, window.spacing());
  const double g2 = gamma.gamma * gamma.gamma;
  double sum = 0.0;
  for (std::size_t a : region) {
    for (std::size_t b : region) {
      sum += std::exp(g2 * kernel.covariance(window.sites().at(a), window.sites().at(b)));
    }
  }
  return sum * window.cell_mass() * window.cell_mass();
}

}  // namespace gmcwalk
