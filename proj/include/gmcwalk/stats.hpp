#pragma once

#include <functional>
#include <vector>

namespace gmcwalk::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  double variance = 0.0;
  std::size_t count = 0;
};

MeanSe mean_se(const std::vector<double>& x);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS test against a continuous CDF.
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
/// Two-sample KS test.
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double normal_cdf(double x);

}  // namespace gmcwalk::stats
