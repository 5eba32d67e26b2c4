#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gmcwalk/common.hpp"
#include "gmcwalk/kernels.hpp"
#include "gmcwalk/rng.hpp"

namespace gmcwalk {

/// Finite set of sites on either (1/sqrt(n))Z^2 (scale n, cell mass 1/n) or a
/// one-dimensional grid hZ (cell mass h). Sites are stored by integer index;
/// 1D grids use Site::j == 0.
class LatticeWindow {
 public:
  /// Rectangle of lattice sites lo <= site <= hi (componentwise).
  static LatticeWindow rectangle(int n, const Site& lo, const Site& hi);
  static LatticeWindow lattice_sites(int n, std::vector<Site> sites);
  /// Grid points lo*h, ..., hi*h.
  static LatticeWindow grid1d(double h, std::int64_t lo, std::int64_t hi);
  static LatticeWindow grid1d_sites(double h, std::vector<Site> sites);

  int dimension() const { return dimension_; }
  /// Lattice scale n; 0 for 1D grids.
  int scale() const { return scale_; }
  double spacing() const { return spacing_; }
  double cell_mass() const { return cell_mass_; }
  std::size_t size() const { return sites_.size(); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(std::size_t i) const { return sites_[i]; }
  Point position(std::size_t i) const { return position_of(sites_[i]); }
  Point position_of(const Site& s) const;
  std::optional<std::size_t> index_of(const Site& s) const;
  /// The snap map i_n (lattice) or floor(x / h) (grid).
  Site snap(const Point& x) const;
  /// Lebesgue mass of the whole window, size * cell mass.
  double mass() const { return cell_mass_ * static_cast<double>(sites_.size()); }

 private:
  LatticeWindow(int dimension, int scale, double spacing, std::vector<Site> sites);
  int dimension_;
  int scale_;
  double spacing_;
  double cell_mass_;
  std::vector<Site> sites_;
  std::unordered_map<Site, std::size_t, SiteHash> index_;
};

/// pi * g_lambda between lattice or grid sites, cached by site difference.
/// Only strongly recurrent kernels qualify (lattice_rw, stable1d with
/// alpha > 1); anything else throws NotSamplable. Thread-safe.
class FieldKernel {
 public:
  /// spacing is the grid step for stable1d and ignored for lattice_rw.
  FieldKernel(const KernelSpec& spec, double spacing = 0.0, double series_tol = 1e-12);

  const KernelSpec& spec() const { return spec_; }
  double covariance(const Site& a, const Site& b) const;
  double variance() const { return covariance({0, 0}, {0, 0}); }

 private:
  KernelSpec spec_;
  double spacing_;
  double tol_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Site, double, SiteHash> cache_;
};

/// K[i][j] = pi g_lambda(x_i, x_j) over the window.
Eigen::MatrixXd build_covariance(const LatticeWindow& window, const KernelSpec& spec);
Eigen::MatrixXd build_covariance(const LatticeWindow& window, const FieldKernel& kernel);

struct CovarianceFactor {
  Eigen::MatrixXd lower;          // K + jitter * I = L L^T
  std::vector<double> variance;   // diagonal of K (without jitter)
  double jitter = 0.0;            // absolute jitter added to the diagonal
};

/// Cholesky factorization with the jitter ladder {0, 1e-12, 1e-10, 1e-8} x
/// max diagonal. Throws FactorizationError when every rung fails.
CovarianceFactor factorize(const Eigen::MatrixXd& covariance);

struct FieldSample {
  std::vector<double> value;
  std::vector<double> variance;
};

std::vector<FieldSample> sample_field(const CovarianceFactor& factor, const LatticeWindow& window,
                                      RngStream& rng, std::size_t count);

/// Gaussian field sampled site by site in the order sites are first
/// requested, each value drawn from its conditional law given the sites
/// already fixed. This realizes the path-first window: only sites the walk
/// actually visits are ever materialized.
class LazyField {
 public:
  LazyField(std::shared_ptr<const FieldKernel> kernel, std::uint64_t seed);

  double value(const Site& s);
  double variance() const { return kernel_->variance(); }
  std::size_t size() const { return sites_.size(); }
  const std::vector<Site>& sites() const { return sites_; }

 private:
  std::shared_ptr<const FieldKernel> kernel_;
  RngStream rng_;
  std::vector<Site> sites_;
  std::unordered_map<Site, std::size_t, SiteHash> index_;
  std::vector<std::vector<double>> rows_;  // rows of the Cholesky factor
  std::vector<double> noise_;
  std::vector<double> values_;
};

}  // namespace gmcwalk
