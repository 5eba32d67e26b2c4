#include "gmcwalk/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmcwalk {

LatticeWindow::LatticeWindow(int dimension, int scale, double spacing, std::vector<Site> sites)
    : dimension_(dimension), scale_(scale), spacing_(spacing), sites_(std::move(sites)) {
  if (!(spacing_ > 0.0)) throw DomainError("window spacing must be positive");
  cell_mass_ = dimension_ == 2 ? spacing_ * spacing_ : spacing_;
  index_.reserve(sites_.size());
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (!index_.emplace(sites_[i], i).second) {
      throw DomainError("duplicate site " + to_string(sites_[i]) + " in window");
    }
  }
}

LatticeWindow LatticeWindow::rectangle(int n, const Site& lo, const Site& hi) {
  std::vector<Site> sites;
  for (std::int64_t i = lo.i; i <= hi.i; ++i)
    for (std::int64_t j = lo.j; j <= hi.j; ++j) sites.push_back({i, j});
  return lattice_sites(n, std::move(sites));
}

LatticeWindow LatticeWindow::lattice_sites(int n, std::vector<Site> sites) {
  if (n < 1) throw DomainError("lattice scale n must be >= 1");
  return {2, n, 1.0 / std::sqrt(static_cast<double>(n)), std::move(sites)};
}

LatticeWindow LatticeWindow::grid1d(double h, std::int64_t lo, std::int64_t hi) {
  std::vector<Site> sites;
  for (std::int64_t i = lo; i <= hi; ++i) sites.push_back({i, 0});
  return grid1d_sites(h, std::move(sites));
}

LatticeWindow LatticeWindow::grid1d_sites(double h, std::vector<Site> sites) {
  for (const auto& s : sites) {
    if (s.j != 0) throw DomainError("1D grid sites must have j == 0");
  }
  return {1, 0, h, std::move(sites)};
}

Point LatticeWindow::position_of(const Site& s) const {
  return {spacing_ * static_cast<double>(s.i), spacing_ * static_cast<double>(s.j)};
}

std::optional<std::size_t> LatticeWindow::index_of(const Site& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Site LatticeWindow::snap(const Point& x) const {
  if (dimension_ == 2) return lattice_snap(scale_, x);
  return {static_cast<std::int64_t>(std::floor(x[0] / spacing_ + 1e-9)), 0};
}

FieldKernel::FieldKernel(const KernelSpec& spec, double spacing, double series_tol)
    : spec_(spec), spacing_(spacing), tol_(series_tol) {
  switch (spec.family()) {
    case KernelFamily::lattice_rw: break;
    case KernelFamily::stable1d:
      if (spec.alpha() <= 1.0) {
        throw NotSamplable("limit field is a distribution, not samplable (stable index alpha = 1)");
      }
      if (!(spacing > 0.0)) throw DomainError("stable grid fields need a positive spacing");
      break;
    default:
      throw NotSamplable(std::string("limit field is a distribution, not samplable (") +
                         to_string(spec.family()) + " has an infinite diagonal)");
  }
}

double FieldKernel::covariance(const Site& a, const Site& b) const {
  // Both kernels are invariant under reflections (and, on the lattice,
  // under swapping the axes), so one cache entry serves every equivalent pair.
  std::int64_t di = std::abs(a.i - b.i);
  std::int64_t dj = std::abs(a.j - b.j);
  if (di < dj) std::swap(di, dj);
  const Site key{di, dj};
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  double value;
  if (spec_.family() == KernelFamily::lattice_rw) {
    value = std::numbers::pi * green_lattice_offset(spec_.scale(), spec_.lambda(), key, tol_).value;
  } else {
    value = std::numbers::pi *
            green_stable(spec_.alpha(), spec_.lambda(), spacing_ * static_cast<double>(di));
  }
  std::lock_guard lock(mutex_);
  cache_.emplace(key, value);
  return value;
}

Eigen::MatrixXd build_covariance(const LatticeWindow& window, const FieldKernel& kernel) {
  const auto& spec = kernel.spec();
  if (spec.family() == KernelFamily::lattice_rw &&
      (window.dimension() != 2 || window.scale() != spec.scale())) {
    throw DomainError("window scale does not match the lattice kernel");
  }
  if (spec.family() == KernelFamily::stable1d && window.dimension() != 1) {
    throw DomainError("stable fields live on 1D grids");
  }
  const auto m = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = k(j, i) = kernel.covariance(window.site(i), window.site(j));
    }
  }
  return k;
}

Eigen::MatrixXd build_covariance(const LatticeWindow& window, const KernelSpec& spec) {
  return build_covariance(window, FieldKernel(spec, window.spacing()));
}

CovarianceFactor factorize(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols()) throw DomainError("covariance must be square");
  const double scale = covariance.diagonal().size() ? covariance.diagonal().maxCoeff() : 1.0;
  CovarianceFactor out;
  out.variance.resize(static_cast<std::size_t>(covariance.rows()));
  for (Eigen::Index i = 0; i < covariance.rows(); ++i) out.variance[i] = covariance(i, i);
  for (double rung : {0.0, 1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd shifted = covariance;
    shifted.diagonal().array() += rung * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      out.lower = llt.matrixL();
      out.jitter = rung * scale;
      return out;
    }
  }
  throw FactorizationError("covariance is not positive definite even with jitter 1e-8 x max diagonal");
}

std::vector<FieldSample> sample_field(const CovarianceFactor& factor, const LatticeWindow& window,
                                      RngStream& rng, std::size_t count) {
  const auto m = factor.lower.rows();
  if (static_cast<std::size_t>(m) != window.size()) {
    throw DomainError("factor size does not match the window");
  }
  std::vector<FieldSample> out;
  out.reserve(count);
  Eigen::VectorXd z(m);
  for (std::size_t c = 0; c < count; ++c) {
    for (Eigen::Index i = 0; i < m; ++i) z(i) = rng.normal();
    const Eigen::VectorXd x = factor.lower.triangularView<Eigen::Lower>() * z;
    out.push_back({std::vector<double>(x.data(), x.data() + m), factor.variance});
  }
  return out;
}

LazyField::LazyField(std::shared_ptr<const FieldKernel> kernel, std::uint64_t seed)
    : kernel_(std::move(kernel)), rng_(seed) {}

double LazyField::value(const Site& s) {
  auto it = index_.find(s);
  if (it != index_.end()) return values_[it->second];

  const std::size_t m = sites_.size();
  const double var = kernel_->variance();
  std::vector<double> row(m + 1, 0.0);
  double pivot = var;
  for (std::size_t j = 0; j < m; ++j) {
    double acc = kernel_->covariance(s, sites_[j]);
    for (std::size_t k = 0; k < j; ++k) acc -= row[k] * rows_[j][k];
    row[j] = acc / rows_[j][j];
    pivot -= row[j] * row[j];
  }
  if (pivot < -1e-8 * var) {
    throw FactorizationError("conditional variance negative at site " + to_string(s));
  }
  // Same floor as the jitter ladder; a nearly determined site keeps a
  // tiny independent component.
  row[m] = std::sqrt(std::max(pivot, 1e-12 * var));

  const double z = rng_.normal();
  double x = row[m] * z;
  for (std::size_t j = 0; j < m; ++j) x += row[j] * noise_[j];

  index_.emplace(s, m);
  sites_.push_back(s);
  rows_.push_back(std::move(row));
  noise_.push_back(z);
  values_.push_back(x);
  return x;
}

}  // namespace gmcwalk
