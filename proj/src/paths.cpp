#include "gmcwalk/paths.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gmcwalk/kernels.hpp"

namespace gmcwalk {

CadlagPath::CadlagPath(double horizon, std::vector<double> times, std::vector<Point> values,
                       int dimension)
    : horizon_(horizon), times_(std::move(times)), values_(std::move(values)),
      dimension_(dimension) {
  if (!(horizon_ > 0.0)) throw DomainError("path horizon must be positive");
  if (times_.empty() || times_.size() != values_.size()) {
    throw DomainError("path needs matching, nonempty time and value lists");
  }
  if (times_.front() != 0.0) throw DomainError("path must start at t = 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw DomainError("path breakpoints must increase strictly");
  }
  if (times_.back() > horizon_) throw DomainError("path breakpoint beyond the horizon");
  if (dimension_ != 1 && dimension_ != 2) throw DomainError("path dimension must be 1 or 2");
}

CadlagPath CadlagPath::scalar(double horizon, std::vector<double> times,
                              const std::vector<double>& values) {
  std::vector<Point> pts;
  pts.reserve(values.size());
  for (double v : values) pts.push_back({v, 0.0});
  return {horizon, std::move(times), std::move(pts), 1};
}

CadlagPath CadlagPath::constant(double horizon, const Point& value, int dimension) {
  return {horizon, {0.0}, {value}, dimension};
}

std::size_t CadlagPath::index_at(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0;
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

CadlagPath CadlagPath::restricted(double horizon) const {
  if (horizon > horizon_) throw DomainError("restriction beyond the path horizon");
  const std::size_t last = index_at(horizon);
  return {horizon, std::vector<double>(times_.begin(), times_.begin() + last + 1),
          std::vector<Point>(values_.begin(), values_.begin() + last + 1), dimension_};
}

CadlagPath CadlagPath::shifted(double s) const {
  if (!(s >= 0.0 && s < horizon_)) throw DomainError("shift must lie in [0, T)");
  const std::size_t first = index_at(s);
  std::vector<double> times{0.0};
  std::vector<Point> values{values_[first]};
  for (std::size_t i = first + 1; i < times_.size(); ++i) {
    times.push_back(times_[i] - s);
    values.push_back(values_[i]);
  }
  return {horizon_ - s, std::move(times), std::move(values), dimension_};
}

CadlagPath CadlagPath::simplified() const {
  std::vector<double> times{0.0};
  std::vector<Point> values{values_[0]};
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (values_[i] != values.back()) {
      times.push_back(times_[i]);
      values.push_back(values_[i]);
    }
  }
  return {horizon_, std::move(times), std::move(values), dimension_};
}

LatticeWalkStepper::LatticeWalkStepper(int n, const Point& x)
    : n_(n), spacing_(1.0 / std::sqrt(static_cast<double>(n))), site_(lattice_snap(n, x)) {
  if (n < 1) throw DomainError("lattice scale n must be >= 1");
  start_ = {spacing_ * site_.i, spacing_ * site_.j};
}

std::pair<double, Point> LatticeWalkStepper::step(RngStream& rng) {
  const double hold = rng.exponential(static_cast<double>(n_));
  const std::uint64_t dir = rng.below(4);
  site_.i += (dir & 1) ? 1 : -1;
  site_.j += (dir & 2) ? 1 : -1;
  return {hold, {spacing_ * site_.i, spacing_ * site_.j}};
}

StableStepper::StableStepper(double alpha, double x, double dt)
    : alpha_(alpha), x0_(x), current_(x), dt_(dt) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw DomainError("stable index must lie in [1, 2]");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
}

std::pair<double, Point> StableStepper::step(RngStream& rng) {
  current_ += stable_variate(alpha_, std::pow(0.5 * dt_, 1.0 / alpha_), rng);
  return {dt_, {current_, 0.0}};
}

std::pair<double, Point> FlipStepper::step(RngStream& rng) {
  current_ = -current_;
  return {rng.exponential(1.0), {current_, 0.0}};
}

double stable_variate(double alpha, double scale, RngStream& rng) {
  using std::numbers::pi;
  const double v = pi * (rng.uniform() - 0.5);
  if (alpha == 1.0) return scale * std::tan(v);
  const double w = rng.exponential(1.0);
  if (alpha == 2.0) {
    // CMS at alpha = 2 reduces to 2 sin(V) sqrt(W): a N(0, 2) variate.
    return scale * 2.0 * std::sin(v) * std::sqrt(w);
  }
  const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return scale * x;
}

CadlagPath simulate_jump_process(JumpStepper& stepper, double horizon, RngStream& rng) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  std::vector<double> times{0.0};
  std::vector<Point> values{stepper.start()};
  double t = 0.0;
  while (true) {
    auto [hold, next] = stepper.step(rng);
    t += hold;
    if (t > horizon) break;
    times.push_back(t);
    values.push_back(next);
  }
  return {horizon, std::move(times), std::move(values), stepper.dimension()};
}

CadlagPath simulate_rw(int n, const Point& x, double horizon, RngStream& rng) {
  LatticeWalkStepper stepper(n, x);
  return simulate_jump_process(stepper, horizon, rng);
}

CadlagPath simulate_stable(double alpha, double x, double horizon, double dt, RngStream& rng) {
  StableStepper stepper(alpha, x, dt);
  return simulate_jump_process(stepper, horizon, rng);
}

CadlagPath simulate_flip(double x, double horizon, RngStream& rng) {
  FlipStepper stepper(x);
  return simulate_jump_process(stepper, horizon, rng);
}

namespace {

std::vector<double> dyadic_mesh(double horizon, int level) {
  const std::int64_t cells = std::int64_t{1} << std::min(level, 40);
  std::vector<double> mesh;
  mesh.reserve(cells + 1);
  for (std::int64_t k = 0; k < cells; ++k) mesh.push_back(horizon * k / cells);
  return mesh;
}

}  // namespace

CadlagPath step_approximate(const CadlagPath& path, int level) {
  if (level < 1) throw DomainError("approximation level must be >= 1");
  std::vector<double> grid = dyadic_mesh(path.horizon(), level);
  const double threshold = 1.0 / level;
  const auto& t = path.times();
  const auto& v = path.values();
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double jump = std::hypot(v[i][0] - v[i - 1][0], v[i][1] - v[i - 1][1]);
    if (jump >= threshold) grid.push_back(t[i]);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<Point> values;
  values.reserve(grid.size());
  for (double s : grid) values.push_back(path.at(s));
  return CadlagPath(path.horizon(), std::move(grid), std::move(values), path.dimension())
      .simplified();
}

CadlagPath step_approximate(const std::function<double(double)>& f, int level) {
  if (level < 1) throw DomainError("approximation level must be >= 1");
  std::vector<double> grid = dyadic_mesh(1.0, level);
  std::vector<double> values;
  values.reserve(grid.size());
  for (double s : grid) values.push_back(f(s));
  return CadlagPath::scalar(1.0, std::move(grid), values);
}

double sup_distance(const CadlagPath& a, const CadlagPath& b) {
  const double horizon = std::min(a.horizon(), b.horizon());
  std::vector<double> grid = a.times();
  grid.insert(grid.end(), b.times().begin(), b.times().end());
  std::sort(grid.begin(), grid.end());
  double sup = 0.0;
  for (double s : grid) {
    if (s > horizon) break;
    const Point& p = a.at(s);
    const Point& q = b.at(s);
    sup = std::max(sup, std::hypot(p[0] - q[0], p[1] - q[1]));
  }
  return sup;
}

}  // namespace gmcwalk
