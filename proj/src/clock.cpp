#include "gmcwalk/clock.hpp"

#include <algorithm>
#include <cmath>

namespace gmcwalk {

Clock::Clock(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() < 2 || times_.size() != values_.size()) {
    throw DomainError("clock needs at least two matching breakpoints");
  }
  if (times_.front() != 0.0 || values_.front() != 0.0) throw DomainError("clock must start at A(0) = 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw DomainError("clock breakpoints must increase strictly");
    if (values_[i] < values_[i - 1]) throw DomainError("clock must be nondecreasing");
  }
}

Clock Clock::linear(double horizon, double rate) {
  return Clock({0.0, horizon}, {0.0, rate * horizon});
}

double Clock::slope(std::size_t i) const {
  return (values_[i + 1] - values_[i]) / (times_[i + 1] - times_[i]);
}

double Clock::at(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= horizon()) return total();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  return values_[i] + slope(i) * (t - times_[i]);
}

bool Clock::strictly_increasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i] > values_[i - 1])) return false;
  }
  return true;
}

Clock pcaf_from_density(const CadlagPath& path, const Density& density) {
  const auto& t = path.times();
  const auto& v = path.values();
  std::vector<double> times(t.begin(), t.end());
  if (times.back() < path.horizon()) times.push_back(path.horizon());
  std::vector<double> values(times.size(), 0.0);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double rho = density(v[i]);
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
      throw DomainError("clock density must be finite and nonnegative at " + to_string(v[i]));
    }
    values[i + 1] = values[i] + rho * (times[i + 1] - times[i]);
  }
  return {std::move(times), std::move(values)};
}

InverseResult clock_inverse(const Clock& clock, double t) {
  if (t < 0.0) return {0.0, false};
  if (t >= clock.total()) return {clock.horizon(), true};
  const auto& a = clock.values();
  const auto it = std::upper_bound(a.begin(), a.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - a.begin()) - 1;
  const auto& s = clock.times();
  const double time = s[i] + (t - a[i]) / clock.slope(i);
  return {std::min(time, s[i + 1]), false};
}

double clock_hitting_time(const Clock& clock, double level) {
  const auto& a = clock.values();
  const auto& s = clock.times();
  const auto it = std::lower_bound(a.begin(), a.end(), level);
  if (it == a.end()) return clock.horizon();
  const std::size_t k = static_cast<std::size_t>(it - a.begin());
  if (k == 0) return 0.0;
  const double time = s[k - 1] + (level - a[k - 1]) / clock.slope(k - 1);
  return std::min(time, s[k]);
}

CadlagPath time_change(const CadlagPath& path, const Clock& clock) {
  if (std::abs(path.horizon() - clock.horizon()) > 1e-12 * path.horizon()) {
    throw DomainError("horizon mismatch between path and clock");
  }
  if (!(clock.total() > 0.0)) throw DomainError("clock never advances; the time change is empty");
  std::vector<double> times;
  std::vector<Point> values;
  const auto& t = path.times();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double start = clock.at(t[i]);
    const double end = i + 1 < t.size() ? clock.at(t[i + 1]) : clock.total();
    if (!(end > start)) continue;
    if (!values.empty() && values.back() == path.values()[i]) continue;
    if (times.empty() && start > 0.0) {
      // Leading flat stretch: A^{-1}(0) already lies past it.
      times.push_back(0.0);
    } else {
      times.push_back(start);
    }
    values.push_back(path.values()[i]);
  }
  return {clock.total(), std::move(times), std::move(values), path.dimension()};
}

double stieltjes_integral(const CadlagPath& f, const Clock& g) {
  if (f.horizon() < g.horizon()) throw DomainError("integrand shorter than integrator");
  std::vector<double> grid = g.times();
  for (double s : f.times()) {
    if (s < g.horizon()) grid.push_back(s);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    sum += f.scalar_at(grid[i]) * (g.at(grid[i + 1]) - g.at(grid[i]));
  }
  return sum;
}

double stieltjes_integral(const CadlagPath& f, const CadlagPath& g) {
  if (f.horizon() < g.horizon()) throw DomainError("integrand shorter than integrator");
  const auto& t = g.times();
  const auto& v = g.values();
  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double jump = v[i][0] - v[i - 1][0];
    if (jump < 0.0) throw DomainError("integrator must be nondecreasing");
    sum += f.scalar_at(t[i]) * jump;
  }
  return sum;
}

CadlagPath compose(const CadlagPath& x, const Clock& y) {
  if (y.total() > x.horizon()) throw DomainError("range of the clock exceeds the path horizon");
  std::vector<double> times{0.0};
  std::vector<Point> values{x.values()[0]};
  const auto& a = x.times();
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] > y.total()) break;
    const double s = clock_hitting_time(y, a[i]);
    if (s >= y.horizon() && y.total() < a[i]) break;
    if (s <= times.back()) {
      values.back() = x.values()[i];
    } else {
      times.push_back(s);
      values.push_back(x.values()[i]);
    }
  }
  return {y.horizon(), std::move(times), std::move(values), x.dimension()};
}

LazyGmcDensity::LazyGmcDensity(std::shared_ptr<LazyField> field, const LatticeWindow& grid,
                               double gamma)
    : field_(std::move(field)), grid_(grid), gamma_(gamma) {}

double LazyGmcDensity::operator()(const Point& x) {
  if (gamma_ == 0.0) return 1.0;
  const double value = field_->value(grid_.snap(x));
  return std::exp(gamma_ * value - 0.5 * gamma_ * gamma_ * field_->variance());
}

TimeChangedRun run_time_changed(JumpStepper& stepper,
                                const std::function<double(const Point&)>& density,
                                double target, double cap, RngStream& rng) {
  if (!(target > 0.0) || !(cap > 0.0)) throw DomainError("target and cap must be positive");
  std::vector<double> times{0.0};
  std::vector<Point> values{stepper.start()};
  std::vector<double> clock_times{0.0};
  std::vector<double> clock_values{0.0};
  double t = 0.0;
  double a = 0.0;
  Point current = stepper.start();
  while (true) {
    const double rho = density(current);
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
      throw DomainError("clock density must be finite and nonnegative at " + to_string(current));
    }
    auto [hold, next] = stepper.step(rng);
    const double end = std::min(t + hold, cap);
    const double gain = rho * (end - t);
    if (a + gain > target) {
      const double s = std::max(std::min(t + (target - a) / rho, end),
                                std::nextafter(t, cap + 1.0));
      clock_times.push_back(s);
      clock_values.push_back(target);
      return {CadlagPath(s, std::move(times), std::move(values), stepper.dimension()),
              Clock(std::move(clock_times), std::move(clock_values)), current, s, false};
    }
    a += gain;
    clock_times.push_back(end);
    clock_values.push_back(a);
    t = end;
    if (t >= cap) {
      return {CadlagPath(cap, std::move(times), std::move(values), stepper.dimension()),
              Clock(std::move(clock_times), std::move(clock_values)), current, cap, true};
    }
    times.push_back(t);
    values.push_back(next);
    current = next;
  }
}

}  // namespace gmcwalk
