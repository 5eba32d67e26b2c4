#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gmcwalk/field.hpp"
#include "gmcwalk/paths.hpp"

namespace gmcwalk {

/// Continuous nondecreasing piecewise-linear clock with A(0) = 0, given by
/// its values at breakpoints 0 = t_0 < ... < t_m = T.
class Clock {
 public:
  Clock(std::vector<double> times, std::vector<double> values);
  /// A(t) = rate * t on [0, T].
  static Clock linear(double horizon, double rate = 1.0);

  double horizon() const { return times_.back(); }
  double total() const { return values_.back(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  double slope(std::size_t i) const;
  double at(double t) const;
  bool strictly_increasing() const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

using Density = std::function<double(const Point&)>;

/// A(t) = int_0^t density(Z_s) ds, exact for step paths. Densities must be
/// finite and >= 0; a zero density yields a flat stretch of the clock.
Clock pcaf_from_density(const CadlagPath& path, const Density& density);

struct InverseResult {
  double time = 0.0;
  bool saturated = false;
};

/// Generalized inverse sup{s <= T : A(s) <= t}, which equals
/// inf{s : A(s) > t} whenever that set is nonempty. Returns (T, saturated)
/// for t >= A(T).
InverseResult clock_inverse(const Clock& clock, double t);

/// inf{s : A(s) >= level}; T when the level is never reached.
double clock_hitting_time(const Clock& clock, double level);

/// Z_{A^{-1}(t)} on [0, A(T)]. Throws when the horizons differ.
CadlagPath time_change(const CadlagPath& path, const Clock& clock);

/// Lebesgue-Stieltjes integral over (0, T] of a scalar step path against a
/// piecewise-linear clock.
double stieltjes_integral(const CadlagPath& f, const Clock& g);
/// Against a nondecreasing right-continuous step path: sum of f(s) dg(s)
/// over the jumps of g.
double stieltjes_integral(const CadlagPath& f, const CadlagPath& g);

/// x o y for a step path x and a continuous nondecreasing clock y, on the
/// horizon of y. Requires the range of y to lie within the horizon of x.
CadlagPath compose(const CadlagPath& x, const Clock& y);

/// Walk and clock simulated jointly until the clock passes `target` or the
/// walk time reaches `cap`.
struct TimeChangedRun {
  CadlagPath path;
  Clock clock;
  Point value;          // Z at A^{-1}(target)
  double inverse_time;  // A^{-1}(target)
  bool saturated;       // cap reached before the clock passed target
};

/// Density at a point of the walk as exp(gamma X - gamma^2 var / 2) with the
/// field sampled lazily at the snapped site.
class LazyGmcDensity {
 public:
  LazyGmcDensity(std::shared_ptr<LazyField> field, const LatticeWindow& grid, double gamma);
  double operator()(const Point& x);
  LazyField& field() { return *field_; }

 private:
  std::shared_ptr<LazyField> field_;
  LatticeWindow grid_;
  double gamma_;
};

TimeChangedRun run_time_changed(JumpStepper& stepper, const std::function<double(const Point&)>& density,
                                double target, double cap, RngStream& rng);

}  // namespace gmcwalk
