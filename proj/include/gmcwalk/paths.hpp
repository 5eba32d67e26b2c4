#pragma once

#include <functional>
#include <vector>

#include "gmcwalk/common.hpp"
#include "gmcwalk/rng.hpp"

namespace gmcwalk {

/// Right-continuous step path on [0, T]: value v_i on [t_i, t_{i+1}), with
/// t_0 = 0 < t_1 < ... <= T. The last value holds through T.
class CadlagPath {
 public:
  CadlagPath(double horizon, std::vector<double> times, std::vector<Point> values,
             int dimension);
  static CadlagPath scalar(double horizon, std::vector<double> times,
                           const std::vector<double>& values);
  static CadlagPath constant(double horizon, const Point& value, int dimension);

  double horizon() const { return horizon_; }
  int dimension() const { return dimension_; }
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Point>& values() const { return values_; }

  /// Index i with t in [t_i, t_{i+1}).
  std::size_t index_at(double t) const;
  const Point& at(double t) const { return values_[index_at(t)]; }
  double scalar_at(double t) const { return at(t)[0]; }
  /// Number of breakpoints after t = 0.
  std::size_t jump_count() const { return times_.size() - 1; }

  /// Restriction to [0, T'] for T' <= T.
  CadlagPath restricted(double horizon) const;
  /// u -> z(s + u) on [0, T - s].
  CadlagPath shifted(double s) const;
  /// Merge consecutive equal values.
  CadlagPath simplified() const;

  friend bool operator==(const CadlagPath&, const CadlagPath&) = default;

 private:
  double horizon_;
  std::vector<double> times_;
  std::vector<Point> values_;
  int dimension_;
};

/// Produces the next (holding time, next value) of a jump process.
class JumpStepper {
 public:
  virtual ~JumpStepper() = default;
  virtual Point start() const = 0;
  virtual int dimension() const = 0;
  /// Holding time at the current value, then moves to the next value.
  virtual std::pair<double, Point> step(RngStream& rng) = 0;
};

/// Diagonal-step walk on (1/sqrt(n))Z^2 at rate n, started from i_n(x).
class LatticeWalkStepper : public JumpStepper {
 public:
  LatticeWalkStepper(int n, const Point& x);
  Point start() const override { return start_; }
  int dimension() const override { return 2; }
  std::pair<double, Point> step(RngStream& rng) override;
  const Site& site() const { return site_; }

 private:
  int n_;
  double spacing_;
  Site site_;
  Point start_;
};

/// Symmetric alpha-stable increments on a dt grid.
class StableStepper : public JumpStepper {
 public:
  StableStepper(double alpha, double x, double dt);
  Point start() const override { return {x0_, 0.0}; }
  int dimension() const override { return 1; }
  std::pair<double, Point> step(RngStream& rng) override;

 private:
  double alpha_;
  double x0_;
  double current_;
  double dt_;
};

/// Two-state process alternating between x and -x after Exp(1) holdings.
class FlipStepper : public JumpStepper {
 public:
  explicit FlipStepper(double x) : x_(x), current_(x) {}
  Point start() const override { return {x_, 0.0}; }
  int dimension() const override { return 1; }
  std::pair<double, Point> step(RngStream& rng) override;

 private:
  double x_;
  double current_;
};

/// Run a stepper on [0, T].
CadlagPath simulate_jump_process(JumpStepper& stepper, double horizon, RngStream& rng);

CadlagPath simulate_rw(int n, const Point& x, double horizon, RngStream& rng);
CadlagPath simulate_stable(double alpha, double x, double horizon, double dt, RngStream& rng);
CadlagPath simulate_flip(double x, double horizon, RngStream& rng);

/// Symmetric alpha-stable variate with characteristic function
/// exp(-scale^alpha |theta|^alpha), Chambers-Mallows-Stuck.
double stable_variate(double alpha, double scale, RngStream& rng);

/// Step approximation on [0, 1] from the dyadic mesh 2^-level together with
/// the jumps of size >= 1 / level, using left-endpoint values.
CadlagPath step_approximate(const CadlagPath& path, int level);
/// Same for a continuous scalar function on [0, 1] (no jumps).
CadlagPath step_approximate(const std::function<double(double)>& f, int level);

/// sup_t |a(t) - b(t)| over the common horizon, exact for step paths.
double sup_distance(const CadlagPath& a, const CadlagPath& b);

}  // namespace gmcwalk
