#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace gmcwalk {

/// A point of R^d for d <= 2. One-dimensional quantities use only the first
/// coordinate; the second stays zero.
using Point = std::array<double, 2>;

inline double norm(const Point& p) { return std::hypot(p[0], p[1]); }
inline double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

/// Integer lattice index. Sites of (1/sqrt(n))Z^2 and of the 1D grid hZ are
/// addressed by their integer coordinates; the physical position is
/// spacing * index.
struct Site {
  std::int64_t i = 0;
  std::int64_t j = 0;

  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;
  friend Site operator-(const Site& a, const Site& b) { return {a.i - b.i, a.j - b.j}; }
  friend Site operator+(const Site& a, const Site& b) { return {a.i + b.i, a.j + b.j}; }
};

struct SiteHash {
  std::size_t operator()(const Site& s) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(s.i) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(s.j) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

std::string to_string(const Site& s);
std::string to_string(const Point& p);

// ---------------------------------------------------------------------------
// Error hierarchy. Every failure the library reports derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters (nonpositive time, alpha out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of refinement budget.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : Error(what + " (quadrature failure, achieved error estimate " +
              std::to_string(achieved_error) + ")"),
        achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// A truncated series could not reach the requested tail bound.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved_bound)
      : Error(what + " (achieved tail bound " + std::to_string(achieved_bound) + ")"),
        achieved_bound_(achieved_bound) {}
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

/// Green's function evaluated on the diagonal of a kernel that diverges there.
class DiagonalDivergence : public Error {
 public:
  using Error::Error;
};

/// Covariance kernel with infinite diagonal: the field is a distribution.
class NotSamplable : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// A clock density was requested at a site where none is defined.
class DensityGap : public Error {
 public:
  explicit DensityGap(const std::string& where)
      : Error("density gap: no density defined at " + where) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmcwalk
