#pragma once

#include <utility>
#include <vector>

#include "gmcwalk/paths.hpp"

namespace gmcwalk {

enum class MetricKind { exact, upper_bound };

struct MetricResult {
  double value = 0.0;
  MetricKind kind = MetricKind::exact;
  /// J1 only: nodes (t, lambda(t)) of the piecewise-linear time warp, mapping
  /// the time axis of the second path to that of the first.
  std::vector<std::pair<double, double>> warp;
  /// M1 only: change between the last two refinement levels.
  double refinement_change = 0.0;
};

/// Largest |z(t1) - z(t2)| with t1, t2 in [max(0, t - delta), min(t + delta, T)].
double osc_v(const CadlagPath& path, double horizon, double t, double delta);

/// Sup over windows of length 2 delta of the distance from z(t2) to the
/// segment [z(t1), z(t3)], t1 <= t2 <= t3 in the window.
double osc_w(const CadlagPath& path, double horizon, double delta);

/// Skorokhod J1 distance on [0, T] between two step paths, exact.
MetricResult d_j1(const CadlagPath& a, const CadlagPath& b, double horizon);

/// Skorokhod M1 distance on [0, T] between scalar step paths: discrete
/// Frechet distance between sampled completed graphs, refined until the
/// change drops below 1e-4, and never above the J1 distance.
MetricResult d_m1(const CadlagPath& a, const CadlagPath& b, double horizon);

/// int_0^T |a(t) - b(t)| dt, exact for step paths.
double l1_distance(const CadlagPath& a, const CadlagPath& b, double horizon);

/// Whole-line versions int_0^inf e^{-T} (d^T wedge 1) dT truncated at
/// t_max; the neglected tail is at most e^{-t_max}. Both paths must extend
/// to t_max.
struct WholeLineResult {
  double value = 0.0;
  double truncation_bound = 0.0;
};
WholeLineResult d_j1_whole_line(const CadlagPath& a, const CadlagPath& b, double t_max = 8.0);
WholeLineResult d_m1_whole_line(const CadlagPath& a, const CadlagPath& b, double t_max = 8.0);

}  // namespace gmcwalk
