#include "gmcwalk/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmcwalk {
namespace {

double gap(const Point& p, const Point& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); }

double distance_to_segment(const Point& p, const Point& a, const Point& b) {
  const double dx = b[0] - a[0];
  const double dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double theta = 0.0;
  if (len2 > 0.0) {
    theta = std::clamp(((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2, 0.0, 1.0);
  }
  return std::hypot(p[0] - a[0] - theta * dx, p[1] - a[1] - theta * dy);
}

double interval_distance(double x, double lo, double hi) {
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0.0;
}

// Distance from the middle values of v[i..j] to the segment spanned by an
// earlier and a later value, maximized.
double window_w(const std::vector<Point>& v, std::size_t i, std::size_t j, bool scalar) {
  double best = 0.0;
  if (scalar) {
    const std::size_t m = j - i + 1;
    std::vector<double> pmin(m), pmax(m), smin(m), smax(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double x = v[i + k][0];
      pmin[k] = k ? std::min(pmin[k - 1], x) : x;
      pmax[k] = k ? std::max(pmax[k - 1], x) : x;
    }
    for (std::size_t k = m; k-- > 0;) {
      const double x = v[i + k][0];
      smin[k] = k + 1 < m ? std::min(smin[k + 1], x) : x;
      smax[k] = k + 1 < m ? std::max(smax[k + 1], x) : x;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double x = v[i + k][0];
      best = std::max(best, x - std::max(pmin[k], smin[k]));
      best = std::max(best, std::min(pmax[k], smax[k]) - x);
    }
    return best;
  }
  for (std::size_t p = i; p <= j; ++p)
    for (std::size_t k = p; k <= j; ++k)
      for (std::size_t q = k; q <= j; ++q)
        best = std::max(best, distance_to_segment(v[k], v[p], v[q]));
  return best;
}

struct StepData {
  std::vector<double> jumps;   // a_1 .. a_p
  std::vector<Point> values;   // u_0 .. u_p
};

StepData step_data(const CadlagPath& path, double horizon) {
  const CadlagPath r = path.restricted(horizon).simplified();
  StepData d;
  d.jumps.assign(r.times().begin() + 1, r.times().end());
  d.values = r.values();
  return d;
}

// Completed graph of a scalar step path as a polyline in (t, u).
std::vector<std::array<double, 2>> completed_graph(const StepData& d, double horizon) {
  std::vector<std::array<double, 2>> v;
  v.push_back({0.0, d.values[0][0]});
  for (std::size_t i = 0; i < d.jumps.size(); ++i) {
    v.push_back({d.jumps[i], d.values[i][0]});
    v.push_back({d.jumps[i], d.values[i + 1][0]});
  }
  v.push_back({horizon, d.values.back()[0]});
  return v;
}

std::vector<std::array<double, 2>> sample_polyline(const std::vector<std::array<double, 2>>& poly,
                                                   int per_segment) {
  std::vector<std::array<double, 2>> out;
  out.push_back(poly[0]);
  for (std::size_t s = 0; s + 1 < poly.size(); ++s) {
    const auto& p = poly[s];
    const auto& q = poly[s + 1];
    if (p == q) continue;
    for (int k = 1; k <= per_segment; ++k) {
      const double f = static_cast<double>(k) / per_segment;
      out.push_back({p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1])});
    }
  }
  return out;
}

double discrete_frechet(const std::vector<std::array<double, 2>>& p,
                        const std::vector<std::array<double, 2>>& q) {
  auto dist = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
  };
  std::vector<double> prev(q.size()), cur(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double d = dist(p[i], q[j]);
      double reach;
      if (i == 0 && j == 0) reach = d;
      else if (i == 0) reach = std::max(cur[j - 1], d);
      else if (j == 0) reach = std::max(prev[j], d);
      else reach = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
      cur[j] = reach;
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

}  // namespace

double osc_v(const CadlagPath& path, double horizon, double t, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (t < 0.0 || t > horizon) throw DomainError("t must lie in [0, T]");
  const double lo = std::max(0.0, t - delta);
  const double hi = std::min(t + delta, horizon);
  const std::size_t i = path.index_at(lo);
  const std::size_t j = path.index_at(hi);
  const auto& v = path.values();
  double best = 0.0;
  if (path.dimension() == 1) {
    double mn = v[i][0], mx = v[i][0];
    for (std::size_t k = i; k <= j; ++k) {
      mn = std::min(mn, v[k][0]);
      mx = std::max(mx, v[k][0]);
    }
    return mx - mn;
  }
  for (std::size_t p = i; p <= j; ++p)
    for (std::size_t q = p + 1; q <= j; ++q) best = std::max(best, gap(v[p], v[q]));
  return best;
}

double osc_w(const CadlagPath& path, double horizon, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const CadlagPath r = path.restricted(std::min(horizon, path.horizon()));
  const auto& t = r.times();
  const auto& v = r.values();
  const std::size_t m = t.size();
  const double width = std::min(2.0 * delta, r.horizon());
  double best = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    // Interval i ends at t[i+1] and interval k starts at t[k]; both meet a
    // closed window of length `width` iff t[k] - t[i+1] < width.
    j = std::max(j, i + 1);
    while (j + 1 < m && t[j + 1] - t[i + 1] < width) ++j;
    if (j >= i + 2) best = std::max(best, window_w(v, i, j, r.dimension() == 1));
  }
  return best;
}

MetricResult d_j1(const CadlagPath& a, const CadlagPath& b, double horizon) {
  const StepData f = step_data(a, horizon);
  const StepData g = step_data(b, horizon);
  const std::size_t p = f.jumps.size();
  const std::size_t q = g.jumps.size();
  auto a_at = [&](std::size_t k) { return k == 0 ? 0.0 : (k > p ? horizon : f.jumps[k - 1]); };
  auto b_at = [&](std::size_t l) { return l == 0 ? 0.0 : (l > q ? horizon : g.jumps[l - 1]); };

  constexpr double inf = std::numeric_limits<double>::infinity();
  // cost[k][l]: best bottleneck to reach state (k, l); move[k][l] records the
  // predecessor move (0 diagonal, 1 f-jump, 2 g-jump).
  std::vector<std::vector<double>> cost(p + 1, std::vector<double>(q + 1, inf));
  std::vector<std::vector<int>> move(p + 1, std::vector<int>(q + 1, -1));
  for (std::size_t k = 0; k <= p; ++k) {
    for (std::size_t l = 0; l <= q; ++l) {
      const double here = gap(f.values[k], g.values[l]);
      if (k == 0 && l == 0) {
        cost[0][0] = here;
        continue;
      }
      double best = inf;
      int how = -1;
      if (k > 0 && l > 0) {
        const double c = std::max(cost[k - 1][l - 1], std::abs(a_at(k) - b_at(l)));
        if (c < best) best = c, how = 0;
      }
      if (k > 0) {
        // f jumps at a_k while g sits on [b_l, b_{l+1}].
        const double c = std::max(cost[k - 1][l], interval_distance(a_at(k), b_at(l), b_at(l + 1)));
        if (c < best) best = c, how = 1;
      }
      if (l > 0) {
        const double c = std::max(cost[k][l - 1], interval_distance(b_at(l), a_at(k), a_at(k + 1)));
        if (c < best) best = c, how = 2;
      }
      cost[k][l] = std::max(best, here);
      move[k][l] = how;
    }
  }

  MetricResult result;
  result.value = cost[p][q];
  result.kind = MetricKind::exact;
  std::vector<std::pair<double, double>> pins;
  for (std::size_t k = p, l = q; k > 0 || l > 0;) {
    switch (move[k][l]) {
      case 0: pins.emplace_back(b_at(l), a_at(k)); --k; --l; break;
      case 1: pins.emplace_back(std::clamp(a_at(k), b_at(l), b_at(l + 1)), a_at(k)); --k; break;
      default: pins.emplace_back(b_at(l), std::clamp(b_at(l), a_at(k), a_at(k + 1))); --l; break;
    }
  }
  pins.emplace_back(0.0, 0.0);
  std::reverse(pins.begin(), pins.end());
  pins.emplace_back(horizon, horizon);
  for (const auto& pin : pins) {
    if (result.warp.empty() ||
        (pin.first > result.warp.back().first && pin.second > result.warp.back().second)) {
      result.warp.push_back(pin);
    }
  }
  if (result.warp.back().first != horizon) result.warp.back() = {horizon, horizon};
  return result;
}

MetricResult d_m1(const CadlagPath& a, const CadlagPath& b, double horizon) {
  if (a.dimension() != 1 || b.dimension() != 1) {
    throw DomainError("M1 implemented for scalar paths only");
  }
  const MetricResult j1 = d_j1(a, b, horizon);
  const auto ga = completed_graph(step_data(a, horizon), horizon);
  const auto gb = completed_graph(step_data(b, horizon), horizon);
  constexpr double kBudget = 4e7;  // DP cells per refinement level
  double previous = std::numeric_limits<double>::infinity();
  double value = previous;
  double change = previous;
  for (int k = 32;; k *= 2) {
    const double cells = static_cast<double>(ga.size()) * static_cast<double>(gb.size()) * k * k;
    if (k > 32 && cells > kBudget) break;
    value = discrete_frechet(sample_polyline(ga, k), sample_polyline(gb, k));
    change = std::abs(previous - value);
    previous = value;
    if (change < 1e-4) break;
  }
  MetricResult result;
  result.kind = MetricKind::upper_bound;
  result.value = std::min(value, j1.value);
  result.refinement_change = std::isfinite(change) ? change : 0.0;
  return result;
}

double l1_distance(const CadlagPath& a, const CadlagPath& b, double horizon) {
  if (horizon > a.horizon() || horizon > b.horizon()) throw DomainError("horizon beyond a path");
  std::vector<double> grid = a.times();
  grid.insert(grid.end(), b.times().begin(), b.times().end());
  grid.push_back(horizon);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size() && grid[i] < horizon; ++i) {
    sum += gap(a.at(grid[i]), b.at(grid[i])) * (std::min(grid[i + 1], horizon) - grid[i]);
  }
  return sum;
}

namespace {

template <typename Metric>
WholeLineResult whole_line(const CadlagPath& a, const CadlagPath& b, double t_max, Metric metric) {
  if (a.horizon() < t_max || b.horizon() < t_max) throw DomainError("paths must extend to t_max");
  // Uniform cells refined at every jump time, since d^T changes abruptly
  // when a jump enters the window.
  constexpr int kCells = 128;
  std::vector<double> grid;
  for (int c = 0; c <= kCells; ++c) grid.push_back(t_max * c / kCells);
  for (const auto* p : {&a, &b}) {
    for (double t : p->times()) {
      if (t > 0.0 && t < t_max) grid.push_back(t);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double sum = 0.0;
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double lo = grid[c], hi = grid[c + 1];
    const double d = metric(0.5 * (lo + hi));
    sum += (std::exp(-lo) - std::exp(-hi)) * std::min(1.0, d);
  }
  return {sum, std::exp(-t_max)};
}

}  // namespace

WholeLineResult d_j1_whole_line(const CadlagPath& a, const CadlagPath& b, double t_max) {
  return whole_line(a, b, t_max, [&](double T) { return d_j1(a, b, T).value; });
}

WholeLineResult d_m1_whole_line(const CadlagPath& a, const CadlagPath& b, double t_max) {
  return whole_line(a, b, t_max, [&](double T) { return d_m1(a, b, T).value; });
}

}  // namespace gmcwalk
