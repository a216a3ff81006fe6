#pragma once

// Random time scales, expressions and partitions for property tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tsrs/expr.hpp"
#include "tsrs/partition.hpp"
#include "tsrs/timescale.hpp"

namespace tsrs::testing {

using Rng = std::mt19937_64;

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(v.size()) - 1))];
}

inline TimeScale random_grid(Rng& rng) {
  double h = pick(rng, std::vector<double>{0.125, 0.25, 0.5, 1.0});
  int n = uniform_int(rng, 1, 10);
  double a = 0.25 * uniform_int(rng, 0, 2);
  return make_uniform(a, a + n * h, h);
}

inline TimeScale random_points(Rng& rng) {
  int n = uniform_int(rng, 2, 12);
  std::vector<double> pts;
  double x = uniform_real(rng, 0.0, 0.3);
  for (int i = 0; i < n; ++i) {
    pts.push_back(x);
    x += uniform_real(rng, 0.01, 0.3);
  }
  return make_points(std::move(pts));
}

inline TimeScale random_interval(Rng& rng) {
  double lo = uniform_real(rng, 0.0, 0.5);
  return make_interval(lo, lo + uniform_real(rng, 0.1, 1.0));
}

inline TimeScale random_qscale(Rng& rng) { return make_qscale(uniform_real(rng, 1.3, 4.0)); }

/// Points, then a shifted cluster, then an interval or a grid.
inline TimeScale random_union(Rng& rng) {
  std::vector<ScaleComponent> comps;
  double x = 0.0;
  if (uniform_int(rng, 0, 1)) {
    comps.emplace_back(IsolatedPoints{{0.0, 0.1}});
    x = 0.2;
  }
  double offset = uniform_real(rng, 0.1, 0.4);
  comps.emplace_back(GeometricCluster{x, offset, uniform_real(rng, 0.3, 0.75)});
  x += offset + uniform_real(rng, 0.05, 0.3);
  if (uniform_int(rng, 0, 1)) {
    double len = uniform_real(rng, 0.1, 0.5);
    comps.emplace_back(RealInterval{x, x + len});
    x += len + 0.2;
  }
  comps.emplace_back(IsolatedPoints{{x, x + 0.25, x + 0.5}});
  return TimeScale(std::move(comps));
}

/// Mixed scale types, all inside [0, 2.5].
inline TimeScale random_scale(Rng& rng) {
  switch (uniform_int(rng, 0, 4)) {
    case 0: return random_grid(rng);
    case 1: return random_points(rng);
    case 2: return random_interval(rng);
    case 3: return random_qscale(rng);
    default: return random_union(rng);
  }
}

/// Scales with no dense point or accumulation point.
inline TimeScale random_scattered_scale(Rng& rng) {
  return uniform_int(rng, 0, 1) ? random_grid(rng) : random_points(rng);
}

/// Strictly increasing on [0, inf).
inline Expr random_increasing_g(Rng& rng) {
  static const std::vector<std::string> gs{"t", "t^2 + t", "exp(t)", "t^3 + 2*t", "sqrt(t + 1)",
                                           "ln(t + 1) + t", "2*t + 1", "t^2"};
  return parse_expr(pick(rng, gs));
}

/// Bounded and smooth on [0, 3].
inline Expr random_f(Rng& rng) {
  static const std::vector<std::string> fs{"t",        "1 - t",       "t^2 - 2*t", "exp(-t)", "sqrt(t + 1)",
                                           "1/(1 + t)", "3",           "t^3 - t",   "ln(t + 2)*t",
                                           "-2*t^2 + exp(t/2)"};
  return parse_expr(pick(rng, fs));
}

/// Strictly increasing on [0, 3].
inline Expr random_increasing_f(Rng& rng) {
  static const std::vector<std::string> fs{"t", "t^2 + t", "exp(t)", "sqrt(t + 1)", "t^3", "2*t - 5"};
  return parse_expr(pick(rng, fs));
}

/// A uniformly drawn scale point (floor of a uniform real).
inline double random_point(Rng& rng, const TimeScale& scale) {
  return scale.floor_point(uniform_real(rng, scale.min(), scale.max()));
}

/// Scale points a < b, or nothing when the draw collapses.
inline std::pair<double, double> random_limits(Rng& rng, const TimeScale& scale) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    double x = random_point(rng, scale), y = random_point(rng, scale);
    if (x != y) return {std::min(x, y), std::max(x, y)};
  }
  return {scale.min(), scale.max()};
}

/// A partition of [a,b]_T with a few random interior points.
inline Partition random_partition(Rng& rng, const TimeScale& scale, double a, double b, int max_interior = 8) {
  std::vector<double> pts{a, b};
  int k = uniform_int(rng, 0, max_interior);
  for (int i = 0; i < k; ++i) {
    double x = scale.floor_point(uniform_real(rng, a, b));
    if (x > a && x < b) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Partition(scale, std::move(pts));
}

}  // namespace tsrs::testing
