#pragma once

// Closed bounded time scales built from an ordered union of isolated points,
// real intervals and right-accumulating geometric clusters.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tsrs/error.hpp"
#include "tsrs/numeric.hpp"

namespace tsrs {

enum class BoxKind { Delta, Nabla };

inline constexpr std::string_view to_string(BoxKind kind) noexcept {
  return kind == BoxKind::Delta ? "delta" : "nabla";
}

struct IsolatedPoints {
  std::vector<double> points;
};

struct RealInterval {
  double lo;
  double hi;
};

/// The set {limit} ∪ {limit + anchor_offset * ratio^k : k >= first_index}.
/// `first_index` is nonzero only for clusters clipped from above by restrict.
struct GeometricCluster {
  double limit;
  double anchor_offset;
  double ratio;
  std::int64_t first_index = 0;

  double point(std::int64_t k) const {
    return limit + anchor_offset * std::pow(ratio, static_cast<double>(k));
  }
  double top() const { return point(first_index); }
};

using ScaleComponent = std::variant<IsolatedPoints, RealInterval, GeometricCluster>;

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double component_min(const ScaleComponent& c) {
  return std::visit(overloaded{
                        [](const IsolatedPoints& p) { return p.points.front(); },
                        [](const RealInterval& r) { return r.lo; },
                        [](const GeometricCluster& g) { return g.limit; },
                    },
                    c);
}

inline double component_max(const ScaleComponent& c) {
  return std::visit(overloaded{
                        [](const IsolatedPoints& p) { return p.points.back(); },
                        [](const RealInterval& r) { return r.hi; },
                        [](const GeometricCluster& g) { return g.top(); },
                    },
                    c);
}

inline void validate_component(const ScaleComponent& c) {
  std::visit(overloaded{
                 [](const IsolatedPoints& p) {
                   if (p.points.empty())
                     throw Error(ErrorCode::InvalidScale, "empty point list");
                   for (std::size_t i = 0; i < p.points.size(); ++i) {
                     if (!std::isfinite(p.points[i]))
                       throw Error(ErrorCode::InvalidScale, "non-finite point");
                     if (i > 0 && !(p.points[i] - p.points[i - 1] > snap_tol(p.points[i])))
                       throw Error(ErrorCode::InvalidScale,
                                   "points must be strictly increasing");
                   }
                 },
                 [](const RealInterval& r) {
                   if (!std::isfinite(r.lo) || !std::isfinite(r.hi) ||
                       !(r.hi - r.lo > snap_tol(r.hi)))
                     throw Error(ErrorCode::InvalidScale,
                                 "interval needs finite lo < hi");
                 },
                 [](const GeometricCluster& g) {
                   if (!std::isfinite(g.limit) || !(g.anchor_offset > 0) ||
                       !std::isfinite(g.anchor_offset))
                     throw Error(ErrorCode::InvalidScale,
                                 "cluster needs finite limit and positive offset");
                   if (!(g.ratio > 0 && g.ratio < 1))
                     throw Error(ErrorCode::InvalidRatio, "cluster ratio must lie in (0,1)");
                   if (g.first_index < 0)
                     throw Error(ErrorCode::InvalidScale, "negative cluster index");
                 },
             },
             c);
}

/// Smallest k >= first_index with point(k) <= x, for x strictly above the limit.
inline std::int64_t cluster_floor_index(const GeometricCluster& g, double x) {
  double est = std::ceil(std::log((x - g.limit) / g.anchor_offset) / std::log(g.ratio));
  std::int64_t k = std::max<std::int64_t>(g.first_index, static_cast<std::int64_t>(est));
  while (k > g.first_index && g.point(k - 1) <= x) --k;
  while (g.point(k) > x) ++k;
  return k;
}

/// Largest k >= first_index with point(k) >= x, for limit < x <= top.
inline std::int64_t cluster_ceil_index(const GeometricCluster& g, double x) {
  double est = std::floor(std::log((x - g.limit) / g.anchor_offset) / std::log(g.ratio));
  std::int64_t k = std::max<std::int64_t>(g.first_index, static_cast<std::int64_t>(est));
  while (k > g.first_index && g.point(k) < x) --k;
  while (g.point(k + 1) >= x) ++k;
  return k;
}

}  // namespace detail

/// An immutable closed bounded subset of the reals.  Copies share storage.
class TimeScale {
 public:
  explicit TimeScale(std::vector<ScaleComponent> components)
      : comps_(std::make_shared<const std::vector<ScaleComponent>>(std::move(components))) {
    if (comps_->empty()) throw Error(ErrorCode::InvalidScale, "time scale is empty");
    for (std::size_t i = 0; i < comps_->size(); ++i) {
      detail::validate_component((*comps_)[i]);
      if (i > 0) {
        double prev = detail::component_max((*comps_)[i - 1]);
        double next = detail::component_min((*comps_)[i]);
        if (!(next - prev > snap_tol(next)))
          throw Error(ErrorCode::InvalidScale,
                      "components must be disjoint and in increasing order");
      }
    }
  }

  const std::vector<ScaleComponent>& components() const noexcept { return *comps_; }

  double min() const { return detail::component_min(comps_->front()); }
  double max() const { return detail::component_max(comps_->back()); }

  /// The scale point within snap tolerance of x, if any.
  std::optional<double> snap(double x) const {
    auto loc = locate(x);
    if (!loc) return std::nullopt;
    return loc->value;
  }

  bool contains(double x) const { return locate(x).has_value(); }

  /// Forward jump: inf{s in T : s > t}, or t itself at max T.
  double sigma(double t) const {
    Located loc = require(t);
    const auto& c = (*comps_)[loc.comp];
    auto next_or = [&](double self) {
      return loc.comp + 1 < comps_->size() ? detail::component_min((*comps_)[loc.comp + 1]) : self;
    };
    return std::visit(detail::overloaded{
                          [&](const IsolatedPoints& p) {
                            return loc.index + 1 < static_cast<std::int64_t>(p.points.size())
                                       ? p.points[loc.index + 1]
                                       : next_or(loc.value);
                          },
                          [&](const RealInterval& r) {
                            return loc.value < r.hi ? loc.value : next_or(r.hi);
                          },
                          [&](const GeometricCluster& g) {
                            if (loc.index < 0) return g.limit;
                            if (loc.index > g.first_index) return g.point(loc.index - 1);
                            return next_or(loc.value);
                          },
                      },
                      c);
  }

  /// Backward jump: sup{s in T : s < t}, or t itself at min T.
  double rho(double t) const {
    Located loc = require(t);
    const auto& c = (*comps_)[loc.comp];
    auto prev_or = [&](double self) {
      return loc.comp > 0 ? detail::component_max((*comps_)[loc.comp - 1]) : self;
    };
    return std::visit(detail::overloaded{
                          [&](const IsolatedPoints& p) {
                            return loc.index > 0 ? p.points[loc.index - 1] : prev_or(loc.value);
                          },
                          [&](const RealInterval& r) {
                            return loc.value > r.lo ? loc.value : prev_or(r.lo);
                          },
                          [&](const GeometricCluster& g) {
                            if (loc.index < 0) return prev_or(g.limit);
                            return g.point(loc.index + 1);
                          },
                      },
                      c);
  }

  double mu(double t) const { return sigma(t) - require(t).value; }
  double nu(double t) const { return require(t).value - rho(t); }

  /// [a,b] ∩ T as a new scale.
  TimeScale restrict(double a, double b) const {
    double lo = require(a).value;
    double hi = require(b).value;
    if (lo > hi) throw Error(ErrorCode::InvalidArgument, "restrict needs a <= b");
    std::vector<ScaleComponent> out;
    for (const auto& c : *comps_) {
      if (detail::component_max(c) < lo || detail::component_min(c) > hi) continue;
      std::visit(detail::overloaded{
                     [&](const IsolatedPoints& p) {
                       IsolatedPoints kept;
                       for (double x : p.points)
                         if (x >= lo && x <= hi) kept.points.push_back(x);
                       if (!kept.points.empty()) out.emplace_back(std::move(kept));
                     },
                     [&](const RealInterval& r) {
                       double l = std::max(r.lo, lo), h = std::min(r.hi, hi);
                       if (h > l)
                         out.emplace_back(RealInterval{l, h});
                       else
                         out.emplace_back(IsolatedPoints{{l}});
                     },
                     [&](const GeometricCluster& g) {
                       if (lo <= g.limit) {
                         if (hi == g.limit) {
                           out.emplace_back(IsolatedPoints{{g.limit}});
                           return;
                         }
                         GeometricCluster clipped = g;
                         clipped.first_index = hi >= g.top() ? g.first_index
                                                             : detail::cluster_floor_index(g, hi);
                         out.emplace_back(clipped);
                       } else {
                         IsolatedPoints kept;
                         std::int64_t k_lo = detail::cluster_ceil_index(g, lo);
                         std::int64_t k_hi =
                             hi >= g.top() ? g.first_index : detail::cluster_floor_index(g, hi);
                         for (std::int64_t k = k_lo; k >= k_hi; --k) kept.points.push_back(g.point(k));
                         if (!kept.points.empty()) out.emplace_back(std::move(kept));
                       }
                     },
                 },
                 c);
    }
    return TimeScale(std::move(out));
  }

  /// Real hull of I_Δ = [lo, ρ(hi)] or I_∇ = [σ(lo), hi] for the sub-interval [lo,hi]_T.
  std::pair<double, double> box_subinterval(double lo, double hi, BoxKind kind) const {
    double l = require(lo).value, h = require(hi).value;
    if (!(l < h)) throw Error(ErrorCode::InvalidArgument, "box_subinterval needs lo < hi");
    return kind == BoxKind::Delta ? std::pair{l, rho(h)} : std::pair{sigma(l), h};
  }

  /// max{t in T : t <= x}.
  double floor_point(double x) const {
    if (std::isnan(x) || x < min() - snap_tol(min()))
      throw Error(ErrorCode::OutOfRange, "floor_point below min T");
    if (auto loc = locate(x)) return loc->value;
    if (x >= max()) return max();
    std::size_t i = comps_->size();
    while (i > 0 && detail::component_min((*comps_)[i - 1]) > x) --i;
    const auto& c = (*comps_)[i - 1];
    return std::visit(detail::overloaded{
                          [&](const IsolatedPoints& p) {
                            return *(std::upper_bound(p.points.begin(), p.points.end(), x) - 1);
                          },
                          [&](const RealInterval& r) { return std::min(x, r.hi); },
                          [&](const GeometricCluster& g) {
                            if (x >= g.top()) return g.top();
                            return g.point(detail::cluster_floor_index(g, x));
                          },
                      },
                      c);
  }

  /// min{t in T : t >= x}.
  double ceil_point(double x) const {
    if (std::isnan(x) || x > max() + snap_tol(max()))
      throw Error(ErrorCode::OutOfRange, "ceil_point above max T");
    if (auto loc = locate(x)) return loc->value;
    if (x <= min()) return min();
    std::size_t i = 0;
    while (detail::component_max((*comps_)[i]) < x) ++i;
    const auto& c = (*comps_)[i];
    return std::visit(detail::overloaded{
                          [&](const IsolatedPoints& p) {
                            return *std::lower_bound(p.points.begin(), p.points.end(), x);
                          },
                          [&](const RealInterval& r) { return std::max(x, r.lo); },
                          [&](const GeometricCluster& g) {
                            if (x <= g.limit) return g.limit;
                            return g.point(detail::cluster_ceil_index(g, x));
                          },
                      },
                      c);
  }

  /// All scale points in [lo,hi], or nullopt when that set is infinite or
  /// larger than `cap`.
  std::optional<std::vector<double>> enumerate_between(double lo, double hi,
                                                       std::size_t cap) const {
    if (lo > hi) throw Error(ErrorCode::InvalidArgument, "enumerate_between needs lo <= hi");
    double lo_t = lo - snap_tol(lo), hi_t = hi + snap_tol(hi);
    std::vector<double> out;
    bool too_many = false;
    for (const auto& c : *comps_) {
      if (too_many) break;
      if (detail::component_max(c) < lo_t || detail::component_min(c) > hi_t) continue;
      std::visit(detail::overloaded{
                     [&](const IsolatedPoints& p) {
                       auto first = std::lower_bound(p.points.begin(), p.points.end(), lo_t);
                       for (auto it = first; it != p.points.end() && *it <= hi_t; ++it)
                         out.push_back(*it);
                     },
                     [&](const RealInterval& r) {
                       double l = std::max(r.lo, lo), h = std::min(r.hi, hi);
                       if (h - l > snap_tol(h)) {
                         too_many = true;
                       } else {
                         // touches at a single endpoint
                         out.push_back(snap_equal(l, r.hi) ? r.hi : r.lo);
                       }
                     },
                     [&](const GeometricCluster& g) {
                       if (g.limit >= lo_t) {
                         if (snap_equal(g.limit, hi)) out.push_back(g.limit);
                         else too_many = true;
                         return;
                       }
                       std::int64_t k_lo = detail::cluster_ceil_index(g, std::min(lo_t, g.top()));
                       std::int64_t k_hi =
                           hi_t >= g.top() ? g.first_index : detail::cluster_floor_index(g, hi_t);
                       if (k_lo < k_hi) return;
                       if (static_cast<std::uint64_t>(k_lo - k_hi) + 1 + out.size() > cap) {
                         too_many = true;
                         return;
                       }
                       for (std::int64_t k = k_lo; k >= k_hi; --k) out.push_back(g.point(k));
                     },
                 },
                 c);
      if (out.size() > cap) too_many = true;
    }
    if (too_many) return std::nullopt;
    return out;
  }

  friend bool operator==(const TimeScale& x, const TimeScale& y) {
    if (x.comps_ == y.comps_) return true;
    if (x.comps_->size() != y.comps_->size()) return false;
    for (std::size_t i = 0; i < x.comps_->size(); ++i) {
      const auto& cx = (*x.comps_)[i];
      const auto& cy = (*y.comps_)[i];
      if (cx.index() != cy.index()) return false;
      bool same = std::visit(
          detail::overloaded{
              [&](const IsolatedPoints& p) {
                return p.points == std::get<IsolatedPoints>(cy).points;
              },
              [&](const RealInterval& r) {
                const auto& s = std::get<RealInterval>(cy);
                return r.lo == s.lo && r.hi == s.hi;
              },
              [&](const GeometricCluster& g) {
                const auto& h = std::get<GeometricCluster>(cy);
                return g.limit == h.limit && g.anchor_offset == h.anchor_offset &&
                       g.ratio == h.ratio && g.first_index == h.first_index;
              },
          },
          cx);
      if (!same) return false;
    }
    return true;
  }

 private:
  struct Located {
    std::size_t comp;
    double value;        // canonical scale point
    std::int64_t index;  // list index, cluster exponent, or -1 for a cluster limit
  };

  std::optional<Located> locate_in(std::size_t ci, double x) const {
    const double tol = snap_tol(x);
    const auto& c = (*comps_)[ci];
    return std::visit(
        detail::overloaded{
            [&](const IsolatedPoints& p) -> std::optional<Located> {
              auto it = std::lower_bound(p.points.begin(), p.points.end(), x - tol);
              if (it != p.points.end() && std::fabs(*it - x) <= tol) {
                auto nxt = it + 1;
                if (nxt != p.points.end() && std::fabs(*nxt - x) < std::fabs(*it - x)) it = nxt;
                return Located{ci, *it, it - p.points.begin()};
              }
              return std::nullopt;
            },
            [&](const RealInterval& r) -> std::optional<Located> {
              if (x < r.lo - tol || x > r.hi + tol) return std::nullopt;
              double v = std::fabs(x - r.lo) <= tol ? r.lo
                         : std::fabs(x - r.hi) <= tol ? r.hi
                                                      : x;
              return Located{ci, v, 0};
            },
            [&](const GeometricCluster& g) -> std::optional<Located> {
              double d = x - g.limit;
              if (std::fabs(d) <= tol) return Located{ci, g.limit, -1};
              if (d < 0 || x > g.top() + tol) return std::nullopt;
              double est = std::log(d / g.anchor_offset) / std::log(g.ratio);
              std::int64_t k0 = std::max<std::int64_t>(g.first_index,
                                                       static_cast<std::int64_t>(std::llround(est)));
              std::optional<Located> best;
              double best_err = tol;
              for (std::int64_t k = std::max(g.first_index, k0 - 2); k <= k0 + 2; ++k) {
                double err = std::fabs(g.point(k) - x);
                if (err <= best_err) {
                  best_err = err;
                  best = Located{ci, g.point(k), k};
                }
              }
              return best;
            },
        },
        c);
  }

  std::optional<Located> locate(double x) const {
    if (!std::isfinite(x)) return std::nullopt;
    const double tol = snap_tol(x);
    auto it = std::lower_bound(comps_->begin(), comps_->end(), x - tol,
                               [](const ScaleComponent& c, double v) {
                                 return detail::component_max(c) < v;
                               });
    if (it == comps_->end()) return std::nullopt;
    auto ci = static_cast<std::size_t>(it - comps_->begin());
    if (auto loc = locate_in(ci, x)) return loc;
    if (ci + 1 < comps_->size()) return locate_in(ci + 1, x);
    return std::nullopt;
  }

  Located require(double x) const {
    auto loc = locate(x);
    if (!loc) throw Error(ErrorCode::NotInScale, "point " + std::to_string(x) + " is not in the time scale");
    return *loc;
  }

  std::shared_ptr<const std::vector<ScaleComponent>> comps_;
};

/// [0,1] ∩ closure(q^Z): the cluster {0} ∪ {q^-k : k >= 0}.
inline TimeScale make_qscale(double q) {
  if (!std::isfinite(q) || !(q > 1)) throw Error(ErrorCode::InvalidRatio, "q must exceed 1");
  return TimeScale({GeometricCluster{0.0, 1.0, 1.0 / q}});
}

/// The grid {a, a+h, ..., b}.
inline TimeScale make_uniform(double a, double b, double h) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(h) || !(h > 0))
    throw Error(ErrorCode::NotCommensurate, "uniform grid needs finite a, b and h > 0");
  double steps = (b - a) / h;
  double n = std::round(steps);
  if (n < 1 || std::fabs(steps - n) > snap_tol(n))
    throw Error(ErrorCode::NotCommensurate, "b - a is not a positive integer multiple of h");
  auto count = static_cast<std::size_t>(n);
  std::vector<double> pts(count + 1);
  for (std::size_t i = 0; i < count; ++i) pts[i] = a + static_cast<double>(i) * h;
  pts[count] = b;
  return TimeScale({IsolatedPoints{std::move(pts)}});
}

inline TimeScale make_interval(double lo, double hi) { return TimeScale({RealInterval{lo, hi}}); }

inline TimeScale make_points(std::vector<double> pts) {
  return TimeScale({IsolatedPoints{std::move(pts)}});
}

/// Ordered union; the parts must be disjoint and listed left to right.
inline TimeScale make_union(const std::vector<TimeScale>& parts) {
  std::vector<ScaleComponent> comps;
  for (const auto& p : parts) comps.insert(comps.end(), p.components().begin(), p.components().end());
  return TimeScale(std::move(comps));
}

}  // namespace tsrs
