#pragma once

// Partitions a = t_0 < ... < t_n = b of [a,b]_T and the δ-fine construction:
// each step either moves g by at most δ or is a single jump (ρ(t_j) = t_{j-1}).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tsrs/error.hpp"
#include "tsrs/expr.hpp"
#include "tsrs/numeric.hpp"
#include "tsrs/timescale.hpp"

namespace tsrs {

class Partition;

namespace detail {
inline Partition merge_distinct(const Partition& p, const Partition& q);
}

class Partition {
 public:
  /// Validates and snaps `points` to canonical scale points.
  Partition(TimeScale scale, std::vector<double> points) : scale_(std::move(scale)), points_(std::move(points)) {
    if (points_.size() < 2) throw Error(ErrorCode::InvalidPartition, "a partition needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto snapped = scale_.snap(points_[i]);
      if (!snapped)
        throw Error(ErrorCode::NotInScale, "partition point " + std::to_string(points_[i]) + " is not in the scale");
      points_[i] = *snapped;
      if (i > 0 && !(points_[i] > points_[i - 1]))
        throw Error(ErrorCode::InvalidPartition, "partition points must be strictly increasing");
    }
  }

  const TimeScale& scale() const noexcept { return scale_; }
  const std::vector<double>& points() const noexcept { return points_; }
  double a() const { return points_.front(); }
  double b() const { return points_.back(); }
  /// Number of sub-intervals [t_{j-1}, t_j].
  std::size_t steps() const { return points_.size() - 1; }

  /// True if every point of `coarser` is a point of this partition.
  bool refines(const Partition& coarser) const {
    return std::includes(points_.begin(), points_.end(), coarser.points_.begin(), coarser.points_.end());
  }

  friend bool operator==(const Partition& x, const Partition& y) {
    return x.points_ == y.points_ && x.scale_ == y.scale_;
  }

 private:
  struct Trusted {};
  Partition(Trusted, TimeScale scale, std::vector<double> points)
      : scale_(std::move(scale)), points_(std::move(points)) {}

  friend Partition common_refinement(const Partition&, const Partition&);
  friend struct DeltaFineBuilder;
  friend Partition detail::merge_distinct(const Partition&, const Partition&);

  TimeScale scale_;
  std::vector<double> points_;
};

struct StepFlags {
  bool gap_small = false;  // Δg_j <= δ (+ snap tolerance)
  bool jump_step = false;  // ρ(t_j) == t_{j-1}
};

struct DeltaFineCertificate {
  double delta = 0.0;
  std::vector<StepFlags> steps;

  bool valid() const {
    return std::all_of(steps.begin(), steps.end(), [](StepFlags f) { return f.gap_small || f.jump_step; });
  }
};

struct DeltaFineResult {
  Partition partition;
  DeltaFineCertificate certificate;
};

struct DeltaFineOptions {
  /// Hard bound on the number of steps of one construction.
  std::size_t max_steps = 4'000'000;
  /// Bracket width for the inverse of g on the t-axis.
  double root_tol = 1e-13;
};

/// Slack allowed on Δg_j <= δ for values of magnitude `g`.
inline double gap_tolerance(double g) { return snap_tol(g); }

/// The full grid of scale points in [a,b]; TooMany when not finite within `cap`.
inline Partition grid_partition(const TimeScale& scale, double a, double b, std::size_t cap) {
  if (!scale.contains(a) || !scale.contains(b)) throw Error(ErrorCode::NotInScale, "grid endpoints must lie in the scale");
  auto pts = scale.enumerate_between(*scale.snap(a), *scale.snap(b), cap);
  if (!pts) throw Error(ErrorCode::TooMany, "[a,b] holds more than " + std::to_string(cap) + " scale points or a dense part");
  return Partition(scale, std::move(*pts));
}

/// Sorted union of two partitions of the same [a,b]_T.
inline Partition common_refinement(const Partition& p, const Partition& q) {
  if (!(p.scale() == q.scale())) throw Error(ErrorCode::InvalidPartition, "partitions live on different scales");
  if (p.a() != q.a() || p.b() != q.b()) throw Error(ErrorCode::InvalidPartition, "partitions have different endpoints");
  std::vector<double> merged;
  merged.reserve(p.points().size() + q.points().size());
  std::set_union(p.points().begin(), p.points().end(), q.points().begin(), q.points().end(),
                 std::back_inserter(merged));
  return Partition(Partition::Trusted{}, p.scale(), std::move(merged));
}

/// Recomputes the step flags of `p` against δ.
inline DeltaFineCertificate certify(const Partition& p, const Expr& g, double delta) {
  DeltaFineCertificate cert{delta, {}};
  cert.steps.reserve(p.steps());
  const auto& pts = p.points();
  double prev = eval(g, pts[0]);
  for (std::size_t j = 1; j < pts.size(); ++j) {
    double cur = eval(g, pts[j]);
    StepFlags f;
    f.gap_small = cur - prev <= delta + gap_tolerance(cur);
    f.jump_step = p.scale().rho(pts[j]) == pts[j - 1];
    cert.steps.push_back(f);
    prev = cur;
  }
  return cert;
}

struct DeltaFineBuilder {
  const TimeScale& scale;
  const Expr& g;
  DeltaFineOptions opts;

  // Largest x in [lo, hi] with g(x) <= target, to within opts.root_tol, given
  // g(lo) <= target < g(hi).  Galloping bracket, then Illinois false position
  // with a bisection step whenever the bracket fails to halve.
  double inverse(double lo, double hi, double glo, double ghi, double target, double guess) const {
    double flo = glo - target, fhi = ghi - target;
    for (double w = guess; lo + w < hi; w *= 4) {
      double x = lo + w;
      double fx = eval(g, x) - target;
      if (fx <= 0) {
        lo = x;
        flo = fx;
      } else {
        hi = x;
        fhi = fx;
        break;
      }
    }
    bool bisect = false;
    int side = 0;
    for (int iter = 0; iter < 400; ++iter) {
      double width = hi - lo;
      if (width <= opts.root_tol) break;
      double x = lo + 0.5 * width;
      if (!bisect && fhi != flo) {
        double fp = lo - flo * width / (fhi - flo);
        if (fp > lo && fp < hi) x = fp;
      }
      if (!(x > lo && x < hi)) break;  // bracket at ulp resolution
      double fx = eval(g, x) - target;
      if (fx <= 0) {
        lo = x;
        flo = fx;
        if (fx == 0) break;
        if (side == -1) fhi *= 0.5;
        side = -1;
      } else {
        hi = x;
        fhi = fx;
        if (side == 1) flo *= 0.5;
        side = 1;
      }
      bisect = (hi - lo) > 0.5 * width;
    }
    return lo;
  }

  DeltaFineResult build(double a_in, double b_in, double delta) const {
    if (!(delta > 0) || std::isnan(delta)) throw Error(ErrorCode::InvalidArgument, "δ must be positive");
    auto sa = scale.snap(a_in), sb = scale.snap(b_in);
    if (!sa || !sb) throw Error(ErrorCode::NotInScale, "partition endpoints must lie in the scale");
    double a = *sa, b = *sb;
    if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "δ-fine partition needs a < b");

    double ga = eval(g, a), gb = eval(g, b);
    if (!(gb > ga)) throw Error(ErrorCode::GNotIncreasing, "g(b) <= g(a)");

    std::vector<double> pts{a};
    DeltaFineCertificate cert{delta, {}};
    double t = a, gt = ga;
    double guess = (b - a) * std::min(1.0, delta / (gb - ga));
    while (t < b) {
      if (pts.size() > opts.max_steps)
        throw Error(ErrorCode::NonTermination,
                    "δ-fine construction exceeded " + std::to_string(opts.max_steps) + " steps; δ too small");
      double target = gt + delta;
      double next;
      if (target >= gb) {
        next = b;
      } else {
        double root = inverse(t, b, gt, gb, target, std::max(guess, opts.root_tol));
        double cand = scale.floor_point(root);
        if (cand <= t) {
          next = scale.sigma(t);
          if (next <= t)
            throw Error(ErrorCode::NonTermination, "δ too small to advance past dense point " + std::to_string(t));
        } else {
          next = cand;
        }
      }
      double gn = eval(g, next);
      if (!(gn > gt))
        throw Error(ErrorCode::GNotIncreasing, "g fails to increase between " + std::to_string(t) + " and " + std::to_string(next));
      StepFlags f;
      f.gap_small = gn - gt <= delta + gap_tolerance(gn);
      f.jump_step = scale.rho(next) == t;
      cert.steps.push_back(f);
      pts.push_back(next);
      guess = 2 * (next - t);
      t = next;
      gt = gn;
    }
    return {Partition(Partition::Trusted{}, scale, std::move(pts)), std::move(cert)};
  }
};

/// δ-fine partition of [a,b]_T: t_j is the largest scale point with
/// g(t_j) <= g(t_{j-1}) + δ, or σ(t_{j-1}) when that would not advance.
inline DeltaFineResult delta_fine(const TimeScale& scale, const Expr& g, double a, double b, double delta,
                                  DeltaFineOptions opts = {}) {
  return DeltaFineBuilder{scale, g, opts}.build(a, b, delta);
}

namespace detail {

// Points of `p`, plus those of `q` farther than snap tolerance from every
// point of `p`.
inline Partition merge_distinct(const Partition& p, const Partition& q) {
  const auto& ps = p.points();
  std::vector<double> merged;
  merged.reserve(ps.size() + q.points().size());
  std::size_t i = 0;
  for (double x : q.points()) {
    while (i < ps.size() && ps[i] < x) merged.push_back(ps[i++]);
    bool near_prev = i > 0 && x - ps[i - 1] <= snap_tol(x);
    bool near_next = i < ps.size() && ps[i] - x <= snap_tol(x);
    if (!near_prev && !near_next) merged.push_back(x);
  }
  merged.insert(merged.end(), ps.begin() + static_cast<std::ptrdiff_t>(i), ps.end());
  return Partition(Partition::Trusted{}, p.scale(), std::move(merged));
}

}  // namespace detail

/// P refined by delta_fine(...), with its certificate against δ.  New points
/// closer than snap tolerance to a point of P are not added.
inline DeltaFineResult halve_and_refine(const Partition& p, const Expr& g, double delta, DeltaFineOptions opts = {}) {
  auto fine = delta_fine(p.scale(), g, p.a(), p.b(), delta, opts);
  Partition refined = detail::merge_distinct(p, fine.partition);
  auto cert = certify(refined, g, delta);
  return {std::move(refined), std::move(cert)};
}

}  // namespace tsrs
