#pragma once

// Riemann–Stieltjes Δ/∇ integration on time scales via upper and lower
// Darboux–Stieltjes sums.
//
// For each step [t_{j-1}, t_j] of a partition the box I_□j is [t_{j-1}, ρ(t_j)]
// (Δ) or [σ(t_{j-1}), t_j] (∇).  Bounds of the integrand over the real hull of
// the box give m_j, M_j; singleton boxes use the point value, so fully
// scattered partitions produce L = U.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tsrs/error.hpp"
#include "tsrs/expr.hpp"
#include "tsrs/partition.hpp"
#include "tsrs/timescale.hpp"

namespace tsrs {

struct DarbouxSums {
  double lower = 0.0;
  double upper = 0.0;
  BoxKind kind = BoxKind::Delta;
  std::size_t partition_size = 0;
  /// Bound on the accumulated rounding error of either sum.
  double slack = 0.0;
};

struct IntegralResult {
  double lower = 0.0;
  double upper = 0.0;
  double value = 0.0;
  bool exact = false;
  std::size_t refinements = 0;
  std::size_t final_partition_size = 0;
  BoxKind kind = BoxKind::Delta;

  double width() const { return upper - lower; }
  bool encloses(double x) const { return lower <= x && x <= upper; }
};

/// The same integral over [b, a]: ∫_a^b = -∫_b^a.
inline IntegralResult negated(IntegralResult r) {
  double lo = r.lower;
  r.lower = -r.upper;
  r.upper = -lo;
  r.value = -r.value;
  return r;
}

struct IntegratorConfig {
  double tol = 1e-9;
  std::size_t max_refinements = 60;
  std::size_t grid_cap = 100'000;
  bool monotone_check = true;
  std::size_t max_partition_steps = DeltaFineOptions{}.max_steps;
};

/// Raised when the refinement budget runs out; carries the last enclosure.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& message, IntegralResult last)
      : Error(ErrorCode::NoConvergence, message), last_(last) {}
  const IntegralResult& result() const noexcept { return last_; }

 private:
  IntegralResult last_;
};

// ---------------------------------------------------------------------------
// Integrands
//
// An integrand provides `at(t)` for scale points and `over(lo, hi, prev, cur)`
// bounding its values at the scale points of the box hull [lo, hi] that
// belongs to the partition step [prev, cur].

struct ExprIntegrand {
  Expr f;

  double at(double t) const { return eval(f, t); }
  Enclosure over(double lo, double hi, double, double) const { return eval_interval(f, lo, hi); }
};

/// t ↦ f(t)·g^□(t).  On a step [prev, cur] every difference quotient of g
/// taken inside the box is a mean value of g' over [prev, cur].
struct BoxDerivativeProduct {
  Expr f;
  Expr g;
  Expr dg;
  TimeScale scale;
  BoxKind kind;

  BoxDerivativeProduct(Expr f_, Expr g_, TimeScale scale_, BoxKind kind_)
      : f(std::move(f_)), g(std::move(g_)), dg(differentiate(g)), scale(std::move(scale_)), kind(kind_) {}

  double at(double t) const { return eval(f, t) * box_derivative(g, scale, t, kind); }
  Enclosure over(double lo, double hi, double prev, double cur) const {
    return detail::imul(eval_interval(f, lo, hi), eval_interval(dg, prev, cur));
  }
};

/// t ↦ g(σ(t)) for Δ, g(ρ(t)) for ∇.  Monotone in t when g increases on T,
/// so the box endpoints bound it.
struct JumpComposition {
  Expr g;
  TimeScale scale;
  BoxKind kind;

  double shift(double t) const { return kind == BoxKind::Delta ? scale.sigma(t) : scale.rho(t); }
  double at(double t) const { return eval(g, shift(t)); }
  Enclosure over(double lo, double hi, double, double) const {
    double x = at(lo), y = at(hi);
    return {std::min(x, y), std::max(x, y)};
  }
};

namespace detail {

inline constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2;

inline double summation_slack(std::size_t terms, double abs_sum) {
  return 2.0 * static_cast<double>(terms + 2) * unit_roundoff * abs_sum +
         std::numeric_limits<double>::denorm_min();
}

inline std::vector<double> g_values(const std::vector<double>& pts, const Expr& g, bool monotone_check) {
  std::vector<double> gv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    gv[i] = eval(g, pts[i]);
    if (monotone_check && i > 0 && !(gv[i] > gv[i - 1]))
      throw Error(ErrorCode::GNotIncreasing,
                  "g is not strictly increasing between " + std::to_string(pts[i - 1]) + " and " + std::to_string(pts[i]));
  }
  return gv;
}

}  // namespace detail

template <class Integrand>
DarbouxSums darboux_sums_with(const Partition& p, const Integrand& f, const Expr& g, BoxKind kind,
                              bool monotone_check = true) {
  const auto& pts = p.points();
  const auto& scale = p.scale();
  auto gv = detail::g_values(pts, g, monotone_check);
  DarbouxSums s{0.0, 0.0, kind, pts.size(), 0.0};
  double abs_sum = 0.0;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    double lo, hi;
    if (kind == BoxKind::Delta) {
      lo = pts[j - 1];
      hi = scale.rho(pts[j]);
    } else {
      lo = scale.sigma(pts[j - 1]);
      hi = pts[j];
    }
    Enclosure bounds;
    if (lo == hi) {
      double v = f.at(lo);
      bounds = {v, v};
    } else {
      bounds = f.over(lo, hi, pts[j - 1], pts[j]);
    }
    if (!bounds.finite() || std::isnan(bounds.lo) || std::isnan(bounds.hi))
      throw Error(ErrorCode::DomainError, "integrand is unbounded on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    double dg = gv[j] - gv[j - 1];
    s.lower += bounds.lo * dg;
    s.upper += bounds.hi * dg;
    abs_sum += std::max(std::fabs(bounds.lo), std::fabs(bounds.hi)) * std::fabs(dg);
  }
  s.slack = detail::summation_slack(pts.size(), abs_sum);
  return s;
}

/// L_□(P,f,g) and U_□(P,f,g).
inline DarbouxSums darboux_sums(const Partition& p, const Expr& f, const Expr& g, BoxKind kind,
                                bool monotone_check = true) {
  return darboux_sums_with(p, ExprIntegrand{f}, g, kind, monotone_check);
}

/// Σ f(ξ_j) Δg_j for sample points ξ_j in I_□j.
inline double riemann_stieltjes_sum(const Partition& p, const std::vector<double>& samples, const Expr& f,
                                    const Expr& g, BoxKind kind) {
  const auto& pts = p.points();
  const auto& scale = p.scale();
  if (samples.size() != p.steps())
    throw Error(ErrorCode::InvalidArgument, "need exactly one sample per partition step");
  auto gv = detail::g_values(pts, g, true);
  double sum = 0.0;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    auto [lo, hi] = scale.box_subinterval(pts[j - 1], pts[j], kind);
    double xi = samples[j - 1];
    auto snapped = scale.snap(xi);
    if (!snapped || *snapped < lo || *snapped > hi)
      throw Error(ErrorCode::SampleOutOfBox, "sample " + std::to_string(xi) + " is outside I_" +
                                                 std::string(to_string(kind)) + " of step " + std::to_string(j));
    sum += eval(f, *snapped) * (gv[j] - gv[j - 1]);
  }
  return sum;
}

namespace detail {

// Exact Σ f(t_{j-1})Δg_j (Δ) or Σ f(t_j)Δg_j (∇) over consecutive points.
template <class Integrand>
IntegralResult grid_sum(const std::vector<double>& pts, const Integrand& f, const Expr& g, BoxKind kind,
                        bool monotone_check) {
  auto gv = g_values(pts, g, monotone_check);
  double sum = 0.0, abs_sum = 0.0;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    double fv = f.at(kind == BoxKind::Delta ? pts[j - 1] : pts[j]);
    double term = fv * (gv[j] - gv[j - 1]);
    sum += term;
    abs_sum += std::fabs(term);
  }
  if (!std::isfinite(sum)) throw Error(ErrorCode::DomainError, "integrand sum is not finite");
  double slack = summation_slack(pts.size(), abs_sum);
  return {sum - slack, sum + slack, sum, true, 0, pts.size(), kind};
}

}  // namespace detail

/// Verified enclosure of ∫_a^b f □g for a general integrand.
template <class Integrand>
IntegralResult integrate_with(const Integrand& f, const Expr& g, const TimeScale& scale, double a, double b,
                              BoxKind kind, const IntegratorConfig& cfg = {}) {
  if (!(cfg.tol > 0) || cfg.max_refinements == 0 || cfg.grid_cap == 0)
    throw Error(ErrorCode::InvalidArgument, "integrator configuration values must be positive");
  auto sa = scale.snap(a), sb = scale.snap(b);
  if (!sa) throw Error(ErrorCode::NotInScale, "lower limit " + std::to_string(a) + " is not in the scale");
  if (!sb) throw Error(ErrorCode::NotInScale, "upper limit " + std::to_string(b) + " is not in the scale");
  if (*sa == *sb) return {0.0, 0.0, 0.0, true, 0, 1, kind};
  if (*sa > *sb) {
    try {
      return negated(integrate_with(f, g, scale, *sb, *sa, kind, cfg));
    } catch (const NoConvergenceError& e) {
      throw NoConvergenceError(e.detail(), negated(e.result()));
    }
  }

  if (auto grid = scale.enumerate_between(*sa, *sb, cfg.grid_cap))
    return detail::grid_sum(*grid, f, g, kind, cfg.monotone_check);

  DeltaFineOptions opts;
  opts.max_steps = cfg.max_partition_steps;
  Partition p(scale, {*sa, *sb});
  double delta = (eval(g, *sb) - eval(g, *sa)) / 4;
  if (!(delta > 0)) throw Error(ErrorCode::GNotIncreasing, "g(b) <= g(a)");

  IntegralResult last{};
  bool have_last = false;
  for (std::size_t round = 1; round <= cfg.max_refinements; ++round) {
    try {
      p = halve_and_refine(p, g, delta, opts).partition;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonTermination || !have_last) throw;
      throw NoConvergenceError("partition budget exhausted before U - L < tol (" + e.detail() + ")", last);
    }
    DarbouxSums s = darboux_sums_with(p, f, g, kind, cfg.monotone_check);
    double lower = s.lower - s.slack, upper = s.upper + s.slack;
    last = {lower, upper, 0.5 * (s.lower + s.upper), false, round, p.points().size(), kind};
    last.value = std::clamp(last.value, lower, upper);
    have_last = true;
    if (upper - lower < cfg.tol) return last;
    delta *= 0.5;
  }
  throw NoConvergenceError("no convergence within " + std::to_string(cfg.max_refinements) + " refinements", last);
}

/// Verified enclosure of ∫_a^b f(t) □g(t).
inline IntegralResult integrate(const Expr& f, const Expr& g, const TimeScale& scale, double a, double b,
                                BoxKind kind, const IntegratorConfig& cfg = {}) {
  return integrate_with(ExprIntegrand{f}, g, scale, a, b, kind, cfg);
}

/// ∫_t^{σ(t)} f Δg = f(t)(g(σ(t)) - g(t)), or ∫_{ρ(t)}^t f ∇g = f(t)(g(t) - g(ρ(t))).
inline double single_step(const Expr& f, const Expr& g, const TimeScale& scale, double t, BoxKind kind) {
  auto st = scale.snap(t);
  if (!st) throw Error(ErrorCode::NotInScale, "point " + std::to_string(t) + " is not in the scale");
  double x = *st;
  double y = kind == BoxKind::Delta ? scale.sigma(x) : scale.rho(x);
  if (y == x) return 0.0;
  return kind == BoxKind::Delta ? eval(f, x) * (eval(g, y) - eval(g, x)) : eval(f, x) * (eval(g, x) - eval(g, y));
}

}  // namespace tsrs
