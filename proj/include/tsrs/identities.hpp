#pragma once

// Checkable identities of the Δ/∇ Riemann–Stieltjes integral and the
// closed-form oracles used to validate enclosures.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "tsrs/error.hpp"
#include "tsrs/expr.hpp"
#include "tsrs/integrator.hpp"
#include "tsrs/timescale.hpp"

namespace tsrs {

/// |lhs - rhs| for an identity evaluated with two enclosures.  The identity
/// is consistent with the enclosures when residual <= allowance.
struct CheckResult {
  double residual = 0.0;
  double allowance = 0.0;
  IntegralResult lhs;
  IntegralResult rhs;

  bool holds() const { return residual <= allowance; }
};

/// ∫ f □g  versus  ∫ f·g^□ □t.
inline CheckResult transition_residual(const Expr& f, const Expr& g, const TimeScale& scale, double a, double b,
                                       BoxKind kind, const IntegratorConfig& cfg = {}) {
  CheckResult r;
  r.lhs = integrate(f, g, scale, a, b, kind, cfg);
  r.rhs = integrate_with(BoxDerivativeProduct(f, g, scale, kind), Expr::var(), scale, a, b, kind, cfg);
  r.residual = std::fabs(r.lhs.value - r.rhs.value);
  r.allowance = r.lhs.width() + r.rhs.width();
  return r;
}

/// ∫ f Δg  versus  [fg]_a^b - ∫ g^σ Δf   (∇: g^ρ and ∇f).
/// `rhs` holds the enclosure of the second integral ∫ g^σ Δf itself.
inline CheckResult by_parts_residual(const Expr& f, const Expr& g, const TimeScale& scale, double a, double b,
                                     BoxKind kind, const IntegratorConfig& cfg = {}) {
  CheckResult r;
  r.lhs = integrate(f, g, scale, a, b, kind, cfg);
  r.rhs = integrate_with(JumpComposition{g, scale, kind}, f, scale, a, b, kind, cfg);
  double sa = scale.snap(a).value_or(a), sb = scale.snap(b).value_or(b);
  double fb = eval(f, sb) * eval(g, sb), fa = eval(f, sa) * eval(g, sa);
  double boundary = fb - fa;
  r.residual = std::fabs(r.lhs.value - (boundary - r.rhs.value));
  r.allowance = r.lhs.width() + r.rhs.width() + detail::summation_slack(3, std::fabs(fb) + std::fabs(fa));
  return r;
}

namespace detail {

inline void require_increasing(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw Error(ErrorCode::PhiNotIncreasing, "φ is not strictly increasing on the source scale");
}

/// φ(T̃) for a strictly increasing continuous φ.  Geometric clusters map to
/// clusters only under affine φ.
inline TimeScale image_scale(const Expr& phi, const TimeScale& source) {
  std::vector<ScaleComponent> out;
  std::vector<double> probe;  // images in increasing source order
  Expr dphi = differentiate(phi);
  for (const auto& c : source.components()) {
    std::visit(overloaded{
                   [&](const IsolatedPoints& p) {
                     IsolatedPoints img;
                     for (double x : p.points) img.points.push_back(eval(phi, x));
                     probe.insert(probe.end(), img.points.begin(), img.points.end());
                     require_increasing(img.points);
                     out.emplace_back(std::move(img));
                   },
                   [&](const RealInterval& r) {
                     constexpr int samples = 64;
                     std::vector<double> v;
                     for (int i = 0; i <= samples; ++i) {
                       double x = i == samples ? r.hi : r.lo + (r.hi - r.lo) * i / samples;
                       v.push_back(eval(phi, x));
                     }
                     require_increasing(v);
                     probe.push_back(v.front());
                     probe.push_back(v.back());
                     out.emplace_back(RealInterval{v.front(), v.back()});
                   },
                   [&](const GeometricCluster& g) {
                     if (!is_constant(dphi))
                       throw Error(ErrorCode::UnsupportedScale,
                                   "the image of a geometric cluster is representable only under affine φ");
                     double slope = eval(dphi, g.limit);
                     if (!(slope > 0)) throw Error(ErrorCode::PhiNotIncreasing, "affine φ has non-positive slope");
                     GeometricCluster img{eval(phi, g.limit), slope * g.anchor_offset, g.ratio, g.first_index};
                     probe.push_back(img.limit);
                     probe.push_back(img.top());
                     out.emplace_back(img);
                   },
               },
               c);
  }
  require_increasing(probe);
  return TimeScale(std::move(out));
}

}  // namespace detail

/// ∫_{φ(A)}^{φ(B)} f □g over φ(T̃)  versus  ∫_A^B (f∘φ) □(g∘φ) over T̃.
inline CheckResult substitution_check(const Expr& f, const Expr& g, const Expr& phi, const TimeScale& source,
                                      double A, double B, BoxKind kind, const IntegratorConfig& cfg = {}) {
  auto sA = source.snap(A), sB = source.snap(B);
  if (!sA || !sB) throw Error(ErrorCode::NotInScale, "substitution limits must lie in the source scale");
  TimeScale clipped = source.restrict(std::min(*sA, *sB), std::max(*sA, *sB));
  TimeScale target = detail::image_scale(phi, clipped);
  CheckResult r;
  r.lhs = integrate(f, g, target, eval(phi, *sA), eval(phi, *sB), kind, cfg);
  r.rhs = integrate(compose(f, phi), compose(g, phi), clipped, *sA, *sB, kind, cfg);
  r.residual = std::fabs(r.lhs.value - r.rhs.value);
  r.allowance = r.lhs.width() + r.rhs.width();
  return r;
}

/// Δ-integral, classical Stieltjes integral over the real hull [a,b], and
/// ∇-integral.  For f increasing on [a,b] they are ordered Δ <= classical <= ∇;
/// reversed for decreasing f.
struct ComparisonResult {
  IntegralResult delta;
  IntegralResult classical;
  IntegralResult nabla;
  double violation = 0.0;
  double allowance = 0.0;

  bool holds() const { return violation <= allowance; }
};

/// The classical integral is taken on the real interval with tolerance
/// max(cfg.tol, classical_floor * max(1, |f|·(g(b) - g(a)))) at the endpoints.
/// If that budget runs out, the last (wider) enclosure is used.
inline ComparisonResult comparison_check(const Expr& f, const Expr& g, const TimeScale& scale, double a, double b,
                                         const IntegratorConfig& cfg = {}, double classical_floor = 1e-6) {
  auto sa = scale.snap(a), sb = scale.snap(b);
  if (!sa || !sb) throw Error(ErrorCode::NotInScale, "comparison limits must lie in the scale");
  double lo = std::min(*sa, *sb), hi = std::max(*sa, *sb);
  ComparisonResult r;
  r.delta = integrate(f, g, scale, lo, hi, BoxKind::Delta, cfg);
  r.nabla = integrate(f, g, scale, lo, hi, BoxKind::Nabla, cfg);
  if (hi > lo) {
    double magnitude = std::max(std::fabs(eval(f, lo)), std::fabs(eval(f, hi))) * (eval(g, hi) - eval(g, lo));
    IntegratorConfig ccfg = cfg;
    ccfg.tol = std::max(cfg.tol, classical_floor * std::max(1.0, magnitude));
    try {
      r.classical = integrate(f, g, make_interval(lo, hi), lo, hi, BoxKind::Delta, ccfg);
    } catch (const NoConvergenceError& e) {
      r.classical = e.result();
    }
  } else {
    r.classical = r.delta;
  }
  bool increasing = eval(f, hi) >= eval(f, lo);
  const IntegralResult& below = increasing ? r.delta : r.nabla;
  const IntegralResult& above = increasing ? r.nabla : r.delta;
  r.violation = std::max(0.0, below.value - r.classical.value) + std::max(0.0, r.classical.value - above.value);
  r.allowance = r.delta.width() + r.classical.width() + r.nabla.width();
  if (*sa > *sb) {
    r.delta = negated(r.delta);
    r.nabla = negated(r.nabla);
    r.classical = negated(r.classical);
  }
  return r;
}

/// Closed forms of ∫_0^1 t Δ(t²) and ∫_0^1 t ∇(t²) on [0,1] ∩ closure(q^Z).
inline std::pair<double, double> qscale_oracle(double q) {
  if (!std::isfinite(q) || !(q > 1)) throw Error(ErrorCode::InvalidRatio, "q must exceed 1");
  double den = q * q + q + 1;
  return {(q + 1) / den, (q * q + q) / den};
}

/// Σ f(t)(g(σ(t)) - g(t)) (Δ) or Σ f(σ(t))(g(σ(t)) - g(t)) (∇), walking the
/// scale from a to b with σ.  TooMany when a dense point is met or more than
/// `cap` steps are needed.
inline double scattered_sum_oracle(const Expr& f, const Expr& g, const TimeScale& scale, double a, double b,
                                   BoxKind kind, std::size_t cap) {
  auto sa = scale.snap(a), sb = scale.snap(b);
  if (!sa || !sb) throw Error(ErrorCode::NotInScale, "oracle limits must lie in the scale");
  if (*sa == *sb) return 0.0;
  if (*sa > *sb) return -scattered_sum_oracle(f, g, scale, *sb, *sa, kind, cap);
  double sum = 0.0;
  double t = *sa;
  double gt = eval(g, t);
  std::size_t steps = 0;
  while (t < *sb) {
    double s = scale.sigma(t);
    if (s == t || ++steps > cap) throw Error(ErrorCode::TooMany, "[a,b] is not a finite grid within the cap");
    double gs = eval(g, s);
    sum += eval(f, kind == BoxKind::Delta ? t : s) * (gs - gt);
    t = s;
    gt = gs;
  }
  return sum;
}

}  // namespace tsrs
