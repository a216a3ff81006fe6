#pragma once

// Snap tolerance and directed-rounding primitives.
//
// Directed operations use error-free transformations (two-sum, fma residuals)
// to decide whether the round-to-nearest result is already a valid lower or
// upper bound, and step one ulp outward only when it is not.  Exact results
// therefore stay exact, which keeps enclosures of polynomial expressions at
// dyadic points tight.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace tsrs {

inline constexpr double snap_eta = 1e-12;

/// Tolerance for membership and equality tests near `x`: relative 1e-12,
/// floored at 1e-12 absolute.
inline double snap_tol(double x) noexcept {
  return snap_eta * std::max(1.0, std::fabs(x));
}

inline bool snap_equal(double x, double y) noexcept {
  return std::fabs(x - y) <= snap_tol(std::max(std::fabs(x), std::fabs(y)));
}

namespace rounding {

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double down(double x) noexcept { return std::nextafter(x, -inf); }
inline double up(double x) noexcept { return std::nextafter(x, inf); }

// Knuth two-sum: s + err == a + b exactly.
inline double add_error(double a, double b, double s) noexcept {
  double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

inline double add_down(double a, double b) noexcept {
  double s = a + b;
  if (!std::isfinite(s)) return s;
  return add_error(a, b, s) < 0.0 ? down(s) : s;
}

inline double add_up(double a, double b) noexcept {
  double s = a + b;
  if (!std::isfinite(s)) return s;
  return add_error(a, b, s) > 0.0 ? up(s) : s;
}

inline double sub_down(double a, double b) noexcept { return add_down(a, -b); }
inline double sub_up(double a, double b) noexcept { return add_up(a, -b); }

inline double mul_down(double a, double b) noexcept {
  double p = a * b;
  if (!std::isfinite(p)) return p;
  double err = std::fma(a, b, -p);
  if (err < 0.0) return down(p);
  // Underflow can hide the residual; step outward conservatively.
  if (err == 0.0 && p != 0.0 && std::fabs(p) < std::numeric_limits<double>::min())
    return down(p);
  if (p == 0.0 && a != 0.0 && b != 0.0) return (a > 0) == (b > 0) ? 0.0 : down(0.0);
  return p;
}

inline double mul_up(double a, double b) noexcept {
  double p = a * b;
  if (!std::isfinite(p)) return p;
  double err = std::fma(a, b, -p);
  if (err > 0.0) return up(p);
  if (err == 0.0 && p != 0.0 && std::fabs(p) < std::numeric_limits<double>::min())
    return up(p);
  if (p == 0.0 && a != 0.0 && b != 0.0) return (a > 0) == (b > 0) ? up(0.0) : 0.0;
  return p;
}

// q = a / b rounded; residual r = a - q*b has the sign of (a/b - q) * sign(b).
inline double div_down(double a, double b) noexcept {
  double q = a / b;
  if (!std::isfinite(q)) return q;
  double r = std::fma(-q, b, a);
  double dir = b > 0 ? r : -r;
  if (dir < 0.0) return down(q);
  if (q == 0.0 && a != 0.0) return (a > 0) == (b > 0) ? 0.0 : down(0.0);
  if (dir == 0.0 && q != 0.0 && std::fabs(q) < std::numeric_limits<double>::min())
    return down(q);
  return q;
}

inline double div_up(double a, double b) noexcept {
  double q = a / b;
  if (!std::isfinite(q)) return q;
  double r = std::fma(-q, b, a);
  double dir = b > 0 ? r : -r;
  if (dir > 0.0) return up(q);
  if (q == 0.0 && a != 0.0) return (a > 0) == (b > 0) ? up(0.0) : 0.0;
  if (dir == 0.0 && q != 0.0 && std::fabs(q) < std::numeric_limits<double>::min())
    return up(q);
  return q;
}

inline double sqrt_down(double x) noexcept {
  double s = std::sqrt(x);
  return std::fma(-s, s, x) < 0.0 ? down(s) : s;
}

inline double sqrt_up(double x) noexcept {
  double s = std::sqrt(x);
  return std::fma(-s, s, x) > 0.0 ? up(s) : s;
}

// libm exp/log are not correctly rounded; widen by a fixed number of ulps.
inline constexpr int libm_ulps = 3;

inline double widen_down(double x, int ulps = libm_ulps) noexcept {
  for (int i = 0; i < ulps; ++i) x = down(x);
  return x;
}

inline double widen_up(double x, int ulps = libm_ulps) noexcept {
  for (int i = 0; i < ulps; ++i) x = up(x);
  return x;
}

}  // namespace rounding
}  // namespace tsrs
