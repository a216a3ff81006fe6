#pragma once

// Real-valued expressions in the single variable t: parsing, point
// evaluation, outward-rounded interval evaluation and symbolic derivatives.
//
// Grammar (precedence ^ > unary minus > * / > + -):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?        integer may carry a sign
//   primary := number | 't' | ('exp' | 'ln' | 'sqrt') '(' expr ')' | '(' expr ')'

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>

#include "tsrs/error.hpp"
#include "tsrs/numeric.hpp"
#include "tsrs/scale_parser.hpp"
#include "tsrs/timescale.hpp"

namespace tsrs {

/// Closed interval [lo, hi] guaranteed to contain every value of an
/// expression over the queried domain.
struct Enclosure {
  double lo;
  double hi;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Ln, Sqrt };

class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double c) { return Expr(std::make_shared<const Node>(Node{Op::Const, c, 0, {}, {}})); }
  static Expr var() { return Expr(std::make_shared<const Node>(Node{Op::Var, 0.0, 0, {}, {}})); }
  static Expr binary(Op op, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{op, 0.0, 0, lhs.node_, rhs.node_}));
  }
  static Expr unary(Op op, Expr arg) {
    return Expr(std::make_shared<const Node>(Node{op, 0.0, 0, arg.node_, {}}));
  }
  static Expr power(Expr base, int exponent) {
    return Expr(std::make_shared<const Node>(Node{Op::Pow, 0.0, exponent, base.node_, {}}));
  }

  Op op() const { return node_->op; }
  double value() const { return node_->value; }
  int exponent() const { return node_->exponent; }
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }
  /// Single argument of unary nodes (Neg, Pow, Exp, Ln, Sqrt).
  Expr arg() const { return Expr(node_->lhs); }

  bool is_const() const { return op() == Op::Const; }
  bool is_const(double c) const { return op() == Op::Const && value() == c; }

  struct Node {
    Op op;
    double value;
    int exponent;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  const Node* raw() const noexcept { return node_.get(); }

  friend bool operator==(const Expr& x, const Expr& y) {
    if (x.node_ == y.node_) return true;
    if (x.op() != y.op()) return false;
    switch (x.op()) {
      case Op::Const: return x.value() == y.value();
      case Op::Var: return true;
      case Op::Pow: return x.exponent() == y.exponent() && x.arg() == y.arg();
      case Op::Neg:
      case Op::Exp:
      case Op::Ln:
      case Op::Sqrt: return x.arg() == y.arg();
      default: return x.lhs() == y.lhs() && x.rhs() == y.rhs();
    }
  }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(Expr a, Expr b) { return Expr::binary(Op::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(Op::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(Op::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(Op::Div, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::unary(Op::Neg, std::move(a)); }
inline Expr pow(Expr base, int n) { return Expr::power(std::move(base), n); }
inline Expr exp(Expr a) { return Expr::unary(Op::Exp, std::move(a)); }
inline Expr ln(Expr a) { return Expr::unary(Op::Ln, std::move(a)); }
inline Expr sqrt(Expr a) { return Expr::unary(Op::Sqrt, std::move(a)); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : cur_(text) {}

  Expr parse() {
    Expr e = expr();
    if (!cur_.at_end()) cur_.fail("unexpected input");
    return e;
  }

 private:
  Expr expr() {
    Expr e = term();
    for (;;) {
      if (cur_.accept('+'))
        e = e + term();
      else if (cur_.accept('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (cur_.accept('*'))
        e = e * unary();
      else if (cur_.accept('/'))
        e = e / unary();
      else
        return e;
    }
  }

  Expr unary() {
    if (cur_.accept('-')) return -unary();
    if (cur_.accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!cur_.accept('^')) return base;
    bool paren = cur_.accept('(');
    int sign = 1;
    if (cur_.accept('-'))
      sign = -1;
    else
      cur_.accept('+');
    cur_.skip_ws();
    std::string_view rest = cur_.rest();
    std::size_t n = 0;
    while (n < rest.size() && std::isdigit(static_cast<unsigned char>(rest[n]))) ++n;
    if (n == 0) cur_.fail("expected an integer exponent");
    if (n < rest.size() && (rest[n] == '.' || rest[n] == 'e' || rest[n] == 'E'))
      cur_.fail("exponent must be an integer");
    if (n > 6) cur_.fail("exponent too large");
    int k = std::atoi(std::string(rest.substr(0, n)).c_str());
    cur_.set_pos(cur_.pos() + n);
    if (paren) cur_.expect(')');
    return pow(std::move(base), sign * k);
  }

  Expr primary() {
    char c = cur_.peek();
    if (c == '(') {
      cur_.accept('(');
      Expr e = expr();
      cur_.expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(cur_.unsigned_decimal());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = cur_.pos();
      cur_.skip_ws();
      start = cur_.pos();
      std::string name = cur_.identifier();
      if (name == "t") return Expr::var();
      if (name == "exp" || name == "ln" || name == "sqrt") {
        cur_.expect('(');
        Expr e = expr();
        cur_.expect(')');
        if (name == "exp") return exp(std::move(e));
        if (name == "ln") return ln(std::move(e));
        return sqrt(std::move(e));
      }
      cur_.set_pos(start);
      cur_.fail("unknown identifier '" + name + "'");
    }
    cur_.fail(c == '\0' ? "unexpected end of input" : "unexpected character");
  }

  Cursor cur_;
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_string_prec(const Expr& e, int parent_prec, bool right_operand) {
  std::string s;
  int prec = precedence(e.op());
  switch (e.op()) {
    case Op::Const:
      s = format_number(e.value());
      if (e.value() < 0 || std::signbit(e.value())) return "(" + s + ")";
      return s;
    case Op::Var: return "t";
    case Op::Add: s = to_string_prec(e.lhs(), prec, false) + " + " + to_string_prec(e.rhs(), prec, true); break;
    case Op::Sub: s = to_string_prec(e.lhs(), prec, false) + " - " + to_string_prec(e.rhs(), prec, true); break;
    case Op::Mul: s = to_string_prec(e.lhs(), prec, false) + "*" + to_string_prec(e.rhs(), prec, true); break;
    case Op::Div: s = to_string_prec(e.lhs(), prec, false) + "/" + to_string_prec(e.rhs(), prec, true); break;
    case Op::Neg: s = "-" + to_string_prec(e.arg(), prec, false); break;
    case Op::Pow: s = to_string_prec(e.arg(), prec + 1, false) + "^" + std::to_string(e.exponent()); break;
    case Op::Exp: return "exp(" + to_string_prec(e.arg(), 0, false) + ")";
    case Op::Ln: return "ln(" + to_string_prec(e.arg(), 0, false) + ")";
    case Op::Sqrt: return "sqrt(" + to_string_prec(e.arg(), 0, false) + ")";
  }
  bool wrap = prec < parent_prec || (right_operand && prec == parent_prec);
  return wrap ? "(" + s + ")" : s;
}

}  // namespace detail

/// Text form that parses back to an equal value.
inline std::string to_string(const Expr& e) { return detail::to_string_prec(e, 0, false); }

// ---------------------------------------------------------------------------
// Point evaluation

namespace detail {

// x^k for x >= 0 by binary powering; the interval bounds use the same
// multiplication sequence with directed rounding, so they bracket this value.
inline double pow_near(double x, unsigned k) {
  double result = 1.0, base = x;
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k > 0) base *= base;
  }
  return result;
}

inline double eval_node(const Expr::Node* n, double t) {
  switch (n->op) {
    case Op::Const: return n->value;
    case Op::Var: return t;
    case Op::Add: return eval_node(n->lhs.get(), t) + eval_node(n->rhs.get(), t);
    case Op::Sub: return eval_node(n->lhs.get(), t) - eval_node(n->rhs.get(), t);
    case Op::Mul: return eval_node(n->lhs.get(), t) * eval_node(n->rhs.get(), t);
    case Op::Div: {
      double den = eval_node(n->rhs.get(), t);
      if (den == 0.0) throw Error(ErrorCode::DomainError, "division by zero");
      return eval_node(n->lhs.get(), t) / den;
    }
    case Op::Neg: return -eval_node(n->lhs.get(), t);
    case Op::Pow: {
      double x = eval_node(n->lhs.get(), t);
      int e = n->exponent;
      if (e == 0) return 1.0;
      auto k = static_cast<unsigned>(e < 0 ? -e : e);
      double p = pow_near(std::fabs(x), k);
      if (x < 0 && (k & 1u)) p = -p;
      if (e > 0) return p;
      if (p == 0.0) throw Error(ErrorCode::DomainError, "negative power of zero");
      return 1.0 / p;
    }
    case Op::Exp: return std::exp(eval_node(n->lhs.get(), t));
    case Op::Ln: {
      double x = eval_node(n->lhs.get(), t);
      if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "ln of a non-positive value");
      return std::log(x);
    }
    case Op::Sqrt: {
      double x = eval_node(n->lhs.get(), t);
      if (!(x >= 0.0)) throw Error(ErrorCode::DomainError, "sqrt of a negative value");
      return std::sqrt(x);
    }
  }
  return 0.0;
}

}  // namespace detail

inline double eval(const Expr& e, double t) { return detail::eval_node(e.raw(), t); }

// ---------------------------------------------------------------------------
// Interval evaluation (natural extension, outward rounded)

namespace detail {

namespace r = rounding;

inline Enclosure iadd(Enclosure a, Enclosure b) { return {r::add_down(a.lo, b.lo), r::add_up(a.hi, b.hi)}; }
inline Enclosure isub(Enclosure a, Enclosure b) { return {r::sub_down(a.lo, b.hi), r::sub_up(a.hi, b.lo)}; }

inline Enclosure imul(Enclosure a, Enclosure b) {
  double lo = std::min({r::mul_down(a.lo, b.lo), r::mul_down(a.lo, b.hi), r::mul_down(a.hi, b.lo),
                        r::mul_down(a.hi, b.hi)});
  double hi = std::max({r::mul_up(a.lo, b.lo), r::mul_up(a.lo, b.hi), r::mul_up(a.hi, b.lo),
                        r::mul_up(a.hi, b.hi)});
  return {lo, hi};
}

inline Enclosure idiv(Enclosure a, Enclosure b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) throw Error(ErrorCode::DomainError, "denominator interval contains zero");
  double lo = std::min({r::div_down(a.lo, b.lo), r::div_down(a.lo, b.hi), r::div_down(a.hi, b.lo),
                        r::div_down(a.hi, b.hi)});
  double hi = std::max({r::div_up(a.lo, b.lo), r::div_up(a.lo, b.hi), r::div_up(a.hi, b.lo),
                        r::div_up(a.hi, b.hi)});
  return {lo, hi};
}

// x^n for x >= 0 and n >= 0, rounded toward -inf (down) or +inf.
inline double pow_nonneg(double x, unsigned n, bool down) {
  double result = 1.0, base = x;
  while (n > 0) {
    if (n & 1u) result = down ? r::mul_down(result, base) : r::mul_up(result, base);
    n >>= 1u;
    if (n > 0) base = down ? r::mul_down(base, base) : r::mul_up(base, base);
  }
  return result;
}

inline Enclosure ipow(Enclosure x, int n) {
  if (n == 0) return {1.0, 1.0};
  auto k = static_cast<unsigned>(n < 0 ? -n : n);
  Enclosure p;
  if (x.lo >= 0.0) {
    p = {pow_nonneg(x.lo, k, true), pow_nonneg(x.hi, k, false)};
  } else if (x.hi <= 0.0) {
    if (k % 2 == 0)
      p = {pow_nonneg(-x.hi, k, true), pow_nonneg(-x.lo, k, false)};
    else
      p = {-pow_nonneg(-x.lo, k, false), -pow_nonneg(-x.hi, k, true)};
  } else if (k % 2 == 0) {
    p = {0.0, pow_nonneg(std::max(-x.lo, x.hi), k, false)};
  } else {
    p = {-pow_nonneg(-x.lo, k, false), pow_nonneg(x.hi, k, false)};
  }
  if (n > 0) return p;
  return idiv({1.0, 1.0}, p);
}

inline Enclosure eval_interval_impl(const Expr::Node* n, Enclosure t) {
  switch (n->op) {
    case Op::Const: return {n->value, n->value};
    case Op::Var: return t;
    case Op::Add: return iadd(eval_interval_impl(n->lhs.get(), t), eval_interval_impl(n->rhs.get(), t));
    case Op::Sub: return isub(eval_interval_impl(n->lhs.get(), t), eval_interval_impl(n->rhs.get(), t));
    case Op::Mul: return imul(eval_interval_impl(n->lhs.get(), t), eval_interval_impl(n->rhs.get(), t));
    case Op::Div: return idiv(eval_interval_impl(n->lhs.get(), t), eval_interval_impl(n->rhs.get(), t));
    case Op::Neg: {
      Enclosure a = eval_interval_impl(n->lhs.get(), t);
      return {-a.hi, -a.lo};
    }
    case Op::Pow: return ipow(eval_interval_impl(n->lhs.get(), t), n->exponent);
    case Op::Exp: {
      Enclosure a = eval_interval_impl(n->lhs.get(), t);
      return {std::max(0.0, r::widen_down(std::exp(a.lo))), r::widen_up(std::exp(a.hi))};
    }
    case Op::Ln: {
      Enclosure a = eval_interval_impl(n->lhs.get(), t);
      if (!(a.lo > 0.0)) throw Error(ErrorCode::DomainError, "ln argument interval reaches zero or below");
      return {r::widen_down(std::log(a.lo)), r::widen_up(std::log(a.hi))};
    }
    case Op::Sqrt: {
      Enclosure a = eval_interval_impl(n->lhs.get(), t);
      if (!(a.lo >= 0.0)) throw Error(ErrorCode::DomainError, "sqrt argument interval reaches below zero");
      return {r::sqrt_down(a.lo), r::sqrt_up(a.hi)};
    }
  }
  return {0.0, 0.0};
}

}  // namespace detail

/// Enclosure of {eval(e, t) : t in [lo, hi]}.
inline Enclosure eval_interval(const Expr& e, double lo, double hi) {
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "eval_interval needs lo <= hi");
  return detail::eval_interval_impl(e.raw(), {lo, hi});
}

// ---------------------------------------------------------------------------
// Symbolic differentiation

namespace detail {

inline Expr s_add(Expr a, Expr b) {
  if (a.is_const(0.0)) return b;
  if (b.is_const(0.0)) return a;
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() + b.value());
  return a + b;
}
inline Expr s_sub(Expr a, Expr b) {
  if (b.is_const(0.0)) return a;
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() - b.value());
  if (a.is_const(0.0)) return -b;
  return a - b;
}
inline Expr s_mul(Expr a, Expr b) {
  if (a.is_const(0.0) || b.is_const(0.0)) return Expr::constant(0.0);
  if (a.is_const(1.0)) return b;
  if (b.is_const(1.0)) return a;
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() * b.value());
  return a * b;
}
inline Expr s_neg(Expr a) {
  if (a.is_const()) return Expr::constant(-a.value());
  return -a;
}
inline Expr s_pow(Expr a, int n) {
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return a;
  return pow(std::move(a), n);
}

}  // namespace detail

inline Expr differentiate(const Expr& e) {
  using namespace detail;
  switch (e.op()) {
    case Op::Const: return Expr::constant(0.0);
    case Op::Var: return Expr::constant(1.0);
    case Op::Add: return s_add(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::Sub: return s_sub(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::Mul:
      return s_add(s_mul(differentiate(e.lhs()), e.rhs()), s_mul(e.lhs(), differentiate(e.rhs())));
    case Op::Div: {
      Expr num = s_sub(s_mul(differentiate(e.lhs()), e.rhs()), s_mul(e.lhs(), differentiate(e.rhs())));
      if (num.is_const(0.0)) return num;
      return num / s_pow(e.rhs(), 2);
    }
    case Op::Neg: return s_neg(differentiate(e.arg()));
    case Op::Pow: {
      int n = e.exponent();
      if (n == 0) return Expr::constant(0.0);
      return s_mul(s_mul(Expr::constant(n), s_pow(e.arg(), n - 1)), differentiate(e.arg()));
    }
    case Op::Exp: return s_mul(e, differentiate(e.arg()));
    case Op::Ln: {
      Expr d = differentiate(e.arg());
      if (d.is_const(0.0)) return d;
      return d / e.arg();
    }
    case Op::Sqrt: {
      Expr d = differentiate(e.arg());
      if (d.is_const(0.0)) return d;
      return d / (Expr::constant(2.0) * e);
    }
  }
  return Expr::constant(0.0);
}

/// e with every occurrence of t replaced by `inner`.
inline Expr compose(const Expr& e, const Expr& inner) {
  switch (e.op()) {
    case Op::Const: return e;
    case Op::Var: return inner;
    case Op::Neg:
    case Op::Exp:
    case Op::Ln:
    case Op::Sqrt: return Expr::unary(e.op(), compose(e.arg(), inner));
    case Op::Pow: return pow(compose(e.arg(), inner), e.exponent());
    default: return Expr::binary(e.op(), compose(e.lhs(), inner), compose(e.rhs(), inner));
  }
}

/// True when the expression does not depend on t.
inline bool is_constant(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return true;
    case Op::Var: return false;
    case Op::Neg:
    case Op::Exp:
    case Op::Ln:
    case Op::Sqrt:
    case Op::Pow: return is_constant(e.arg());
    default: return is_constant(e.lhs()) && is_constant(e.rhs());
  }
}

/// g^Δ(t) (or g^∇(t)): the difference quotient at scattered points, the
/// classical derivative at dense ones.
inline double box_derivative(const Expr& g, const TimeScale& scale, double t, BoxKind kind) {
  double at = scale.snap(t).value_or(t);
  if (kind == BoxKind::Delta) {
    double s = scale.sigma(at);
    if (s > at) return (eval(g, s) - eval(g, at)) / (s - at);
  } else {
    double p = scale.rho(at);
    if (p < at) return (eval(g, at) - eval(g, p)) / (at - p);
  }
  return eval(differentiate(g), at);
}

}  // namespace tsrs
