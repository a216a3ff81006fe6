#pragma once

// Text grammar for time scales:
//
//   scale  := points(num, ...) | uniform(num, num, num) | qscale(num)
//           | interval(num, num) | union(scale; scale; ...)
//   num    := [+-] decimal [ '/' decimal ]      (p/q rational literal)
//
// Whitespace is ignored everywhere.

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "tsrs/error.hpp"
#include "tsrs/timescale.hpp"

namespace tsrs {

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  std::string_view rest() const { return text_.substr(pos_); }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  /// Unsigned decimal literal with optional fraction and exponent.
  double unsigned_decimal() {
    skip_ws();
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("expected a number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    std::string lit(text_.substr(start, pos_ - start));
    return std::strtod(lit.c_str(), nullptr);
  }

  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(pos_, message); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline double parse_signed_number(Cursor& cur) {
  double sign = 1.0;
  if (cur.accept('-'))
    sign = -1.0;
  else
    cur.accept('+');
  double value = cur.unsigned_decimal();
  std::size_t save = cur.pos();
  if (cur.accept('/')) {
    double den = cur.unsigned_decimal();
    if (den == 0.0) {
      cur.set_pos(save);
      cur.fail("zero denominator in rational literal");
    }
    value /= den;
  }
  return sign * value;
}

inline std::vector<double> parse_number_list(Cursor& cur) {
  std::vector<double> out;
  cur.expect('(');
  out.push_back(parse_signed_number(cur));
  while (cur.accept(',')) out.push_back(parse_signed_number(cur));
  cur.expect(')');
  return out;
}

inline TimeScale parse_scale_expr(Cursor& cur) {
  std::size_t start = cur.pos();
  std::string name = cur.identifier();
  auto arity = [&](const std::vector<double>& args, std::size_t n) {
    if (args.size() != n) {
      cur.set_pos(start);
      cur.fail(name + " takes " + std::to_string(n) + " argument(s)");
    }
  };
  if (name == "points") {
    return make_points(parse_number_list(cur));
  }
  if (name == "uniform") {
    auto args = parse_number_list(cur);
    arity(args, 3);
    return make_uniform(args[0], args[1], args[2]);
  }
  if (name == "qscale") {
    auto args = parse_number_list(cur);
    arity(args, 1);
    return make_qscale(args[0]);
  }
  if (name == "interval") {
    auto args = parse_number_list(cur);
    arity(args, 2);
    return make_interval(args[0], args[1]);
  }
  if (name == "union") {
    std::vector<TimeScale> parts;
    cur.expect('(');
    parts.push_back(parse_scale_expr(cur));
    while (cur.accept(';')) parts.push_back(parse_scale_expr(cur));
    cur.expect(')');
    return make_union(parts);
  }
  cur.set_pos(start);
  cur.fail(name.empty() ? "expected a scale constructor" : "unknown scale constructor '" + name + "'");
}

}  // namespace detail

inline TimeScale parse_scale(std::string_view text) {
  detail::Cursor cur(text);
  TimeScale scale = detail::parse_scale_expr(cur);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return scale;
}

/// A single numeric literal in the scale grammar (integer, decimal or p/q).
inline double parse_number(std::string_view text) {
  detail::Cursor cur(text);
  double v = detail::parse_signed_number(cur);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return v;
}

}  // namespace tsrs
