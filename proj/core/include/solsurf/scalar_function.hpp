#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "solsurf/expr.hpp"

namespace solsurf {

/// A smooth real function of one variable with first and second derivatives.
/// Carries the free functions of the surface families (zeta, xi, Lambda and
/// the alpha profiles). Immutable and cheap to copy.
class ScalarFunction {
 public:
  using Fn = std::function<double(double)>;

  ScalarFunction();  // the zero function

  static ScalarFunction constant(double c);
  static ScalarFunction affine(double slope, double intercept);

  /// Value, first and second derivatives by symbolic differentiation.
  static ScalarFunction from_expression(const expr::Expr& e);
  static ScalarFunction from_expression(std::string_view src);

  /// Monotone piecewise-cubic (Fritsch-Carlson) interpolant through (t, y).
  /// Knots must be strictly increasing; evaluation outside them throws.
  static ScalarFunction from_table(std::vector<double> t, std::vector<double> y);

  /// Callables; missing derivatives fall back to central differences.
  static ScalarFunction from_callables(Fn value, Fn d1 = nullptr, Fn d2 = nullptr,
                                       std::string label = "callable");

  double operator()(double t) const { return value_(t); }
  double d1(double t) const { return d1_(t); }
  double d2(double t) const { return d2_(t); }

  /// True when built as a constant, so every derivative vanishes identically.
  bool is_constant() const { return is_constant_; }
  const std::string& label() const { return label_; }
  /// Source text when built from an expression, else empty.
  const std::string& source() const { return source_; }

 private:
  struct Raw {};
  ScalarFunction(Raw) {}

  Fn value_;
  Fn d1_;
  Fn d2_;
  bool is_constant_ = false;
  std::string label_;
  std::string source_;
};

}  // namespace solsurf
