#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace solsurf::numerics {

using RealFn = std::function<double(double)>;

struct QuadratureConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// b < a yields the negated integral. Throws NumericsError if the tolerance
/// is not met within cfg.max_subdivisions intervals, or on non-finite values.
QuadratureResult integrate(const RealFn& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// Fixed 10-point Gauss-Legendre rule on [a, b].
double gauss_legendre10(const RealFn& f, double a, double b);

enum class PrimitiveRule {
  kHermiteCubic,     // cubic Hermite through knot values and integrand values
  kGaussRefinement,  // nearest knot value plus a 10-point rule to t
};

/// Tabulated antiderivative P(t) = int_{baseline}^{t} f, valid on [lo, hi].
/// Knot values are accumulated from direct adaptive quadrature over each knot
/// interval. Immutable after construction.
class CumulativePrimitive {
 public:
  CumulativePrimitive() = default;
  CumulativePrimitive(RealFn f, double lo, double hi, double baseline, int knots,
                      const QuadratureConfig& cfg = {},
                      PrimitiveRule rule = PrimitiveRule::kGaussRefinement);

  /// Throws DomainError outside [lo, hi].
  double operator()(double t) const;
  /// int_a^b f = P(b) - P(a).
  double between(double a, double b) const { return (*this)(b) - (*this)(a); }
  double integrand(double t) const { return f_(t); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double baseline() const { return baseline_; }
  PrimitiveRule rule() const { return rule_; }
  const std::vector<double>& knots() const { return t_; }
  const std::vector<double>& knot_values() const { return p_; }
  bool empty() const { return t_.empty(); }

 private:
  RealFn f_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double baseline_ = 0.0;
  PrimitiveRule rule_ = PrimitiveRule::kGaussRefinement;
  std::vector<double> t_;
  std::vector<double> p_;
  std::vector<double> df_;  // integrand at knots
};

using State = std::vector<double>;
using OdeRhs = std::function<State(double, const State&)>;

struct Trajectory {
  std::vector<double> t;
  std::vector<State> y;

  const State& back() const { return y.back(); }
};

/// Classical fixed-step fourth-order Runge-Kutta from t0 to t1 in `steps`
/// steps (t1 < t0 integrates backwards). Throws NumericsError when the state
/// becomes non-finite.
Trajectory ode_rk4(const OdeRhs& f, double t0, const State& y0, double t1, int steps);

/// Scalar convenience overload.
Trajectory ode_rk4(const std::function<double(double, double)>& f, double t0, double y0,
                   double t1, int steps);

struct Interval {
  double lo;
  double hi;
};

/// Central difference of order 2 or 4. Throws DomainError when the stencil
/// leaves `domain`, std::invalid_argument for other orders or h <= 0.
double fd_derivative(const RealFn& f, double t, double h, int order = 2,
                     std::optional<Interval> domain = std::nullopt);

/// Central second difference of order 2 or 4.
double fd_second_derivative(const RealFn& f, double t, double h, int order = 2,
                            std::optional<Interval> domain = std::nullopt);

}  // namespace solsurf::numerics
