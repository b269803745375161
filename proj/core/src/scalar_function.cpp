#include "solsurf/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "solsurf/error.hpp"
#include "solsurf/numerics.hpp"

namespace solsurf {
namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct CubicTable {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> m;  // slopes at knots

  std::size_t locate(double x) const {
    if (!(x >= t.front() && x <= t.back())) {
      std::ostringstream os;
      os << "sampled function evaluated at " << x << " outside [" << t.front() << ", "
         << t.back() << "]";
      throw DomainError(os.str());
    }
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
  }

  // Hermite basis on [t_i, t_{i+1}] and its first two derivatives.
  double eval(double x, int deriv) const {
    const std::size_t i = locate(x);
    const double h = t[i + 1] - t[i];
    const double s = (x - t[i]) / h;
    const double y0 = y[i], y1 = y[i + 1], m0 = m[i] * h, m1 = m[i + 1] * h;
    switch (deriv) {
      case 0:
        return (2 * s * s * s - 3 * s * s + 1) * y0 + (s * s * s - 2 * s * s + s) * m0 +
               (-2 * s * s * s + 3 * s * s) * y1 + (s * s * s - s * s) * m1;
      case 1:
        return ((6 * s * s - 6 * s) * y0 + (3 * s * s - 4 * s + 1) * m0 +
                (-6 * s * s + 6 * s) * y1 + (3 * s * s - 2 * s) * m1) /
               h;
      default:
        return ((12 * s - 6) * y0 + (6 * s - 4) * m0 + (-12 * s + 6) * y1 + (6 * s - 2) * m1) /
               (h * h);
    }
  }
};

}  // namespace

ScalarFunction::ScalarFunction()
    : value_([](double) { return 0.0; }),
      d1_([](double) { return 0.0; }),
      d2_([](double) { return 0.0; }),
      is_constant_(true),
      label_("0") {}

ScalarFunction ScalarFunction::constant(double c) {
  ScalarFunction f = from_callables([c](double) { return c; }, [](double) { return 0.0; },
                                    [](double) { return 0.0; }, format_number(c));
  f.is_constant_ = true;
  return f;
}

ScalarFunction ScalarFunction::affine(double slope, double intercept) {
  if (slope == 0.0) return constant(intercept);
  return from_callables([=](double t) { return slope * t + intercept; },
                        [=](double) { return slope; }, [](double) { return 0.0; },
                        format_number(slope) + "*t + " + format_number(intercept));
}

ScalarFunction ScalarFunction::from_expression(const expr::Expr& e) {
  auto e0 = std::make_shared<const expr::Expr>(e);
  auto e1 = std::make_shared<const expr::Expr>(expr::diff(e));
  auto e2 = std::make_shared<const expr::Expr>(expr::diff(*e1));
  const bool constant_expr = e.variable().empty();
  ScalarFunction f = from_callables([e0](double t) { return expr::eval(*e0, t); },
                                    [e1](double t) { return expr::eval(*e1, t); },
                                    [e2](double t) { return expr::eval(*e2, t); },
                                    expr::to_string(e));
  f.source_ = f.label_;
  f.is_constant_ = constant_expr;
  return f;
}

ScalarFunction ScalarFunction::from_expression(std::string_view src) {
  ScalarFunction f = from_expression(expr::parse(src));
  f.source_ = std::string(src);
  return f;
}

ScalarFunction ScalarFunction::from_table(std::vector<double> t, std::vector<double> y) {
  if (t.size() != y.size() || t.size() < 2) {
    throw std::invalid_argument("from_table: need at least two (t, y) samples");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("from_table: knots must increase");
  }
  auto table = std::make_shared<CubicTable>();
  const std::size_t n = t.size();
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
  std::vector<double> m(n);
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    m[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  }
  // Fritsch-Carlson limiter.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    const double a = m[i] / delta[i];
    const double b = m[i + 1] / delta[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      m[i] = tau * a * delta[i];
      m[i + 1] = tau * b * delta[i];
    }
  }
  table->t = std::move(t);
  table->y = std::move(y);
  table->m = std::move(m);
  return from_callables([table](double x) { return table->eval(x, 0); },
                        [table](double x) { return table->eval(x, 1); },
                        [table](double x) { return table->eval(x, 2); }, "table");
}

ScalarFunction ScalarFunction::from_callables(Fn value, Fn d1, Fn d2, std::string label) {
  if (!value) throw std::invalid_argument("from_callables: value function required");
  ScalarFunction f{Raw{}};
  f.label_ = std::move(label);
  f.value_ = value;
  if (d1) {
    f.d1_ = std::move(d1);
  } else {
    f.d1_ = [value](double t) {
      return numerics::fd_derivative(value, t, 1e-5 * std::max(1.0, std::abs(t)), 4);
    };
  }
  if (d2) {
    f.d2_ = std::move(d2);
  } else {
    Fn first = f.d1_;
    f.d2_ = [first](double t) {
      return numerics::fd_derivative(first, t, 1e-4 * std::max(1.0, std::abs(t)), 4);
    };
  }
  return f;
}

}  // namespace solsurf
