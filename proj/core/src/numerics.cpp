#include "solsurf/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "solsurf/error.hpp"

namespace solsurf::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae (descending) and weights; Gauss weights sit on the odd
// Kronrod nodes 1, 3, 5 and on the centre.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(double y, double x) {
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "integrand is not finite at t = " << x;
    throw NumericsError(os.str());
  }
  return y;
}

Segment qk15(const RealFn& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double fc = checked(f(centr), centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = hlgth * kXgk[j];
    const double f1 = checked(f(centr - dx), centr - dx);
    const double f2 = checked(f(centr + dx), centr + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double ah = std::abs(hlgth);
  const double result = resk * hlgth;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {a, b, result, err};
}

}  // namespace

QuadratureResult integrate(const RealFn& f, double a, double b,
                           const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || cfg.max_subdivisions < 1) {
    throw std::invalid_argument("integrate: tolerances must be positive");
  }
  if (a == b) return {0.0, 0.0, 0};
  if (b < a) {
    QuadratureResult r = integrate(f, b, a, cfg);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<Segment> heap;
  Segment first = qk15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int intervals = 1;

  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (intervals >= cfg.max_subdivisions) {
      std::ostringstream os;
      os << "integrate: no convergence on [" << a << ", " << b << "] after "
         << intervals << " subdivisions (error estimate " << total_err << ")";
      throw NumericsError(os.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    // Round-off floor: stop splitting segments that can no longer shrink.
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    const Segment left = qk15(f, worst.a, mid);
    const Segment right = qk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Resum to shed the drift accumulated by the incremental updates.
  double sum = 0.0, err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, intervals};
}

double gauss_legendre10(const RealFn& f, double a, double b) {
  static constexpr std::array<double, 5> kX{
      0.1488743389816312108848260, 0.4333953941292471907992659,
      0.6794095682990244062343274, 0.8650633666889845107320967,
      0.9739065285171717200779640};
  static constexpr std::array<double, 5> kW{
      0.2955242247147528701738930, 0.2692667193099963550912269,
      0.2190863625159820439955349, 0.1494513491505805931457763,
      0.0666713443086881375935688};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kX.size(); ++i) {
    s += kW[i] * (f(c - h * kX[i]) + f(c + h * kX[i]));
  }
  return s * h;
}

CumulativePrimitive::CumulativePrimitive(RealFn f, double lo, double hi, double baseline,
                                         int knots, const QuadratureConfig& cfg,
                                         PrimitiveRule rule)
    : f_(std::move(f)), lo_(lo), hi_(hi), baseline_(baseline), rule_(rule) {
  if (!(hi > lo) || baseline < lo || baseline > hi) {
    throw DomainError("CumulativePrimitive: need lo < hi and baseline in [lo, hi]");
  }
  if (knots < 2) throw std::invalid_argument("CumulativePrimitive: need at least 2 knots");

  t_.reserve(static_cast<std::size_t>(knots) + 2);
  for (int i = 0; i <= knots; ++i) {
    t_.push_back(lo + (hi - lo) * static_cast<double>(i) / knots);
  }
  t_.back() = hi;
  // The baseline is always a knot so that P(baseline) == 0 exactly.
  auto pos = std::lower_bound(t_.begin(), t_.end(), baseline);
  if (pos == t_.end() || *pos != baseline) pos = t_.insert(pos, baseline);
  const auto b = static_cast<std::size_t>(pos - t_.begin());

  p_.assign(t_.size(), 0.0);
  for (std::size_t i = b + 1; i < t_.size(); ++i) {
    p_[i] = p_[i - 1] + integrate(f_, t_[i - 1], t_[i], cfg).value;
  }
  for (std::size_t i = b; i-- > 0;) {
    p_[i] = p_[i + 1] - integrate(f_, t_[i], t_[i + 1], cfg).value;
  }
  df_.resize(t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) df_[i] = f_(t_[i]);
}

double CumulativePrimitive::operator()(double t) const {
  if (t_.empty()) throw DomainError("CumulativePrimitive: empty table");
  if (!(t >= lo_ && t <= hi_)) {
    std::ostringstream os;
    os << "CumulativePrimitive: t = " << t << " outside [" << lo_ << ", " << hi_ << "]";
    throw DomainError(os.str());
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  if (i + 1 >= t_.size()) i = t_.size() - 2;
  const double t0 = t_[i];
  const double t1 = t_[i + 1];
  if (t == t0) return p_[i];
  if (t == t1) return p_[i + 1];

  if (rule_ == PrimitiveRule::kHermiteCubic) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p_[i] + (s3 - 2 * s2 + s) * h * df_[i] +
           (-2 * s3 + 3 * s2) * p_[i + 1] + (s3 - s2) * h * df_[i + 1];
  }
  if (t - t0 <= t1 - t) return p_[i] + gauss_legendre10(f_, t0, t);
  return p_[i + 1] - gauss_legendre10(f_, t, t1);
}

Trajectory ode_rk4(const OdeRhs& f, double t0, const State& y0, double t1, int steps) {
  if (steps < 1) throw std::invalid_argument("ode_rk4: steps must be positive");
  const double h = (t1 - t0) / steps;
  const std::size_t n = y0.size();
  auto axpy = [n](const State& y, double a, const State& k) {
    State r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] + a * k[i];
    return r;
  };

  Trajectory tr;
  tr.t.reserve(static_cast<std::size_t>(steps) + 1);
  tr.y.reserve(static_cast<std::size_t>(steps) + 1);
  tr.t.push_back(t0);
  tr.y.push_back(y0);
  State y = y0;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = f(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(y[i])) {
        std::ostringstream os;
        os << "ode_rk4: non-finite state at t = " << t + h;
        throw NumericsError(os.str());
      }
    }
    tr.t.push_back(s + 1 == steps ? t1 : t0 + (s + 1) * h);
    tr.y.push_back(y);
  }
  return tr;
}

Trajectory ode_rk4(const std::function<double(double, double)>& f, double t0, double y0,
                   double t1, int steps) {
  return ode_rk4([&f](double t, const State& y) { return State{f(t, y[0])}; }, t0,
                 State{y0}, t1, steps);
}

namespace {

void check_stencil(double t, double reach, const std::optional<Interval>& domain) {
  if (domain && (t - reach < domain->lo || t + reach > domain->hi)) {
    std::ostringstream os;
    os << "finite-difference stencil [" << t - reach << ", " << t + reach
       << "] leaves [" << domain->lo << ", " << domain->hi << "]";
    throw DomainError(os.str());
  }
}

}  // namespace

double fd_derivative(const RealFn& f, double t, double h, int order,
                     std::optional<Interval> domain) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_derivative: step must be positive");
  if (order == 2) {
    check_stencil(t, h, domain);
    return (f(t + h) - f(t - h)) / (2.0 * h);
  }
  if (order == 4) {
    check_stencil(t, 2.0 * h, domain);
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
  }
  throw std::invalid_argument("fd_derivative: order must be 2 or 4");
}

double fd_second_derivative(const RealFn& f, double t, double h, int order,
                            std::optional<Interval> domain) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_second_derivative: step must be positive");
  if (order == 2) {
    check_stencil(t, h, domain);
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
  }
  if (order == 4) {
    check_stencil(t, 2.0 * h, domain);
    return (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) /
           (12.0 * h * h);
  }
  throw std::invalid_argument("fd_second_derivative: order must be 2 or 4");
}

}  // namespace solsurf::numerics
