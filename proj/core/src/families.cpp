#include "solsurf/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "solsurf/error.hpp"

namespace solsurf {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_domain(const numerics::Interval& d, const numerics::Interval& natural,
                  const std::string& name) {
  if (!(d.hi > d.lo) || d.lo < natural.lo || d.hi > natural.hi) {
    std::ostringstream os;
    os << "profile '" << name << "': domain [" << d.lo << ", " << d.hi
       << "] must be a non-empty subinterval of [" << natural.lo << ", " << natural.hi << "]";
    throw DomainError(os.str());
  }
}

double padding(double lo, double hi) { return 0.05 * (hi - lo) + 0.02; }

}  // namespace

// --- AdaptedFrame -------------------------------------------------------------

AdaptedFrame AdaptedFrame::make(double theta, double sin_alpha, double cos_alpha) {
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  AdaptedFrame f;
  f.theta = theta;
  f.alpha = std::atan2(sin_alpha, cos_alpha);
  f.E1 = {st, ct * cos_alpha, -ct * sin_alpha};
  f.E2 = {0.0, sin_alpha, cos_alpha};
  f.N = {ct, -st * cos_alpha, st * sin_alpha};
  return f;
}

double AdaptedFrame::orthonormality_defect() const {
  Eigen::Matrix3d m;
  m.row(0) = E1.vec().transpose();
  m.row(1) = E2.vec().transpose();
  m.row(2) = N.vec().transpose();
  const double gram = (m * m.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return std::max(gram, std::abs(m.determinant() - 1.0));
}

// --- AlphaProfile -------------------------------------------------------------

AlphaProfile::AlphaProfile(Kind kind, std::string name, ScalarFunction fn,
                           numerics::Interval domain, numerics::Interval natural)
    : kind_(kind), name_(std::move(name)), fn_(std::move(fn)), domain_(domain), natural_(natural) {
  check_domain(domain_, natural_, name_);
}

AlphaProfile AlphaProfile::constant(double alpha0, numerics::Interval domain) {
  std::ostringstream os;
  os.precision(17);
  os << "constant:" << alpha0;
  return {Kind::kConstant, os.str(), ScalarFunction::constant(alpha0), domain, {-kInf, kInf}};
}

AlphaProfile AlphaProfile::linear(numerics::Interval domain) {
  return {Kind::kLinear, "linear", ScalarFunction::affine(1.0, 0.0), domain, {-kInf, kInf}};
}

AlphaProfile AlphaProfile::quadratic(numerics::Interval domain) {
  return {Kind::kQuadratic, "quadratic",
          ScalarFunction::from_callables([](double s) { return s * s; },
                                         [](double s) { return 2.0 * s; },
                                         [](double) { return 2.0; }, "s^2"),
          domain, {-kInf, kInf}};
}

AlphaProfile AlphaProfile::arccos(numerics::Interval domain) {
  return {Kind::kArccos, "arccos",
          ScalarFunction::from_callables(
              [](double s) { return std::acos(std::clamp(s, -1.0, 1.0)); },
              [](double s) { return -1.0 / std::sqrt(1.0 - s * s); },
              [](double s) { return -s / std::pow(1.0 - s * s, 1.5); }, "arccos(s)"),
          domain, {-1.0, 1.0}};
}

AlphaProfile AlphaProfile::umbilic(numerics::Interval domain) {
  return {Kind::kUmbilic, "umbilic",
          ScalarFunction::from_callables(
              [](double s) { return 2.0 * std::atan(std::exp(2.0 * s)); },
              [](double s) { return 2.0 / std::cosh(2.0 * s); },
              [](double s) {
                const double ch = std::cosh(2.0 * s);
                return -4.0 * std::sinh(2.0 * s) / (ch * ch);
              },
              "2*arctan(exp(2*s))"),
          domain, {-kInf, kInf}};
}

AlphaProfile AlphaProfile::expression(std::string_view src, numerics::Interval domain) {
  ScalarFunction fn = ScalarFunction::from_expression(src);
  const Kind kind = fn.is_constant() ? Kind::kConstant : Kind::kExpression;
  return {kind, std::string(src), std::move(fn), domain, {-kInf, kInf}};
}

AlphaProfile AlphaProfile::from_spec(std::string_view spec, numerics::Interval domain) {
  if (spec == "linear") return linear(domain);
  if (spec == "quadratic") return quadratic(domain);
  if (spec == "arccos") return arccos(domain);
  if (spec == "umbilic") return umbilic(domain);
  for (std::string_view prefix : {"constant:", "constant="}) {
    if (spec.substr(0, prefix.size()) == prefix) {
      // The angle may be any constant expression, e.g. "constant:pi/4".
      const expr::Expr e = expr::parse(spec.substr(prefix.size()));
      if (!e.variable().empty()) {
        throw DomainError("profile: constant angle must not depend on a variable in '" +
                          std::string(spec) + "'");
      }
      const double a0 = expr::eval(e, 0.0);
      return constant(a0, domain);
    }
  }
  return expression(spec, domain);
}

// --- Generators --------------------------------------------------------------

ParamSurface surface_leaf_h2(double x0, ParamDomain domain) {
  ParamSurface s;
  s.name = "leaf_h2";
  s.domain = domain;
  s.map = [x0](double u, double v) { return Point3{x0, u, v}; };
  s.partials = [](double, double) {
    SurfacePartials p;
    p.fu = {0.0, 1.0, 0.0};
    p.fv = {0.0, 0.0, 1.0};
    return p;
  };
  return s;
}

namespace {

struct CylinderTables {
  std::shared_ptr<const numerics::CumulativePrimitive> chi;
  std::shared_ptr<const numerics::CumulativePrimitive> phi;
};

CylinderTables build_cylinder_tables(const AlphaProfile& profile, const CylinderOptions& opts) {
  const auto d = profile.domain();
  const auto nat = profile.natural_domain();
  const double pad = padding(d.lo, d.hi);
  const double lo = std::max(nat.lo, d.lo - pad);
  const double hi = std::min(nat.hi, d.hi + pad);
  const auto fn = profile.function();
  const double base = opts.baseline_for(d);
  if (base < lo || base > hi) throw DomainError("cylinder: baseline outside the profile table");

  CylinderTables t;
  t.chi = std::make_shared<const numerics::CumulativePrimitive>(
      [fn](double s) { return std::cos(fn(s)); }, lo, hi, base, opts.knots, opts.quadrature);
  auto chi = t.chi;
  t.phi = std::make_shared<const numerics::CumulativePrimitive>(
      [fn, chi](double s) { return std::sin(fn(s)) * std::exp((*chi)(s)); }, lo, hi, base,
      opts.knots, opts.quadrature);
  return t;
}

}  // namespace

ParamSurface surface_cylinder_theta_half(const AlphaProfile& profile,
                                         const CylinderOptions& opts) {
  if (!(opts.v1 > opts.v0)) throw DomainError("cylinder: empty v-range");
  const CylinderTables t = build_cylinder_tables(profile, opts);
  const auto fn = profile.function();

  ParamSurface s;
  s.name = "cylinder(" + profile.name() + ")";
  s.domain = {profile.domain().lo, profile.domain().hi, opts.v0, opts.v1};
  s.map = [t](double u, double v) { return Point3{v, (*t.phi)(u), (*t.chi)(u)}; };
  s.partials = [t, fn](double u, double) {
    const double a = fn(u);
    const double da = fn.d1(u);
    const double ez = std::exp((*t.chi)(u));
    const double sa = std::sin(a);
    const double ca = std::cos(a);
    SurfacePartials p;
    p.fu = {0.0, sa * ez, ca};
    p.fv = {1.0, 0.0, 0.0};
    p.fuu = {0.0, (da * ca + sa * ca) * ez, -da * sa};
    return p;
  };
  return s;
}

ProfileCurve cylinder_profile_curve(const AlphaProfile& profile, int samples,
                                    const CylinderOptions& opts) {
  if (samples < 2) throw DomainError("cylinder_profile_curve: need at least 2 samples");
  const CylinderTables t = build_cylinder_tables(profile, opts);
  const auto d = profile.domain();
  ProfileCurve c;
  c.u.reserve(static_cast<std::size_t>(samples));
  c.points.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double u = i + 1 == samples ? d.hi : d.lo + (d.hi - d.lo) * i / (samples - 1);
    c.u.push_back(u);
    c.points.push_back({0.0, (*t.phi)(u), (*t.chi)(u)});
  }
  return c;
}

double cylinder_sigma(const AlphaProfile& profile, double u) {
  return std::sin(profile(u)) - profile.derivative(u);
}

ParamSurface surface_prop24(double theta, ParamDomain domain) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
    throw DomainError("surface_prop24: theta must lie in (0, pi/2)");
  }
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double tt = std::tan(theta);
  ParamSurface s;
  s.name = "prop24";
  s.domain = domain;
  s.map = [=](double u, double v) { return Point3{tt * std::exp(u * ct), v, -u * ct}; };
  s.partials = [=](double u, double) {
    const double e = std::exp(u * ct);
    SurfacePartials p;
    p.fu = {st * e, 0.0, -ct};
    p.fv = {0.0, 1.0, 0.0};
    p.fuu = {st * ct * e, 0.0, 0.0};
    return p;
  };
  return s;
}

// --- Cylinder residuals --------------------------------------------------------

std::vector<Residual> cylinder_residuals(const AlphaProfile& profile, const ParamSurface& s,
                                         int nu, int nv) {
  std::vector<Residual> out{{"e1_alpha"}, {"e2_alpha"}, {"h12"},
                            {"h11"},      {"frame_e2"}, {"group_product"}};
  auto track = [&](std::size_t k, double r, double u, double v) {
    if (std::isnan(r) || r > out[k].max_residual) {
      out[k].max_residual = r;
      out[k].at_u = u;
      out[k].at_v = v;
    }
  };
  for (int i = 0; i < nu; ++i) {
    for (int k = 0; k < nv; ++k) {
      const double u = s.domain.u_at(i, nu);
      const double v = s.domain.v_at(k, nv);
      const JetData j = jet(s, u, v);
      const FundamentalForms ff = second_form(j);
      const Eigen::Matrix2d first = ff.first();
      const double a = profile(u);
      const double sa = std::sin(a);
      const double ca = std::cos(a);

      // Adapted frame at theta = pi/2: E1 = e1, E2 = sin a e2 + cos a e3,
      // N = -cos a e2 + sin a e3.
      const TangentVec e1 = to_coords(j.point, {1.0, 0.0, 0.0});
      const TangentVec e2 = to_coords(j.point, {0.0, sa, ca});
      const TangentVec np = to_coords(j.point, {0.0, -ca, sa});
      const double orient = inner(unit_normal(j), np) > 0.0 ? 1.0 : -1.0;
      const Eigen::Matrix2d second = orient * ff.second();

      auto coeffs = [&](const TangentVec& t) {
        return Eigen::Vector2d(first.ldlt().solve(Eigen::Vector2d(inner(t, j.fu), inner(t, j.fv))));
      };
      const Eigen::Vector2d x1 = coeffs(e1);
      const Eigen::Vector2d x2 = coeffs(e2);

      const double h = 1e-4 * std::max(1.0, std::abs(u));
      const double alpha_u = numerics::fd_derivative([&](double t) { return profile(t); }, u, h, 4);
      const double alpha_v = 0.0;  // alpha is a function of u alone on this chart

      track(0, std::abs(x1[0] * alpha_u + x1[1] * alpha_v), u, v);
      const double sigma = x2.dot(second * x2);
      track(1, std::abs(x2[0] * alpha_u + x2[1] * alpha_v - (sa - sigma)), u, v);
      track(2, std::abs(x1.dot(second * x2)), u, v);
      track(3, std::abs(x1.dot(second * x1) + sa), u, v);
      const FrameVec fu = to_frame(j.fu);
      track(4, norm((1.0 / norm(fu)) * fu - FrameVec{0.0, sa, ca}), u, v);

      const Point3 g = s.map(u, s.domain.v0);
      const Point3 prod = group_mul({v, 0.0, 0.0}, {0.0, g.y, g.z});
      track(5, (prod.vec() - j.point.vec()).norm(), u, v);
    }
  }
  return out;
}

// --- Minimality ----------------------------------------------------------------

MinimalityVerdict classify_minimal(FamilyKind kind, const ParamSurface& s,
                                   const AlphaProfile* profile, GridSpec grid, double tol) {
  MinimalityVerdict v;
  switch (kind) {
    case FamilyKind::kLeaf:
      v.minimal = true;
      v.reason = "theta = 0 leaf {x = x0} is totally geodesic";
      break;
    case FamilyKind::kProp24:
      v.minimal = true;
      v.reason = "cos(alpha) = 0 family: principal curvatures -sin(theta), sin(theta)";
      break;
    case FamilyKind::kCylinder:
      if (profile == nullptr) throw DomainError("classify_minimal: cylinder needs its profile");
      v.minimal = profile->is_constant();
      v.reason = v.minimal ? "theta = pi/2 with constant alpha, so sigma = sin(alpha)"
                           : "theta = pi/2 with non-constant alpha: sigma != sin(alpha)";
      break;
    case FamilyKind::kGeneral:
      v.minimal = false;
      v.reason = "general family: sigma = sin(alpha) sin(theta) is incompatible with the p-equation";
      break;
  }
  double worst = 0.0;
  for (int i = 0; i < grid.m; ++i) {
    for (int k = 0; k < grid.n; ++k) {
      const double h = std::abs(mean_curvature(jet(s, s.domain.u_at(i, grid.m),
                                                   s.domain.v_at(k, grid.n))));
      if (std::isnan(h) || h > worst) worst = h;
    }
  }
  v.max_abs_h = worst;
  v.witness_agrees = (worst <= tol) == v.minimal;
  return v;
}

}  // namespace solsurf
