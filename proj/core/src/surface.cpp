#include "solsurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "solsurf/error.hpp"

namespace solsurf {
namespace {

Eigen::Vector3d eval_map(const ParamSurface& s, double u, double v) {
  return s.map(u, v).vec();
}

SurfacePartials fd_partials(const ParamSurface& s, double u, double v, const JetOptions& o) {
  const double hu = o.fd_step * std::max(1.0, std::abs(u));
  const double hv = o.fd_step * std::max(1.0, std::abs(v));
  const double ku = o.fd_step_second * std::max(1.0, std::abs(u));
  const double kv = o.fd_step_second * std::max(1.0, std::abs(v));

  auto first = [&](double a, double b) {
    SurfacePartials p;
    p.fu = (eval_map(s, u + a, v) - eval_map(s, u - a, v)) / (2.0 * a);
    p.fv = (eval_map(s, u, v + b) - eval_map(s, u, v - b)) / (2.0 * b);
    return p;
  };
  auto second = [&](double a, double b, SurfacePartials& p) {
    const Eigen::Vector3d f0 = eval_map(s, u, v);
    p.fuu = (eval_map(s, u + a, v) - 2.0 * f0 + eval_map(s, u - a, v)) / (a * a);
    p.fvv = (eval_map(s, u, v + b) - 2.0 * f0 + eval_map(s, u, v - b)) / (b * b);
    p.fuv = (eval_map(s, u + a, v + b) - eval_map(s, u + a, v - b) -
             eval_map(s, u - a, v + b) + eval_map(s, u - a, v - b)) /
            (4.0 * a * b);
  };

  SurfacePartials p = first(hu, hv);
  second(ku, kv, p);
  if (o.richardson) {
    SurfacePartials q = first(0.5 * hu, 0.5 * hv);
    second(0.5 * ku, 0.5 * kv, q);
    p.fu = (4.0 * q.fu - p.fu) / 3.0;
    p.fv = (4.0 * q.fv - p.fv) / 3.0;
    p.fuu = (4.0 * q.fuu - p.fuu) / 3.0;
    p.fuv = (4.0 * q.fuv - p.fuv) / 3.0;
    p.fvv = (4.0 * q.fvv - p.fvv) / 3.0;
  }
  return p;
}

JetData compute_jet(const ParamSurface& s, double u, double v, const JetOptions& o) {
  JetData j;
  j.point = s.map(u, v);
  SurfacePartials p;
  if (s.has_analytic_partials() && !o.force_fd) {
    p = s.partials(u, v);
    j.analytic = true;
  } else {
    p = fd_partials(s, u, v, o);
  }
  j.fu = TangentVec::at(j.point, p.fu);
  j.fv = TangentVec::at(j.point, p.fv);
  j.fuu = p.fuu;
  j.fuv = p.fuv;
  j.fvv = p.fvv;

  const double e = inner(j.fu, j.fu);
  const double f = inner(j.fu, j.fv);
  const double g = inner(j.fv, j.fv);
  const double det = e * g - f * f;
  if (!std::isfinite(det) || !(det > 1e-14 * e * g)) {
    std::ostringstream os;
    os << "surface '" << s.name << "' is not immersed at (u, v) = (" << u << ", " << v << ")";
    throw DegenerateJet(os.str());
  }
  return j;
}

double first_form_component(const JetData& j, int which) {
  switch (which) {
    case 0: return inner(j.fu, j.fu);
    case 1: return inner(j.fu, j.fv);
    default: return inner(j.fv, j.fv);
  }
}

void track(CheckResult& c, double residual, double u, double v) {
  if (std::isnan(c.max_residual)) return;  // already poisoned
  if (std::isnan(residual) || residual > c.max_residual) {
    c.max_residual = residual;
    c.at_u = u;
    c.at_v = v;
  }
}

}  // namespace

JetData jet(const ParamSurface& s, double u, double v, const JetOptions& opts) {
  if (!s.domain.contains(u, v)) {
    std::ostringstream os;
    os << "jet: (u, v) = (" << u << ", " << v << ") outside the domain of '" << s.name << "'";
    throw DomainError(os.str());
  }
  return compute_jet(s, u, v, opts);
}

Eigen::Matrix2d FundamentalForms::first() const {
  Eigen::Matrix2d m;
  m << E, F, F, G;
  return m;
}

Eigen::Matrix2d FundamentalForms::second() const {
  Eigen::Matrix2d m;
  m << L, M, M, N;
  return m;
}

std::array<double, 2> ShapeOperator2::principal_curvatures() const {
  // Real spectrum: A is self-adjoint for the first form.
  const double tr = matrix.trace();
  const double det = matrix.determinant();
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return {0.5 * tr - disc, 0.5 * tr + disc};
}

TangentVec unit_normal(const JetData& j) {
  const Eigen::Vector3d n = j.fu.vec().cross(j.fv.vec());
  const Eigen::Matrix3d g = metric_at(j.point);
  const Eigen::Vector3d raised = g.diagonal().cwiseInverse().cwiseProduct(n);
  const double len2 = n.dot(raised);
  if (!(len2 > 0.0) || !std::isfinite(len2)) {
    throw DegenerateJet("unit_normal: tangent vectors are dependent");
  }
  return TangentVec::at(j.point, raised / std::sqrt(len2));
}

FundamentalForms second_form(const JetData& j) {
  const TangentVec nrm = unit_normal(j);
  const Eigen::Vector3d fu = j.fu.vec();
  const Eigen::Vector3d fv = j.fv.vec();
  FundamentalForms ff;
  ff.E = inner(j.fu, j.fu);
  ff.F = inner(j.fu, j.fv);
  ff.G = inner(j.fv, j.fv);
  ff.L = inner(covariant_derivative(j.point, fu, fu, j.fuu), nrm);
  ff.M = inner(covariant_derivative(j.point, fu, fv, j.fuv), nrm);
  ff.N = inner(covariant_derivative(j.point, fv, fv, j.fvv), nrm);
  return ff;
}

ShapeOperator2 shape_operator(const JetData& j) {
  const FundamentalForms ff = second_form(j);
  return {ff.first().inverse() * ff.second(), TangentBasis::kCoordinate};
}

ShapeOperator2 shape_operator_orthonormal(const JetData& j) {
  const FundamentalForms ff = second_form(j);
  Eigen::Matrix2d c;
  c(0, 0) = 1.0 / std::sqrt(ff.E);
  c(1, 0) = 0.0;
  const double w = std::sqrt(ff.G - ff.F * ff.F / ff.E);
  c(0, 1) = -ff.F / ff.E / w;
  c(1, 1) = 1.0 / w;
  return {c.transpose() * ff.second() * c, TangentBasis::kOrthonormal};
}

double extrinsic_curvature(const JetData& j) {
  const FundamentalForms ff = second_form(j);
  return (ff.L * ff.N - ff.M * ff.M) / ff.first_det();
}

double gauss_curvature(const JetData& j) {
  return extrinsic_curvature(j) + sectional_curvature(to_frame(j.fu), to_frame(j.fv));
}

double mean_curvature(const JetData& j) { return 0.5 * shape_operator(j).matrix.trace(); }

double intrinsic_curvature(const ParamSurface& s, double u, double v,
                           const CurvatureOptions& opts) {
  const bool analytic = s.has_analytic_partials() && !opts.jet.force_fd;
  const double h = analytic ? opts.step : opts.fd_step;
  const double hu = h * std::max(1.0, std::abs(u));
  const double hv = h * std::max(1.0, std::abs(v));

  // E, F, G at offsets (a, b) in units of (hu, hv).
  auto forms = [&](int a, int b) {
    const JetData j = compute_jet(s, u + a * hu, v + b * hv, opts.jet);
    return Eigen::Vector3d(first_form_component(j, 0), first_form_component(j, 1),
                           first_form_component(j, 2));
  };
  const Eigen::Vector3d c = forms(0, 0);
  const Eigen::Vector3d up1 = forms(1, 0), um1 = forms(-1, 0), up2 = forms(2, 0), um2 = forms(-2, 0);
  const Eigen::Vector3d vp1 = forms(0, 1), vm1 = forms(0, -1), vp2 = forms(0, 2), vm2 = forms(0, -2);

  const Eigen::Vector3d du = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) / (12.0 * hu);
  const Eigen::Vector3d dv = (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * hv);
  const Eigen::Vector3d duu = (-up2 + 16.0 * up1 - 30.0 * c + 16.0 * um1 - um2) / (12.0 * hu * hu);
  const Eigen::Vector3d dvv = (-vp2 + 16.0 * vp1 - 30.0 * c + 16.0 * vm1 - vm2) / (12.0 * hv * hv);
  auto mixed = [&](int k) -> Eigen::Vector3d {
    return (forms(k, k) - forms(k, -k) - forms(-k, k) + forms(-k, -k)) / (4.0 * k * k * hu * hv);
  };
  const Eigen::Vector3d duv = (4.0 * mixed(1) - mixed(2)) / 3.0;

  const double E = c[0], F = c[1], G = c[2];
  const double Eu = du[0], Fu = du[1], Gu = du[2];
  const double Ev = dv[0], Fv = dv[1], Gv = dv[2];
  const double Evv = dvv[0], Guu = duu[2], Fuv = duv[1];

  Eigen::Matrix3d m1;
  m1 << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
        Fv - 0.5 * Gu, E, F,
        0.5 * Gv, F, G;
  Eigen::Matrix3d m2;
  m2 << 0.0, 0.5 * Ev, 0.5 * Gu,
        0.5 * Ev, E, F,
        0.5 * Gu, F, G;
  const double w = E * G - F * F;
  return (m1.determinant() - m2.determinant()) / (w * w);
}

double angle_of(const JetData& j) {
  // atan2 keeps full precision near 0 and pi, where acos does not.
  const FrameVec n = to_frame(unit_normal(j));
  return std::atan2(std::hypot(n.c2, n.c3), n.c1);
}

double angle_field(const ParamSurface& s, double u, double v, const JetOptions& opts) {
  return angle_of(jet(s, u, v, opts));
}

TangentVec tangent_projection_T(const JetData& j) {
  const TangentVec nrm = unit_normal(j);
  const TangentVec e1 = frame_at(j.point).e1;
  const double c = inner(e1, nrm);
  return TangentVec::at(j.point, e1.vec() - c * nrm.vec());
}

double principal_direction_residual(const JetData& j) {
  const FundamentalForms ff = second_form(j);
  const TangentVec t = tangent_projection_T(j);
  const TangentVec nrm = unit_normal(j);
  const double n3 = to_frame(nrm).c3;
  const Eigen::Matrix2d first = ff.first();
  const Eigen::Vector2d coeff =
      first.ldlt().solve(Eigen::Vector2d(inner(t, j.fu), inner(t, j.fv)));
  const Eigen::Matrix2d a = first.inverse() * ff.second();
  const Eigen::Vector2d r = (a + n3 * Eigen::Matrix2d::Identity()) * coeff;
  return std::sqrt(std::max(0.0, r.dot(first * r)));
}

ParamSurface perturb_z(const ParamSurface& s, double eps) {
  ParamSurface out = s;
  out.name = s.name + "+perturb_z";
  auto base_map = s.map;
  out.map = [base_map, eps](double u, double v) {
    Point3 p = base_map(u, v);
    p.z += eps * std::sin(u);
    return p;
  };
  if (s.partials) {
    auto base = s.partials;
    out.partials = [base, eps](double u, double v) {
      SurfacePartials p = base(u, v);
      p.fu.z() += eps * std::cos(u);
      p.fuu.z() -= eps * std::sin(u);
      return p;
    };
  }
  return out;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

VerificationReport verify_surface(const ParamSurface& s, const GridSpec& grid,
                                  const Expectations& expect, const Tolerances& tol,
                                  const VerifyOptions& opts) {
  if (grid.m < 1 || grid.n < 1) throw DomainError("verify_surface: empty grid");
  VerificationReport rep;
  rep.surface = s.name;
  rep.m = grid.m;
  rep.n = grid.n;
  rep.fd_jets = !s.has_analytic_partials() || opts.jet.force_fd;

  auto make = [](const char* name, double t) {
    CheckResult c;
    c.name = name;
    c.tolerance = t;
    return c;
  };
  CheckResult regular = make("regularity", 0.0);
  CheckResult angle = make("constant_angle", tol.constant_angle);
  CheckResult tnorm = make("tangent_norm", tol.tangent_norm);
  CheckResult pdir = make("principal_direction", tol.principal_direction);
  CheckResult selfadj = make("self_adjoint", tol.self_adjoint);
  CheckResult routes = make("curvature_routes", tol.curvature_routes);
  CheckResult kcheck = make("gauss_curvature", tol.gauss_curvature);
  CheckResult hcheck = make("mean_curvature", tol.mean_curvature);
  CheckResult pcheck = make("principal_curvatures", tol.principal_curvatures);

  std::optional<double> cos_ref;
  if (expect.theta) cos_ref = std::cos(*expect.theta);
  int degenerate = 0;

  for (int i = 0; i < grid.m; ++i) {
    for (int k = 0; k < grid.n; ++k) {
      const double u = s.domain.u_at(i, grid.m);
      const double v = s.domain.v_at(k, grid.n);
      try {
        const JetData j = jet(s, u, v, opts.jet);
        const FundamentalForms ff = second_form(j);
        const TangentVec nrm = unit_normal(j);
        const double c1 = to_frame(nrm).c1;
        if (!cos_ref) cos_ref = c1;
        track(angle, std::abs(c1 - *cos_ref), u, v);

        const TangentVec t = tangent_projection_T(j);
        track(tnorm, std::abs(inner(t, t) - (1.0 - *cos_ref * *cos_ref)), u, v);
        track(pdir, principal_direction_residual(j), u, v);

        const Eigen::Matrix2d ia = ff.first() * (ff.first().inverse() * ff.second());
        const double scale = std::max(1.0, ia.cwiseAbs().maxCoeff());
        track(selfadj, std::abs(ia(0, 1) - ia(1, 0)) / scale, u, v);

        const double k_gauss = gauss_curvature(j);
        double k_ref = k_gauss;
        if (opts.intrinsic_curvature) {
          const double k_intr = intrinsic_curvature(s, u, v, opts.curvature);
          track(routes, std::abs(k_gauss - k_intr), u, v);
          k_ref = k_intr;
        }
        if (expect.gauss_curvature) {
          track(kcheck, std::abs(k_ref - expect.gauss_curvature(u, v)), u, v);
        }
        const ShapeOperator2 a{ff.first().inverse() * ff.second(), TangentBasis::kCoordinate};
        if (expect.mean_curvature) {
          track(hcheck, std::abs(0.5 * a.matrix.trace() - expect.mean_curvature(u, v)), u, v);
        }
        if (expect.principal_curvatures) {
          auto want = expect.principal_curvatures(u, v);
          std::sort(want.begin(), want.end());
          const auto got = a.principal_curvatures();
          track(pcheck, std::max(std::abs(got[0] - want[0]), std::abs(got[1] - want[1])), u, v);
        }
      } catch (const Error&) {
        if (degenerate == 0) {
          regular.at_u = u;
          regular.at_v = v;
        }
        ++degenerate;
      }
    }
  }

  regular.max_residual = degenerate;
  rep.checks.push_back(regular);
  rep.checks.push_back(angle);
  rep.checks.push_back(tnorm);
  rep.checks.push_back(pdir);
  rep.checks.push_back(selfadj);
  if (opts.intrinsic_curvature) rep.checks.push_back(routes);
  if (expect.gauss_curvature) rep.checks.push_back(kcheck);
  if (expect.mean_curvature) rep.checks.push_back(hcheck);
  if (expect.principal_curvatures) rep.checks.push_back(pcheck);
  for (auto& c : rep.checks) {
    c.passed = !std::isnan(c.max_residual) && c.max_residual <= c.tolerance;
  }
  return rep;
}

}  // namespace solsurf
