#pragma once

// Extrinsic geometry of a parametric surface F(u, v) immersed in Sol3.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "solsurf/sol3.hpp"

namespace solsurf {

struct ParamDomain {
  double u0 = -1.0;
  double u1 = 1.0;
  double v0 = -1.0;
  double v1 = 1.0;

  bool contains(double u, double v) const { return u >= u0 && u <= u1 && v >= v0 && v <= v1; }
  double u_at(int i, int m) const { return lerp(u0, u1, i, m); }
  double v_at(int j, int n) const { return lerp(v0, v1, j, n); }

  /// i-th of m evenly spaced samples; the last one is exactly hi.
  static double lerp(double lo, double hi, int i, int m) {
    if (m == 1) return 0.5 * (lo + hi);
    return i + 1 == m ? hi : lo + (hi - lo) * i / (m - 1);
  }
};

/// Coordinate partial derivatives of F.
struct SurfacePartials {
  Eigen::Vector3d fu = Eigen::Vector3d::Zero();
  Eigen::Vector3d fv = Eigen::Vector3d::Zero();
  Eigen::Vector3d fuu = Eigen::Vector3d::Zero();
  Eigen::Vector3d fuv = Eigen::Vector3d::Zero();
  Eigen::Vector3d fvv = Eigen::Vector3d::Zero();
};

/// A parametric immersion. `map` must be evaluable slightly beyond `domain`
/// (finite-difference stencils reach past its edges).
struct ParamSurface {
  std::string name;
  std::function<Point3(double, double)> map;
  std::function<SurfacePartials(double, double)> partials;  // optional
  ParamDomain domain;

  bool has_analytic_partials() const { return static_cast<bool>(partials); }
};

struct JetOptions {
  double fd_step = 1e-5;          // first partials, scaled by max(1, |u|)
  double fd_step_second = 1e-4;   // second partials
  bool richardson = false;
  bool force_fd = false;          // ignore analytic partials
};

struct JetData {
  Point3 point;
  TangentVec fu;
  TangentVec fv;
  Eigen::Vector3d fuu = Eigen::Vector3d::Zero();
  Eigen::Vector3d fuv = Eigen::Vector3d::Zero();
  Eigen::Vector3d fvv = Eigen::Vector3d::Zero();
  bool analytic = false;
};

/// Throws DomainError outside the domain and DegenerateJet where F fails to
/// be an immersion.
JetData jet(const ParamSurface& s, double u, double v, const JetOptions& opts = {});

struct FundamentalForms {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;
  double L = 0.0;
  double M = 0.0;
  double N = 0.0;

  Eigen::Matrix2d first() const;
  Eigen::Matrix2d second() const;
  double first_det() const { return E * G - F * F; }
};

enum class TangentBasis { kCoordinate, kOrthonormal };

/// Weingarten map A = I^{-1} II, defined by nabla_X N = -A X.
struct ShapeOperator2 {
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Zero();
  TangentBasis basis = TangentBasis::kCoordinate;
  /// Ascending principal curvatures.
  std::array<double, 2> principal_curvatures() const;
};

/// Unit normal oriented so that (Fu, Fv, N) is positive w.r.t. the ambient
/// volume form, i.e. agrees with (e1, e2, e3).
TangentVec unit_normal(const JetData& j);

/// First and second fundamental forms; II uses the ambient covariant
/// derivative of the coordinate partials.
FundamentalForms second_form(const JetData& j);

ShapeOperator2 shape_operator(const JetData& j);

/// Shape operator in the orthonormal basis {Fu/|Fu|, unit vector completing it}.
ShapeOperator2 shape_operator_orthonormal(const JetData& j);

/// det A. This is not the intrinsic curvature: the ambient space is curved.
double extrinsic_curvature(const JetData& j);

/// Intrinsic curvature through the Gauss equation: det A plus the ambient
/// sectional curvature of the tangent plane.
double gauss_curvature(const JetData& j);

/// H = trace(A) / 2.
double mean_curvature(const JetData& j);

struct CurvatureOptions {
  double step = 2e-3;     // with analytic partials
  double fd_step = 2e-2;  // with finite-difference jets
  JetOptions jet;
};

/// Intrinsic curvature from the induced metric alone (Brioschi formula),
/// fourth-order differences of E, F, G around (u, v).
double intrinsic_curvature(const ParamSurface& s, double u, double v,
                           const CurvatureOptions& opts = {});

/// Angle in [0, pi] between the oriented normal and e1.
double angle_of(const JetData& j);
double angle_field(const ParamSurface& s, double u, double v, const JetOptions& opts = {});

/// T = e1 - <e1, N> N.
TangentVec tangent_projection_T(const JetData& j);

/// |A T + <N, e3> T| measured with the ambient metric.
double principal_direction_residual(const JetData& j);

/// F + (0, 0, eps sin u), carrying analytic partials through when present.
ParamSurface perturb_z(const ParamSurface& s, double eps);

// --- Verification -----------------------------------------------------------

struct GridSpec {
  int m = 50;
  int n = 50;
};

struct Tolerances {
  double constant_angle = 1e-9;
  double tangent_norm = 1e-9;
  double principal_direction = 1e-8;
  double self_adjoint = 1e-9;
  double curvature_routes = 1e-5;
  double gauss_curvature = 1e-5;
  double mean_curvature = 1e-8;
  double principal_curvatures = 1e-6;
};

/// Targets the surface is checked against. Unset fields skip their check;
/// without a theta the angle at the first grid point is the reference.
struct Expectations {
  std::optional<double> theta;
  std::function<double(double, double)> gauss_curvature;
  std::function<double(double, double)> mean_curvature;
  std::function<std::array<double, 2>(double, double)> principal_curvatures;
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  double at_u = 0.0;
  double at_v = 0.0;
};

struct VerificationReport {
  std::string surface;
  int m = 0;
  int n = 0;
  bool fd_jets = false;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
  JetOptions jet;
  CurvatureOptions curvature;
  bool intrinsic_curvature = true;  // Brioschi route (the expensive part)
};

/// Max residual of every invariant over an m x n grid spanning the domain.
/// Never throws for geometric failures: degenerate points are counted in the
/// "regularity" check.
VerificationReport verify_surface(const ParamSurface& s, const GridSpec& grid,
                                  const Expectations& expect, const Tolerances& tol = {},
                                  const VerifyOptions& opts = {});

}  // namespace solsurf
