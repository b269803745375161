#pragma once

// Constant-angle surfaces in Sol3: the normal makes a constant angle theta
// with e1. Generators for every family of the classification together with
// the field equations that tie the adapted-frame angle alpha, the principal
// curvature sigma and the ratio p = a / b.

#include <array>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "solsurf/numerics.hpp"
#include "solsurf/scalar_function.hpp"
#include "solsurf/sol3.hpp"
#include "solsurf/surface.hpp"

namespace solsurf {

/// Tangent/normal frame {E1, E2, N} written in {e1, e2, e3}:
///   E1 = sin(theta) e1 + cos(theta) cos(alpha) e2 - cos(theta) sin(alpha) e3
///   E2 =                 sin(alpha) e2            + cos(alpha) e3
///   N  = cos(theta) e1 - sin(theta) cos(alpha) e2 + sin(theta) sin(alpha) e3
struct AdaptedFrame {
  double theta = 0.0;
  double alpha = 0.0;
  FrameVec E1;
  FrameVec E2;
  FrameVec N;

  static AdaptedFrame make(double theta, double sin_alpha, double cos_alpha);
  /// Max deviation of {E1, E2, N} from an orthonormal, positively oriented basis.
  double orthonormality_defect() const;
};

/// Angle profile alpha(s) of the theta = pi/2 cylinders.
class AlphaProfile {
 public:
  enum class Kind { kConstant, kLinear, kQuadratic, kArccos, kUmbilic, kExpression };

  static AlphaProfile constant(double alpha0, numerics::Interval domain = {-1.0, 1.0});
  static AlphaProfile linear(numerics::Interval domain = {-1.0, 1.0});      // alpha(s) = s
  static AlphaProfile quadratic(numerics::Interval domain = {-1.0, 1.0});   // alpha(s) = s^2
  /// alpha(s) = arccos(s); the domain must lie inside [-1, 1].
  static AlphaProfile arccos(numerics::Interval domain = {-1.0, 1.0});
  /// alpha(s) = 2 arctan(e^{2s}); the totally umbilical cylinder.
  static AlphaProfile umbilic(numerics::Interval domain = {-1.0, 1.0});
  static AlphaProfile expression(std::string_view src, numerics::Interval domain = {-1.0, 1.0});

  /// Parses "constant:<a>", "linear", "quadratic", "arccos", "umbilic", or
  /// falls back to an expression in one variable.
  static AlphaProfile from_spec(std::string_view spec, numerics::Interval domain);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  numerics::Interval domain() const { return domain_; }
  /// Largest interval on which alpha itself is defined.
  numerics::Interval natural_domain() const { return natural_; }
  bool is_constant() const { return fn_.is_constant(); }

  double operator()(double s) const { return fn_(s); }
  double derivative(double s) const { return fn_.d1(s); }
  const ScalarFunction& function() const { return fn_; }

 private:
  AlphaProfile(Kind kind, std::string name, ScalarFunction fn, numerics::Interval domain,
               numerics::Interval natural);

  Kind kind_;
  std::string name_;
  ScalarFunction fn_;
  numerics::Interval domain_;
  numerics::Interval natural_;
};

/// theta = 0: the leaf {x = x0}, F(u, v) = (x0, u, v).
ParamSurface surface_leaf_h2(double x0, ParamDomain domain = {});

struct CylinderOptions {
  double v0 = 0.0;
  double v1 = 1.0;
  int knots = 256;
  numerics::QuadratureConfig quadrature;
  /// Base point u0 of the primitives; defaults to the left end of the profile
  /// domain. Setting 0 makes alpha(s) = s give chi(u) = sin u exactly.
  std::optional<double> baseline;

  double baseline_for(const numerics::Interval& d) const { return baseline.value_or(d.lo); }
};

/// theta = pi/2: the cylinder F(u, v) = (v, phi(u), chi(u)) with
///   chi(u) = int_{u0}^{u} cos(alpha),   phi(u) = int_{u0}^{u} sin(alpha) e^{chi}.
ParamSurface surface_cylinder_theta_half(const AlphaProfile& profile,
                                         const CylinderOptions& opts = {});

/// The plane curve gamma(u) = (0, phi(u), chi(u)) of a cylinder.
struct ProfileCurve {
  std::vector<double> u;
  std::vector<Point3> points;
};
ProfileCurve cylinder_profile_curve(const AlphaProfile& profile, int samples,
                                    const CylinderOptions& opts = {});

/// Closed-form sigma for the cylinders: h(E2, E2) = sigma N with
/// E2(alpha) = sin(alpha) - sigma, i.e. sigma = sin(alpha) - alpha'.
double cylinder_sigma(const AlphaProfile& profile, double u);

/// F(u, v) = (tan(theta) e^{u cos(theta)}, v, -u cos(theta)), theta in (0, pi/2).
ParamSurface surface_prop24(double theta, ParamDomain domain = {});

/// Parameters of the general family F(u, v) = gamma1(v) * gamma2(u).
struct GeneralFamilyParams {
  double theta = std::numbers::pi / 3.0;
  double psi0 = 0.0;
  ScalarFunction zeta = ScalarFunction::affine(0.3, 0.0);
  ScalarFunction xi = ScalarFunction::constant(1.0);
  /// Sign shared by gamma1, gamma2 and b; -1 selects the cos(alpha) < 0 branch.
  int sign = 1;
  /// Overrides the sign used in gamma1 only (for probing sign combinations).
  std::optional<int> gamma1_sign;
  ParamDomain domain{-0.4, 1.2, -1.0, 1.0};
  double v_baseline = 0.0;
  int knots = 256;
  numerics::QuadratureConfig quadrature;

  void validate() const;
};

struct AlphaValues {
  double sin_alpha;
  double cos_alpha;
  double alpha() const;
};

struct CoefficientFields {
  double a;
  double b;
};

/// Branch of the p-equation solution: eps = 0 is p = +-1/(cos(theta) sinh(ubar)),
/// eps = 1 carries the free function Lambda(v).
struct PBranch {
  int eps = 1;
  ScalarFunction lambda;
};

/// Precomputed state of one general-family surface. The cumulative tables for
/// I, J and the gamma1 integrals are built once (padded past the domain so
/// difference stencils stay valid) and then read-only; copies share them.
class GeneralFamily {
 public:
  explicit GeneralFamily(GeneralFamilyParams params);

  const GeneralFamilyParams& params() const;
  double ubar(double u) const;
  /// ubar = 0 in u.
  double u_star() const;

  AlphaValues alpha(double u) const;
  double primitive_I(double u) const;
  double primitive_J(double u) const;
  Point3 gamma1(double v) const;
  Point3 gamma2(double u) const;
  Eigen::Vector3d gamma2_velocity(double u) const;
  ParamSurface surface() const;
  AdaptedFrame adapted_frame(double u) const;

  CoefficientFields coefficient_fields(double u, double v) const;
  /// eps = 1 with Lambda = xi / zeta' where zeta'(v) != 0, else eps = 0.
  PBranch natural_branch() const;
  double p(const PBranch& branch, double u, double v) const;
  double sigma(double u, double v) const;

  numerics::Interval u_table_range() const;
  numerics::Interval v_table_range() const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

// Free-function views on GeneralFamily.
AlphaValues alpha_general(const GeneralFamily& fam, double u);
double primitive_I(const GeneralFamily& fam, double u);
double primitive_J(const GeneralFamily& fam, double u);
Point3 gamma1(const GeneralFamily& fam, double v);
Point3 gamma2(const GeneralFamily& fam, double u);
ParamSurface surface_general(const GeneralFamilyParams& params);
/// Throws SingularityError where the denominator vanishes (and for eps = 0 at
/// ubar = 0).
double p_solution(const GeneralFamily& fam, const PBranch& branch, double u, double v);
double sigma_closed_form(const GeneralFamily& fam, double u, double v);
CoefficientFields coefficient_fields_ab(const GeneralFamily& fam, double u, double v);

/// Rectangle of (u, v) samples for residual checks.
struct EvalWindow {
  double u0 = 0.0;
  double u1 = 1.0;
  double v0 = 0.0;
  double v1 = 1.0;
  int nu = 21;
  int nv = 5;

  static EvalWindow of(const ParamDomain& d, int nu = 21, int nv = 5) {
    return {d.u0, d.u1, d.v0, d.v1, nu, nv};
  }
};

struct Residual {
  std::string name;
  double max_residual = 0.0;
  double at_u = 0.0;
  double at_v = 0.0;
};

/// Max residuals of the field equations of the general family over a window:
/// alpha_cond_a, alpha_cond_b, pde_sigma, sigma_u, pde_p, coeff_system_a,
/// coeff_system_b, m12, frame_decomposition, sigma_measured, h11, h12, and the
/// RK4 oracle rk4_sigma_u.
std::vector<Residual> field_equation_residuals(const GeneralFamily& fam, const EvalWindow& w,
                                               int rk4_steps = 2000);

/// Residual of the p-equation for an arbitrary branch at one point.
double pde_p_residual(const GeneralFamily& fam, const PBranch& branch, double u, double v);

struct AppendixSample {
  double u, v, p, q, A, B;
};

/// Reduction chain p -> q = 1/p -> A = q - cos(theta) sinh(ubar)
/// -> B = A cosh^{-3/2}(ubar), sampled and checked over a window. The chain is
/// evaluated on the cos(alpha) > 0 representative (sign * p).
struct AppendixChain {
  int eps = 1;
  std::vector<AppendixSample> samples;
  double q_ode = 0.0;
  double a_ode = 0.0;
  double b_ode = 0.0;
  double inverse_b = 0.0;      // |1/B - (-I + Lambda)|, eps = 1
  double q_closed_form = 0.0;  // |q - cos(theta) sinh(ubar)|, eps = 0
  double roundtrip = 0.0;      // p rebuilt from B
  double rk4_b = 0.0;          // RK4 on B_u = B^2 cosh^{1/2}(ubar)
  /// Variant of the A-equation with sinh(ubar) in place of tanh(ubar); kept as a
  /// diagnostic, nonzero whenever A != 0.
  double a_ode_sinh_variant = 0.0;
};

/// Throws DomainError if p vanishes in the window, or for eps = 0 if the
/// window straddles ubar = 0.
AppendixChain appendix_chain(const GeneralFamily& fam, const PBranch& branch,
                             const EvalWindow& w, int rk4_steps = 2000);

// --- Residuals specific to the theta = pi/2 cylinders -----------------------

/// E1(alpha) = 0, E2(alpha) = sin(alpha) - sigma measured on the surface,
/// h(E1, E2) = 0, h(E1, E1) = -sin(alpha) N, and the group-product identity
/// F(u, v) = (v, 0, 0) * gamma(u).
std::vector<Residual> cylinder_residuals(const AlphaProfile& profile, const ParamSurface& s,
                                         int nu = 21, int nv = 5);

// --- Minimality --------------------------------------------------------------

enum class FamilyKind { kLeaf, kCylinder, kProp24, kGeneral };

struct MinimalityVerdict {
  bool minimal = false;
  double max_abs_h = 0.0;
  bool witness_agrees = true;  // (max |H| <= tol) == minimal
  std::string reason;
};

/// Minimal exactly for the theta = 0 leaf, theta = pi/2 cylinders with constant
/// alpha, and the surfaces of surface_prop24. The witness is max |H| over the grid.
MinimalityVerdict classify_minimal(FamilyKind kind, const ParamSurface& s,
                                   const AlphaProfile* profile = nullptr,
                                   GridSpec grid = {20, 20}, double tol = 1e-8);

}  // namespace solsurf
