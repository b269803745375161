#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "solsurf/error.hpp"
#include "solsurf/families.hpp"

namespace solsurf {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(AdaptedFrame, IsOrthonormalAndPositive) {
  for (double theta : {0.0, 0.4, kPi / 3, kPi / 2, 2.5}) {
    for (double alpha : {-2.0, -0.3, 0.0, 1.1, 3.0}) {
      const AdaptedFrame f = AdaptedFrame::make(theta, std::sin(alpha), std::cos(alpha));
      EXPECT_LT(f.orthonormality_defect(), 1e-15);
      EXPECT_NEAR(f.N.c1, std::cos(theta), 1e-15);
      EXPECT_NEAR(f.E2.c1, 0.0, 0.0);
      const FrameVec n = cross(f.E1, f.E2);
      EXPECT_NEAR((n - f.N).vec().norm(), 0.0, 1e-15);
    }
  }
}

TEST(AlphaProfile, NamedProfiles) {
  const auto lin = AlphaProfile::linear({-3, 3});
  EXPECT_EQ(lin(0.7), 0.7);
  EXPECT_EQ(lin.derivative(0.7), 1.0);
  const auto quad = AlphaProfile::quadratic();
  EXPECT_DOUBLE_EQ(quad(0.5), 0.25);
  EXPECT_DOUBLE_EQ(quad.derivative(0.5), 1.0);
  const auto ac = AlphaProfile::arccos({-0.5, 0.5});
  EXPECT_NEAR(ac(0.3), std::acos(0.3), 1e-15);
  EXPECT_NEAR(ac.derivative(0.3), -1 / std::sqrt(1 - 0.09), 1e-14);
  EXPECT_EQ(ac.natural_domain().lo, -1.0);
  const auto um = AlphaProfile::umbilic();
  EXPECT_NEAR(um(0.0), kPi / 2, 1e-15);
  for (double s : {-0.8, 0.1, 0.9}) {
    EXPECT_NEAR(um(s), 2 * std::atan(std::exp(2 * s)), 1e-15);
    EXPECT_NEAR(um.derivative(s), 2 / std::cosh(2 * s), 1e-14);
  }
  EXPECT_TRUE(AlphaProfile::constant(0.4).is_constant());
  EXPECT_FALSE(lin.is_constant());
}

TEST(AlphaProfile, FromSpec) {
  const numerics::Interval d{-1, 1};
  EXPECT_EQ(AlphaProfile::from_spec("linear", d).kind(), AlphaProfile::Kind::kLinear);
  EXPECT_EQ(AlphaProfile::from_spec("umbilic", d).kind(), AlphaProfile::Kind::kUmbilic);
  const auto c = AlphaProfile::from_spec("constant:0.25", d);
  EXPECT_EQ(c.kind(), AlphaProfile::Kind::kConstant);
  EXPECT_EQ(c(0.9), 0.25);
  EXPECT_EQ(AlphaProfile::from_spec("constant=pi/4", d)(0.0), kPi / 4);
  const auto e = AlphaProfile::from_spec("s^3", d);
  EXPECT_EQ(e.kind(), AlphaProfile::Kind::kExpression);
  EXPECT_DOUBLE_EQ(e.derivative(0.5), 0.75);
  EXPECT_THROW(AlphaProfile::from_spec("arccos", {-1.5, 1.0}), DomainError);
  EXPECT_THROW(AlphaProfile::from_spec("sin(", d), expr::ParseError);
}

TEST(Leaf, Map) {
  const ParamSurface s = surface_leaf_h2(2.0, {-1, 1, -1, 1});
  const Point3 p = s.map(0.3, -0.4);
  EXPECT_EQ(p, (Point3{2.0, 0.3, -0.4}));
}

TEST(Prop24, ClosedForms) {
  for (double theta : {0.3, kPi / 3, 1.4}) {
    const ParamSurface s = surface_prop24(theta);
    const double c = std::cos(theta), sn = std::sin(theta);
    const Point3 p = s.map(0.5, 0.2);
    EXPECT_NEAR(p.x, std::tan(theta) * std::exp(0.5 * c), 1e-15);
    EXPECT_EQ(p.y, 0.2);
    EXPECT_NEAR(p.z, -0.5 * c, 1e-15);
    for (double u : {-0.9, 0.0, 0.8}) {
      for (double v : {-0.5, 0.6}) {
        const JetData j = jet(s, u, v);
        EXPECT_NEAR(angle_of(j), theta, 1e-12);
        EXPECT_NEAR(gauss_curvature(j), -c * c, 1e-12);
        EXPECT_NEAR(mean_curvature(j), 0.0, 1e-12);
        const auto k = shape_operator(j).principal_curvatures();
        EXPECT_NEAR(k[0], -sn, 1e-12);
        EXPECT_NEAR(k[1], sn, 1e-12);
        EXPECT_NEAR(intrinsic_curvature(s, u, v), -c * c, 1e-7);
      }
    }
  }
}

TEST(Prop24, RejectsExcludedAngles) {
  EXPECT_THROW(surface_prop24(0.0), DomainError);
  EXPECT_THROW(surface_prop24(kPi / 2), DomainError);
  EXPECT_THROW(surface_prop24(2.0), DomainError);
  EXPECT_THROW(surface_prop24(-0.2), DomainError);
}

TEST(Cylinder, ConstantAlphaClosedForm) {
  // alpha = a0 gives chi = u cos(a0), phi = tan(a0) (e^{u cos(a0)} - 1).
  const double a0 = 0.6;
  CylinderOptions opts;
  opts.baseline = 0.0;
  const ParamSurface s = surface_cylinder_theta_half(AlphaProfile::constant(a0), opts);
  for (double u : {-1.0, -0.3, 0.0, 0.55, 1.0}) {
    const Point3 p = s.map(u, 0.25);
    EXPECT_EQ(p.x, 0.25);
    EXPECT_NEAR(p.z, u * std::cos(a0), 1e-12);
    EXPECT_NEAR(p.y, std::tan(a0) * (std::exp(u * std::cos(a0)) - 1), 1e-12);
  }
}

TEST(Cylinder, LinearAlphaGivesSine) {
  CylinderOptions opts;
  opts.baseline = 0.0;
  const ParamSurface s = surface_cylinder_theta_half(AlphaProfile::linear({-3, 3}), opts);
  for (double u : {-3.0, -1.2, 0.0, 2.0, 3.0}) EXPECT_NEAR(s.map(u, 0).z, std::sin(u), 1e-12);
}

TEST(Cylinder, DefaultBaselineIsLeftEnd) {
  const ParamSurface s = surface_cylinder_theta_half(AlphaProfile::linear({-2, 2}));
  for (double u : {-2.0, 0.0, 1.5}) {
    EXPECT_NEAR(s.map(u, 0).z, std::sin(u) - std::sin(-2.0), 1e-12);
  }
  EXPECT_NEAR(s.map(-2.0, 0).y, 0.0, 1e-15);
}

TEST(Cylinder, ConstantAngleAndSigma) {
  const auto prof = AlphaProfile::quadratic({-1.5, 1.5});
  const ParamSurface s = surface_cylinder_theta_half(prof);
  for (double u : {-1.4, -0.2, 0.9}) {
    const JetData j = jet(s, u, 0.5);
    EXPECT_NEAR(angle_of(j), kPi / 2, 1e-12);
    const double sig = cylinder_sigma(prof, u);
    EXPECT_NEAR(sig, std::sin(u * u) - 2 * u, 1e-14);
    const double sa = std::sin(u * u);
    // det A plus the ambient sectional curvature 2 n3^2 - 1, n3 = +-sin(alpha).
    EXPECT_NEAR(gauss_curvature(j), -sa * sig + 2 * sa * sa - 1, 1e-9);
  }
}

TEST(Cylinder, Residuals) {
  for (const char* spec : {"linear", "quadratic", "umbilic", "constant:0.3"}) {
    const auto prof = AlphaProfile::from_spec(spec, {-1, 1});
    const ParamSurface s = surface_cylinder_theta_half(prof);
    for (const Residual& r : cylinder_residuals(prof, s)) {
      EXPECT_LT(r.max_residual, 1e-8) << spec << " " << r.name;
    }
  }
}

TEST(Cylinder, ProfileCurveMatchesSurface) {
  const auto prof = AlphaProfile::linear({-1, 1});
  const ProfileCurve c = cylinder_profile_curve(prof, 11);
  const ParamSurface s = surface_cylinder_theta_half(prof);
  ASSERT_EQ(c.points.size(), 11u);
  EXPECT_EQ(c.u.front(), -1.0);
  EXPECT_EQ(c.u.back(), 1.0);
  for (std::size_t i = 0; i < c.u.size(); ++i) {
    const Point3 p = s.map(c.u[i], 0.0);
    EXPECT_EQ(c.points[i].x, 0.0);
    EXPECT_NEAR(c.points[i].y, p.y, 1e-15);
    EXPECT_NEAR(c.points[i].z, p.z, 1e-15);
  }
}

TEST(Minimality, Classification) {
  const auto leaf = classify_minimal(FamilyKind::kLeaf, surface_leaf_h2(0.0));
  EXPECT_TRUE(leaf.minimal);
  EXPECT_TRUE(leaf.witness_agrees);
  const auto p24 = classify_minimal(FamilyKind::kProp24, surface_prop24(1.0));
  EXPECT_TRUE(p24.minimal);
  EXPECT_TRUE(p24.witness_agrees);
  const auto cst = AlphaProfile::constant(0.7);
  const auto cc = classify_minimal(FamilyKind::kCylinder, surface_cylinder_theta_half(cst), &cst);
  EXPECT_TRUE(cc.minimal);
  EXPECT_TRUE(cc.witness_agrees);
  const auto lin = AlphaProfile::linear();
  const auto cl = classify_minimal(FamilyKind::kCylinder, surface_cylinder_theta_half(lin), &lin);
  EXPECT_FALSE(cl.minimal);
  EXPECT_TRUE(cl.witness_agrees);
  EXPECT_GT(cl.max_abs_h, 0.1);
  const auto gen = classify_minimal(FamilyKind::kGeneral, surface_general({}));
  EXPECT_FALSE(gen.minimal);
  EXPECT_TRUE(gen.witness_agrees);
  EXPECT_THROW(classify_minimal(FamilyKind::kCylinder, surface_leaf_h2(0.0)), DomainError);
}

}  // namespace
}  // namespace solsurf
