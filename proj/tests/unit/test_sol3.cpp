#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "solsurf/error.hpp"
#include "solsurf/sol3.hpp"

namespace solsurf {
namespace {

const double e = std::exp(1.0);

Point3 random_point(std::mt19937_64& rng, double r = 2.0) {
  std::uniform_real_distribution<double> d(-r, r);
  return {d(rng), d(rng), d(rng)};
}

void expect_point_near(const Point3& a, const Point3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

// Christoffel symbols from central differences of the metric.
Christoffel christoffel_oracle(const Point3& p) {
  const double h = 1e-5;
  std::array<Eigen::Matrix3d, 3> dg;
  for (int l = 0; l < 3; ++l) {
    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    dp[l] = h;
    dg[l] = (metric_at(Point3::from(p.vec() + dp)) - metric_at(Point3::from(p.vec() - dp))) /
            (2.0 * h);
  }
  const Eigen::Matrix3d ginv = metric_at(p).inverse();
  Christoffel g{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) {
          s += 0.5 * ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        }
        g[k][i][j] = s;
      }
  return g;
}

TEST(GroupLaw, NeutralElement) {
  expect_point_near(group_mul({0, 0, 0}, {1.5, -2, 3}), {1.5, -2, 3}, 0.0);
  expect_point_near(group_mul({1, 2, 3}, {0, 0, 0}), {1, 2, 3}, 0.0);
}

TEST(GroupLaw, TranslationByZ) {
  expect_point_near(group_mul({0, 0, 1}, {1, 1, 0}), {1.0 / e, e, 1.0}, 1e-15);
}

TEST(GroupLaw, Inverse) {
  expect_point_near(group_inverse({0, 0, 0}), {0, 0, 0}, 0.0);
  expect_point_near(group_inverse({1, 0, 0}), {-1, 0, 0}, 0.0);
  expect_point_near(group_inverse({1, 1, 1}), {-e, -1.0 / e, -1}, 1e-15);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Point3 p = random_point(rng);
    expect_point_near(group_mul(p, group_inverse(p)), {0, 0, 0}, 1e-12);
    expect_point_near(group_mul(group_inverse(p), p), {0, 0, 0}, 1e-12);
  }
}

TEST(GroupLaw, Associativity) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Point3 p = random_point(rng), q = random_point(rng), r = random_point(rng);
    expect_point_near(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r)), 1e-12);
  }
}

TEST(Metric, Values) {
  EXPECT_TRUE(metric_at({0, 0, 0}).isApprox(Eigen::Matrix3d::Identity()));
  EXPECT_TRUE(metric_at({3, 4, 1}).isApprox(Eigen::Vector3d(e * e, 1 / (e * e), 1).asDiagonal().toDenseMatrix()));
  EXPECT_TRUE(metric_at({0, 0, -1}).isApprox(Eigen::Vector3d(1 / (e * e), e * e, 1).asDiagonal().toDenseMatrix()));
}

TEST(Metric, InnerProduct) {
  const Point3 o{0, 0, 0};
  EXPECT_DOUBLE_EQ(inner(TangentVec{o, 1, 0, 0}, TangentVec{o, 1, 0, 0}), 1.0);
  const Point3 p{0.3, -1, 0.7};
  EXPECT_NEAR(inner(TangentVec{p, 1, 0, 0}, TangentVec{p, 1, 0, 0}), std::exp(1.4), 1e-14);
  EXPECT_THROW(inner(TangentVec{o, 1, 0, 0}, TangentVec{p, 1, 0, 0}), BasePointMismatch);
}

TEST(Frame, OrthonormalEverywhere) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 50; ++n) {
    const Frame f = frame_at(random_point(rng));
    const TangentVec v[3] = {f.e1, f.e2, f.e3};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(inner(v[i], v[j]), i == j ? 1.0 : 0.0, 1e-12);
  }
  const Frame f = frame_at({5, 7, 1});
  EXPECT_NEAR(f.e1.cx, 1.0 / e, 1e-15);
  EXPECT_NEAR(f.e2.cy, e, 1e-15);
}

TEST(Frame, LeftInvariance) {
  std::mt19937_64 rng(4);
  const Frame f0 = frame_at({0, 0, 0});
  for (int n = 0; n < 200; ++n) {
    const Point3 p = random_point(rng);
    // Numeric Jacobian of q -> p * q at the identity.
    Eigen::Matrix3d jac;
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d dq = Eigen::Vector3d::Zero();
      dq[k] = h;
      jac.col(k) = (group_mul(p, Point3::from(dq)).vec() - group_mul(p, Point3::from(-dq)).vec()) /
                   (2 * h);
    }
    EXPECT_TRUE(jac.isApprox(left_translation_differential(p), 1e-9));
    const Frame fp = frame_at(p);
    EXPECT_LT((jac * f0.e1.vec() - fp.e1.vec()).norm(), 1e-8);
    EXPECT_LT((jac * f0.e2.vec() - fp.e2.vec()).norm(), 1e-8);
    EXPECT_LT((jac * f0.e3.vec() - fp.e3.vec()).norm(), 1e-8);
  }
}

TEST(Frame, CoordinateRoundTrip) {
  const Point3 p{0.1, 0.2, -0.8};
  const FrameVec f{0.3, -1.2, 2.0};
  const FrameVec back = to_frame(to_coords(p, f));
  EXPECT_NEAR(back.c1, f.c1, 1e-15);
  EXPECT_NEAR(back.c2, f.c2, 1e-15);
  EXPECT_NEAR(back.c3, f.c3, 1e-15);
  EXPECT_NEAR(norm(to_coords(p, f)), norm(f), 1e-14);
}

TEST(Connection, Table) {
  EXPECT_EQ(nabla_frame(1, 1), (FrameVec{0, 0, -1}));
  EXPECT_EQ(nabla_frame(1, 2), (FrameVec{0, 0, 0}));
  EXPECT_EQ(nabla_frame(1, 3), (FrameVec{1, 0, 0}));
  EXPECT_EQ(nabla_frame(2, 2), (FrameVec{0, 0, 1}));
  EXPECT_EQ(nabla_frame(2, 3), (FrameVec{0, -1, 0}));
  EXPECT_EQ(nabla_frame(3, 1), (FrameVec{0, 0, 0}));
  EXPECT_EQ(nabla_frame(3, 3), (FrameVec{0, 0, 0}));
  EXPECT_THROW(nabla_frame(0, 1), std::out_of_range);
  EXPECT_THROW(nabla_frame(1, 4), std::out_of_range);
}

TEST(Connection, ChristoffelAgainstMetricDifferences) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 50; ++n) {
    const Point3 p = random_point(rng, 1.5);
    const Christoffel a = christoffel_coords(p);
    const Christoffel b = christoffel_oracle(p);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(a[k][i][j], b[k][i][j], 1e-7 * (1 + std::abs(b[k][i][j])));
  }
  EXPECT_DOUBLE_EQ(christoffel_coords({0, 0, 0})[2][0][0], -1.0);
}

TEST(Connection, TableMatchesChristoffels) {
  // nabla_{e_i} e_j through the chart: e_j has position-dependent
  // coordinates, so differentiate them numerically along e_i.
  std::mt19937_64 rng(6);
  for (int n = 0; n < 50; ++n) {
    const Point3 p = random_point(rng);
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        auto field = [&](const Point3& q) {
          const Frame f = frame_at(q);
          return (j == 1 ? f.e1 : j == 2 ? f.e2 : f.e3).vec();
        };
        const Frame fp = frame_at(p);
        const Eigen::Vector3d a = (i == 1 ? fp.e1 : i == 2 ? fp.e2 : fp.e3).vec();
        const double h = 1e-6;
        const Eigen::Vector3d dy =
            (field(Point3::from(p.vec() + h * a)) - field(Point3::from(p.vec() - h * a))) / (2 * h);
        const FrameVec got = to_frame(covariant_derivative(p, a, field(p), dy));
        const FrameVec want = nabla_frame(i, j);
        EXPECT_NEAR(got.c1, want.c1, 1e-8);
        EXPECT_NEAR(got.c2, want.c2, 1e-8);
        EXPECT_NEAR(got.c3, want.c3, 1e-8);
      }
    }
  }
}

TEST(Connection, TorsionFreeAndMetricCompatible) {
  const FrameVec basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  // [e1, e3] = e1, [e2, e3] = -e2, [e1, e2] = 0.
  auto bracket = [](int i, int j) -> FrameVec {
    if (i == 1 && j == 3) return {1, 0, 0};
    if (i == 3 && j == 1) return {-1, 0, 0};
    if (i == 2 && j == 3) return {0, -1, 0};
    if (i == 3 && j == 2) return {0, 1, 0};
    return {0, 0, 0};
  };
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const FrameVec t = nabla_frame(i, j) - nabla_frame(j, i) - bracket(i, j);
      EXPECT_EQ(norm(t), 0.0) << i << j;
      for (int k = 1; k <= 3; ++k) {
        // e_i <e_j, e_k> = 0 = <nabla_i e_j, e_k> + <e_j, nabla_i e_k>
        EXPECT_EQ(dot(nabla_frame(i, j), basis[k - 1]) + dot(basis[j - 1], nabla_frame(i, k)), 0.0);
      }
    }
  }
}

TEST(Connection, SectionalCurvatures) {
  EXPECT_NEAR(sectional_curvature({1, 0, 0}, {0, 1, 0}), 1.0, 1e-15);
  EXPECT_NEAR(sectional_curvature({1, 0, 0}, {0, 0, 1}), -1.0, 1e-15);
  EXPECT_NEAR(sectional_curvature({0, 1, 0}, {0, 0, 1}), -1.0, 1e-15);
  // Plane with unit normal n has curvature 2 n3^2 - 1.
  const FrameVec x{0.6, 0.8, 0.0};
  const FrameVec y{0.0, 0.0, 1.0};
  const FrameVec n = cross(x, y);
  EXPECT_NEAR(sectional_curvature(x, y), 2 * n.c3 * n.c3 - 1, 1e-14);
}

Eigen::Matrix3d numeric_jacobian(const IsometryElem& g, const Point3& p) {
  Eigen::Matrix3d jac;
  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    dp[k] = h;
    jac.col(k) = (isometry_apply(g, Point3::from(p.vec() + dp)).vec() -
                  isometry_apply(g, Point3::from(p.vec() - dp)).vec()) /
                 (2 * h);
  }
  return jac;
}

TEST(Isometry, PullbackPreservesMetric) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int n = 0; n < 300; ++n) {
    IsometryElem g{coin(rng) == 1, coin(rng) ? 1 : -1, coin(rng) ? 1 : -1, d(rng), d(rng), d(rng)};
    const Point3 p = random_point(rng, 1.5);
    const Eigen::Matrix3d jac = numeric_jacobian(g, p);
    EXPECT_TRUE(jac.isApprox(isometry_differential(g), 1e-8));
    const Eigen::Matrix3d pulled =
        jac.transpose() * metric_at(isometry_apply(g, p)) * jac;
    EXPECT_LT((pulled - metric_at(p)).cwiseAbs().maxCoeff(), 1e-7 * metric_at(p).maxCoeff());
  }
}

TEST(Isometry, ComposeAndInverse) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int n = 0; n < 200; ++n) {
    const IsometryElem g{n % 2 == 0, 1, -1, d(rng), d(rng), d(rng)};
    const IsometryElem h{n % 3 == 0, -1, 1, d(rng), d(rng), d(rng)};
    const Point3 p = random_point(rng);
    expect_point_near(isometry_apply(compose(g, h), p), isometry_apply(g, isometry_apply(h, p)),
                      1e-12);
    expect_point_near(isometry_apply(inverse(g), isometry_apply(g, p)), p, 1e-12);
  }
}

TEST(Isometry, IsotropyGroupIsClosedDihedral) {
  const auto grp = isotropy_group();
  ASSERT_EQ(grp.size(), 8u);
  auto contains = [&](const IsometryElem& x) {
    for (const auto& g : grp)
      if (isometry_differential(g).isApprox(isometry_differential(x)) && x.a == 0 && x.b == 0 &&
          x.c == 0)
        return true;
    return false;
  };
  int involutions = 0;
  for (const auto& g : grp) {
    EXPECT_EQ(isometry_apply(g, {0, 0, 0}), (Point3{0, 0, 0}));
    for (const auto& h : grp) EXPECT_TRUE(contains(compose(g, h)));
    if (!(g == IsometryElem::identity()) && compose(g, g) == IsometryElem::identity()) ++involutions;
  }
  EXPECT_EQ(involutions, 5);  // D4: four reflections and the half-turn
}

TEST(Isometry, ListedCandidatesChecked) {
  // The eight listed maps fixing the origin; (y, x, z) is the odd one out.
  struct Cand {
    const char* label;
    Eigen::Matrix3d m;
    bool isometry;
  };
  auto mat = [](std::initializer_list<double> v) {
    Eigen::Matrix3d m;
    auto it = v.begin();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = *it++;
    return m;
  };
  const Cand cands[] = {
      {"(y,-x,-z)", mat({0, 1, 0, -1, 0, 0, 0, 0, -1}), true},
      {"(-x,y,z)", mat({-1, 0, 0, 0, 1, 0, 0, 0, 1}), true},
      {"(-x,-y,z)", mat({-1, 0, 0, 0, -1, 0, 0, 0, 1}), true},
      {"(-y,x,-z)", mat({0, -1, 0, 1, 0, 0, 0, 0, -1}), true},
      {"(y,x,-z)", mat({0, 1, 0, 1, 0, 0, 0, 0, -1}), true},
      {"(y,x,z)", mat({0, 1, 0, 1, 0, 0, 0, 0, 1}), false},
      {"(x,-y,z)", mat({1, 0, 0, 0, -1, 0, 0, 0, 1}), true},
  };
  std::mt19937_64 rng(9);
  const auto grp = isotropy_group();
  for (const Cand& c : cands) {
    double defect = 0.0;
    for (int n = 0; n < 20; ++n) {
      const Point3 p = random_point(rng);
      const Eigen::Matrix3d pulled =
          c.m.transpose() * metric_at(Point3::from(c.m * p.vec())) * c.m;
      defect = std::max(defect, (pulled - metric_at(p)).cwiseAbs().maxCoeff());
    }
    EXPECT_EQ(defect < 1e-12, c.isometry) << c.label;
    bool member = false;
    for (const auto& g : grp) member = member || isometry_differential(g) == c.m;
    EXPECT_EQ(member, c.isometry) << c.label;
  }
}

}  // namespace
}  // namespace solsurf
