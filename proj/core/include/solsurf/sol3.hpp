#pragma once

// The ambient space: Sol3 realised as R^3 with metric
//   e^{2z} dx^2 + e^{-2z} dy^2 + dz^2
// and group law (x,y,z)*(x',y',z') = (x + e^{-z} x', y + e^{z} y', z + z').

#include <array>
#include <vector>

#include <Eigen/Core>

namespace solsurf {

/// Point of Sol3 in the canonical (x, y, z) chart.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  static Point3 from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

  friend bool operator==(const Point3&, const Point3&) = default;
};

/// Components in the orthonormal left-invariant frame {e1, e2, e3}.
/// The frame is orthonormal, so the Euclidean operations below are the
/// ambient ones.
struct FrameVec {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  Eigen::Vector3d vec() const { return {c1, c2, c3}; }
  static FrameVec from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

  friend FrameVec operator+(const FrameVec& a, const FrameVec& b) {
    return {a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
  }
  friend FrameVec operator-(const FrameVec& a, const FrameVec& b) {
    return {a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3};
  }
  friend FrameVec operator*(double s, const FrameVec& a) {
    return {s * a.c1, s * a.c2, s * a.c3};
  }
  friend bool operator==(const FrameVec&, const FrameVec&) = default;
};

double dot(const FrameVec& a, const FrameVec& b);
FrameVec cross(const FrameVec& a, const FrameVec& b);
double norm(const FrameVec& a);

/// Tangent vector at `base`, components in the coordinate basis
/// {d/dx, d/dy, d/dz}. Lengths and angles only make sense through the
/// metric at `base`.
struct TangentVec {
  Point3 base;
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;

  Eigen::Vector3d vec() const { return {cx, cy, cz}; }
  static TangentVec at(const Point3& p, const Eigen::Vector3d& c) {
    return {p, c.x(), c.y(), c.z()};
  }
};

Point3 group_mul(const Point3& p, const Point3& q);
Point3 group_inverse(const Point3& p);

/// Jacobian of left translation q -> p * q (independent of q).
Eigen::Matrix3d left_translation_differential(const Point3& p);

/// diag(e^{2z}, e^{-2z}, 1).
Eigen::Matrix3d metric_at(const Point3& p);

/// Throws BasePointMismatch when the base points differ.
double inner(const TangentVec& u, const TangentVec& v);
double norm(const TangentVec& u);

struct Frame {
  TangentVec e1;
  TangentVec e2;
  TangentVec e3;
};

/// e1 = e^{-z} d/dx, e2 = e^{z} d/dy, e3 = d/dz at p.
Frame frame_at(const Point3& p);

// Frame <-> coordinate conversion. These are the only places where the
// e^{+-z} factors enter.
TangentVec to_coords(const Point3& base, const FrameVec& f);
FrameVec to_frame(const TangentVec& t);

/// Levi-Civita connection on the frame: nabla_{e_i} e_j for i, j in 1..3.
/// Throws std::out_of_range for other indices.
FrameVec nabla_frame(int i, int j);

/// nabla_X Y for left-invariant fields with constant frame components.
FrameVec nabla_left_invariant(const FrameVec& x, const FrameVec& y);

/// Sectional curvature of the plane spanned by x and y (frame components).
/// Computed from the connection table; used for the Gauss-equation route
/// to intrinsic curvature.
double sectional_curvature(const FrameVec& x, const FrameVec& y);

/// Christoffel symbols of the chart, indexed [k][i][j] for Gamma^k_{ij},
/// with (0, 1, 2) = (x, y, z).
using Christoffel = std::array<std::array<std::array<double, 3>, 3>, 3>;
Christoffel christoffel_coords(const Point3& p);

/// Gamma^k_{ij} a^i b^j at p.
Eigen::Vector3d christoffel_contract(const Point3& p, const Eigen::Vector3d& a,
                                     const Eigen::Vector3d& b);

/// Covariant derivative of a vector field Y along a curve with velocity `a`,
/// given the coordinate derivative `dY` of Y along that curve.
TangentVec covariant_derivative(const Point3& p, const Eigen::Vector3d& a,
                                const Eigen::Vector3d& y, const Eigen::Vector3d& dy);

/// Element of the isometry group. Unswapped elements act as
///   (x, y, z) -> (sx e^{-c} x + a, sy e^{c} y + b, z + c),
/// swapped ones as
///   (x, y, z) -> (sx e^{-c} y + a, sy e^{c} x + b, -z + c).
/// The z-reversal on the swapped branch is what makes the x <-> y exchange
/// an isometry.
struct IsometryElem {
  bool swap = false;
  int sx = 1;
  int sy = 1;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  static IsometryElem identity() { return {}; }
  friend bool operator==(const IsometryElem&, const IsometryElem&) = default;
};

Point3 isometry_apply(const IsometryElem& iso, const Point3& p);

/// Constant Jacobian of the isometry.
Eigen::Matrix3d isometry_differential(const IsometryElem& iso);

/// (g o h)(p) = g(h(p)).
IsometryElem compose(const IsometryElem& g, const IsometryElem& h);
IsometryElem inverse(const IsometryElem& g);

/// The eight isometries fixing the origin (a dihedral group of order 8).
std::vector<IsometryElem> isotropy_group();

}  // namespace solsurf
