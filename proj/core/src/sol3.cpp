#include "solsurf/sol3.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

#include "solsurf/error.hpp"

namespace solsurf {

double dot(const FrameVec& a, const FrameVec& b) {
  return a.c1 * b.c1 + a.c2 * b.c2 + a.c3 * b.c3;
}

FrameVec cross(const FrameVec& a, const FrameVec& b) {
  return FrameVec::from(a.vec().cross(b.vec()));
}

double norm(const FrameVec& a) { return std::sqrt(dot(a, a)); }

Point3 group_mul(const Point3& p, const Point3& q) {
  return {p.x + std::exp(-p.z) * q.x, p.y + std::exp(p.z) * q.y, p.z + q.z};
}

Point3 group_inverse(const Point3& p) {
  return {-std::exp(p.z) * p.x, -std::exp(-p.z) * p.y, -p.z};
}

Eigen::Matrix3d left_translation_differential(const Point3& p) {
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  d(0, 0) = std::exp(-p.z);
  d(1, 1) = std::exp(p.z);
  d(2, 2) = 1.0;
  return d;
}

Eigen::Matrix3d metric_at(const Point3& p) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  g(0, 0) = std::exp(2.0 * p.z);
  g(1, 1) = std::exp(-2.0 * p.z);
  g(2, 2) = 1.0;
  return g;
}

double inner(const TangentVec& u, const TangentVec& v) {
  if (!(u.base == v.base)) {
    throw BasePointMismatch("inner: tangent vectors live at different base points");
  }
  const double ez2 = std::exp(2.0 * u.base.z);
  return ez2 * u.cx * v.cx + u.cy * v.cy / ez2 + u.cz * v.cz;
}

double norm(const TangentVec& u) { return std::sqrt(inner(u, u)); }

Frame frame_at(const Point3& p) {
  return {{p, std::exp(-p.z), 0.0, 0.0},
          {p, 0.0, std::exp(p.z), 0.0},
          {p, 0.0, 0.0, 1.0}};
}

TangentVec to_coords(const Point3& base, const FrameVec& f) {
  return {base, std::exp(-base.z) * f.c1, std::exp(base.z) * f.c2, f.c3};
}

FrameVec to_frame(const TangentVec& t) {
  return {std::exp(t.base.z) * t.cx, std::exp(-t.base.z) * t.cy, t.cz};
}

FrameVec nabla_frame(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3) {
    throw std::out_of_range("nabla_frame: indices must lie in 1..3");
  }
  // Row i, column j of the connection table.
  static constexpr std::array<std::array<std::array<double, 3>, 3>, 3> kTable{{
      {{{0, 0, -1}, {0, 0, 0}, {1, 0, 0}}},
      {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}},
      {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}},
  }};
  const auto& r = kTable[i - 1][j - 1];
  return {r[0], r[1], r[2]};
}

FrameVec nabla_left_invariant(const FrameVec& x, const FrameVec& y) {
  const std::array<double, 3> xs{x.c1, x.c2, x.c3};
  const std::array<double, 3> ys{y.c1, y.c2, y.c3};
  FrameVec out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double w = xs[i] * ys[j];
      if (w != 0.0) out = out + w * nabla_frame(i + 1, j + 1);
    }
  }
  return out;
}

double sectional_curvature(const FrameVec& x, const FrameVec& y) {
  // R(X,Y)Y = nabla_X nabla_Y Y - nabla_Y nabla_X Y - nabla_[X,Y] Y, exact
  // for left-invariant fields since every term stays left-invariant.
  const FrameVec yy = nabla_left_invariant(y, y);
  const FrameVec xy = nabla_left_invariant(x, y);
  const FrameVec bracket = xy - nabla_left_invariant(y, x);
  const FrameVec r = nabla_left_invariant(x, yy) - nabla_left_invariant(y, xy) -
                     nabla_left_invariant(bracket, y);
  const double area2 = dot(x, x) * dot(y, y) - dot(x, y) * dot(x, y);
  if (area2 <= 0.0) throw DomainError("sectional_curvature: degenerate plane");
  return dot(r, x) / area2;
}

Christoffel christoffel_coords(const Point3& p) {
  Christoffel g{};
  const double e2z = std::exp(2.0 * p.z);
  // k = x
  g[0][0][2] = g[0][2][0] = 1.0;
  // k = y
  g[1][1][2] = g[1][2][1] = -1.0;
  // k = z
  g[2][0][0] = -e2z;
  g[2][1][1] = 1.0 / e2z;
  return g;
}

Eigen::Vector3d christoffel_contract(const Point3& p, const Eigen::Vector3d& a,
                                     const Eigen::Vector3d& b) {
  const double e2z = std::exp(2.0 * p.z);
  return {a.x() * b.z() + a.z() * b.x(),
          -(a.y() * b.z() + a.z() * b.y()),
          -e2z * a.x() * b.x() + a.y() * b.y() / e2z};
}

TangentVec covariant_derivative(const Point3& p, const Eigen::Vector3d& a,
                                const Eigen::Vector3d& y, const Eigen::Vector3d& dy) {
  return TangentVec::at(p, dy + christoffel_contract(p, a, y));
}

Point3 isometry_apply(const IsometryElem& iso, const Point3& p) {
  const double em = std::exp(-iso.c);
  const double ep = std::exp(iso.c);
  if (!iso.swap) {
    return {iso.sx * em * p.x + iso.a, iso.sy * ep * p.y + iso.b, p.z + iso.c};
  }
  return {iso.sx * em * p.y + iso.a, iso.sy * ep * p.x + iso.b, -p.z + iso.c};
}

Eigen::Matrix3d isometry_differential(const IsometryElem& iso) {
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  const double em = std::exp(-iso.c);
  const double ep = std::exp(iso.c);
  if (!iso.swap) {
    d(0, 0) = iso.sx * em;
    d(1, 1) = iso.sy * ep;
    d(2, 2) = 1.0;
  } else {
    d(0, 1) = iso.sx * em;
    d(1, 0) = iso.sy * ep;
    d(2, 2) = -1.0;
  }
  return d;
}

IsometryElem compose(const IsometryElem& g, const IsometryElem& h) {
  IsometryElem r;
  r.swap = g.swap != h.swap;
  if (!g.swap) {
    r.sx = g.sx * h.sx;
    r.sy = g.sy * h.sy;
  } else {
    r.sx = g.sx * h.sy;
    r.sy = g.sy * h.sx;
  }
  const Point3 t = isometry_apply(g, isometry_apply(h, Point3{}));
  r.a = t.x;
  r.b = t.y;
  r.c = t.z;
  return r;
}

IsometryElem inverse(const IsometryElem& g) {
  IsometryElem r;
  r.swap = g.swap;
  if (!g.swap) {
    r.sx = g.sx;
    r.sy = g.sy;
    r.c = -g.c;
    r.a = -g.sx * std::exp(g.c) * g.a;
    r.b = -g.sy * std::exp(-g.c) * g.b;
  } else {
    r.sx = g.sy;
    r.sy = g.sx;
    r.c = g.c;
    r.a = -g.sy * std::exp(-g.c) * g.b;
    r.b = -g.sx * std::exp(g.c) * g.a;
  }
  return r;
}

std::vector<IsometryElem> isotropy_group() {
  std::vector<IsometryElem> out;
  out.reserve(8);
  for (bool swap : {false, true}) {
    for (int sx : {1, -1}) {
      for (int sy : {1, -1}) out.push_back({swap, sx, sy, 0.0, 0.0, 0.0});
    }
  }
  return out;
}

}  // namespace solsurf
