#include "output.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace solsurf::cli {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

MeshGrid sample_grid(const ParamSurface& s, const GridSpec& grid) {
  MeshGrid g;
  g.m = grid.m;
  g.n = grid.n;
  for (int i = 0; i < grid.m; ++i) g.u.push_back(s.domain.u_at(i, grid.m));
  for (int k = 0; k < grid.n; ++k) g.v.push_back(s.domain.v_at(k, grid.n));
  g.points.reserve(static_cast<std::size_t>(grid.m) * grid.n);
  for (double u : g.u) {
    for (double v : g.v) g.points.push_back(s.map(u, v));
  }
  return g;
}

void write_obj(std::ostream& os, const MeshGrid& mesh, const std::string& comment,
               bool triangles) {
  if (!comment.empty()) os << "# " << comment << '\n';
  for (const Point3& p : mesh.points) {
    os << "v " << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z)
       << '\n';
  }
  const auto idx = [&](int i, int k) { return i * mesh.n + k + 1; };
  for (int i = 0; i + 1 < mesh.m; ++i) {
    for (int k = 0; k + 1 < mesh.n; ++k) {
      const int a = idx(i, k), b = idx(i + 1, k), c = idx(i + 1, k + 1), d = idx(i, k + 1);
      if (triangles) {
        os << "f " << a << ' ' << b << ' ' << c << '\n';
        os << "f " << a << ' ' << c << ' ' << d << '\n';
      } else {
        os << "f " << a << ' ' << b << ' ' << c << ' ' << d << '\n';
      }
    }
  }
}

void write_csv(std::ostream& os, const ParamSurface& s, const GridSpec& grid,
               const JetOptions& jopt) {
  os << "u,v,x,y,z,theta,K,H\n";
  const double nan = std::nan("");
  for (int i = 0; i < grid.m; ++i) {
    for (int k = 0; k < grid.n; ++k) {
      const double u = s.domain.u_at(i, grid.m);
      const double v = s.domain.v_at(k, grid.n);
      const Point3 p = s.map(u, v);
      double theta = nan, kk = nan, hh = nan;
      try {
        const JetData j = jet(s, u, v, jopt);
        theta = angle_of(j);
        kk = gauss_curvature(j);
        hh = mean_curvature(j);
      } catch (const Error&) {
      }
      os << format_double(u) << ',' << format_double(v) << ',' << format_double(p.x) << ','
         << format_double(p.y) << ',' << format_double(p.z) << ',' << format_double(theta) << ','
         << format_double(kk) << ',' << format_double(hh) << '\n';
    }
  }
}

void write_curve_csv(std::ostream& os, const ProfileCurve& curve) {
  os << "u,x,y,z\n";
  for (std::size_t i = 0; i < curve.u.size(); ++i) {
    const Point3& p = curve.points[i];
    os << format_double(curve.u[i]) << ',' << format_double(p.x) << ',' << format_double(p.y)
       << ',' << format_double(p.z) << '\n';
  }
}

void write_report(std::ostream& os, const VerificationReport& rep) {
  os << "surface " << rep.surface << '\n';
  os << "grid " << rep.m << 'x' << rep.n << '\n';
  os << "jets " << (rep.fd_jets ? "finite-difference" : "analytic") << '\n';
  for (const CheckResult& c : rep.checks) {
    os << "check " << c.name << " max=" << format_double(c.max_residual)
       << " tol=" << format_double(c.tolerance) << " at=(" << format_double(c.at_u) << ','
       << format_double(c.at_v) << ") " << (c.passed ? "PASS" : "FAIL") << '\n';
  }
  os << "result " << (rep.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace solsurf::cli
