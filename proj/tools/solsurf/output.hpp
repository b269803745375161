#pragma once

// Deterministic text writers: OBJ meshes, CSV samples, verification reports.
// Every number goes through format_double (shortest round-trip form).

#include <ostream>
#include <string>
#include <vector>

#include "solsurf/families.hpp"
#include "solsurf/surface.hpp"

namespace solsurf::cli {

std::string format_double(double x);

/// F sampled on an m x n grid; points[i * n + k] is F(u_i, v_k).
struct MeshGrid {
  int m = 0;
  int n = 0;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<Point3> points;
};

MeshGrid sample_grid(const ParamSurface& s, const GridSpec& grid);

/// `v x y z` lines then quad faces (`f a b c d`, 1-based). With `triangles`
/// every quad is split into two triangles.
void write_obj(std::ostream& os, const MeshGrid& mesh, const std::string& comment,
               bool triangles = false);

/// Header u,v,x,y,z,theta,K,H; theta is the normal angle with e1, K the Gauss
/// curvature, H the mean curvature. Degenerate points give nan.
void write_csv(std::ostream& os, const ParamSurface& s, const GridSpec& grid,
               const JetOptions& jet = {});

/// Polyline CSV with header u,x,y,z.
void write_curve_csv(std::ostream& os, const ProfileCurve& curve);

/// One `check` line per invariant and a closing `result PASS|FAIL` line.
void write_report(std::ostream& os, const VerificationReport& rep);

}  // namespace solsurf::cli
