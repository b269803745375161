#pragma once

// The certification suite behind `solsurf report` and the figure data behind
// `solsurf figures`.

#include <limits>
#include <string>
#include <vector>

#include "output.hpp"
#include "solsurf/families.hpp"

namespace solsurf::cli {

struct CertLine {
  std::string name;
  double value = 0.0;
  double tol = std::numeric_limits<double>::quiet_NaN();  // NaN: not a threshold check
  bool pass = true;
  std::string note;
};

/// Every family verified on its default grid, the field-equation and
/// reduction-chain residuals, cylinder identities, minimality, arclength of
/// gamma2, the gamma1/gamma2 sign combinations and the isotropy candidates.
std::vector<CertLine> run_certification();

/// One theta = pi/2 profile curve with its cylinder mesh.
struct FigureItem {
  std::string item;        // b, c, d, e
  std::string profile;     // AlphaProfile spec
  std::string alpha_text;  // alpha(s) in words
  double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 1.0;
  ProfileCurve curve;
  MeshGrid mesh;
  bool umbilical = false;
  bool totally_geodesic = false;
  double max_umbilic_gap = 0.0;    // max |lambda1 - lambda2| over interior samples
  double min_abs_principal = 0.0;  // min |lambda| over interior samples
};

std::vector<FigureItem> figure_items(int curve_samples = 401, GridSpec mesh = {61, 11});

/// Max |lambda1 - lambda2| and min |lambda| of a surface over the grid.
std::pair<double, double> umbilic_stats(const ParamSurface& s, const GridSpec& grid);

}  // namespace solsurf::cli
