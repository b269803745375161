#include "certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "commands.hpp"

namespace solsurf::cli {
namespace {

constexpr double kPi = std::numbers::pi;

void add_threshold(std::vector<CertLine>& out, std::string name, double value, double tol,
                   std::string note = {}) {
  const bool pass = !std::isnan(value) && value <= tol;
  out.push_back({std::move(name), value, tol, pass, std::move(note)});
}

void add_report(std::vector<CertLine>& out, const std::string& prefix,
                const VerificationReport& rep) {
  for (const CheckResult& c : rep.checks) {
    out.push_back({prefix + "." + c.name, c.max_residual, c.tolerance, c.passed, {}});
  }
}

JobConfig job(Family f) {
  JobConfig c;
  c.family = f;
  return c;
}

// Signed permutation (x, y, z) -> rows of m applied to (x, y, z).
struct Candidate {
  std::string label;
  Eigen::Matrix3d m;
};

std::vector<Candidate> listed_isotropy_candidates() {
  auto mk = [](std::string label, std::initializer_list<double> v) {
    Eigen::Matrix3d m;
    auto it = v.begin();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = *it++;
    return Candidate{std::move(label), m};
  };
  return {
      mk("(x,y,z)", {1, 0, 0, 0, 1, 0, 0, 0, 1}),
      mk("(y,-x,-z)", {0, 1, 0, -1, 0, 0, 0, 0, -1}),
      mk("(-x,y,z)", {-1, 0, 0, 0, 1, 0, 0, 0, 1}),
      mk("(-x,-y,z)", {-1, 0, 0, 0, -1, 0, 0, 0, 1}),
      mk("(-y,x,-z)", {0, -1, 0, 1, 0, 0, 0, 0, -1}),
      mk("(y,x,-z)", {0, 1, 0, 1, 0, 0, 0, 0, -1}),
      mk("(y,x,z)", {0, 1, 0, 1, 0, 0, 0, 0, 1}),
      mk("(x,-y,z)", {1, 0, 0, 0, -1, 0, 0, 0, 1}),
  };
}

// Max |J^T g(Jp) J - g(p)| over random points.
double pullback_defect(const Eigen::Matrix3d& jac, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    const Eigen::Vector3d p(d(rng), d(rng), d(rng));
    const Eigen::Vector3d q = jac * p;
    const Eigen::Matrix3d pulled = jac.transpose() * metric_at(Point3::from(q)) * jac;
    worst = std::max(worst, (pulled - metric_at(Point3::from(p))).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

std::pair<double, double> umbilic_stats(const ParamSurface& s, const GridSpec& grid) {
  double gap = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.m; ++i) {
    for (int k = 0; k < grid.n; ++k) {
      const JetData j = jet(s, s.domain.u_at(i, grid.m), s.domain.v_at(k, grid.n));
      const ShapeOperator2 a = shape_operator_orthonormal(j);
      const auto lam = a.principal_curvatures();
      gap = std::max({gap, std::abs(lam[1] - lam[0]), std::abs(a.matrix(0, 1)),
                      std::abs(a.matrix(1, 0))});
      min_abs = std::min({min_abs, std::abs(lam[0]), std::abs(lam[1])});
    }
  }
  return {gap, min_abs};
}

std::vector<FigureItem> figure_items(int curve_samples, GridSpec mesh) {
  struct Spec {
    const char* item;
    const char* profile;
    const char* text;
    double u0, u1;
  };
  const Spec specs[] = {
      {"b", "linear", "alpha(s) = s", -3.0, 3.0},
      {"c", "quadratic", "alpha(s) = s^2", -2.0, 2.0},
      {"d", "arccos", "alpha(s) = arccos(s)", -1.0, 1.0},
      {"e", "umbilic", "alpha(s) = 2 arctan(exp(2 s))", -1.5, 1.5},
  };
  std::vector<FigureItem> out;
  for (const Spec& sp : specs) {
    FigureItem it;
    it.item = sp.item;
    it.profile = sp.profile;
    it.alpha_text = sp.text;
    it.u0 = sp.u0;
    it.u1 = sp.u1;
    const AlphaProfile prof = AlphaProfile::from_spec(sp.profile, {sp.u0, sp.u1});
    CylinderOptions opts;
    opts.baseline = 0.0;
    opts.v0 = it.v0;
    opts.v1 = it.v1;
    it.curve = cylinder_profile_curve(prof, curve_samples, opts);
    const ParamSurface s = surface_cylinder_theta_half(prof, opts);
    it.mesh = sample_grid(s, mesh);

    // Curvature statistics stay off the ends, where arccos' derivative blows up.
    ParamSurface inner = s;
    const double pad = 0.02 * (sp.u1 - sp.u0);
    inner.domain.u0 += pad;
    inner.domain.u1 -= pad;
    std::tie(it.max_umbilic_gap, it.min_abs_principal) = umbilic_stats(inner, {41, 5});
    it.umbilical = it.max_umbilic_gap <= 1e-6;
    it.totally_geodesic = it.umbilical && it.min_abs_principal <= 1e-6;
    out.push_back(std::move(it));
  }
  return out;
}

std::vector<CertLine> run_certification() {
  std::vector<CertLine> out;

  // Surfaces of every family on their default grids.
  for (auto [label, th] : {std::pair{"pi/6", kPi / 6}, {"pi/4", kPi / 4}, {"pi/3", kPi / 3}}) {
    JobConfig c = job(Family::kProp24);
    c.theta = th;
    add_report(out, std::string("prop24[theta=") + label + "]", verify_job(c));
    c.fd_jets = true;
    add_report(out, std::string("prop24_fd[theta=") + label + "]", verify_job(c));
  }
  {
    JobConfig c = job(Family::kGeneral);
    c.grid = {40, 40};
    add_report(out, "general", verify_job(c));
  }
  {
    JobConfig c = job(Family::kLeaf);
    c.x0 = 2.0;
    add_report(out, "leaf[x0=2]", verify_job(c));
  }
  for (const char* prof : {"constant:0.5", "linear", "quadratic", "arccos", "umbilic"}) {
    JobConfig c = job(Family::kCylinder);
    c.profile = prof;
    c.grid = {30, 10};
    add_report(out, std::string("cylinder[") + prof + "]", verify_job(c));
  }

  // Field equations and the RK4 oracle.
  const GeneralFamily fam{GeneralFamilyParams{}};
  for (const Residual& r : field_equation_residuals(fam, EvalWindow::of(fam.params().domain))) {
    const double tol = r.name == "rk4_sigma_u" ? 1e-6 : 1e-7;
    add_threshold(out, "field." + r.name, r.max_residual, tol);
  }

  // Reduction chain on both branches.
  {
    const AppendixChain ch =
        appendix_chain(fam, fam.natural_branch(), EvalWindow::of(fam.params().domain));
    add_threshold(out, "chain_eps1.q_ode", ch.q_ode, 1e-8);
    add_threshold(out, "chain_eps1.a_ode", ch.a_ode, 1e-8);
    add_threshold(out, "chain_eps1.b_ode", ch.b_ode, 1e-8);
    add_threshold(out, "chain_eps1.inverse_b", ch.inverse_b, 1e-7);
    add_threshold(out, "chain_eps1.roundtrip", ch.roundtrip, 1e-10);
    add_threshold(out, "chain_eps1.rk4_b", ch.rk4_b, 1e-6);
    out.push_back({"chain_eps1.a_ode_sinh_variant", ch.a_ode_sinh_variant,
                   std::numeric_limits<double>::quiet_NaN(), ch.a_ode_sinh_variant > 1e-3,
                   "sinh-variant-is-not-satisfied"});

    GeneralFamilyParams p0;
    p0.zeta = ScalarFunction::constant(0.0);
    p0.domain = {0.2, 1.2, -1.0, 1.0};
    const GeneralFamily fam0(p0);
    const AppendixChain c0 = appendix_chain(fam0, fam0.natural_branch(), EvalWindow::of(p0.domain));
    add_threshold(out, "chain_eps0.q_ode", c0.q_ode, 1e-8);
    add_threshold(out, "chain_eps0.a_ode", c0.a_ode, 1e-8);
    add_threshold(out, "chain_eps0.b_ode", c0.b_ode, 1e-8);
    add_threshold(out, "chain_eps0.q_closed_form", c0.q_closed_form, 1e-10);
    add_threshold(out, "chain_eps0.roundtrip", c0.roundtrip, 1e-10);
  }

  // theta = pi/2 identities, umbilicity of item e, minimality.
  for (const char* spec : {"constant:0.5", "linear", "quadratic", "umbilic"}) {
    const AlphaProfile prof = AlphaProfile::from_spec(spec, {-1.0, 1.0});
    const ParamSurface s = surface_cylinder_theta_half(prof);
    for (const Residual& r : cylinder_residuals(prof, s)) {
      add_threshold(out, std::string("cylinder_identity[") + spec + "]." + r.name, r.max_residual,
                    1e-8);
    }
    const MinimalityVerdict v = classify_minimal(FamilyKind::kCylinder, s, &prof);
    out.push_back({std::string("minimal[cylinder:") + spec + "]", v.max_abs_h,
                   std::numeric_limits<double>::quiet_NaN(),
                   v.witness_agrees && v.minimal == prof.is_constant(),
                   v.minimal ? "minimal" : "not-minimal"});
  }
  {
    const AlphaProfile e = AlphaProfile::umbilic({-1.0, 1.0});
    const auto [gap, min_abs] = umbilic_stats(surface_cylinder_theta_half(e), {41, 5});
    add_threshold(out, "umbilic_e.gap", gap, 1e-6);
    out.push_back({"umbilic_e.min_abs_lambda", min_abs, std::numeric_limits<double>::quiet_NaN(),
                   min_abs > 0.1, "not-totally-geodesic"});
  }
  {
    const auto check_min = [&](const char* label, FamilyKind kind, const ParamSurface& s,
                               bool expected) {
      const MinimalityVerdict v = classify_minimal(kind, s);
      out.push_back({std::string("minimal[") + label + "]", v.max_abs_h,
                     std::numeric_limits<double>::quiet_NaN(),
                     v.witness_agrees && v.minimal == expected,
                     v.minimal ? "minimal" : "not-minimal"});
    };
    check_min("leaf", FamilyKind::kLeaf, surface_leaf_h2(0.0), true);
    check_min("prop24", FamilyKind::kProp24, surface_prop24(kPi / 3), true);
    check_min("general", FamilyKind::kGeneral, fam.surface(), false);
  }

  // gamma2 is parametrized by arclength.
  {
    double worst = 0.0;
    const auto [lo, hi] = fam.u_table_range();
    for (int i = 0; i < 200; ++i) {
      const double u = ParamDomain::lerp(lo, hi, i, 200);
      const TangentVec t = TangentVec::at(fam.gamma2(u), fam.gamma2_velocity(u));
      worst = std::max(worst, std::abs(norm(t) - 1.0));
    }
    add_threshold(out, "arclength.gamma2", worst, 1e-7);
  }

  // Which gamma1/gamma2 sign combinations give a constant-angle immersion.
  // Orientation-free: |<N, e1>| against cos(theta).
  for (int s2 : {1, -1}) {
    for (int s1 : {1, -1}) {
      GeneralFamilyParams p;
      p.sign = s2;
      p.gamma1_sign = s1;
      const ParamSurface s = GeneralFamily(p).surface();
      double r = 0.0;
      for (int i = 0; i < 20; ++i) {
        for (int k = 0; k < 20; ++k) {
          const JetData j = jet(s, s.domain.u_at(i, 20), s.domain.v_at(k, 20));
          r = std::max(r, std::abs(std::abs(to_frame(unit_normal(j)).c1) - std::cos(p.theta)));
        }
      }
      const bool constant_angle = r <= 1e-9;
      std::ostringstream name;
      name << "sign_scan[sign=" << s2 << ",gamma1_sign=" << s1 << "].constant_angle";
      out.push_back({name.str(), r, std::numeric_limits<double>::quiet_NaN(),
                     constant_angle == (s1 == s2),
                     constant_angle ? "constant-angle" : "not-constant-angle"});
    }
  }

  // Listed isotropy candidates against the metric.
  {
    std::mt19937_64 rng(7);
    std::vector<Eigen::Matrix3d> group;
    for (const IsometryElem& g : isotropy_group()) group.push_back(isometry_differential(g));
    for (const Candidate& cand : listed_isotropy_candidates()) {
      const double defect = pullback_defect(cand.m, rng);
      const bool member = std::any_of(group.begin(), group.end(), [&](const Eigen::Matrix3d& g) {
        return (g - cand.m).cwiseAbs().maxCoeff() == 0.0;
      });
      const bool isometry = defect <= 1e-10;
      out.push_back({"isotropy_candidate" + cand.label, defect,
                     std::numeric_limits<double>::quiet_NaN(), isometry == member,
                     isometry ? "isometry" : "not-an-isometry"});
    }
  }

  // Negative control.
  {
    JobConfig c = job(Family::kProp24);
    c.perturb_z = 0.01;
    const VerificationReport rep = verify_job(c);
    const double r = rep.find("constant_angle")->max_residual;
    out.push_back({"negative_control.perturbed_prop24", r,
                   std::numeric_limits<double>::quiet_NaN(), r > 1e-3 && !rep.passed(),
                   "must-fail"});
  }
  return out;
}

}  // namespace solsurf::cli
