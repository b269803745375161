#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>

#include <CLI11.hpp>

#include "certify.hpp"
#include "output.hpp"
#include "solsurf/expr.hpp"

namespace solsurf::cli {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

const char* extension(Format f) { return f == Format::kCsv ? ".csv" : ".obj"; }

fs::path resolve_output(const JobConfig& cfg, Format f) {
  const std::string file = to_string(cfg.family) + extension(f);
  if (cfg.out.empty()) return fs::path(default_out_dir()) / file;
  fs::path p(cfg.out);
  if (fs::is_directory(p)) return p / file;
  return p;
}

}  // namespace

std::string default_out_dir() {
  const char* env = std::getenv("SOLSURF_OUT_DIR");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string(".");
}

BuiltSurface build_surface(const JobConfig& cfg) {
  cfg.validate();
  const ParamDomain dom = cfg.effective_domain();
  const double th = cfg.effective_theta();
  BuiltSurface b;
  switch (cfg.family) {
    case Family::kLeaf: {
      b.kind = FamilyKind::kLeaf;
      b.surface = surface_leaf_h2(cfg.x0, dom);
      b.expect.theta = 0.0;
      b.expect.gauss_curvature = [](double, double) { return -1.0; };
      b.expect.mean_curvature = [](double, double) { return 0.0; };
      b.expect.principal_curvatures = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
      break;
    }
    case Family::kProp24: {
      b.kind = FamilyKind::kProp24;
      b.surface = surface_prop24(th, dom);
      const double c = std::cos(th);
      const double s = std::sin(th);
      b.expect.theta = th;
      b.expect.gauss_curvature = [c](double, double) { return -c * c; };
      b.expect.mean_curvature = [](double, double) { return 0.0; };
      b.expect.principal_curvatures = [s](double, double) { return std::array<double, 2>{-s, s}; };
      break;
    }
    case Family::kCylinder: {
      b.kind = FamilyKind::kCylinder;
      const AlphaProfile prof = AlphaProfile::from_spec(cfg.profile, {dom.u0, dom.u1});
      CylinderOptions opts;
      opts.v0 = dom.v0;
      opts.v1 = dom.v1;
      b.surface = surface_cylinder_theta_half(prof, opts);
      b.profile = prof;
      b.expect.theta = std::numbers::pi / 2.0;
      b.expect.gauss_curvature = [prof](double u, double) {
        const double sa = std::sin(prof(u));
        return 2.0 * sa * sa - cylinder_sigma(prof, u) * sa - 1.0;
      };
      // (Fu, Fv) induces the normal opposite to the adapted N = -cos(a) e2 + sin(a) e3,
      // so H and the principal curvatures change sign against the adapted frame.
      b.expect.mean_curvature = [prof](double u, double) {
        return 0.5 * (std::sin(prof(u)) - cylinder_sigma(prof, u));
      };
      b.expect.principal_curvatures = [prof](double u, double) {
        return std::array<double, 2>{std::sin(prof(u)), -cylinder_sigma(prof, u)};
      };
      break;
    }
    case Family::kGeneral: {
      b.kind = FamilyKind::kGeneral;
      GeneralFamilyParams p;
      p.theta = th;
      p.psi0 = cfg.psi0;
      p.zeta = ScalarFunction::from_expression(cfg.zeta);
      p.xi = ScalarFunction::from_expression(cfg.xi);
      p.sign = cfg.sign;
      p.gamma1_sign = cfg.gamma1_sign;
      p.domain = dom;
      const GeneralFamily fam(p);
      b.surface = fam.surface();
      const double s = std::sin(th);
      // b has the sign of `sign`, and the (Fu, Fv) orientation is sign(b) N.
      const double o = cfg.sign;
      b.expect.theta = o > 0 ? th : std::numbers::pi - th;
      b.expect.gauss_curvature = [fam, s](double u, double v) {
        const double sa = fam.alpha(u).sin_alpha;
        return 2.0 * sa * sa * s * s - fam.sigma(u, v) * sa * s - 1.0;
      };
      b.expect.principal_curvatures = [fam, s, o](double u, double v) {
        return std::array<double, 2>{-o * fam.alpha(u).sin_alpha * s, o * fam.sigma(u, v)};
      };
      break;
    }
  }
  if (cfg.perturb_z != 0.0) b.surface = perturb_z(b.surface, cfg.perturb_z);
  return b;
}

Tolerances tolerances_for(const JobConfig& cfg) {
  Tolerances t;
  if (cfg.fd_jets) {
    t.constant_angle = 1e-6;
    t.tangent_norm = 1e-6;
    t.principal_direction = 1e-5;
    t.self_adjoint = 1e-5;
    t.curvature_routes = 1e-4;
    t.gauss_curvature = 1e-4;
    t.mean_curvature = 1e-5;
    t.principal_curvatures = 1e-5;
  }
  if (cfg.tol) t.constant_angle = *cfg.tol;
  return t;
}

VerifyOptions verify_options_for(const JobConfig& cfg) {
  VerifyOptions o;
  o.jet.force_fd = cfg.fd_jets;
  o.curvature.jet.force_fd = cfg.fd_jets;
  return o;
}

VerificationReport verify_job(const JobConfig& cfg) {
  const BuiltSurface b = build_surface(cfg);
  return verify_surface(b.surface, cfg.grid, b.expect, tolerances_for(cfg),
                        verify_options_for(cfg));
}

int cmd_generate(const JobConfig& cfg, std::ostream& out, std::ostream& log) {
  const Format fmt = cfg.format.value_or(Format::kObj);
  if (fmt == Format::kReport) throw ConfigError("generate writes obj or csv; use verify for reports");
  if (cfg.out == "-" && cfg.euclidean_preview) {
    throw ConfigError("--euclidean-preview needs a file output");
  }
  const BuiltSurface b = build_surface(cfg);
  const MeshGrid mesh = sample_grid(b.surface, cfg.grid);
  for (const Point3& p : mesh.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw Error("surface '" + b.surface.name + "' has non-finite points on the grid");
    }
  }
  const std::string comment = "solsurf " + b.surface.name + " " +
                              std::to_string(cfg.grid.m) + "x" + std::to_string(cfg.grid.n) +
                              ", Sol3 chart coordinates";
  JetOptions jopt;
  jopt.force_fd = cfg.fd_jets;
  auto write = [&](std::ostream& os) {
    if (fmt == Format::kObj) {
      write_obj(os, mesh, comment);
    } else {
      write_csv(os, b.surface, cfg.grid, jopt);
    }
  };

  if (cfg.out == "-") {
    write(out);
    return kExitPass;
  }
  const fs::path path = resolve_output(cfg, fmt);
  {
    std::ofstream os = open_out(path);
    write(os);
    finish(os, path);
  }
  log << "wrote " << path.string() << " (" << mesh.points.size() << " vertices)\n";
  if (cfg.euclidean_preview) {
    fs::path preview = path;
    preview.replace_extension(".preview.obj");
    std::ofstream os = open_out(preview);
    write_obj(os, mesh, comment + ", Euclidean preview", true);
    finish(os, preview);
    log << "wrote " << preview.string() << '\n';
  }
  return kExitPass;
}

int cmd_verify(const JobConfig& cfg, std::ostream& out) {
  if (cfg.format && *cfg.format != Format::kReport) {
    throw ConfigError("verify only writes the report format");
  }
  const VerificationReport rep = verify_job(cfg);
  if (cfg.out.empty() || cfg.out == "-") {
    write_report(out, rep);
  } else {
    const fs::path path(cfg.out);
    std::ofstream os = open_out(path);
    write_report(os, rep);
    finish(os, path);
  }
  return rep.passed() ? kExitPass : kExitFail;
}

int cmd_figures(const std::string& out_dir, std::ostream& log) {
  const fs::path dir(out_dir.empty() ? default_out_dir() : out_dir);
  const std::vector<FigureItem> items = figure_items();
  nlohmann::ordered_json meta;
  meta["coordinates"] = "Sol3 chart (x, y, z)";
  meta["items"] = nlohmann::ordered_json::array();
  for (const FigureItem& it : items) {
    const fs::path curve = dir / ("item_" + it.item + ".csv");
    const fs::path mesh = dir / ("item_" + it.item + ".obj");
    {
      std::ofstream os = open_out(curve);
      write_curve_csv(os, it.curve);
      finish(os, curve);
    }
    {
      std::ofstream os = open_out(mesh);
      write_obj(os, it.mesh, "solsurf figure item " + it.item + " " + it.profile);
      finish(os, mesh);
    }
    nlohmann::ordered_json e;
    e["item"] = it.item;
    e["profile"] = it.profile;
    e["alpha"] = it.alpha_text;
    e["u_range"] = {it.u0, it.u1};
    e["v_range"] = {it.v0, it.v1};
    e["baseline"] = 0.0;
    e["samples"] = it.curve.u.size();
    e["curve"] = curve.filename().string();
    e["mesh"] = mesh.filename().string();
    e["umbilical"] = it.umbilical;
    e["totally_geodesic"] = it.totally_geodesic;
    e["max_umbilic_gap"] = it.max_umbilic_gap;
    e["min_abs_principal"] = it.min_abs_principal;
    meta["items"].push_back(e);
    log << "wrote " << curve.string() << " and " << mesh.string() << '\n';
  }
  const fs::path mpath = dir / "figures.json";
  std::ofstream os = open_out(mpath);
  os << meta.dump(2) << '\n';
  finish(os, mpath);
  log << "wrote " << mpath.string() << '\n';
  return kExitPass;
}

int cmd_report(const JobConfig& cfg, std::ostream& out) {
  const std::vector<CertLine> lines = run_certification();
  bool ok = true;
  auto emit = [&](std::ostream& os) {
    for (const CertLine& l : lines) {
      os << "check " << l.name << " value=" << format_double(l.value);
      if (!std::isnan(l.tol)) os << " tol=" << format_double(l.tol);
      if (!l.note.empty()) os << " note=" << l.note;
      os << ' ' << (l.pass ? "PASS" : "FAIL") << '\n';
      ok = ok && l.pass;
    }
    os << "result " << (ok ? "PASS" : "FAIL") << '\n';
  };
  if (cfg.out.empty() || cfg.out == "-") {
    emit(out);
  } else {
    const fs::path path(cfg.out);
    std::ofstream os = open_out(path);
    emit(os);
    finish(os, path);
  }
  return ok ? kExitPass : kExitFail;
}

// --- Command line -----------------------------------------------------------------

namespace {

struct JobFlags {
  std::map<std::string, std::string> values;
  bool euclidean_preview = false;
  bool fd_jets = false;
  std::string config;
};

void add_job_flags(CLI::App* sub, JobFlags& f, bool surface_flags) {
  sub->add_option("--config", f.config, "JSON job file; flags override its values");
  sub->add_option("--out", f.values["out"], "Output file or directory ('-' for stdout)");
  if (!surface_flags) return;
  sub->add_option("--family", f.values["family"], "leaf | cylinder | prop24 | general");
  sub->add_option("--theta", f.values["theta"], "Constant angle, e.g. pi/3");
  sub->add_option("--psi0", f.values["psi0"], "Shift of ubar (general family)");
  sub->add_option("--zeta", f.values["zeta"], "zeta(v) expression (general family)");
  sub->add_option("--xi", f.values["xi"], "xi(v) expression (general family)");
  sub->add_option("--profile", f.values["profile"],
                  "alpha profile: constant:<a>, linear, quadratic, arccos, umbilic or an expression");
  sub->add_option("--x0", f.values["x0"], "Leaf position (leaf family)");
  sub->add_option("--sign", f.values["sign"], "Branch sign +1 or -1 (general family)");
  sub->add_option("--gamma1-sign", f.values["gamma1_sign"], "Override the sign used in gamma1");
  sub->add_option("--grid", f.values["grid"], "Sampling grid MxN");
  sub->add_option("--u-range", f.values["u_range"], "u interval lo,hi");
  sub->add_option("--v-range", f.values["v_range"], "v interval lo,hi");
  sub->add_option("--tol", f.values["tol"], "Constant-angle tolerance");
  sub->add_option("--format", f.values["format"], "obj | csv | report");
  sub->add_option("--perturb-z", f.values["perturb_z"], "Add eps*sin(u) to z (negative control)");
  sub->add_flag("--euclidean-preview", f.euclidean_preview,
                "Also write a triangulated OBJ for naive Euclidean viewers");
  sub->add_flag("--fd-jets", f.fd_jets, "Use finite-difference jets instead of analytic ones");
}

JobConfig collect(CLI::App* sub, const JobFlags& f) {
  JobConfig cfg = f.config.empty() ? JobConfig{} : JobConfig::load(f.config);
  nlohmann::json overlay = nlohmann::json::object();
  for (const auto& [key, value] : f.values) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (sub->get_option_no_throw(flag) == nullptr || sub->count(flag) == 0) continue;
    if (key == "sign" || key == "gamma1_sign") {
      overlay[key] = static_cast<int>(parse_number(value));
    } else {
      overlay[key] = value;
    }
  }
  if (f.euclidean_preview) overlay["euclidean_preview"] = true;
  if (f.fd_jets) overlay["fd_jets"] = true;
  cfg = JobConfig::from_json(overlay, cfg);
  cfg.validate();
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant-angle surfaces in Sol3: generate, verify and certify", "solsurf"};
  app.require_subcommand(1);
  JobFlags gen, ver, rep, fig;
  CLI::App* s_gen = app.add_subcommand("generate", "Write a surface mesh (obj) or samples (csv)");
  CLI::App* s_ver = app.add_subcommand("verify", "Check every invariant on a grid");
  CLI::App* s_fig = app.add_subcommand("figures", "Write the theta = pi/2 profile curves b-e");
  CLI::App* s_rep = app.add_subcommand("report", "Run the full certification suite");
  add_job_flags(s_gen, gen, true);
  add_job_flags(s_ver, ver, true);
  add_job_flags(s_fig, fig, false);
  add_job_flags(s_rep, rep, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (s_gen->parsed()) return cmd_generate(collect(s_gen, gen), out, err);
    if (s_ver->parsed()) return cmd_verify(collect(s_ver, ver), out);
    if (s_fig->parsed()) {
      std::string dir = fig.values["out"];
      if (!fig.config.empty()) dir = JobConfig::load(fig.config).out;
      if (s_fig->count("--out")) dir = fig.values["out"];
      return cmd_figures(dir, err);
    }
    if (s_rep->parsed()) return cmd_report(collect(s_rep, rep), out);
  } catch (const ConfigError& e) {
    err << "solsurf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const expr::ParseError& e) {
    err << "solsurf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "solsurf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "solsurf: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace solsurf::cli
