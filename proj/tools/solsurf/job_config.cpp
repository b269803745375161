#include "job_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "solsurf/expr.hpp"
#include "solsurf/families.hpp"

namespace solsurf::cli {
namespace {

using nlohmann::json;

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: key '") + key + "' has the wrong type");
  }
}

double number_or_expr(const json& j, const char* key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>());
  throw ConfigError(std::string("config: key '") + key + "' must be a number or expression");
}

std::pair<double, double> range_of(const json& j, const char* key) {
  if (j.is_string()) return parse_range(j.get<std::string>());
  if (j.is_array() && j.size() == 2) {
    return {number_or_expr(j[0], key), number_or_expr(j[1], key)};
  }
  throw ConfigError(std::string("config: key '") + key + "' must be [lo, hi] or \"lo,hi\"");
}

void check_range(const std::optional<std::pair<double, double>>& r, const char* what) {
  if (!r) return;
  if (!std::isfinite(r->first) || !std::isfinite(r->second) || !(r->second > r->first)) {
    throw ConfigError(std::string(what) + ": need finite lo < hi");
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::kLeaf: return "leaf";
    case Family::kCylinder: return "cylinder";
    case Family::kProp24: return "prop24";
    case Family::kGeneral: return "general";
  }
  return "?";
}

std::string to_string(Format f) {
  switch (f) {
    case Format::kObj: return "obj";
    case Format::kCsv: return "csv";
    case Format::kReport: return "report";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "leaf") return Family::kLeaf;
  if (s == "cylinder") return Family::kCylinder;
  if (s == "prop24") return Family::kProp24;
  if (s == "general") return Family::kGeneral;
  throw ConfigError("unknown family '" + s + "' (leaf, cylinder, prop24, general)");
}

Format parse_format(const std::string& s) {
  if (s == "obj") return Format::kObj;
  if (s == "csv") return Format::kCsv;
  if (s == "report") return Format::kReport;
  throw ConfigError("unknown format '" + s + "' (obj, csv, report)");
}

double parse_number(const std::string& s) {
  try {
    const expr::Expr e = expr::parse(s);
    if (!e.variable().empty()) {
      throw ConfigError("expected a constant, got an expression in '" + e.variable() + "'");
    }
    return expr::eval(e, 0.0);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    throw ConfigError("cannot read number '" + s + "': " + err.what());
  }
}

GridSpec parse_grid(const std::string& s) {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) throw ConfigError("grid must look like MxN, got '" + s + "'");
  try {
    std::size_t a = 0;
    std::size_t b = 0;
    const std::string ms = trim(s.substr(0, x));
    const std::string ns = trim(s.substr(x + 1));
    const int m = std::stoi(ms, &a);
    const int n = std::stoi(ns, &b);
    if (a != ms.size() || b != ns.size() || m < 1 || n < 1) throw std::invalid_argument("grid");
    return {m, n};
  } catch (const std::exception&) {
    throw ConfigError("grid must look like MxN, got '" + s + "'");
  }
}

std::pair<double, double> parse_range(const std::string& s) {
  auto sep = s.find(',');
  if (sep == std::string::npos) sep = s.find(':');
  if (sep == std::string::npos) throw ConfigError("range must look like lo,hi, got '" + s + "'");
  return {parse_number(trim(s.substr(0, sep))), parse_number(trim(s.substr(sep + 1)))};
}

double JobConfig::effective_theta() const {
  if (theta) return *theta;
  switch (family) {
    case Family::kLeaf: return 0.0;
    case Family::kCylinder: return kHalfPi;
    default: return std::numbers::pi / 3.0;
  }
}

ParamDomain JobConfig::effective_domain() const {
  ParamDomain d;
  switch (family) {
    case Family::kLeaf:
    case Family::kProp24:
      d = {-1.0, 1.0, -1.0, 1.0};
      break;
    case Family::kGeneral:
      d = GeneralFamilyParams{}.domain;
      break;
    case Family::kCylinder:
      d = profile == "arccos" ? ParamDomain{-0.9, 0.9, 0.0, 1.0} : ParamDomain{-1.0, 1.0, 0.0, 1.0};
      break;
  }
  if (u_range) std::tie(d.u0, d.u1) = *u_range;
  if (v_range) std::tie(d.v0, d.v1) = *v_range;
  return d;
}

void JobConfig::validate() const {
  const double th = effective_theta();
  if (!std::isfinite(th)) throw ConfigError("theta must be finite");
  switch (family) {
    case Family::kLeaf:
      if (th != 0.0) throw ConfigError("the leaf family has theta = 0");
      break;
    case Family::kCylinder:
      if (std::abs(th - kHalfPi) > 1e-12) throw ConfigError("the cylinder family has theta = pi/2");
      break;
    case Family::kProp24:
    case Family::kGeneral:
      if (!(th > 0.0 && th < kHalfPi)) throw ConfigError("theta must lie in (0, pi/2)");
      break;
  }
  if (grid.m < 2 || grid.n < 2 || grid.m > 4000 || grid.n > 4000) {
    throw ConfigError("grid dimensions must lie in [2, 4000]");
  }
  check_range(u_range, "u-range");
  check_range(v_range, "v-range");
  if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
  if (gamma1_sign && *gamma1_sign != 1 && *gamma1_sign != -1) {
    throw ConfigError("gamma1-sign must be +1 or -1");
  }
  if (gamma1_sign && family != Family::kGeneral) {
    throw ConfigError("gamma1-sign only applies to the general family");
  }
  if (tol && !(*tol > 0.0)) throw ConfigError("tol must be positive");
  if (!std::isfinite(perturb_z) || !std::isfinite(psi0) || !std::isfinite(x0)) {
    throw ConfigError("psi0, x0 and perturb-z must be finite");
  }
  try {
    if (family == Family::kGeneral) {
      (void)expr::parse(zeta);
      (void)expr::parse(xi);
    }
    if (family == Family::kCylinder) {
      const ParamDomain d = effective_domain();
      (void)AlphaProfile::from_spec(profile, {d.u0, d.u1});
    }
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json JobConfig::to_json() const {
  json j;
  j["family"] = to_string(family);
  j["theta"] = theta ? json(*theta) : json(nullptr);
  j["psi0"] = psi0;
  j["zeta"] = zeta;
  j["xi"] = xi;
  j["profile"] = profile;
  j["sign"] = sign;
  j["gamma1_sign"] = gamma1_sign ? json(*gamma1_sign) : json(nullptr);
  j["x0"] = x0;
  j["grid"] = std::to_string(grid.m) + "x" + std::to_string(grid.n);
  j["u_range"] = u_range ? json::array({u_range->first, u_range->second}) : json(nullptr);
  j["v_range"] = v_range ? json::array({v_range->first, v_range->second}) : json(nullptr);
  j["tol"] = tol ? json(*tol) : json(nullptr);
  j["format"] = format ? json(to_string(*format)) : json(nullptr);
  j["out"] = out;
  j["perturb_z"] = perturb_z;
  j["euclidean_preview"] = euclidean_preview;
  j["fd_jets"] = fd_jets;
  return j;
}

JobConfig JobConfig::from_json(const nlohmann::json& j, JobConfig c) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known{
      "family", "theta",  "psi0",   "zeta", "xi",        "profile",           "sign",
      "gamma1_sign", "x0", "grid", "u_range", "v_range", "tol", "format", "out",
      "perturb_z", "euclidean_preview", "fd_jets"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    const char* k = key.c_str();
    if (key == "family") {
      c.family = parse_family(get_as<std::string>(value, k));
    } else if (key == "theta") {
      c.theta = value.is_null() ? std::nullopt : std::optional(number_or_expr(value, k));
    } else if (key == "psi0") {
      c.psi0 = number_or_expr(value, k);
    } else if (key == "zeta") {
      c.zeta = get_as<std::string>(value, k);
    } else if (key == "xi") {
      c.xi = get_as<std::string>(value, k);
    } else if (key == "profile") {
      c.profile = get_as<std::string>(value, k);
    } else if (key == "sign") {
      c.sign = get_as<int>(value, k);
    } else if (key == "gamma1_sign") {
      c.gamma1_sign = value.is_null() ? std::nullopt : std::optional(get_as<int>(value, k));
    } else if (key == "x0") {
      c.x0 = number_or_expr(value, k);
    } else if (key == "grid") {
      if (value.is_array() && value.size() == 2) {
        c.grid = {get_as<int>(value[0], k), get_as<int>(value[1], k)};
      } else {
        c.grid = parse_grid(get_as<std::string>(value, k));
      }
    } else if (key == "u_range") {
      c.u_range = value.is_null() ? std::nullopt : std::optional(range_of(value, k));
    } else if (key == "v_range") {
      c.v_range = value.is_null() ? std::nullopt : std::optional(range_of(value, k));
    } else if (key == "tol") {
      c.tol = value.is_null() ? std::nullopt : std::optional(number_or_expr(value, k));
    } else if (key == "format") {
      c.format = value.is_null() ? std::nullopt
                                 : std::optional(parse_format(get_as<std::string>(value, k)));
    } else if (key == "out") {
      c.out = get_as<std::string>(value, k);
    } else if (key == "perturb_z") {
      c.perturb_z = number_or_expr(value, k);
    } else if (key == "euclidean_preview") {
      c.euclidean_preview = get_as<bool>(value, k);
    } else if (key == "fd_jets") {
      c.fd_jets = get_as<bool>(value, k);
    }
  }
  return c;
}

JobConfig JobConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return from_json(j);
}

}  // namespace solsurf::cli
