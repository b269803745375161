#pragma once

// One CLI job: which surface to build, where to sample it, what to check and
// where to write. Read from a JSON file and/or command-line flags.

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "solsurf/error.hpp"
#include "solsurf/surface.hpp"

namespace solsurf::cli {

/// Invalid or unknown configuration; maps to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Family { kLeaf, kCylinder, kProp24, kGeneral };
enum class Format { kObj, kCsv, kReport };

std::string to_string(Family f);
std::string to_string(Format f);
Family parse_family(const std::string& s);
Format parse_format(const std::string& s);

/// Reads "MxN" (e.g. "50x50").
GridSpec parse_grid(const std::string& s);
/// Reads "a,b" or "a:b"; each end may be an expression such as "-pi/2".
std::pair<double, double> parse_range(const std::string& s);
/// Evaluates a constant expression ("pi/3", "0.25").
double parse_number(const std::string& s);

struct JobConfig {
  Family family = Family::kProp24;
  std::optional<double> theta;  // default depends on the family
  double psi0 = 0.0;
  std::string zeta = "0.3*v";
  std::string xi = "1";
  std::string profile = "linear";
  int sign = 1;
  std::optional<int> gamma1_sign;
  double x0 = 0.0;
  GridSpec grid{50, 50};
  std::optional<std::pair<double, double>> u_range;
  std::optional<std::pair<double, double>> v_range;
  std::optional<double> tol;  // constant-angle tolerance override
  std::optional<Format> format;  // default: obj for generate, report for verify
  std::string out;            // empty: default directory; "-": stdout
  double perturb_z = 0.0;
  bool euclidean_preview = false;
  bool fd_jets = false;

  /// Theta actually used: the configured value or the family default.
  double effective_theta() const;
  /// Parameter rectangle actually used.
  ParamDomain effective_domain() const;

  /// Throws ConfigError.
  void validate() const;

  nlohmann::json to_json() const;
  /// Unknown keys and ill-typed values throw ConfigError. Keys absent from
  /// `j` keep the values already in `base`.
  static JobConfig from_json(const nlohmann::json& j, JobConfig base);
  static JobConfig from_json(const nlohmann::json& j) { return from_json(j, JobConfig()); }
  static JobConfig load(const std::string& path);
};

}  // namespace solsurf::cli
