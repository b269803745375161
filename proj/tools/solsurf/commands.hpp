#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "job_config.hpp"
#include "solsurf/families.hpp"
#include "solsurf/surface.hpp"

namespace solsurf::cli {

/// Process exit status; a stable contract.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,   // some verification check failed
  kExitUsage = 2,  // bad flags or configuration
  kExitIo = 3,     // file system or other runtime failure
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct BuiltSurface {
  FamilyKind kind = FamilyKind::kProp24;
  ParamSurface surface;
  Expectations expect;
  std::optional<AlphaProfile> profile;
};

/// Surface plus the closed-form targets it is verified against. The targets
/// are those of the unperturbed family, so --perturb-z makes checks fail.
BuiltSurface build_surface(const JobConfig& cfg);
Tolerances tolerances_for(const JobConfig& cfg);
VerifyOptions verify_options_for(const JobConfig& cfg);
VerificationReport verify_job(const JobConfig& cfg);

/// $SOLSURF_OUT_DIR, else the current directory.
std::string default_out_dir();

int cmd_generate(const JobConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_verify(const JobConfig& cfg, std::ostream& out);
int cmd_figures(const std::string& out_dir, std::ostream& log);
int cmd_report(const JobConfig& cfg, std::ostream& out);

/// Full command-line entry point; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace solsurf::cli
