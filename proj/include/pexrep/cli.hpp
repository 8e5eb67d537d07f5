#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pexrep/reconstruct.hpp"

namespace pexrep::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;      // package written but validation failed
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBuildFailure = 3;
inline constexpr int kExitTestPassed = 4;   // nothing to report

struct CreateRequest {
  std::filesystem::path project_dir;
  std::string test_id;
  std::filesystem::path out_dir;
  CreateOptions options;
};

// parse -> effective config -> hybrid trace -> slice/classify/extract ->
// assemble -> validate -> metrics. The package is written even when
// validation fails; the exit code tells the two apart.
int cmd_create(const CreateRequest& request, std::ostream& out, std::ostream& err);

int cmd_validate(const std::filesystem::path& package_dir, std::ostream& out, std::ostream& err);

int cmd_metrics(const std::filesystem::path& project_dir, const std::filesystem::path& package_dir,
                std::ostream& out, std::ostream& err);

}  // namespace pexrep::cli
