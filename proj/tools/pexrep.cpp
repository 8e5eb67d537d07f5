// pexrep — create, validate, and measure pruned executable failure-report
// packages for MiniBuild projects.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pexrep/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pexrep: pruned executable failure reports"};
  app.require_subcommand(1);

  pexrep::cli::CreateRequest request;
  std::string project_dir, out_dir, package_dir, metrics_project, metrics_package;
  bool bare = false;

  CLI::App* create = app.add_subcommand("create", "Create a reproduction package");
  create->add_option("--project", project_dir, "Project directory")->required();
  create->add_option("--test", request.test_id, "Failing test id")->required();
  create->add_option("--out", out_dir, "Output package directory")->required();
  create->add_flag("--no-dynamic", "Disable the dynamic tracer (static rounds only)");
  create->add_flag("--no-config-slice", "Ship a default build configuration");
  create->add_flag("--no-resources", "Skip resource extraction");
  create->add_flag("--no-gencode", "Skip generated-code extraction");
  create->add_flag("--bare", bare, "Sources and dependencies only (all enhancements off)");

  CLI::App* validate = app.add_subcommand("validate", "Re-validate an existing package");
  validate->add_option("package", package_dir, "Package directory")->required();

  CLI::App* metrics = app.add_subcommand("metrics", "Print reduction metrics as JSON");
  metrics->add_option("project", metrics_project, "Original project directory")->required();
  metrics->add_option("package", metrics_package, "Package directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pexrep::cli::kExitUsage;
  }

  if (create->parsed()) {
    request.project_dir = project_dir;
    request.out_dir = out_dir;
    request.options.dynamic = create->count("--no-dynamic") == 0;
    request.options.config_slice = create->count("--no-config-slice") == 0;
    request.options.resources = create->count("--no-resources") == 0;
    request.options.gencode = create->count("--no-gencode") == 0;
    if (bare) {
      request.options.config_slice = false;
      request.options.resources = false;
      request.options.gencode = false;
    }
    return pexrep::cli::cmd_create(request, std::cout, std::cerr);
  }
  if (validate->parsed()) {
    return pexrep::cli::cmd_validate(package_dir, std::cout, std::cerr);
  }
  return pexrep::cli::cmd_metrics(metrics_project, metrics_package, std::cout, std::cerr);
}
