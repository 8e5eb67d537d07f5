#include "pexrep/cli.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "pexrep/configslice.hpp"
#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"
#include "pexrep/json_io.hpp"
#include "pexrep/report.hpp"
#include "pexrep/tracer.hpp"

namespace pexrep::cli {

namespace {

std::string percent(double fraction) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << fraction * 100.0 << "%";
  return ss.str();
}

void write_metrics_report(const fs::path& package_root, const ValidationResult& validation,
                          const Metrics& metrics) {
  write_file(package_root / kMetricsFileName,
             dump_canonical(ojson{{"validation", to_json(validation)},
                                  {"metrics", to_json(metrics)}}));
}

}  // namespace

int cmd_create(const CreateRequest& request, std::ostream& out, std::ostream& err) {
  (void)out;
  MiniBuild backend;

  if (!dir_missing_or_empty(request.out_dir)) {
    err << "pexrep: output directory is not empty: " << request.out_dir.string() << "\n";
    return kExitUsage;
  }

  ProjectModel project;
  try {
    project = backend.parse_manifest(fs::absolute(request.project_dir));
  } catch (const Error& e) {
    err << "pexrep: cannot parse project: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!project.find_item(request.test_id) ||
      project.find_item(request.test_id)->kind != ItemKind::TestSource) {
    err << "pexrep: unknown test: " << request.test_id << "\n";
    return kExitUsage;
  }

  try {
    EffectiveConfig config = backend.compute_effective_config(project);

    // All building happens in a scratch copy; the input project stays clean.
    ScopedDir scratch(unique_workdir(project.name));
    const fs::path workspace = scratch.path() / "w1";
    copy_tree(project.root_dir, workspace, {"target"});
    ProjectModel build_project = project.rebased(workspace);

    TraceOptions trace_options;
    trace_options.use_dynamic = request.options.dynamic;
    TraceRun run = hybrid_backward_trace(backend, build_project, request.test_id, config,
                                         trace_options, scratch.path());

    ResourcePlan plan;
    if (request.options.resources) {
      const BuildRecord* test_record = nullptr;
      std::set<std::string> copy_outputs;
      for (const auto& record : run.records) {
        if (record.task == TaskKind::Test && !test_record) test_record = &record;
        if (record.task == TaskKind::ProcessResources || record.task == TaskKind::GenerateSources) {
          copy_outputs.insert(record.workspace_outputs.begin(), record.workspace_outputs.end());
        }
      }
      plan = classify_resource_events(test_record->resource_events, build_project, copy_outputs);
    }

    ConfigDocument config_doc =
        request.options.config_slice
            ? slice_config(config, select_required_plugins(config), project.root_dir)
            : default_config_document();

    AssembleInputs inputs;
    inputs.project = &build_project;
    inputs.build_workspace = workspace;
    inputs.trace = run.trace;
    inputs.outcome = run.outcome;
    inputs.config = config_doc;
    inputs.plan = plan;
    inputs.records = run.records;
    inputs.test_id = request.test_id;
    inputs.options = request.options;
    inputs.round3_passes = run.round3_passes;
    assemble_report(inputs, request.out_dir);

    ValidationResult validation = validate_report(backend, request.out_dir);
    Metrics metrics = compute_metrics(backend, project, request.out_dir, validation.valid);
    write_metrics_report(request.out_dir, validation, metrics);

    err << "pexrep: " << project.name << " " << request.test_id << " -> "
        << request.out_dir.string() << " valid=" << (validation.valid ? "true" : "false")
        << " source+internal reduction=" << percent(metrics.source_plus_internal.percent_reduction)
        << " (" << metrics.source_plus_internal.kept_count << "/"
        << metrics.source_plus_internal.original_count << " kept)\n";
    return validation.valid ? kExitOk : kExitInvalid;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::TestPassed) {
      err << "pexrep: test passed, nothing to report: " << request.test_id << "\n";
      return kExitTestPassed;
    }
    err << "pexrep: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitBuildFailure;
  }
}

int cmd_validate(const fs::path& package_dir, std::ostream& out, std::ostream& err) {
  (void)out;
  MiniBuild backend;
  try {
    ValidationResult result = validate_report(backend, package_dir);
    err << "pexrep: " << package_dir.string() << " valid=" << (result.valid ? "true" : "false")
        << " reproduced=" << result.reproduced.failure_type << ": " << result.reproduced.message
        << "\n";
    return result.valid ? kExitOk : kExitInvalid;
  } catch (const Error& e) {
    err << "pexrep: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitBuildFailure;
  }
}

int cmd_metrics(const fs::path& project_dir, const fs::path& package_dir, std::ostream& out,
                std::ostream& err) {
  MiniBuild backend;
  ProjectModel project;
  try {
    project = backend.parse_manifest(fs::absolute(project_dir));
  } catch (const Error& e) {
    err << "pexrep: cannot parse project: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    if (!fs::exists(package_dir / kManifestFileName)) {
      throw Error(ErrorKind::PackageCorrupt, "PackageCorrupt: missing package manifest");
    }
    // A directory without a recorded expected failure cannot be validated;
    // it counts as unvalidated (all reductions zero) rather than an error.
    bool valid = false;
    if (fs::exists(package_dir / kExpectedFileName)) {
      valid = validate_report(backend, package_dir).valid;
    }
    Metrics metrics = compute_metrics(backend, project, package_dir, valid);
    out << dump_canonical(to_json(metrics));
    return kExitOk;
  } catch (const Error& e) {
    err << "pexrep: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitBuildFailure;
  }
}

}  // namespace pexrep::cli
