#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pexrep/backend.hpp"
#include "pexrep/configslice.hpp"
#include "pexrep/core.hpp"
#include "pexrep/resources.hpp"

namespace pexrep {

struct PrunedLibrary {
  LibCoord coord;
  std::vector<std::string> kept_classes;
  std::string archive_path;  // package-relative

  bool operator==(const PrunedLibrary&) const = default;
};

// Per-enhancement switches; all on = the full pipeline, all off = the bare
// "sources and dependencies" package.
struct CreateOptions {
  bool dynamic = true;
  bool config_slice = true;
  bool resources = true;
  bool gencode = true;

  bool operator==(const CreateOptions&) const = default;
};

struct Provenance {
  std::string project_name;
  std::string test_id;
  CreateOptions options;
};

struct ReproPackage {
  std::filesystem::path root;
  ProjectModel manifest;
  ConfigDocument config;
  std::vector<PrunedLibrary> pruned_libraries;
  std::vector<LibCoord> external_coords;
  Provenance provenance;
};

// Standard package skeleton: src/{main,test,gen}, src/main/res, libs, plus
// stub manifest and config. Fails on a non-empty root.
std::vector<std::string> create_template(const std::filesystem::path& package_root,
                                         const std::string& name);

// Copies every traced test and non-generated app source byte-identically,
// keeping the path relative to its source root. Generated items are handled
// by the generated-code extraction.
std::vector<std::string> extract_source_files(const FailureTrace& trace,
                                              const ProjectModel& project,
                                              const std::filesystem::path& package_root);

struct PrunedLibraries {
  std::vector<PrunedLibrary> pruned;
  std::vector<LibCoord> external;
};

// Internal libraries shrink to the traced classes plus their intra-library
// load closure; external libraries are referenced by coordinate only.
PrunedLibraries extract_pruned_libraries(const FailureTrace& trace, const ProjectModel& project,
                                         const std::string& project_group,
                                         const std::filesystem::path& package_root);

struct AssembleInputs {
  const ProjectModel* project = nullptr;     // original-rooted model
  std::filesystem::path build_workspace;     // holds generated source files
  FailureTrace trace;
  FailureOutcome outcome;
  ConfigDocument config;
  ResourcePlan plan;
  std::vector<BuildRecord> records;
  std::string test_id;
  CreateOptions options;
  int round3_passes = 1;
};

ReproPackage assemble_report(const AssembleInputs& inputs,
                             const std::filesystem::path& out_dir);

inline constexpr const char* kConfigFileName = "config.mb.json";
inline constexpr const char* kExpectedFileName = "expected_failure.json";
inline constexpr const char* kTraceFileName = "trace.json";
inline constexpr const char* kPlanFileName = "resources.plan.json";
inline constexpr const char* kMetricsFileName = "report.metrics.json";

}  // namespace pexrep
