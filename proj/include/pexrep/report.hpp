#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pexrep/backend.hpp"
#include "pexrep/core.hpp"
#include "pexrep/json_io.hpp"

namespace pexrep {

struct ValidationResult {
  bool valid = false;
  FailureOutcome original;
  FailureOutcome reproduced;
  std::int64_t elapsed_ms = 0;
};

struct CategoryMetrics {
  std::size_t original_count = 0;
  std::size_t kept_count = 0;
  double percent_reduction = 0.0;
};

struct Metrics {
  CategoryMetrics internal_classes;
  CategoryMetrics source_classes;
  CategoryMetrics source_plus_internal;
  CategoryMetrics config_chars;
  CategoryMetrics resources;
};

// Rebuilds the package in a scratch workspace, runs the target test, and
// compares the outcome with the recorded one: identical failure type and
// message, both Failed. Any build-side error reproduces as a BuildError
// outcome and therefore never validates. The package itself is not touched.
ValidationResult validate_report(const BuildBackend& backend,
                                 const std::filesystem::path& package_root);

// Reduction ratios per category. A failed validation reports every
// percent_reduction as zero while the raw counts stay visible.
Metrics compute_metrics(const BuildBackend& backend, const ProjectModel& original,
                        const std::filesystem::path& package_root, bool valid);

ojson to_json(const ValidationResult& result);
ojson to_json(const Metrics& metrics);

// Non-whitespace character count of the canonical {plugins, properties}
// serialization — the dependencies section never counts.
std::size_t config_char_count(const std::vector<PluginConfig>& plugins,
                              const std::map<std::string, std::string>& properties);

}  // namespace pexrep
