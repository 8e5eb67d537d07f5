#include "pexrep/report.hpp"

#include <chrono>

#include "pexrep/archive.hpp"
#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"
#include "pexrep/reconstruct.hpp"

namespace pexrep {

namespace {

bool unicode_whitespace(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::size_t count_non_whitespace(const std::string& text) {
  std::size_t count = 0;
  for (size_t i = 0; i < text.size();) {
    const unsigned char byte = static_cast<unsigned char>(text[i]);
    uint32_t cp = byte;
    size_t len = 1;
    if (byte >= 0xF0) {
      len = 4;
      cp = byte & 0x07;
    } else if (byte >= 0xE0) {
      len = 3;
      cp = byte & 0x0F;
    } else if (byte >= 0xC0) {
      len = 2;
      cp = byte & 0x1F;
    }
    for (size_t k = 1; k < len && i + k < text.size(); ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
    }
    if (!unicode_whitespace(cp)) ++count;
    i += len;
  }
  return count;
}

FailureOutcome run_package_lifecycle(const BuildBackend& backend, const fs::path& workspace,
                                     const std::string& test_id) {
  try {
    ProjectModel project = backend.parse_manifest(workspace);
    EffectiveConfig config = backend.compute_effective_config(project);
    backend.run_generate_sources(project);
    backend.run_process_resources(project);
    backend.run_compile(project, project.all_app_refs(), TaskKind::Compile, config);
    backend.run_compile(project, project.all_test_refs(), TaskKind::TestCompile, config);
    return backend.run_test(project, test_id, config).first;
  } catch (const Error& e) {
    FailureOutcome outcome;
    outcome.status = OutcomeStatus::BuildError;
    outcome.failure_type = to_string(e.kind());
    outcome.message = e.what();
    return outcome;
  }
}

double reduction(std::size_t original, std::size_t kept, bool valid) {
  if (!valid || original == 0 || kept >= original) return 0.0;
  return 1.0 - static_cast<double>(kept) / static_cast<double>(original);
}

std::size_t archive_class_count(const fs::path& archive) {
  return archive_entry_names(archive).size();
}

}  // namespace

std::size_t config_char_count(const std::vector<PluginConfig>& plugins,
                              const std::map<std::string, std::string>& properties) {
  ojson j;
  ojson plugin_array = ojson::array();
  for (const auto& plugin : plugins) plugin_array.push_back(to_json(plugin));
  j["plugins"] = plugin_array;
  j["properties"] = properties;
  return count_non_whitespace(dump_canonical(j));
}

ValidationResult validate_report(const BuildBackend& backend, const fs::path& package_root) {
  const fs::path expected_path = package_root / kExpectedFileName;
  if (!fs::exists(expected_path) || !fs::exists(package_root / kManifestFileName)) {
    throw Error(ErrorKind::PackageCorrupt, "PackageCorrupt: missing manifest or expected file");
  }
  ojson expected_json;
  try {
    expected_json = ojson::parse(read_file(expected_path));
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorKind::PackageCorrupt, "PackageCorrupt: unreadable expected file");
  }

  ValidationResult result;
  std::string test_id;
  try {
    result.original = failure_outcome_from_json(expected_json.at("expected"));
    test_id = expected_json.at("test").get<std::string>();
  } catch (const std::exception&) {
    throw Error(ErrorKind::PackageCorrupt, "PackageCorrupt: malformed expected file");
  }

  const auto start = std::chrono::steady_clock::now();
  {
    // One exclusive scratch workspace per validation; the package stays
    // untouched.
    ScopedDir scratch(unique_workdir("validate"));
    copy_tree(package_root, scratch.path(), {"target"});
    result.reproduced = run_package_lifecycle(backend, scratch.path(), test_id);
  }
  const auto end = std::chrono::steady_clock::now();
  result.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();

  result.valid = result.original.status == OutcomeStatus::Failed &&
                 result.reproduced.status == OutcomeStatus::Failed &&
                 result.original.failure_type == result.reproduced.failure_type &&
                 result.original.message == result.reproduced.message;
  return result;
}

Metrics compute_metrics(const BuildBackend& backend, const ProjectModel& original,
                        const fs::path& package_root, bool valid) {
  Metrics metrics;

  // Original side.
  std::size_t original_sources = original.app_sources.size() + original.test_sources.size();
  for (const auto& generator : original.generators) original_sources += generator.produces.size();
  std::size_t original_internal = 0;
  for (const auto& library : original.libraries) {
    if (!is_internal(library.coord, original.group)) continue;
    original_internal += library.archive_path
                             ? archive_class_count(original.root_dir / *library.archive_path)
                             : library.classes.size();
  }
  EffectiveConfig effective = backend.compute_effective_config(original);
  const std::size_t original_config = config_char_count(effective.plugins, effective.properties);
  const std::size_t original_resources =
      list_files_recursive(original.root_dir / kResourceRoot).size();

  // Package side, counted leniently from the emitted files so an invalid
  // package still yields counts.
  std::size_t kept_sources = 0;
  std::size_t kept_internal = 0;
  std::size_t kept_config = 0;
  const std::size_t kept_resources =
      list_files_recursive(package_root / kResourceRoot).size();
  try {
    const ojson manifest = ojson::parse(read_file(package_root / kManifestFileName));
    if (manifest.contains("app_sources")) kept_sources += manifest["app_sources"].size();
    if (manifest.contains("test_sources")) kept_sources += manifest["test_sources"].size();
    if (manifest.contains("generators")) {
      for (const auto& generator : manifest["generators"]) {
        kept_sources += generator.at("produces").size();
      }
    }
    if (manifest.contains("libraries")) {
      for (const auto& library : manifest["libraries"]) {
        if (!library.contains("archive_path")) continue;
        LibCoord coord = lib_coord_from_json(library.at("coord"));
        if (!is_internal(coord, original.group)) continue;
        const fs::path archive = package_root / library["archive_path"].get<std::string>();
        if (fs::exists(archive)) kept_internal += archive_class_count(archive);
      }
    }
  } catch (const std::exception&) {
    // Unreadable manifest: keep zero counts for the source side.
  }
  try {
    const ojson config = ojson::parse(read_file(package_root / kConfigFileName));
    std::vector<PluginConfig> plugins;
    if (config.contains("plugins")) {
      for (const auto& plugin : config["plugins"]) {
        plugins.push_back(plugin_config_from_json(plugin));
      }
    }
    std::map<std::string, std::string> properties;
    if (config.contains("properties")) {
      properties = config["properties"].get<std::map<std::string, std::string>>();
    }
    kept_config = config_char_count(plugins, properties);
  } catch (const std::exception&) {
  }

  auto fill = [&](CategoryMetrics* category, std::size_t original_count, std::size_t kept_count) {
    category->original_count = original_count;
    category->kept_count = kept_count;
    category->percent_reduction = reduction(original_count, kept_count, valid);
  };
  fill(&metrics.internal_classes, original_internal, kept_internal);
  fill(&metrics.source_classes, original_sources, kept_sources);
  fill(&metrics.source_plus_internal, original_sources + original_internal,
       kept_sources + kept_internal);
  fill(&metrics.config_chars, original_config, kept_config);
  fill(&metrics.resources, original_resources, kept_resources);
  return metrics;
}

ojson to_json(const ValidationResult& result) {
  return ojson{{"valid", result.valid},
               {"original", to_json(result.original)},
               {"reproduced", to_json(result.reproduced)},
               {"elapsed_ms", result.elapsed_ms}};
}

ojson to_json(const Metrics& metrics) {
  auto category = [](const CategoryMetrics& c) {
    return ojson{{"original_count", c.original_count},
                 {"kept_count", c.kept_count},
                 {"percent_reduction", c.percent_reduction}};
  };
  return ojson{{"internal_classes", category(metrics.internal_classes)},
               {"source_classes", category(metrics.source_classes)},
               {"source_plus_internal", category(metrics.source_plus_internal)},
               {"config_chars", category(metrics.config_chars)},
               {"resources", category(metrics.resources)}};
}

}  // namespace pexrep
