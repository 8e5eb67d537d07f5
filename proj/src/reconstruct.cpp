#include "pexrep/reconstruct.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "pexrep/archive.hpp"
#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"
#include "pexrep/gencode.hpp"
#include "pexrep/json_io.hpp"

namespace pexrep {

namespace {

ojson options_to_json(const CreateOptions& options) {
  return ojson{{"dynamic", options.dynamic},
               {"config_slice", options.config_slice},
               {"resources", options.resources},
               {"gencode", options.gencode}};
}

ojson config_document_to_json(const ConfigDocument& doc) {
  ojson plugins = ojson::array();
  for (const auto& plugin : doc.plugins) plugins.push_back(to_json(plugin));
  ojson deps = ojson::array();
  for (const auto& coord : doc.dependency_coords) deps.push_back(ojson{{"coord", to_json(coord)}});
  return ojson{{"path", kConfigFileName},
               {"plugins", plugins},
               {"properties", doc.properties},
               {"dependencies", deps}};
}

}  // namespace

std::vector<std::string> create_template(const std::filesystem::path& package_root,
                                         const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos ||
      name.find('\\') != std::string::npos ||
      name.find_first_of(" \t\n") != std::string::npos) {
    throw Error(ErrorKind::InvalidName, "invalid package name: " + name);
  }
  if (!dir_missing_or_empty(package_root)) {
    throw Error(ErrorKind::IoFailure, "package root is not empty");
  }

  const std::vector<std::string> dirs = {"src",          "src/main", "src/test",
                                         "src/main/res", "src/gen",  "libs"};
  std::vector<std::string> created;
  for (const auto& dir : dirs) {
    fs::create_directories(package_root / dir);
    created.push_back(dir);
  }
  write_file(package_root / kManifestFileName,
             dump_canonical(ojson{{"name", name},
                                  {"group", "repro.local"},
                                  {"app_sources", ojson::array()},
                                  {"test_sources", ojson::array()},
                                  {"config_files", ojson::array({ojson{{"path", kConfigFileName}}})}}));
  write_file(package_root / kConfigFileName,
             dump_canonical(config_document_to_json(ConfigDocument{})));
  created.push_back(kManifestFileName);
  created.push_back(kConfigFileName);
  return created;
}

std::vector<std::string> extract_source_files(const FailureTrace& trace,
                                              const ProjectModel& project,
                                              const std::filesystem::path& package_root) {
  std::vector<std::string> copied;
  auto copy_item = [&](const ItemRef& ref) {
    const SourceItem* item = project.find_item(ref.qualified_name);
    if (!item) {
      throw Error(ErrorKind::MissingSourceFile, "MissingSourceFile: " + ref.qualified_name);
    }
    const fs::path from = project.root_dir / item->file_path;
    if (!fs::is_regular_file(from)) {
      throw Error(ErrorKind::MissingSourceFile, "MissingSourceFile: " + item->file_path);
    }
    const fs::path to = package_root / item->file_path;
    fs::create_directories(to.parent_path());
    fs::copy_file(from, to, fs::copy_options::overwrite_existing);
    copied.push_back(item->file_path);
  };

  for (const auto& ref : trace.tests) copy_item(ref);
  for (const auto& ref : trace.sources) {
    if (ref.kind == ItemKind::AppSource) copy_item(ref);  // generated code goes via gencode
  }
  std::sort(copied.begin(), copied.end());
  return copied;
}

PrunedLibraries extract_pruned_libraries(const FailureTrace& trace, const ProjectModel& project,
                                         const std::string& project_group,
                                         const std::filesystem::path& package_root) {
  // Traced classes grouped per declaring library.
  std::map<LibCoord, std::set<std::string>> traced;
  for (const auto& ref : trace.lib_classes) {
    const Library* library = project.find_library(*ref.lib_coord);
    if (!library || !library->find_class(ref.qualified_name)) {
      throw Error(ErrorKind::UnknownLibraryClass, "UnknownLibraryClass: " + ref.qualified_name);
    }
    traced[library->coord].insert(ref.qualified_name);
  }

  PrunedLibraries result;
  for (const auto& library : project.libraries) {
    auto it = traced.find(library.coord);
    if (it == traced.end()) continue;  // no traced class: dropped entirely

    if (!is_internal(library.coord, project_group)) {
      result.external.push_back(library.coord);
      continue;
    }

    // Traced classes plus their intra-library load closure keep the pruned
    // archive executable.
    std::set<std::string> kept = it->second;
    std::deque<std::string> queue(kept.begin(), kept.end());
    while (!queue.empty()) {
      const LibraryClass* cls = library.find_class(queue.front());
      queue.pop_front();
      if (!cls) continue;
      for (const auto& load : cls->loads) {
        if (load.lib_coord == library.coord && library.find_class(load.qualified_name) &&
            kept.insert(load.qualified_name).second) {
          queue.push_back(load.qualified_name);
        }
      }
    }

    PrunedLibrary pruned;
    pruned.coord = library.coord;
    pruned.kept_classes.assign(kept.begin(), kept.end());
    pruned.archive_path =
        "libs/" + library.coord.artifact + "-" + library.coord.version + ".archive";
    std::map<std::string, std::string> entries;
    for (const auto& name : pruned.kept_classes) {
      entries[class_entry_name(name)] = "class " + library.coord.to_string() + ":" + name + "\n";
    }
    write_archive(package_root / pruned.archive_path, entries);
    result.pruned.push_back(std::move(pruned));
  }
  return result;
}

ReproPackage assemble_report(const AssembleInputs& inputs, const std::filesystem::path& out_dir) {
  const ProjectModel& project = *inputs.project;
  ReproPackage package;
  package.root = out_dir;
  package.provenance = Provenance{project.name, inputs.test_id, inputs.options};

  create_template(out_dir, project.name);
  extract_source_files(inputs.trace, project, out_dir);

  // Generated code: template products are copied in as ordinary sources
  // under src/gen; annotation generators are carried and re-run in the
  // package. With the enhancement off the package gets neither.
  GeneratedExtraction generated;
  if (inputs.options.gencode) {
    generated =
        extract_generated_sources(project, trace_source_roots(inputs.records), inputs.trace);
    for (const auto& copy : generated.copies) {
      const fs::path from = inputs.build_workspace / copy.original_path;
      if (!fs::is_regular_file(from)) {
        throw Error(ErrorKind::MissingGeneratedFile, "MissingGeneratedFile: " + copy.original_path);
      }
      const fs::path to = out_dir / copy.package_path;
      fs::create_directories(to.parent_path());
      fs::copy_file(from, to, fs::copy_options::overwrite_existing);
    }
    for (const auto& generator : generated.carried) {
      for (const auto& rel : generator.template_resources) {
        const fs::path from = project.root_dir / rel;
        if (!fs::is_regular_file(from)) {
          throw Error(ErrorKind::MissingGeneratedFile, "MissingGeneratedFile: " + rel);
        }
        const fs::path to = out_dir / rel;
        fs::create_directories(to.parent_path());
        fs::copy_file(from, to, fs::copy_options::overwrite_existing);
      }
    }
  }

  PrunedLibraries libraries =
      extract_pruned_libraries(inputs.trace, project, project.group, out_dir);
  package.pruned_libraries = libraries.pruned;
  package.external_coords = libraries.external;

  std::vector<std::string> materialized;
  if (inputs.options.resources) {
    materialized = materialize_resources(inputs.plan, project.root_dir, out_dir);
  }

  package.config = inputs.config;
  package.config.dependency_coords = libraries.external;
  write_file(out_dir / kConfigFileName,
             dump_canonical(config_document_to_json(package.config)));

  // Package manifest: the traced slice of the original project wired to the
  // package layout. Item declarations are carried verbatim so the package
  // run replays the original load and access sequence.
  ProjectModel manifest;
  manifest.name = project.name;
  manifest.group = project.group;
  manifest.root_dir = out_dir;

  for (const auto& ref : inputs.trace.sources) {
    if (ref.kind != ItemKind::AppSource) continue;
    manifest.app_sources.push_back(*project.find_item(ref.qualified_name));
  }
  for (const auto& copy : generated.copies) {
    SourceItem item = copy.item;
    item.kind = ItemKind::AppSource;  // plain source in the package
    manifest.app_sources.push_back(std::move(item));
  }
  std::sort(manifest.app_sources.begin(), manifest.app_sources.end(),
            [](const SourceItem& a, const SourceItem& b) { return a.id < b.id; });
  if (!generated.copies.empty()) manifest.source_roots.push_back(kPackageGenRoot);

  for (const auto& ref : inputs.trace.tests) {
    manifest.test_sources.push_back(*project.find_item(ref.qualified_name));
  }
  std::sort(manifest.test_sources.begin(), manifest.test_sources.end(),
            [](const SourceItem& a, const SourceItem& b) { return a.id < b.id; });

  for (const auto& library : project.libraries) {
    auto pruned = std::find_if(
        libraries.pruned.begin(), libraries.pruned.end(),
        [&](const PrunedLibrary& p) { return p.coord == library.coord; });
    if (pruned != libraries.pruned.end()) {
      Library packaged;
      packaged.coord = library.coord;
      packaged.archive_path = pruned->archive_path;
      for (const auto& cls : library.classes) {
        if (std::find(pruned->kept_classes.begin(), pruned->kept_classes.end(), cls.name) !=
            pruned->kept_classes.end()) {
          packaged.classes.push_back(cls);
        }
      }
      manifest.libraries.push_back(std::move(packaged));
      continue;
    }
    if (std::find(libraries.external.begin(), libraries.external.end(), library.coord) !=
        libraries.external.end()) {
      Library packaged = library;  // declared whole, resolved by coordinate
      packaged.archive_path.reset();
      manifest.libraries.push_back(std::move(packaged));
    }
  }

  for (const auto& rel : materialized) {
    if (fs::is_regular_file(out_dir / rel)) {
      manifest.resources.push_back(rel.substr(std::string(kResourceRoot).size() + 1));
    }
  }
  for (const auto& generator : generated.carried) {
    for (const auto& rel : generator.template_resources) {
      const std::string res_prefix = std::string(kResourceRoot) + "/";
      if (rel.rfind(res_prefix, 0) == 0) {
        manifest.resources.push_back(rel.substr(res_prefix.size()));
      }
    }
  }
  std::sort(manifest.resources.begin(), manifest.resources.end());
  manifest.resources.erase(std::unique(manifest.resources.begin(), manifest.resources.end()),
                           manifest.resources.end());

  manifest.generators = generated.carried;
  manifest.config_files.push_back(ConfigFile{kConfigFileName, package.config.plugins,
                                             package.config.properties, {}});
  package.manifest = manifest;

  ojson mj;
  mj["name"] = manifest.name;
  mj["group"] = manifest.group;
  if (!manifest.source_roots.empty()) mj["source_roots"] = manifest.source_roots;
  ojson apps = ojson::array();
  for (const auto& item : manifest.app_sources) apps.push_back(to_json(item));
  mj["app_sources"] = apps;
  ojson tests = ojson::array();
  for (const auto& item : manifest.test_sources) tests.push_back(to_json(item));
  mj["test_sources"] = tests;
  ojson libs = ojson::array();
  for (const auto& library : manifest.libraries) libs.push_back(to_json(library));
  mj["libraries"] = libs;
  mj["resources"] = manifest.resources;
  ojson generators = ojson::array();
  for (const auto& generator : manifest.generators) generators.push_back(to_json(generator));
  mj["generators"] = generators;
  mj["config_files"] = ojson::array({ojson{{"path", kConfigFileName}}});
  write_file(out_dir / kManifestFileName, dump_canonical(mj));

  write_file(out_dir / kExpectedFileName,
             dump_canonical(ojson{{"project", project.name},
                                  {"test", inputs.test_id},
                                  {"options", options_to_json(inputs.options)},
                                  {"expected", to_json(inputs.outcome)}}));

  const ResourcePlan plan = inputs.options.resources ? inputs.plan : ResourcePlan{};
  write_file(out_dir / kPlanFileName,
             dump_canonical(ojson{{"extract_with_content", plan.extract_with_content},
                                  {"dummy_empty", plan.dummy_empty},
                                  {"excluded_generated", plan.excluded_generated}}));

  ojson rounds = ojson::array();
  for (const auto& record : inputs.records) {
    ojson refs = ojson::array();
    for (const auto& ref : record.referenced) refs.push_back(ref.to_ref_string());
    rounds.push_back(ojson{{"task", to_string(record.task)},
                           {"referenced", refs},
                           {"source_roots", record.source_roots},
                           {"resource_event_count", record.resource_events.size()},
                           {"workspace_output_count", record.workspace_outputs.size()}});
  }
  ojson rewrites = ojson::array();
  for (const auto& [from, to] : package.config.rewrites_applied) {
    rewrites.push_back(ojson{{"from", from}, {"to", to}});
  }
  ojson trace_json = to_json(inputs.trace);
  trace_json["outcome"] = to_json(inputs.outcome);
  trace_json["round3_passes"] = inputs.round3_passes;
  trace_json["rounds"] = rounds;
  trace_json["rewrites_applied"] = rewrites;
  write_file(out_dir / kTraceFileName, dump_canonical(trace_json));

  return package;
}

}  // namespace pexrep
