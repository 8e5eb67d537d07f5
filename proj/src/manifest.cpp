#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pexrep/backend.hpp"
#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"
#include "pexrep/json_io.hpp"

namespace pexrep {

const ConfigNode* ConfigNode::query(const std::string& path) const {
  const ConfigNode* node = this;
  size_t start = 0;
  while (start <= path.size()) {
    size_t slash = path.find('/', start);
    std::string key = path.substr(start, slash == std::string::npos ? slash : slash - start);
    const ConfigNode* next = nullptr;
    for (const auto& [name, child] : node->children) {
      if (name == key) {
        next = &child;
        break;
      }
    }
    if (!next) return nullptr;
    node = next;
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return node;
}

ConfigNode& ConfigNode::ensure(const std::string& path) {
  ConfigNode* node = this;
  size_t start = 0;
  while (start <= path.size()) {
    size_t slash = path.find('/', start);
    std::string key = path.substr(start, slash == std::string::npos ? slash : slash - start);
    ConfigNode* next = nullptr;
    for (auto& [name, child] : node->children) {
      if (name == key) {
        next = &child;
        break;
      }
    }
    if (!next) {
      node->children.emplace_back(key, ConfigNode{});
      next = &node->children.back().second;
    }
    node = next;
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return *node;
}

const char* to_string(PluginPhase phase) {
  switch (phase) {
    case PluginPhase::GenerateSources: return "generate-sources";
    case PluginPhase::ProcessResources: return "process-resources";
    case PluginPhase::Compile: return "compile";
    case PluginPhase::TestCompile: return "test-compile";
    case PluginPhase::Test: return "test";
    case PluginPhase::Deploy: return "deploy";
    case PluginPhase::Verify: return "verify";
  }
  return "compile";
}

PluginPhase plugin_phase_from_string(const std::string& s) {
  if (s == "generate-sources") return PluginPhase::GenerateSources;
  if (s == "process-resources") return PluginPhase::ProcessResources;
  if (s == "compile") return PluginPhase::Compile;
  if (s == "test-compile") return PluginPhase::TestCompile;
  if (s == "test") return PluginPhase::Test;
  if (s == "deploy") return PluginPhase::Deploy;
  if (s == "verify") return PluginPhase::Verify;
  throw Error(ErrorKind::ManifestSemantic, "unknown plugin phase: " + s);
}

PluginPhase phase_of(TaskKind task) {
  switch (task) {
    case TaskKind::GenerateSources: return PluginPhase::GenerateSources;
    case TaskKind::ProcessResources: return PluginPhase::ProcessResources;
    case TaskKind::Compile: return PluginPhase::Compile;
    case TaskKind::TestCompile: return PluginPhase::TestCompile;
    case TaskKind::Test: return PluginPhase::Test;
  }
  return PluginPhase::Compile;
}

const char* to_string(PluginCategory category) {
  return category == PluginCategory::Build ? "Build" : "Analysis";
}

PluginCategory plugin_category_from_string(const std::string& s) {
  if (s == "Build") return PluginCategory::Build;
  if (s == "Analysis") return PluginCategory::Analysis;
  throw Error(ErrorKind::ManifestSemantic, "unknown plugin category: " + s);
}

const char* to_string(GeneratorKind kind) {
  return kind == GeneratorKind::Template ? "Template" : "AnnotationProcessing";
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  if (s == "Template") return GeneratorKind::Template;
  if (s == "AnnotationProcessing") return GeneratorKind::AnnotationProcessing;
  throw Error(ErrorKind::ManifestSemantic, "unknown generator kind: " + s);
}

const PluginConfig* EffectiveConfig::find_plugin(const std::string& id) const {
  for (const auto& plugin : plugins) {
    if (plugin.id == id) return &plugin;
  }
  return nullptr;
}

bool EffectiveConfig::has_plugin_at(const std::string& id, PluginPhase phase) const {
  const PluginConfig* plugin = find_plugin(id);
  return plugin && plugin->category == PluginCategory::Build && plugin->phases.count(phase) > 0;
}

const LibraryClass* Library::find_class(const std::string& name) const {
  for (const auto& cls : classes) {
    if (cls.name == name) return &cls;
  }
  return nullptr;
}

const SourceItem* ProjectModel::find_item(const std::string& id) const {
  for (const auto& item : app_sources) {
    if (item.id == id) return &item;
  }
  for (const auto& item : test_sources) {
    if (item.id == id) return &item;
  }
  for (const auto& generator : generators) {
    for (const auto& item : generator.produces) {
      if (item.id == id) return &item;
    }
  }
  return nullptr;
}

const Library* ProjectModel::find_library(const LibCoord& coord) const {
  for (const auto& library : libraries) {
    if (library.coord == coord) return &library;
  }
  return nullptr;
}

const Generator* ProjectModel::generator_of(const std::string& item_id) const {
  for (const auto& generator : generators) {
    for (const auto& item : generator.produces) {
      if (item.id == item_id) return &generator;
    }
  }
  return nullptr;
}

std::set<ItemRef> ProjectModel::all_app_refs() const {
  std::set<ItemRef> refs;
  for (const auto& item : app_sources) refs.insert(item.ref());
  for (const auto& generator : generators) {
    for (const auto& item : generator.produces) refs.insert(item.ref());
  }
  return refs;
}

std::set<ItemRef> ProjectModel::all_test_refs() const {
  std::set<ItemRef> refs;
  for (const auto& item : test_sources) refs.insert(item.ref());
  return refs;
}

ProjectModel ProjectModel::rebased(std::filesystem::path new_root) const {
  ProjectModel copy = *this;
  copy.root_dir = std::move(new_root);
  return copy;
}

namespace {

[[noreturn]] void semantic(const std::string& what) {
  throw Error(ErrorKind::ManifestSemantic, what);
}

// Declaration index used while resolving "src:"/"lib:" ref strings.
struct DeclIndex {
  std::map<std::string, ItemKind> source_kinds;
  std::map<std::pair<std::string, std::string>, const Library*> libraries;  // (group, artifact)
};

// Manifest refs carry no kind; resolve against declarations. Undeclared
// source targets default to AppSource — dynamic loads bind at run time, so a
// dangling load is legal input and surfaces later as ClassNotFound.
ItemRef resolve_ref(const std::string& raw, const DeclIndex& index, bool must_exist) {
  if (raw.rfind("src:", 0) == 0) {
    std::string id = raw.substr(4);
    auto it = index.source_kinds.find(id);
    if (it == index.source_kinds.end()) {
      if (must_exist) semantic("dangling ref: " + raw);
      return ItemRef::source(ItemKind::AppSource, id);
    }
    return ItemRef::source(it->second, id);
  }
  if (raw.rfind("lib:", 0) == 0) {
    std::string rest = raw.substr(4);
    auto c1 = rest.find(':');
    auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) semantic("malformed ref: " + raw);
    std::string group = rest.substr(0, c1);
    std::string artifact = rest.substr(c1 + 1, c2 - c1 - 1);
    std::string cls = rest.substr(c2 + 1);
    auto it = index.libraries.find({group, artifact});
    if (it == index.libraries.end()) {
      if (must_exist) semantic("dangling ref: " + raw);
      return ItemRef::library(LibCoord{group, artifact, "0"}, cls);
    }
    const Library* library = it->second;
    if (must_exist && !library->find_class(cls)) semantic("dangling ref: " + raw);
    return ItemRef::library(library->coord, cls);
  }
  semantic("malformed ref: " + raw);
}

struct RawItem {
  SourceItem item;
  std::vector<std::string> static_refs;
  std::vector<std::string> dynamic_loads;
};

RawItem parse_item(const ojson& j, ItemKind kind) {
  RawItem raw;
  SourceItem& item = raw.item;
  item.kind = kind;
  if (!j.contains("id") || !j["id"].is_string()) semantic("item missing id");
  item.id = j["id"].get<std::string>();
  if (!valid_qualified_name(item.id)) semantic("invalid item id: " + item.id);
  if (!j.contains("file_path") || !j["file_path"].is_string()) {
    semantic("item missing file_path: " + item.id);
  }
  item.file_path = j["file_path"].get<std::string>();
  if (j.contains("static_refs")) raw.static_refs = j["static_refs"].get<std::vector<std::string>>();
  if (j.contains("dynamic_loads")) {
    raw.dynamic_loads = j["dynamic_loads"].get<std::vector<std::string>>();
  }
  if (j.contains("resource_reads")) {
    item.resource_reads = j["resource_reads"].get<std::vector<std::string>>();
  }
  if (j.contains("resource_writes")) {
    for (const auto& w : j["resource_writes"]) {
      item.resource_writes.push_back(
          ResourceWrite{w.at("path").get<std::string>(), w.at("content").get<std::string>()});
    }
  }
  if (j.contains("requires_plugin")) item.requires_plugin = j["requires_plugin"].get<std::string>();
  if (j.contains("failure")) {
    if (kind != ItemKind::TestSource) semantic("failure declared on non-test item: " + item.id);
    item.failure = DeclaredFailure{j["failure"].at("type").get<std::string>(),
                                   j["failure"].at("message").get<std::string>()};
  }
  if (j.contains("message_from_resource")) {
    if (kind != ItemKind::TestSource) {
      semantic("message_from_resource on non-test item: " + item.id);
    }
    item.message_from_resource = j["message_from_resource"].get<std::string>();
  }
  return raw;
}

bool under_root(const std::string& file_path, const std::string& root) {
  return file_path.rfind(root + "/", 0) == 0;
}

}  // namespace

std::string generated_file_content(const std::string& item_id,
                                   const std::vector<std::string>& template_contents) {
  std::string out = "// generated source\nitem " + item_id + "\n";
  for (const auto& content : template_contents) out += content;
  return out;
}

ProjectModel MiniBuild::parse_manifest(const std::filesystem::path& root_dir) const {
  const fs::path manifest_path = root_dir / kManifestFileName;
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorKind::ManifestSyntax, std::string("missing ") + kManifestFileName);
  }
  ojson j;
  try {
    j = ojson::parse(read_file(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ManifestSyntax, std::string("manifest parse error: ") + e.what());
  }

  ProjectModel project;
  project.root_dir = root_dir;
  try {
    if (!j.is_object()) semantic("manifest root must be an object");
    if (!j.contains("name") || !j["name"].is_string()) semantic("missing project name");
    project.name = j["name"].get<std::string>();
    if (!j.contains("group") || !j["group"].is_string()) semantic("missing project group");
    project.group = j["group"].get<std::string>();
    if (!valid_group(project.group)) semantic("invalid project group: " + project.group);
    if (j.contains("source_roots")) {
      project.source_roots = j["source_roots"].get<std::vector<std::string>>();
    }

    std::vector<RawItem> raw_items;
    auto parse_section = [&](const char* key, ItemKind kind, std::vector<SourceItem>* out) {
      if (!j.contains(key)) return;
      for (const auto& entry : j[key]) {
        RawItem raw = parse_item(entry, kind);
        if (out) out->push_back(raw.item);
        raw_items.push_back(std::move(raw));
      }
    };
    parse_section("app_sources", ItemKind::AppSource, &project.app_sources);
    parse_section("test_sources", ItemKind::TestSource, &project.test_sources);

    std::vector<std::vector<std::vector<std::string>>> raw_class_loads;
    if (j.contains("libraries")) {
      for (const auto& entry : j["libraries"]) {
        Library library;
        std::vector<std::vector<std::string>> lib_loads;
        library.coord = lib_coord_from_json(entry.at("coord"));
        check(library.coord);
        std::set<std::string> class_names;
        if (entry.contains("classes")) {
          for (const auto& c : entry["classes"]) {
            LibraryClass cls;
            cls.name = c.at("name").get<std::string>();
            if (!valid_qualified_name(cls.name)) semantic("invalid class name: " + cls.name);
            if (!class_names.insert(cls.name).second) {
              semantic("duplicate class " + cls.name + " in " + library.coord.to_string());
            }
            std::vector<std::string> loads;
            if (c.contains("loads")) loads = c["loads"].get<std::vector<std::string>>();
            lib_loads.push_back(std::move(loads));
            library.classes.push_back(cls);
          }
        }
        if (entry.contains("archive_path")) {
          library.archive_path = entry["archive_path"].get<std::string>();
        }
        project.libraries.push_back(library);
        raw_class_loads.push_back(std::move(lib_loads));
      }
    }

    if (j.contains("resources")) {
      project.resources = j["resources"].get<std::vector<std::string>>();
    }

    if (j.contains("generators")) {
      for (const auto& entry : j["generators"]) {
        Generator generator;
        generator.output_root = entry.at("output_root").get<std::string>();
        if (generator.output_root.empty() || under_root(generator.output_root, "src") ||
            generator.output_root == "src") {
          semantic("generator output_root overlaps src/: " + generator.output_root);
        }
        generator.kind = generator_kind_from_string(entry.at("kind").get<std::string>());
        if (entry.contains("template_resources")) {
          generator.template_resources =
              entry["template_resources"].get<std::vector<std::string>>();
        }
        for (const auto& p : entry.at("produces")) {
          RawItem raw = parse_item(p, ItemKind::GeneratedSource);
          if (!under_root(raw.item.file_path, generator.output_root)) {
            semantic("generated item outside output_root: " + raw.item.id);
          }
          generator.produces.push_back(raw.item);
          raw_items.push_back(std::move(raw));
        }
        project.generators.push_back(generator);
      }
    }

    if (!j.contains("config_files") || !j["config_files"].is_array() ||
        j["config_files"].empty()) {
      semantic("config_files must be a non-empty list");
    }
    for (const auto& entry : j["config_files"]) {
      ojson file_json = entry;
      if (entry.is_object() && entry.size() == 1 && entry.contains("path")) {
        // Indirection: the config file lives beside the manifest.
        const std::string rel = entry["path"].get<std::string>();
        const fs::path config_path = root_dir / rel;
        if (!fs::exists(config_path)) semantic("dangling config file: " + rel);
        try {
          file_json = ojson::parse(read_file(config_path));
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(ErrorKind::ManifestSyntax, std::string("config parse error: ") + e.what());
        }
        if (!file_json.contains("path")) file_json["path"] = rel;
      }
      ConfigFile file = config_file_from_json(file_json);
      std::set<std::string> plugin_ids;
      for (const auto& plugin : file.plugins) {
        if (plugin.phases.empty()) semantic("plugin without phases: " + plugin.id);
        if (!plugin_ids.insert(plugin.id).second) {
          semantic("duplicate plugin " + plugin.id + " in " + file.path);
        }
      }
      project.config_files.push_back(std::move(file));
    }

    // Declaration index and uniqueness across app, test, and generated items.
    DeclIndex index;
    for (const auto& raw : raw_items) {
      if (!index.source_kinds.emplace(raw.item.id, raw.item.kind).second) {
        semantic("duplicate item id: " + raw.item.id);
      }
    }
    for (const auto& library : project.libraries) {
      auto key = std::make_pair(library.coord.group, library.coord.artifact);
      if (!index.libraries.emplace(key, &library).second) {
        semantic("duplicate library: " + library.coord.to_string());
      }
    }

    // Resolve refs. Static refs must name declared targets (the compiler
    // would reject them); dynamic loads resolve when the loader runs.
    auto resolve_into = [&](const std::vector<std::string>& raws, bool must_exist,
                            std::vector<ItemRef>* out) {
      for (const auto& raw : raws) out->push_back(resolve_ref(raw, index, must_exist));
    };
    auto locate = [&](const std::string& id) -> SourceItem* {
      for (auto& item : project.app_sources) {
        if (item.id == id) return &item;
      }
      for (auto& item : project.test_sources) {
        if (item.id == id) return &item;
      }
      for (auto& generator : project.generators) {
        for (auto& item : generator.produces) {
          if (item.id == id) return &item;
        }
      }
      return nullptr;
    };
    for (const auto& raw : raw_items) {
      SourceItem* item = locate(raw.item.id);
      resolve_into(raw.static_refs, /*must_exist=*/true, &item->static_refs);
      resolve_into(raw.dynamic_loads, /*must_exist=*/false, &item->dynamic_loads);
    }
    // Library class loads stay within object code and bind at run time.
    for (size_t li = 0; li < project.libraries.size(); ++li) {
      Library& library = project.libraries[li];
      for (size_t ci = 0; ci < library.classes.size(); ++ci) {
        for (const auto& raw : raw_class_loads[li][ci]) {
          ItemRef ref = resolve_ref(raw, index, /*must_exist=*/false);
          if (ref.kind != ItemKind::LibraryClass) {
            semantic("library class load must target a library class: " + raw);
          }
          library.classes[ci].loads.push_back(std::move(ref));
        }
      }
    }

    // On-disk checks: source files, resources, archives.
    auto check_file_location = [&](const SourceItem& item) {
      if (item.kind == ItemKind::AppSource) {
        bool ok = under_root(item.file_path, "src/main") &&
                  !under_root(item.file_path, kResourceRoot);
        for (const auto& root : project.source_roots) ok = ok || under_root(item.file_path, root);
        if (!ok) semantic("app source outside source roots: " + item.file_path);
      } else if (item.kind == ItemKind::TestSource) {
        if (!under_root(item.file_path, "src/test")) {
          semantic("test source outside src/test: " + item.file_path);
        }
      }
    };
    for (const auto& item : project.app_sources) {
      check_file_location(item);
      if (!fs::exists(root_dir / item.file_path)) semantic("dangling file: " + item.file_path);
    }
    for (const auto& item : project.test_sources) {
      check_file_location(item);
      if (!fs::exists(root_dir / item.file_path)) semantic("dangling file: " + item.file_path);
    }
    for (const auto& rel : project.resources) {
      if (!fs::exists(root_dir / kResourceRoot / rel)) semantic("dangling resource: " + rel);
    }
    for (const auto& library : project.libraries) {
      if (library.archive_path && !fs::exists(root_dir / *library.archive_path)) {
        semantic("dangling archive: " + *library.archive_path);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ManifestSemantic, std::string("malformed manifest: ") + e.what());
  }
  return project;
}

}  // namespace pexrep
