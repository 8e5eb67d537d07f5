#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pexrep/core.hpp"

namespace pexrep {

// Nested string-keyed settings tree. A node is either a leaf (value set) or
// an internal node with ordered children; paths are slash-separated.
struct ConfigNode {
  std::optional<std::string> value;
  std::vector<std::pair<std::string, ConfigNode>> children;

  bool operator==(const ConfigNode&) const = default;

  bool is_leaf() const { return value.has_value(); }
  const ConfigNode* query(const std::string& path) const;
  ConfigNode& ensure(const std::string& path);
};

enum class PluginPhase {
  GenerateSources,
  ProcessResources,
  Compile,
  TestCompile,
  Test,
  Deploy,
  Verify,
};

const char* to_string(PluginPhase phase);
PluginPhase plugin_phase_from_string(const std::string& s);

// Phase a task's compiler/runner consults for plugin attachment.
PluginPhase phase_of(TaskKind task);

enum class PluginCategory { Build, Analysis };

const char* to_string(PluginCategory category);
PluginCategory plugin_category_from_string(const std::string& s);

struct PluginConfig {
  std::string id;
  std::set<PluginPhase> phases;
  PluginCategory category = PluginCategory::Build;
  ConfigNode settings;

  bool operator==(const PluginConfig&) const = default;
};

struct DependencyDecl {
  LibCoord coord;
  std::optional<LibCoord> via;

  bool operator==(const DependencyDecl&) const = default;
};

struct ConfigFile {
  std::string path;
  std::vector<PluginConfig> plugins;
  std::map<std::string, std::string> properties;
  std::vector<DependencyDecl> dependencies;

  bool operator==(const ConfigFile&) const = default;
};

// Fully merged configuration the backend actually builds with.
struct EffectiveConfig {
  std::vector<PluginConfig> plugins;
  std::map<std::string, std::string> properties;
  std::vector<LibCoord> mediated_dependencies;
  std::map<std::string, std::string> origin;

  bool operator==(const EffectiveConfig&) const = default;

  const PluginConfig* find_plugin(const std::string& id) const;
  bool has_plugin_at(const std::string& id, PluginPhase phase) const;
};

struct ResourceWrite {
  std::string path;  // relative to target/classes
  std::string content;

  bool operator==(const ResourceWrite&) const = default;
};

struct DeclaredFailure {
  std::string type;
  std::string message;

  bool operator==(const DeclaredFailure&) const = default;
};

struct SourceItem {
  std::string id;
  ItemKind kind = ItemKind::AppSource;
  std::string file_path;
  std::vector<ItemRef> static_refs;
  std::vector<ItemRef> dynamic_loads;
  std::vector<std::string> resource_reads;   // relative to target/classes
  std::vector<ResourceWrite> resource_writes;
  std::optional<std::string> requires_plugin;
  std::optional<DeclaredFailure> failure;               // TestSource only
  std::optional<std::string> message_from_resource;     // TestSource only

  bool operator==(const SourceItem&) const = default;

  ItemRef ref() const { return ItemRef::source(kind, id); }
};

struct LibraryClass {
  std::string name;
  std::vector<ItemRef> loads;  // LibraryClass refs only

  bool operator==(const LibraryClass&) const = default;
};

struct Library {
  LibCoord coord;
  std::vector<LibraryClass> classes;
  // Absent archive means the library resolves by coordinate (public artifact).
  std::optional<std::string> archive_path;

  bool operator==(const Library&) const = default;

  const LibraryClass* find_class(const std::string& name) const;
};

enum class GeneratorKind { Template, AnnotationProcessing };

const char* to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& s);

struct Generator {
  std::string output_root;
  GeneratorKind kind = GeneratorKind::Template;
  std::vector<std::string> template_resources;  // workspace-relative paths
  std::vector<SourceItem> produces;             // kind=GeneratedSource

  bool operator==(const Generator&) const = default;
};

struct ProjectModel {
  std::string name;
  std::string group;
  std::filesystem::path root_dir;
  std::vector<std::string> source_roots;  // extra roots beyond src/main, src/test
  std::vector<SourceItem> app_sources;
  std::vector<SourceItem> test_sources;
  std::vector<Library> libraries;
  std::vector<std::string> resources;  // relative to src/main/res
  std::vector<Generator> generators;
  std::vector<ConfigFile> config_files;  // parent-first

  const SourceItem* find_item(const std::string& id) const;
  const Library* find_library(const LibCoord& coord) const;
  const Generator* generator_of(const std::string& item_id) const;
  std::set<ItemRef> all_app_refs() const;   // app + generated
  std::set<ItemRef> all_test_refs() const;

  ProjectModel rebased(std::filesystem::path new_root) const;
};

// The six operations every build platform adapter must provide. MiniBuild is
// the deterministic reference implementation; a real-build adapter replaces
// it without touching the rest of the pipeline.
class BuildBackend {
 public:
  virtual ~BuildBackend() = default;

  virtual ProjectModel parse_manifest(const std::filesystem::path& root_dir) const = 0;
  virtual EffectiveConfig compute_effective_config(const ProjectModel& project) const = 0;
  virtual BuildRecord run_generate_sources(const ProjectModel& project) const = 0;
  virtual BuildRecord run_process_resources(const ProjectModel& project) const = 0;
  virtual BuildRecord run_compile(const ProjectModel& project, const std::set<ItemRef>& request,
                                  TaskKind task, const EffectiveConfig& config) const = 0;
  virtual std::pair<FailureOutcome, BuildRecord> run_test(const ProjectModel& project,
                                                          const std::string& test_id,
                                                          const EffectiveConfig& config) const = 0;
};

class MiniBuild final : public BuildBackend {
 public:
  ProjectModel parse_manifest(const std::filesystem::path& root_dir) const override;
  EffectiveConfig compute_effective_config(const ProjectModel& project) const override;
  BuildRecord run_generate_sources(const ProjectModel& project) const override;
  BuildRecord run_process_resources(const ProjectModel& project) const override;
  BuildRecord run_compile(const ProjectModel& project, const std::set<ItemRef>& request,
                          TaskKind task, const EffectiveConfig& config) const override;
  std::pair<FailureOutcome, BuildRecord> run_test(const ProjectModel& project,
                                                  const std::string& test_id,
                                                  const EffectiveConfig& config) const override;
};

// Deterministic bytes for a generated source file; shared by generation and
// by tests that predict generated content.
std::string generated_file_content(const std::string& item_id,
                                   const std::vector<std::string>& template_contents);

inline constexpr const char* kManifestFileName = "project.mb.json";
inline constexpr const char* kBuildLogPath = "target/build.log";
inline constexpr const char* kResourceRoot = "src/main/res";
inline constexpr const char* kClassesDir = "target/classes";
inline constexpr const char* kTestClassesDir = "target/test-classes";

}  // namespace pexrep
