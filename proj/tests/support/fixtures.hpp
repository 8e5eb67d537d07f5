#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pexrep/json_io.hpp"

namespace pexrep::testsup {

namespace fs = std::filesystem;

// Declarative project fixtures. The writer emits manifest JSON by hand so the
// test inputs do not depend on the library's own serializers.
struct ItemSpec {
  std::string id;
  std::vector<std::string> static_refs;
  std::vector<std::string> dynamic_loads;
  std::vector<std::string> resource_reads;
  std::vector<std::pair<std::string, std::string>> resource_writes;
  std::optional<std::string> requires_plugin;
  std::optional<std::pair<std::string, std::string>> failure;
  std::optional<std::string> message_from_resource;
};

struct LibClassSpec {
  std::string name;
  std::vector<std::string> loads;
};

struct LibSpec {
  std::string group;
  std::string artifact;
  std::string version;
  std::vector<LibClassSpec> classes;
  bool bundled = true;
};

struct GeneratorSpec {
  std::string output_root;
  std::string kind = "Template";
  std::vector<std::string> templates;  // workspace-relative paths
  std::vector<ItemSpec> produces;
};

struct PluginSpec {
  std::string id;
  std::vector<std::string> phases;
  std::string category = "Build";
  ojson settings = ojson::object();
};

struct DependencySpec {
  std::string coord;                 // "group:artifact:version"
  std::optional<std::string> via;
};

struct ConfigFileSpec {
  std::string path = "build.mb.json";
  std::vector<PluginSpec> plugins;
  std::map<std::string, std::string> properties;
  std::vector<DependencySpec> dependencies;
};

struct ProjectSpec {
  std::string name;
  std::string group;
  std::vector<ItemSpec> app;
  std::vector<ItemSpec> test;
  std::vector<LibSpec> libs;
  std::map<std::string, std::string> resources;  // res-relative path -> content
  std::vector<GeneratorSpec> generators;
  std::vector<ConfigFileSpec> configs;  // empty -> one minimal config file
};

// File path the writer assigns to a source item.
std::string item_file_path(const std::string& id, const std::string& root);

ojson manifest_json(const ProjectSpec& spec);
void write_project(const fs::path& dir, const ProjectSpec& spec);

// Golden fixture: the three-task build process example. One failing test
// t.T1, app items a.A2/a.A3/a.A4/a.A5, a dynamically loaded external logging
// class log.Log, and an untraced internal utility class util.U.
ProjectSpec fig3_spec();

// Golden fixture: the resource-directory example. data2 is read, form is
// listed, out/out1.log is created by the test; data1 is never touched.
ProjectSpec fig4_spec();

}  // namespace pexrep::testsup
