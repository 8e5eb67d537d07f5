#include "support/fixtures.hpp"

#include "pexrep/archive.hpp"
#include "pexrep/fsutil.hpp"

namespace pexrep::testsup {

namespace {

std::string id_to_dirs(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (c == '.') c = '/';
  }
  return out;
}

ojson coord_json(const std::string& coord) {
  auto c1 = coord.find(':');
  auto c2 = coord.find(':', c1 + 1);
  return ojson{{"group", coord.substr(0, c1)},
               {"artifact", coord.substr(c1 + 1, c2 - c1 - 1)},
               {"version", coord.substr(c2 + 1)}};
}

ojson item_json(const ItemSpec& item, const std::string& root) {
  ojson j{{"id", item.id}, {"file_path", item_file_path(item.id, root)}};
  j["static_refs"] = item.static_refs;
  j["dynamic_loads"] = item.dynamic_loads;
  j["resource_reads"] = item.resource_reads;
  if (!item.resource_writes.empty()) {
    ojson writes = ojson::array();
    for (const auto& [path, content] : item.resource_writes) {
      writes.push_back(ojson{{"path", path}, {"content", content}});
    }
    j["resource_writes"] = writes;
  }
  if (item.requires_plugin) j["requires_plugin"] = *item.requires_plugin;
  if (item.failure) {
    j["failure"] = ojson{{"type", item.failure->first}, {"message", item.failure->second}};
  }
  if (item.message_from_resource) j["message_from_resource"] = *item.message_from_resource;
  return j;
}

}  // namespace

std::string item_file_path(const std::string& id, const std::string& root) {
  return root + "/" + id_to_dirs(id) + ".src";
}

ojson manifest_json(const ProjectSpec& spec) {
  ojson j;
  j["name"] = spec.name;
  j["group"] = spec.group;

  ojson apps = ojson::array();
  for (const auto& item : spec.app) apps.push_back(item_json(item, "src/main"));
  j["app_sources"] = apps;

  ojson tests = ojson::array();
  for (const auto& item : spec.test) tests.push_back(item_json(item, "src/test"));
  j["test_sources"] = tests;

  ojson libs = ojson::array();
  for (const auto& lib : spec.libs) {
    ojson classes = ojson::array();
    for (const auto& cls : lib.classes) {
      classes.push_back(ojson{{"name", cls.name}, {"loads", cls.loads}});
    }
    ojson entry{{"coord", coord_json(lib.group + ":" + lib.artifact + ":" + lib.version)},
                {"classes", classes}};
    if (lib.bundled) entry["archive_path"] = "libs/" + lib.artifact + "-" + lib.version + ".archive";
    libs.push_back(entry);
  }
  j["libraries"] = libs;

  ojson resources = ojson::array();
  for (const auto& [path, content] : spec.resources) resources.push_back(path);
  j["resources"] = resources;

  ojson generators = ojson::array();
  for (const auto& gen : spec.generators) {
    ojson produces = ojson::array();
    for (const auto& item : gen.produces) produces.push_back(item_json(item, gen.output_root));
    generators.push_back(ojson{{"output_root", gen.output_root},
                               {"kind", gen.kind},
                               {"template_resources", gen.templates},
                               {"produces", produces}});
  }
  j["generators"] = generators;

  ojson configs = ojson::array();
  std::vector<ConfigFileSpec> config_specs = spec.configs;
  if (config_specs.empty()) config_specs.push_back(ConfigFileSpec{});
  for (const auto& config : config_specs) {
    ojson plugins = ojson::array();
    for (const auto& plugin : config.plugins) {
      plugins.push_back(ojson{{"id", plugin.id},
                              {"phases", plugin.phases},
                              {"category", plugin.category},
                              {"settings", plugin.settings}});
    }
    ojson deps = ojson::array();
    for (const auto& dep : config.dependencies) {
      ojson d{{"coord", coord_json(dep.coord)}};
      if (dep.via) d["via"] = coord_json(*dep.via);
      deps.push_back(d);
    }
    configs.push_back(ojson{{"path", config.path},
                            {"plugins", plugins},
                            {"properties", config.properties},
                            {"dependencies", deps}});
  }
  j["config_files"] = configs;
  return j;
}

void write_project(const fs::path& dir, const ProjectSpec& spec) {
  fs::create_directories(dir);
  write_file(dir / "project.mb.json", dump_canonical(manifest_json(spec)));

  auto write_source = [&](const ItemSpec& item, const std::string& root) {
    write_file(dir / item_file_path(item.id, root), "// source\nclass " + item.id + "\n");
  };
  for (const auto& item : spec.app) write_source(item, "src/main");
  for (const auto& item : spec.test) write_source(item, "src/test");
  // Generated sources exist only after the GenerateSources task runs.

  for (const auto& [path, content] : spec.resources) {
    write_file(dir / "src/main/res" / path, content);
  }

  for (const auto& lib : spec.libs) {
    if (!lib.bundled) continue;
    std::map<std::string, std::string> entries;
    const std::string coord = lib.group + ":" + lib.artifact + ":" + lib.version;
    for (const auto& cls : lib.classes) {
      entries[class_entry_name(cls.name)] = "class " + coord + ":" + cls.name + "\n";
    }
    write_archive(dir / "libs" / (lib.artifact + "-" + lib.version + ".archive"), entries);
  }
}

ProjectSpec fig3_spec() {
  ProjectSpec spec;
  spec.name = "fig3";
  spec.group = "com.fig3";

  ItemSpec a2{.id = "a.A2"};
  ItemSpec a3{.id = "a.A3", .static_refs = {"src:a.A5"}};
  ItemSpec a4{.id = "a.A4", .static_refs = {"src:a.A5"}};
  ItemSpec a5{.id = "a.A5"};
  spec.app = {a2, a3, a4, a5};

  ItemSpec t1{.id = "t.T1",
              .static_refs = {"src:a.A3"},
              .dynamic_loads = {"src:a.A2", "lib:org.extlog:logging:log.Log"},
              .failure = {{"AssertFail", "expected 2 but was 3"}}};
  spec.test = {t1};

  spec.libs = {
      LibSpec{"org.extlog", "logging", "1.0", {LibClassSpec{"log.Log", {}}}, true},
      LibSpec{"com.fig3.util", "util", "2.1", {LibClassSpec{"util.U", {}}}, true},
  };

  ConfigFileSpec config;
  config.path = "build.mb.json";
  config.plugins = {
      PluginSpec{"compiler",
                 {"compile", "test-compile"},
                 "Build",
                 ojson{{"release", "17"}, {"flags", "${build.flags}"}}},
      PluginSpec{"deployer",
                 {"deploy"},
                 "Build",
                 ojson{{"url", "${deploy.url}"}, {"root", "${project.dir}/dist"}}},
      PluginSpec{"checkstyle", {"verify"}, "Analysis", ojson{{"rules", "strict"}}},
  };
  config.properties = {{"build.flags", "-O2"}, {"deploy.url", "https://repo.example/up"}};
  config.dependencies = {DependencySpec{"org.extlog:logging:1.0", {}},
                         DependencySpec{"com.fig3.util:util:2.1", {}}};
  spec.configs = {config};
  return spec;
}

ProjectSpec fig4_spec() {
  ProjectSpec spec;
  spec.name = "fig4";
  spec.group = "com.fig4";

  spec.resources = {
      {"data/data1.dat", "alpha-one\n"},
      {"data/data2.dat", "form data mismatch: field 7\nsecond line\n"},
      {"form/form1.fm", "form one\n"},
      {"form/form2.fm", "form two\n"},
  };

  ItemSpec helper{.id = "r.Helper"};
  spec.app = {helper};

  ItemSpec t1{.id = "t.T1",
              .dynamic_loads = {"src:r.Helper"},
              .resource_reads = {"data/data2.dat", "form", "out/out1.log", "out"},
              .resource_writes = {{"out/out1.log", "run-log 1\n"}},
              .failure = {{"ResourceMismatch", "placeholder"}},
              .message_from_resource = "data/data2.dat"};
  spec.test = {t1};

  ConfigFileSpec config;
  config.plugins = {PluginSpec{"compiler", {"compile", "test-compile"}, "Build",
                               ojson{{"release", "17"}}}};
  spec.configs = {config};
  return spec;
}

}  // namespace pexrep::testsup
