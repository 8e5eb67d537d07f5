#include "pexrep/json_io.hpp"

#include "pexrep/errors.hpp"

namespace pexrep {

namespace {

Error bad(const std::string& what) {
  return Error(ErrorKind::ManifestSemantic, "malformed field: " + what);
}

std::string req_string(const ojson& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw bad(key);
  return j[key].get<std::string>();
}

}  // namespace

ojson to_json(const LibCoord& coord) {
  return ojson{{"group", coord.group}, {"artifact", coord.artifact}, {"version", coord.version}};
}

LibCoord lib_coord_from_json(const ojson& j) {
  if (!j.is_object()) throw bad("lib coordinate");
  return LibCoord{req_string(j, "group"), req_string(j, "artifact"), req_string(j, "version")};
}

ojson to_json(const ItemRef& ref) {
  ojson j{{"kind", to_string(ref.kind)}, {"qualified_name", ref.qualified_name}};
  if (ref.lib_coord) j["lib_coord"] = to_json(*ref.lib_coord);
  return j;
}

ItemRef item_ref_from_json(const ojson& j) {
  ItemRef ref;
  ref.kind = item_kind_from_string(req_string(j, "kind"));
  ref.qualified_name = req_string(j, "qualified_name");
  if (j.contains("lib_coord")) ref.lib_coord = lib_coord_from_json(j["lib_coord"]);
  check(ref);
  return ref;
}

ojson to_json(const ResourceEvent& event) {
  return ojson{
      {"path", event.path}, {"kind", to_string(event.kind)}, {"phase", to_string(event.phase)}};
}

ResourceEvent resource_event_from_json(const ojson& j) {
  ResourceEvent event;
  event.path = req_string(j, "path");
  event.kind = resource_event_kind_from_string(req_string(j, "kind"));
  event.phase = task_kind_from_string(req_string(j, "phase"));
  check(event);
  return event;
}

ojson to_json(const FailureOutcome& outcome) {
  return ojson{{"status", to_string(outcome.status)},
               {"failure_type", outcome.failure_type},
               {"message", outcome.message}};
}

FailureOutcome failure_outcome_from_json(const ojson& j) {
  FailureOutcome outcome;
  outcome.status = outcome_status_from_string(req_string(j, "status"));
  outcome.failure_type = req_string(j, "failure_type");
  outcome.message = req_string(j, "message");
  check(outcome);
  return outcome;
}

ojson to_json(const BuildRecord& record) {
  ojson refs = ojson::array();
  for (const auto& ref : record.referenced) refs.push_back(to_json(ref));
  ojson events = ojson::array();
  for (const auto& event : record.resource_events) events.push_back(to_json(event));
  return ojson{{"task", to_string(record.task)},
               {"referenced", refs},
               {"source_roots", record.source_roots},
               {"resource_events", events},
               {"workspace_outputs", record.workspace_outputs}};
}

BuildRecord build_record_from_json(const ojson& j) {
  BuildRecord record;
  record.task = task_kind_from_string(req_string(j, "task"));
  for (const auto& r : j.at("referenced")) record.referenced.insert(item_ref_from_json(r));
  record.source_roots = j.at("source_roots").get<std::vector<std::string>>();
  for (const auto& e : j.at("resource_events")) {
    record.resource_events.push_back(resource_event_from_json(e));
  }
  record.workspace_outputs = j.at("workspace_outputs").get<std::set<std::string>>();
  return record;
}

ojson to_json(const FailureTrace& trace) {
  ojson t = ojson::array(), s = ojson::array(), l = ojson::array();
  for (const auto& ref : trace.tests) t.push_back(to_json(ref));
  for (const auto& ref : trace.sources) s.push_back(to_json(ref));
  for (const auto& ref : trace.lib_classes) l.push_back(to_json(ref));
  return ojson{{"T", t}, {"S", s}, {"L", l}};
}

FailureTrace failure_trace_from_json(const ojson& j) {
  FailureTrace trace;
  for (const auto& r : j.at("T")) trace.tests.insert(item_ref_from_json(r));
  for (const auto& r : j.at("S")) trace.sources.insert(item_ref_from_json(r));
  for (const auto& r : j.at("L")) trace.lib_classes.insert(item_ref_from_json(r));
  check(trace);
  return trace;
}

ojson to_json(const ConfigNode& node) {
  if (node.is_leaf()) return *node.value;
  ojson j = ojson::object();
  for (const auto& [key, child] : node.children) j[key] = to_json(child);
  return j;
}

ConfigNode config_node_from_json(const ojson& j) {
  ConfigNode node;
  if (j.is_string()) {
    node.value = j.get<std::string>();
    return node;
  }
  if (!j.is_object()) throw bad("settings node");
  for (const auto& [key, value] : j.items()) {
    node.children.emplace_back(key, config_node_from_json(value));
  }
  return node;
}

ojson to_json(const PluginConfig& plugin) {
  ojson phases = ojson::array();
  for (const auto phase : plugin.phases) phases.push_back(to_string(phase));
  return ojson{{"id", plugin.id},
               {"phases", phases},
               {"category", to_string(plugin.category)},
               {"settings", to_json(plugin.settings)}};
}

PluginConfig plugin_config_from_json(const ojson& j) {
  PluginConfig plugin;
  plugin.id = req_string(j, "id");
  if (!j.contains("phases") || !j["phases"].is_array() || j["phases"].empty()) {
    throw bad("plugin phases");
  }
  for (const auto& p : j["phases"]) {
    plugin.phases.insert(plugin_phase_from_string(p.get<std::string>()));
  }
  plugin.category = plugin_category_from_string(req_string(j, "category"));
  if (j.contains("settings")) plugin.settings = config_node_from_json(j["settings"]);
  return plugin;
}

ojson to_json(const ConfigFile& file) {
  ojson plugins = ojson::array();
  for (const auto& plugin : file.plugins) plugins.push_back(to_json(plugin));
  ojson deps = ojson::array();
  for (const auto& dep : file.dependencies) {
    ojson d{{"coord", to_json(dep.coord)}};
    if (dep.via) d["via"] = to_json(*dep.via);
    deps.push_back(d);
  }
  return ojson{{"path", file.path},
               {"plugins", plugins},
               {"properties", file.properties},
               {"dependencies", deps}};
}

ConfigFile config_file_from_json(const ojson& j) {
  ConfigFile file;
  file.path = req_string(j, "path");
  if (j.contains("plugins")) {
    for (const auto& p : j["plugins"]) file.plugins.push_back(plugin_config_from_json(p));
  }
  if (j.contains("properties")) {
    file.properties = j["properties"].get<std::map<std::string, std::string>>();
  }
  if (j.contains("dependencies")) {
    for (const auto& d : j["dependencies"]) {
      DependencyDecl decl;
      decl.coord = lib_coord_from_json(d.at("coord"));
      if (d.contains("via")) decl.via = lib_coord_from_json(d["via"]);
      file.dependencies.push_back(decl);
    }
  }
  return file;
}

ojson to_json(const SourceItem& item) {
  ojson j{{"id", item.id}, {"file_path", item.file_path}};
  ojson statics = ojson::array();
  for (const auto& ref : item.static_refs) statics.push_back(ref.to_ref_string());
  j["static_refs"] = statics;
  ojson loads = ojson::array();
  for (const auto& ref : item.dynamic_loads) loads.push_back(ref.to_ref_string());
  j["dynamic_loads"] = loads;
  j["resource_reads"] = item.resource_reads;
  if (!item.resource_writes.empty()) {
    ojson writes = ojson::array();
    for (const auto& w : item.resource_writes) {
      writes.push_back(ojson{{"path", w.path}, {"content", w.content}});
    }
    j["resource_writes"] = writes;
  }
  if (item.requires_plugin) j["requires_plugin"] = *item.requires_plugin;
  if (item.failure) {
    j["failure"] = ojson{{"type", item.failure->type}, {"message", item.failure->message}};
  }
  if (item.message_from_resource) j["message_from_resource"] = *item.message_from_resource;
  return j;
}

ojson to_json(const Library& library) {
  ojson classes = ojson::array();
  for (const auto& cls : library.classes) {
    ojson loads = ojson::array();
    for (const auto& ref : cls.loads) loads.push_back(ref.to_ref_string());
    classes.push_back(ojson{{"name", cls.name}, {"loads", loads}});
  }
  ojson j{{"coord", to_json(library.coord)}, {"classes", classes}};
  if (library.archive_path) j["archive_path"] = *library.archive_path;
  return j;
}

ojson to_json(const Generator& generator) {
  ojson produces = ojson::array();
  for (const auto& item : generator.produces) produces.push_back(to_json(item));
  return ojson{{"output_root", generator.output_root},
               {"kind", to_string(generator.kind)},
               {"template_resources", generator.template_resources},
               {"produces", produces}};
}

std::string dump_canonical(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace pexrep
