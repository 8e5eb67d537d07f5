#include "support/oracles.hpp"

#include <deque>
#include <map>

namespace pexrep::testsup {

namespace {

const LibraryClass* lookup_class(const ProjectModel& project, const ItemRef& ref) {
  for (const auto& library : project.libraries) {
    if (library.coord.group == ref.lib_coord->group &&
        library.coord.artifact == ref.lib_coord->artifact) {
      return library.find_class(ref.qualified_name);
    }
  }
  return nullptr;
}

}  // namespace

FailureTrace two_phase_bfs_trace(const ProjectModel& project, const std::string& test_id) {
  FailureTrace trace;

  // Phase 0: dynamic closure from the failed test.
  std::deque<ItemRef> queue{ItemRef::source(ItemKind::TestSource, test_id)};
  std::set<ItemRef> loaded;
  while (!queue.empty()) {
    ItemRef ref = queue.front();
    queue.pop_front();
    if (!loaded.insert(ref).second) continue;
    if (ref.kind == ItemKind::LibraryClass) {
      if (const LibraryClass* cls = lookup_class(project, ref)) {
        for (const auto& load : cls->loads) queue.push_back(load);
      }
      continue;
    }
    if (const SourceItem* item = project.find_item(ref.qualified_name)) {
      for (const auto& load : item->dynamic_loads) queue.push_back(load);
    }
  }
  for (const auto& ref : loaded) {
    if (ref.kind == ItemKind::TestSource) trace.tests.insert(ref);
    if (ref.kind == ItemKind::AppSource || ref.kind == ItemKind::GeneratedSource) {
      trace.sources.insert(ref);
    }
    if (ref.kind == ItemKind::LibraryClass) trace.lib_classes.insert(ref);
  }

  // Phase 1: static closure of the test members. Only test items expand;
  // application code reached here is already compiled object code.
  std::deque<ItemRef> test_queue(trace.tests.begin(), trace.tests.end());
  std::set<ItemRef> test_seen(trace.tests.begin(), trace.tests.end());
  while (!test_queue.empty()) {
    ItemRef ref = test_queue.front();
    test_queue.pop_front();
    if (ref.kind == ItemKind::LibraryClass) {
      trace.lib_classes.insert(ref);
      continue;
    }
    const SourceItem* item = project.find_item(ref.qualified_name);
    if (!item) continue;
    if (ref.kind != ItemKind::TestSource) {
      trace.sources.insert(ref);
      continue;
    }
    trace.tests.insert(ref);
    for (const auto& dep : item->static_refs) {
      if (test_seen.insert(dep).second) test_queue.push_back(dep);
    }
  }

  // Phase 2: static closure of the app members, expanding app and generated
  // items fully (a fresh compile has no object code to lean on).
  std::deque<ItemRef> app_queue(trace.sources.begin(), trace.sources.end());
  std::set<ItemRef> app_seen(trace.sources.begin(), trace.sources.end());
  while (!app_queue.empty()) {
    ItemRef ref = app_queue.front();
    app_queue.pop_front();
    if (ref.kind == ItemKind::LibraryClass) {
      trace.lib_classes.insert(ref);
      continue;
    }
    const SourceItem* item = project.find_item(ref.qualified_name);
    if (!item) continue;
    trace.sources.insert(ref);
    for (const auto& dep : item->static_refs) {
      if (app_seen.insert(dep).second) app_queue.push_back(dep);
    }
  }

  return trace;
}

namespace {

void flatten(const ConfigNode& node, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>* out) {
  if (node.is_leaf()) {
    out->emplace_back(prefix, *node.value);
    return;
  }
  for (const auto& [key, child] : node.children) {
    flatten(child, prefix.empty() ? key : prefix + "/" + key, out);
  }
}

}  // namespace

EffectiveConfig naive_effective_config(const ProjectModel& project) {
  EffectiveConfig config;

  struct FlatPlugin {
    std::set<PluginPhase> phases;
    PluginCategory category = PluginCategory::Build;
    std::vector<std::pair<std::string, std::string>> values;  // path -> value, ordered
  };
  std::vector<std::pair<std::string, FlatPlugin>> plugins;  // first-seen order

  for (const auto& file : project.config_files) {
    for (const auto& [key, value] : file.properties) {
      config.properties[key] = value;
      config.origin["prop:" + key] = file.path;
    }
    for (const auto& plugin : file.plugins) {
      FlatPlugin* flat = nullptr;
      for (auto& [id, existing] : plugins) {
        if (id == plugin.id) {
          flat = &existing;
          break;
        }
      }
      if (!flat) {
        plugins.emplace_back(plugin.id, FlatPlugin{});
        flat = &plugins.back().second;
      }
      flat->phases = plugin.phases;
      flat->category = plugin.category;
      std::vector<std::pair<std::string, std::string>> values;
      flatten(plugin.settings, "", &values);
      for (const auto& [path, value] : values) {
        bool replaced = false;
        for (auto& [existing_path, existing_value] : flat->values) {
          if (existing_path == path) {
            existing_value = value;
            replaced = true;
            break;
          }
        }
        if (!replaced) flat->values.emplace_back(path, value);
      }
      config.origin["plugin:" + plugin.id] = file.path;
    }
  }

  for (const auto& [id, flat] : plugins) {
    PluginConfig plugin;
    plugin.id = id;
    plugin.phases = flat.phases;
    plugin.category = flat.category;
    for (const auto& [path, value] : flat.values) plugin.settings.ensure(path).value = value;
    config.plugins.push_back(std::move(plugin));
  }

  // Brute-force mediation: enumerate declarations, compute via-chain depths,
  // keep the shallowest (earliest on ties) per (group, artifact).
  struct Decl {
    LibCoord coord;
    std::optional<LibCoord> via;
    std::string file;
    size_t order;
  };
  std::vector<Decl> decls;
  size_t order = 0;
  for (const auto& file : project.config_files) {
    for (const auto& dep : file.dependencies) {
      decls.push_back(Decl{dep.coord, dep.via, file.path, order++});
    }
  }
  auto depth = [&](const Decl& decl) {
    int d = 0;
    std::optional<LibCoord> via = decl.via;
    while (via && d <= 16) {
      ++d;
      std::optional<LibCoord> next;
      for (const auto& other : decls) {
        if (other.coord == *via) {
          next = other.via;
          break;
        }
      }
      via = next;
    }
    return d;
  };
  std::vector<std::string> seen;
  for (const auto& decl : decls) {
    const std::string key = decl.coord.group + ":" + decl.coord.artifact;
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    const Decl* best = &decl;
    for (const auto& other : decls) {
      const std::string other_key = other.coord.group + ":" + other.coord.artifact;
      if (other_key != key) continue;
      if (depth(other) < depth(*best) ||
          (depth(other) == depth(*best) && other.order < best->order)) {
        best = &other;
      }
    }
    config.mediated_dependencies.push_back(best->coord);
    config.origin["dep:" + key] = best->file;
  }

  return config;
}

std::set<std::string> intra_library_closure(const Library& library,
                                            const std::set<std::string>& seeds) {
  std::set<std::string> closure = seeds;
  std::deque<std::string> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    const LibraryClass* cls = library.find_class(queue.front());
    queue.pop_front();
    if (!cls) continue;
    for (const auto& load : cls->loads) {
      if (load.lib_coord == library.coord && closure.insert(load.qualified_name).second) {
        queue.push_back(load.qualified_name);
      }
    }
  }
  return closure;
}

}  // namespace pexrep::testsup
