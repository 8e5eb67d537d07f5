#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pexrep/archive.hpp"
#include "pexrep/backend.hpp"
#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"
#include "pexrep/json_io.hpp"

namespace pexrep {

namespace {

std::string id_to_path(const std::string& id) {
  std::string path = id;
  for (char& c : path) {
    if (c == '.') c = '/';
  }
  return path;
}

std::string bytecode_rel_path(const SourceItem& item) {
  const char* dir = item.kind == ItemKind::TestSource ? kTestClassesDir : kClassesDir;
  return std::string(dir) + "/" + id_to_path(item.id) + ".cls";
}

// Line-oriented JSON event log at target/build.log. The tracer and the
// extractors consume only returned records; the log is for humans.
class BuildLog {
 public:
  BuildLog(const fs::path& root, TaskKind task) : task_(to_string(task)) {
    fs::create_directories((root / kBuildLogPath).parent_path());
    out_.open(root / kBuildLogPath, std::ios::app);
    event("task-start", {});
  }
  ~BuildLog() { event("task-end", {}); }

  void event(const std::string& kind, const ojson& payload) {
    ojson line{{"task", task_}, {"event", kind}};
    if (!payload.is_null()) line["payload"] = payload;
    out_ << line.dump() << "\n";
  }

 private:
  std::string task_;
  std::ofstream out_;
};

class LibraryResolver {
 public:
  explicit LibraryResolver(const ProjectModel& project) : project_(project) {}

  // A library class resolves when it is declared and its archive (if the
  // library is bundled) actually contains the entry. Archiveless libraries
  // resolve by coordinate alone.
  bool resolves(const ItemRef& ref) {
    const Library* library = project_.find_library(*ref.lib_coord);
    if (!library) {
      // Version-less refs from manifests match on (group, artifact).
      for (const auto& candidate : project_.libraries) {
        if (candidate.coord.group == ref.lib_coord->group &&
            candidate.coord.artifact == ref.lib_coord->artifact) {
          library = &candidate;
          break;
        }
      }
    }
    if (!library || !library->find_class(ref.qualified_name)) return false;
    if (!library->archive_path) return true;
    return entries_of(*library).count(class_entry_name(ref.qualified_name)) > 0;
  }

  const Library* declared(const ItemRef& ref) const {
    for (const auto& candidate : project_.libraries) {
      if (candidate.coord.group == ref.lib_coord->group &&
          candidate.coord.artifact == ref.lib_coord->artifact) {
        return &candidate;
      }
    }
    return nullptr;
  }

 private:
  const std::set<std::string>& entries_of(const Library& library) {
    auto it = cache_.find(*library.archive_path);
    if (it == cache_.end()) {
      std::set<std::string> names;
      for (auto& name : archive_entry_names(project_.root_dir / *library.archive_path)) {
        names.insert(name);
      }
      it = cache_.emplace(*library.archive_path, std::move(names)).first;
    }
    return it->second;
  }

  const ProjectModel& project_;
  std::map<std::string, std::set<std::string>> cache_;
};

std::string source_root_of(const ProjectModel& project, const SourceItem& item) {
  if (item.kind == ItemKind::TestSource) return "src/test";
  for (const auto& generator : project.generators) {
    if (item.file_path.rfind(generator.output_root + "/", 0) == 0) return generator.output_root;
  }
  for (const auto& root : project.source_roots) {
    if (item.file_path.rfind(root + "/", 0) == 0) return root;
  }
  return "src/main";
}

void add_root(std::vector<std::string>* roots, const std::string& root) {
  for (const auto& existing : *roots) {
    if (existing == root) return;
  }
  roots->push_back(root);
}

}  // namespace

BuildRecord MiniBuild::run_generate_sources(const ProjectModel& project) const {
  BuildRecord record;
  record.task = TaskKind::GenerateSources;
  BuildLog log(project.root_dir, TaskKind::GenerateSources);

  for (const auto& generator : project.generators) {
    std::vector<std::string> template_contents;
    for (const auto& rel : generator.template_resources) {
      const fs::path path = project.root_dir / rel;
      if (!fs::is_regular_file(path)) {
        throw Error(ErrorKind::GeneratorFailure, "GeneratorFailure: " + rel);
      }
      template_contents.push_back(read_file(path));
      ResourceEvent event{rel, ResourceEventKind::FileRead, TaskKind::GenerateSources};
      check(event);
      record.resource_events.push_back(event);
      log.event("resource", to_json(event));
    }
    for (const auto& item : generator.produces) {
      write_file(project.root_dir / item.file_path,
                 generated_file_content(item.id, template_contents));
      record.workspace_outputs.insert(item.file_path);
      log.event("output", item.file_path);
      if (generator.kind == GeneratorKind::AnnotationProcessing) {
        // Flagged so downstream extraction can exclude annotation products.
        log.event("generated-annotation", item.file_path);
      }
    }
    add_root(&record.source_roots, generator.output_root);
  }
  return record;
}

BuildRecord MiniBuild::run_process_resources(const ProjectModel& project) const {
  BuildRecord record;
  record.task = TaskKind::ProcessResources;
  BuildLog log(project.root_dir, TaskKind::ProcessResources);

  const fs::path res_root = project.root_dir / kResourceRoot;
  if (!fs::exists(res_root)) return record;

  // Replicate src/main/res/** under target/classes/**, structure included.
  auto copy_dir = [&](const fs::path& dir, const std::string& rel, auto&& self) -> void {
    for (const auto& entry : list_dir_sorted(dir)) {
      const std::string child_rel =
          rel.empty() ? entry.filename().string() : rel + "/" + entry.filename().string();
      const std::string out_rel = std::string(kClassesDir) + "/" + child_rel;
      const fs::path out_path = project.root_dir / out_rel;
      if (fs::is_directory(entry)) {
        fs::create_directories(out_path);
        record.workspace_outputs.insert(out_rel);
        log.event("output", out_rel);
        self(entry, child_rel, self);
      } else {
        fs::create_directories(out_path.parent_path());
        fs::copy_file(entry, out_path, fs::copy_options::overwrite_existing);
        record.workspace_outputs.insert(out_rel);
        log.event("output", out_rel);
      }
    }
  };
  try {
    fs::create_directories(project.root_dir / kClassesDir);
    copy_dir(res_root, "", copy_dir);
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::IoFailure, std::string("resource copy failed: ") + e.what());
  }
  return record;
}

BuildRecord MiniBuild::run_compile(const ProjectModel& project, const std::set<ItemRef>& request,
                                   TaskKind task, const EffectiveConfig& config) const {
  if (task != TaskKind::Compile && task != TaskKind::TestCompile) {
    throw Error(ErrorKind::WrongTask, std::string("not a compile task: ") + to_string(task));
  }
  if (task == TaskKind::Compile) {
    for (const auto& ref : request) {
      if (ref.kind == ItemKind::TestSource) {
        // Build irreversibility: application code never sees test code.
        throw Error(ErrorKind::BackendFailure,
                    "test source in Compile request: " + ref.qualified_name);
      }
    }
  }

  BuildRecord record;
  record.task = task;
  BuildLog log(project.root_dir, task);
  LibraryResolver libs(project);

  // On-demand closure: compile each requested item plus, transitively, every
  // source item reached via static refs. An item whose bytecode already
  // exists resolves as object code and is not expanded — exactly why the
  // trace needs three rounds to see everything.
  std::deque<ItemRef> queue(request.begin(), request.end());
  std::set<ItemRef> seen(request.begin(), request.end());
  while (!queue.empty()) {
    const ItemRef ref = queue.front();
    queue.pop_front();

    if (ref.kind == ItemKind::LibraryClass) {
      if (!libs.resolves(ref)) {
        throw Error(ErrorKind::UnresolvedRef, "UnresolvedRef: " + ref.qualified_name);
      }
      record.referenced.insert(ref);
      log.event("referenced", ref.to_ref_string());
      continue;
    }

    const SourceItem* item = project.find_item(ref.qualified_name);
    if (!item) {
      throw Error(ErrorKind::UnresolvedRef, "UnresolvedRef: " + ref.qualified_name);
    }
    record.referenced.insert(item->ref());
    log.event("referenced", item->ref().to_ref_string());

    const fs::path bytecode = project.root_dir / bytecode_rel_path(*item);
    if (fs::exists(bytecode)) continue;  // referenced as existing object code

    if (!fs::exists(project.root_dir / item->file_path)) {
      throw Error(ErrorKind::UnresolvedRef, "UnresolvedRef: " + item->id);
    }
    if (item->requires_plugin && !config.has_plugin_at(*item->requires_plugin, phase_of(task))) {
      throw Error(ErrorKind::PluginMissing, "PluginMissing: " + *item->requires_plugin);
    }
    write_file(bytecode, "cls:" + item->id + "\n");
    record.workspace_outputs.insert(bytecode_rel_path(*item));
    log.event("output", bytecode_rel_path(*item));
    add_root(&record.source_roots, source_root_of(project, *item));

    for (const auto& dep : item->static_refs) {
      if (seen.insert(dep).second) queue.push_back(dep);
    }
  }
  return record;
}

std::pair<FailureOutcome, BuildRecord> MiniBuild::run_test(const ProjectModel& project,
                                                           const std::string& test_id,
                                                           const EffectiveConfig& config) const {
  (void)config;
  const SourceItem* test = nullptr;
  for (const auto& item : project.test_sources) {
    if (item.id == test_id) {
      test = &item;
      break;
    }
  }
  if (!test) throw Error(ErrorKind::UnknownTest, "UnknownTest: " + test_id);

  BuildRecord record;
  record.task = TaskKind::Test;
  BuildLog log(project.root_dir, TaskKind::Test);
  LibraryResolver libs(project);

  auto fail = [&](const std::string& type, const std::string& subject) {
    FailureOutcome outcome;
    outcome.status = OutcomeStatus::Failed;
    outcome.failure_type = type;
    outcome.message = type + ": " + subject;
    log.event("outcome", to_json(outcome));
    return std::make_pair(outcome, record);
  };

  // Load the test, then the transitive closure over dynamic loads through
  // source items and library classes. BFS in declaration order keeps the
  // walk — and therefore the first missing item — deterministic.
  std::vector<const SourceItem*> loaded_sources;
  std::deque<ItemRef> queue{test->ref()};
  std::set<ItemRef> seen{test->ref()};
  while (!queue.empty()) {
    const ItemRef ref = queue.front();
    queue.pop_front();

    if (ref.kind == ItemKind::LibraryClass) {
      if (!libs.resolves(ref)) return fail("ClassNotFound", ref.qualified_name);
      record.referenced.insert(ref);
      log.event("loaded", ref.to_ref_string());
      const Library* library = libs.declared(ref);
      const LibraryClass* cls = library->find_class(ref.qualified_name);
      for (const auto& dep : cls->loads) {
        if (seen.insert(dep).second) queue.push_back(dep);
      }
      continue;
    }

    const SourceItem* item = project.find_item(ref.qualified_name);
    if (!item || !fs::exists(project.root_dir / bytecode_rel_path(*item))) {
      return fail("ClassNotFound", ref.qualified_name);
    }
    record.referenced.insert(item->ref());
    log.event("loaded", item->ref().to_ref_string());
    loaded_sources.push_back(item);
    for (const auto& dep : item->dynamic_loads) {
      if (seen.insert(dep).second) queue.push_back(dep);
    }
  }

  // Loaded code writes before it reads; both run in load order.
  for (const SourceItem* item : loaded_sources) {
    for (const auto& write : item->resource_writes) {
      const std::string rel = std::string(kClassesDir) + "/" + write.path;
      write_file(project.root_dir / rel, write.content);
      record.workspace_outputs.insert(rel);
      log.event("output", rel);
    }
  }

  auto record_event = [&](const std::string& rel, ResourceEventKind kind) {
    ResourceEvent event{rel, kind, TaskKind::Test};
    check(event);
    for (const auto& existing : record.resource_events) {
      if (existing == event) return;
    }
    record.resource_events.push_back(event);
    log.event("resource", to_json(event));
  };

  for (const SourceItem* item : loaded_sources) {
    for (const auto& read : item->resource_reads) {
      const std::string rel = std::string(kClassesDir) + "/" + read;
      const fs::path path = project.root_dir / rel;
      if (fs::is_directory(path)) {
        record_event(rel, ResourceEventKind::DirList);
      } else if (fs::is_regular_file(path)) {
        record_event(rel, ResourceEventKind::FileRead);
      } else {
        return fail("ResourceNotFound", read);
      }
    }
  }

  FailureOutcome outcome;
  if (!test->failure) {
    outcome.status = OutcomeStatus::Passed;
  } else {
    outcome.status = OutcomeStatus::Failed;
    outcome.failure_type = test->failure->type;
    outcome.message = test->failure->message;
    if (test->message_from_resource) {
      const std::string rel = std::string(kClassesDir) + "/" + *test->message_from_resource;
      const fs::path path = project.root_dir / rel;
      if (!fs::is_regular_file(path)) return fail("ResourceNotFound", *test->message_from_resource);
      record_event(rel, ResourceEventKind::FileRead);
      outcome.message = first_line(read_file(path));
    }
  }
  log.event("outcome", to_json(outcome));
  return {outcome, record};
}

}  // namespace pexrep
