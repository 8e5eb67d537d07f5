#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pexrep {

// Maven-style coordinate of a library: reverse-domain group, artifact, version.
struct LibCoord {
  std::string group;
  std::string artifact;
  std::string version;

  auto operator<=>(const LibCoord&) const = default;

  std::string to_string() const { return group + ":" + artifact + ":" + version; }
};

enum class ItemKind { AppSource, TestSource, GeneratedSource, LibraryClass };

const char* to_string(ItemKind kind);
ItemKind item_kind_from_string(const std::string& s);

// A class-granular unit of source or object code. Library classes carry the
// coordinate of the archive they live in; source items do not.
struct ItemRef {
  ItemKind kind = ItemKind::AppSource;
  std::string qualified_name;
  std::optional<LibCoord> lib_coord;

  auto operator<=>(const ItemRef&) const = default;

  static ItemRef source(ItemKind kind, std::string qualified_name);
  static ItemRef library(LibCoord coord, std::string class_name);

  bool is_source() const { return kind != ItemKind::LibraryClass; }

  // Manifest encoding: "src:<qualified>" or "lib:<group>:<artifact>:<Class>".
  std::string to_ref_string() const;
};

// Throws Error{InvariantViolation} when the ref breaks a type invariant.
void check(const ItemRef& ref);
void check(const LibCoord& coord);

// The five build tasks, in fixed lifecycle order.
enum class TaskKind {
  GenerateSources = 0,
  ProcessResources = 1,
  Compile = 2,
  TestCompile = 3,
  Test = 4,
};

const char* to_string(TaskKind task);
TaskKind task_kind_from_string(const std::string& s);

enum class ResourceEventKind { FileRead, DirList };

const char* to_string(ResourceEventKind kind);
ResourceEventKind resource_event_kind_from_string(const std::string& s);

// A file or directory access observed while a task ran. Paths are
// workspace-relative and normalized (no ".." segments, no absolute prefix).
struct ResourceEvent {
  std::string path;
  ResourceEventKind kind = ResourceEventKind::FileRead;
  TaskKind phase = TaskKind::Test;

  auto operator<=>(const ResourceEvent&) const = default;
};

void check(const ResourceEvent& event);

enum class OutcomeStatus { Passed, Failed, BuildError };

const char* to_string(OutcomeStatus status);
OutcomeStatus outcome_status_from_string(const std::string& s);

struct FailureOutcome {
  OutcomeStatus status = OutcomeStatus::Passed;
  std::string failure_type;  // empty iff Passed
  std::string message;

  auto operator<=>(const FailureOutcome&) const = default;
};

void check(const FailureOutcome& outcome);

// Per-task observation reported by the backend: the items the task loaded
// or resolved, the roots of all compiled files, and every resource access.
struct BuildRecord {
  TaskKind task = TaskKind::Compile;
  std::set<ItemRef> referenced;
  std::vector<std::string> source_roots;
  std::vector<ResourceEvent> resource_events;
  std::set<std::string> workspace_outputs;

  auto operator<=>(const BuildRecord&) const = default;
};

// Output of the backward trace: T (test sources), S (app and generated
// sources), L (library classes). Pairwise disjoint by construction.
struct FailureTrace {
  std::set<ItemRef> tests;
  std::set<ItemRef> sources;
  std::set<ItemRef> lib_classes;

  auto operator<=>(const FailureTrace&) const = default;

  bool contains(const ItemRef& ref) const;
  std::size_t size() const { return tests.size() + sources.size() + lib_classes.size(); }
};

void check(const FailureTrace& trace);

// True iff the organization domains match: the first two dot-separated labels
// of lib.group equal those of project_group.
bool is_internal(const LibCoord& lib, const std::string& project_group);

// Identifier helpers shared by manifest validation.
bool valid_qualified_name(const std::string& name);
bool valid_group(const std::string& group);

}  // namespace pexrep
