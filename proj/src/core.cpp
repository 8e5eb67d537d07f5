#include "pexrep/core.hpp"

#include <algorithm>
#include <cctype>

#include "pexrep/errors.hpp"

namespace pexrep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ManifestSyntax: return "ManifestSyntax";
    case ErrorKind::ManifestSemantic: return "ManifestSemantic";
    case ErrorKind::GeneratorFailure: return "GeneratorFailure";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::UnresolvedRef: return "UnresolvedRef";
    case ErrorKind::PluginMissing: return "PluginMissing";
    case ErrorKind::UnknownTest: return "UnknownTest";
    case ErrorKind::WrongTask: return "WrongTask";
    case ErrorKind::TestPassed: return "TestPassed";
    case ErrorKind::BackendFailure: return "BackendFailure";
    case ErrorKind::MissingSourceFile: return "MissingSourceFile";
    case ErrorKind::MissingGeneratedFile: return "MissingGeneratedFile";
    case ErrorKind::UnknownLibraryClass: return "UnknownLibraryClass";
    case ErrorKind::PackageCorrupt: return "PackageCorrupt";
    case ErrorKind::InvalidName: return "InvalidName";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

const char* to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::AppSource: return "AppSource";
    case ItemKind::TestSource: return "TestSource";
    case ItemKind::GeneratedSource: return "GeneratedSource";
    case ItemKind::LibraryClass: return "LibraryClass";
  }
  return "AppSource";
}

ItemKind item_kind_from_string(const std::string& s) {
  if (s == "AppSource") return ItemKind::AppSource;
  if (s == "TestSource") return ItemKind::TestSource;
  if (s == "GeneratedSource") return ItemKind::GeneratedSource;
  if (s == "LibraryClass") return ItemKind::LibraryClass;
  throw Error(ErrorKind::InvariantViolation, "unknown item kind: " + s);
}

const char* to_string(TaskKind task) {
  switch (task) {
    case TaskKind::GenerateSources: return "GenerateSources";
    case TaskKind::ProcessResources: return "ProcessResources";
    case TaskKind::Compile: return "Compile";
    case TaskKind::TestCompile: return "TestCompile";
    case TaskKind::Test: return "Test";
  }
  return "Compile";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "GenerateSources") return TaskKind::GenerateSources;
  if (s == "ProcessResources") return TaskKind::ProcessResources;
  if (s == "Compile") return TaskKind::Compile;
  if (s == "TestCompile") return TaskKind::TestCompile;
  if (s == "Test") return TaskKind::Test;
  throw Error(ErrorKind::InvariantViolation, "unknown task kind: " + s);
}

const char* to_string(ResourceEventKind kind) {
  return kind == ResourceEventKind::FileRead ? "FileRead" : "DirList";
}

ResourceEventKind resource_event_kind_from_string(const std::string& s) {
  if (s == "FileRead") return ResourceEventKind::FileRead;
  if (s == "DirList") return ResourceEventKind::DirList;
  throw Error(ErrorKind::InvariantViolation, "unknown resource event kind: " + s);
}

const char* to_string(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::Passed: return "Passed";
    case OutcomeStatus::Failed: return "Failed";
    case OutcomeStatus::BuildError: return "BuildError";
  }
  return "Passed";
}

OutcomeStatus outcome_status_from_string(const std::string& s) {
  if (s == "Passed") return OutcomeStatus::Passed;
  if (s == "Failed") return OutcomeStatus::Failed;
  if (s == "BuildError") return OutcomeStatus::BuildError;
  throw Error(ErrorKind::InvariantViolation, "unknown outcome status: " + s);
}

bool valid_qualified_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == '/' || c == '\\' || std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool valid_group(const std::string& group) {
  return valid_qualified_name(group) && group.find('.') != std::string::npos &&
         group.front() != '.' && group.back() != '.';
}

ItemRef ItemRef::source(ItemKind kind, std::string qualified_name) {
  ItemRef ref;
  ref.kind = kind;
  ref.qualified_name = std::move(qualified_name);
  check(ref);
  return ref;
}

ItemRef ItemRef::library(LibCoord coord, std::string class_name) {
  ItemRef ref;
  ref.kind = ItemKind::LibraryClass;
  ref.qualified_name = std::move(class_name);
  ref.lib_coord = std::move(coord);
  check(ref);
  return ref;
}

std::string ItemRef::to_ref_string() const {
  if (kind == ItemKind::LibraryClass) {
    return "lib:" + lib_coord->group + ":" + lib_coord->artifact + ":" + qualified_name;
  }
  return "src:" + qualified_name;
}

void check(const LibCoord& coord) {
  if (!valid_group(coord.group)) {
    throw Error(ErrorKind::InvariantViolation, "invalid library group: " + coord.group);
  }
  if (coord.artifact.empty() || coord.version.empty()) {
    throw Error(ErrorKind::InvariantViolation,
                "library coordinate missing artifact or version: " + coord.to_string());
  }
}

void check(const ItemRef& ref) {
  if (!valid_qualified_name(ref.qualified_name)) {
    throw Error(ErrorKind::InvariantViolation, "invalid qualified name: " + ref.qualified_name);
  }
  bool is_lib = ref.kind == ItemKind::LibraryClass;
  if (is_lib != ref.lib_coord.has_value()) {
    throw Error(ErrorKind::InvariantViolation,
                "lib_coord must be present exactly for library classes: " + ref.qualified_name);
  }
  if (ref.lib_coord) check(*ref.lib_coord);
}

void check(const ResourceEvent& event) {
  const std::string& p = event.path;
  if (p.empty() || p.front() == '/') {
    throw Error(ErrorKind::InvariantViolation, "resource event path not workspace-relative: " + p);
  }
  if (p.rfind("../", 0) == 0 || p.find("/../") != std::string::npos ||
      p == ".." || (p.size() >= 3 && p.compare(p.size() - 3, 3, "/..") == 0)) {
    throw Error(ErrorKind::InvariantViolation, "resource event path not normalized: " + p);
  }
}

void check(const FailureOutcome& outcome) {
  if (outcome.status == OutcomeStatus::Passed &&
      (!outcome.failure_type.empty() || !outcome.message.empty())) {
    throw Error(ErrorKind::InvariantViolation, "passed outcome carries failure text");
  }
}

bool FailureTrace::contains(const ItemRef& ref) const {
  return tests.count(ref) || sources.count(ref) || lib_classes.count(ref);
}

void check(const FailureTrace& trace) {
  for (const auto& t : trace.tests) {
    if (t.kind != ItemKind::TestSource) {
      throw Error(ErrorKind::InvariantViolation, "non-test item in T: " + t.qualified_name);
    }
    if (trace.sources.count(t) || trace.lib_classes.count(t)) {
      throw Error(ErrorKind::InvariantViolation, "trace sets overlap on " + t.qualified_name);
    }
  }
  for (const auto& s : trace.sources) {
    if (s.kind != ItemKind::AppSource && s.kind != ItemKind::GeneratedSource) {
      throw Error(ErrorKind::InvariantViolation, "wrong kind in S: " + s.qualified_name);
    }
    if (trace.lib_classes.count(s)) {
      throw Error(ErrorKind::InvariantViolation, "trace sets overlap on " + s.qualified_name);
    }
  }
  for (const auto& l : trace.lib_classes) {
    if (l.kind != ItemKind::LibraryClass) {
      throw Error(ErrorKind::InvariantViolation, "wrong kind in L: " + l.qualified_name);
    }
  }
}

namespace {

// First two dot-separated labels of a reverse-domain identifier.
std::string domain_prefix(const std::string& group) {
  auto first = group.find('.');
  if (first == std::string::npos) return group;
  auto second = group.find('.', first + 1);
  if (second == std::string::npos) return group;
  return group.substr(0, second);
}

}  // namespace

bool is_internal(const LibCoord& lib, const std::string& project_group) {
  return domain_prefix(lib.group) == domain_prefix(project_group);
}

}  // namespace pexrep
