#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "pexrep/backend.hpp"
#include "pexrep/core.hpp"

namespace pexrep {

// What the package's resource tree should contain. extract/dummy paths are
// relative to src/main/res; excluded paths are relative to target/classes.
struct ResourcePlan {
  std::set<std::string> extract_with_content;
  std::set<std::string> dummy_empty;
  std::set<std::string> excluded_generated;

  bool operator==(const ResourcePlan&) const = default;

  bool empty() const {
    return extract_with_content.empty() && dummy_empty.empty() && excluded_generated.empty();
  }
};

// Classify Test-phase accesses: reads of files traceable to a byte-identical
// source copy are extracted with content; a listed directory keeps its
// structure through empty dummies for the unread direct children; anything
// created during the build or test is excluded.
ResourcePlan classify_resource_events(const std::vector<ResourceEvent>& events,
                                      const ProjectModel& project,
                                      const std::set<std::string>& workspace_outputs);

// Copies planned files into package_root/src/main/res: extracted files byte
// identical, dummies zero length. Returns the created package-relative paths.
std::vector<std::string> materialize_resources(const ResourcePlan& plan,
                                               const std::filesystem::path& original_root,
                                               const std::filesystem::path& package_root);

}  // namespace pexrep
