#include "pexrep/resources.hpp"

#include <algorithm>

#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"

namespace pexrep {

namespace {

const std::string kClassesPrefix = std::string(kClassesDir) + "/";

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

ResourcePlan classify_resource_events(const std::vector<ResourceEvent>& events,
                                      const ProjectModel& project,
                                      const std::set<std::string>& workspace_outputs) {
  ResourcePlan plan;
  const fs::path res_root = project.root_dir / kResourceRoot;

  // A target path traces back to its source copy when ProcessResources
  // produced it and the bytes still match; a test may overwrite a copy, in
  // which case the target content is no longer the original's.
  auto traceable_file = [&](const std::string& rel) {
    if (!workspace_outputs.count(kClassesPrefix + rel)) return false;
    return bytes_equal(res_root / rel, project.root_dir / kClassesPrefix / rel);
  };
  auto traceable_dir = [&](const std::string& rel) {
    return workspace_outputs.count(kClassesPrefix + rel) > 0 && fs::is_directory(res_root / rel);
  };

  std::set<std::string> reads;
  std::vector<std::string> dir_lists;
  for (const auto& event : events) {
    if (event.phase != TaskKind::Test) continue;
    if (!starts_with(event.path, kClassesPrefix)) continue;  // outside the target tree
    const std::string rel = event.path.substr(kClassesPrefix.size());
    if (event.kind == ResourceEventKind::FileRead) {
      reads.insert(rel);
    } else {
      dir_lists.push_back(rel);
    }
  }

  for (const auto& rel : reads) {
    if (traceable_file(rel)) {
      plan.extract_with_content.insert(rel);
    } else {
      plan.excluded_generated.insert(rel);
    }
  }

  std::vector<std::string> traceable_listed_dirs;
  for (const auto& rel : dir_lists) {
    if (!traceable_dir(rel)) {
      plan.excluded_generated.insert(rel);
      continue;
    }
    traceable_listed_dirs.push_back(rel);
    // Unread direct children become dummies so the structure survives.
    for (const auto& child : list_dir_sorted(project.root_dir / kClassesPrefix / rel)) {
      if (!fs::is_regular_file(child)) continue;
      const std::string child_rel = rel + "/" + child.filename().string();
      if (reads.count(child_rel)) continue;
      if (traceable_file(child_rel)) {
        plan.dummy_empty.insert(child_rel);
      } else {
        plan.excluded_generated.insert(child_rel);
      }
    }
  }

  // A listed directory with nothing planned under it still needs to exist in
  // the package; plan the directory itself as an (empty) dummy.
  for (const auto& rel : traceable_listed_dirs) {
    const std::string prefix = rel + "/";
    auto planned_under = [&](const std::set<std::string>& set) {
      auto it = set.lower_bound(prefix);
      return it != set.end() && starts_with(*it, prefix);
    };
    if (!planned_under(plan.extract_with_content) && !planned_under(plan.dummy_empty)) {
      plan.dummy_empty.insert(rel);
    }
  }

  return plan;
}

std::vector<std::string> materialize_resources(const ResourcePlan& plan,
                                               const std::filesystem::path& original_root,
                                               const std::filesystem::path& package_root) {
  const fs::path src_root = original_root / kResourceRoot;
  const fs::path dst_root = package_root / kResourceRoot;
  std::vector<std::string> created;

  try {
    for (const auto& rel : plan.extract_with_content) {
      const fs::path from = src_root / rel;
      if (!fs::is_regular_file(from)) {
        throw Error(ErrorKind::IoFailure, "planned resource missing: " + rel);
      }
      const fs::path to = dst_root / rel;
      fs::create_directories(to.parent_path());
      fs::copy_file(from, to, fs::copy_options::overwrite_existing);
      created.push_back(std::string(kResourceRoot) + "/" + rel);
    }
    for (const auto& rel : plan.dummy_empty) {
      const fs::path from = src_root / rel;
      const fs::path to = dst_root / rel;
      if (fs::is_directory(from)) {
        fs::create_directories(to);
      } else {
        write_file(to, "");
      }
      created.push_back(std::string(kResourceRoot) + "/" + rel);
    }
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::IoFailure, std::string("resource materialization failed: ") + e.what());
  }

  std::sort(created.begin(), created.end());
  return created;
}

}  // namespace pexrep
