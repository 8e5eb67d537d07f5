#include <map>
#include <string>
#include <vector>

#include "pexrep/backend.hpp"
#include "pexrep/errors.hpp"

namespace pexrep {

namespace {

// Child subtree overrides the parent per key; a leaf replaces whatever was
// there, an internal node merges recursively.
void merge_settings(ConfigNode& dst, const ConfigNode& src) {
  if (src.is_leaf()) {
    dst = src;
    return;
  }
  dst.value.reset();
  for (const auto& [key, child] : src.children) {
    ConfigNode* target = nullptr;
    for (auto& [name, existing] : dst.children) {
      if (name == key) {
        target = &existing;
        break;
      }
    }
    if (!target) {
      dst.children.emplace_back(key, child);
    } else if (child.is_leaf() || target->is_leaf()) {
      *target = child;
    } else {
      merge_settings(*target, child);
    }
  }
}

struct DepDecl {
  LibCoord coord;
  std::optional<LibCoord> via;
  size_t file_index;
  size_t decl_index;
  std::string file_path;
};

// Nearest definition: depth is the length of the via chain, resolved against
// the first declaration of the via coordinate. Unresolvable links count one.
int depth_of(const DepDecl& decl, const std::vector<DepDecl>& all, int guard = 0) {
  if (!decl.via || guard > 16) return decl.via ? guard + 1 : 0;
  for (const auto& other : all) {
    if (other.coord == *decl.via) return 1 + depth_of(other, all, guard + 1);
  }
  return 1;
}

}  // namespace

EffectiveConfig MiniBuild::compute_effective_config(const ProjectModel& project) const {
  EffectiveConfig config;
  std::vector<DepDecl> decls;

  for (size_t fi = 0; fi < project.config_files.size(); ++fi) {
    const ConfigFile& file = project.config_files[fi];
    for (const auto& [key, value] : file.properties) {
      config.properties[key] = value;
      config.origin["prop:" + key] = file.path;
    }
    for (const auto& plugin : file.plugins) {
      PluginConfig* existing = nullptr;
      for (auto& p : config.plugins) {
        if (p.id == plugin.id) {
          existing = &p;
          break;
        }
      }
      if (!existing) {
        config.plugins.push_back(plugin);
      } else {
        existing->phases = plugin.phases;
        existing->category = plugin.category;
        merge_settings(existing->settings, plugin.settings);
      }
      config.origin["plugin:" + plugin.id] = file.path;
    }
    for (size_t di = 0; di < file.dependencies.size(); ++di) {
      decls.push_back(DepDecl{file.dependencies[di].coord, file.dependencies[di].via, fi, di,
                              file.path});
    }
  }

  // Version mediation: per (group, artifact) keep the declaration with the
  // smallest via-chain depth; ties go to the earliest declaration.
  std::vector<std::pair<std::string, const DepDecl*>> winners;  // first-seen order
  for (const auto& decl : decls) {
    const std::string key = decl.coord.group + ":" + decl.coord.artifact;
    std::pair<std::string, const DepDecl*>* slot = nullptr;
    for (auto& w : winners) {
      if (w.first == key) {
        slot = &w;
        break;
      }
    }
    if (!slot) {
      winners.emplace_back(key, &decl);
      continue;
    }
    if (depth_of(decl, decls) < depth_of(*slot->second, decls)) slot->second = &decl;
  }
  for (const auto& [key, decl] : winners) {
    config.mediated_dependencies.push_back(decl->coord);
    config.origin["dep:" + key] = decl->file_path;
  }

  return config;
}

}  // namespace pexrep
