#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pexrep/backend.hpp"

namespace pexrep {

// The build-configuration slice that ships inside a reproduction package.
struct ConfigDocument {
  std::vector<PluginConfig> plugins;
  std::map<std::string, std::string> properties;
  std::vector<LibCoord> dependency_coords;                     // filled by reconstruct
  std::vector<std::pair<std::string, std::string>> rewrites_applied;

  bool operator==(const ConfigDocument&) const = default;
};

// Keeps a plugin iff it is a Build plugin attached to at least one of the
// five build phases; deploy/verify-only and analysis plugins are dropped.
std::vector<PluginConfig> select_required_plugins(const EffectiveConfig& config);

// Copies the selected plugins' settings via path queries, keeps only the
// properties their setting values reference via "${key}" tokens, and rewrites
// the original project root and the "${project.dir}" placeholder to ".".
ConfigDocument slice_config(const EffectiveConfig& config,
                            const std::vector<PluginConfig>& selected,
                            const std::filesystem::path& original_root);

// Package config used when the build-configuration enhancement is disabled.
ConfigDocument default_config_document();

}  // namespace pexrep
