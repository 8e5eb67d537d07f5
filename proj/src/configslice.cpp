#include "pexrep/configslice.hpp"

#include <algorithm>
#include <set>

namespace pexrep {

namespace {

const std::set<PluginPhase> kBuildPhases = {
    PluginPhase::GenerateSources, PluginPhase::ProcessResources, PluginPhase::Compile,
    PluginPhase::TestCompile, PluginPhase::Test};

bool attached_to_build_phase(const PluginConfig& plugin) {
  return std::any_of(plugin.phases.begin(), plugin.phases.end(),
                     [](PluginPhase phase) { return kBuildPhases.count(phase) > 0; });
}

void collect_property_tokens(const ConfigNode& node, std::set<std::string>* tokens) {
  if (node.is_leaf()) {
    const std::string& value = *node.value;
    size_t pos = 0;
    while ((pos = value.find("${", pos)) != std::string::npos) {
      size_t end = value.find('}', pos + 2);
      if (end == std::string::npos) break;
      std::string key = value.substr(pos + 2, end - pos - 2);
      if (key != "project.dir") tokens->insert(key);
      pos = end + 1;
    }
    return;
  }
  for (const auto& [name, child] : node.children) collect_property_tokens(child, tokens);
}

std::string replace_all(std::string value, const std::string& from, const std::string& to) {
  if (from.empty()) return value;
  size_t pos = 0;
  while ((pos = value.find(from, pos)) != std::string::npos) {
    value.replace(pos, from.size(), to);
    pos += to.size();
  }
  return value;
}

void rewrite_values(ConfigNode* node, const std::string& original_root,
                    std::vector<std::pair<std::string, std::string>>* rewrites) {
  if (node->is_leaf()) {
    std::string rewritten = *node->value;
    if (!original_root.empty()) rewritten = replace_all(rewritten, original_root, ".");
    rewritten = replace_all(rewritten, "${project.dir}", ".");
    if (rewritten != *node->value) {
      rewrites->emplace_back(*node->value, rewritten);
      node->value = rewritten;
    }
    return;
  }
  for (auto& [name, child] : node->children) rewrite_values(&child, original_root, rewrites);
}

}  // namespace

std::vector<PluginConfig> select_required_plugins(const EffectiveConfig& config) {
  std::vector<PluginConfig> selected;
  for (const auto& plugin : config.plugins) {
    if (plugin.category != PluginCategory::Build) continue;  // category dominates
    if (!attached_to_build_phase(plugin)) continue;
    selected.push_back(plugin);
  }
  return selected;
}

ConfigDocument slice_config(const EffectiveConfig& config,
                            const std::vector<PluginConfig>& selected,
                            const std::filesystem::path& original_root) {
  ConfigDocument doc;

  // Assemble a query tree over the effective configuration and pull each
  // selected plugin's settings subtree out with a path query.
  ConfigNode tree;
  for (const auto& plugin : config.plugins) {
    tree.ensure("plugins/" + plugin.id) = plugin.settings;
  }

  for (const auto& plugin : selected) {
    PluginConfig sliced;
    sliced.id = plugin.id;
    sliced.category = plugin.category;
    for (PluginPhase phase : plugin.phases) {
      if (kBuildPhases.count(phase)) sliced.phases.insert(phase);
    }
    if (const ConfigNode* settings = tree.query("plugins/" + plugin.id)) {
      sliced.settings = *settings;
    }
    doc.plugins.push_back(std::move(sliced));
  }

  std::set<std::string> tokens;
  for (const auto& plugin : doc.plugins) collect_property_tokens(plugin.settings, &tokens);
  for (const auto& key : tokens) {
    auto it = config.properties.find(key);
    if (it != config.properties.end()) doc.properties[key] = it->second;
  }

  // Only an absolute root is worth rewriting; "." or "" would mangle values.
  const std::string root_text =
      original_root.is_absolute() ? original_root.generic_string() : std::string();
  for (auto& plugin : doc.plugins) {
    rewrite_values(&plugin.settings, root_text, &doc.rewrites_applied);
  }
  for (auto& [key, value] : doc.properties) {
    std::string rewritten = value;
    if (!root_text.empty()) rewritten = replace_all(rewritten, root_text, ".");
    rewritten = replace_all(rewritten, "${project.dir}", ".");
    if (rewritten != value) {
      doc.rewrites_applied.emplace_back(value, rewritten);
      value = rewritten;
    }
  }
  return doc;
}

ConfigDocument default_config_document() { return ConfigDocument{}; }

}  // namespace pexrep
