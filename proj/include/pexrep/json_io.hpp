#pragma once

#include <json.hpp>

#include "pexrep/backend.hpp"
#include "pexrep/core.hpp"

namespace pexrep {

// Ordered JSON keeps key order stable so every emitted file is byte
// deterministic for identical inputs.
using ojson = nlohmann::ordered_json;

ojson to_json(const LibCoord& coord);
LibCoord lib_coord_from_json(const ojson& j);

ojson to_json(const ItemRef& ref);
ItemRef item_ref_from_json(const ojson& j);

ojson to_json(const ResourceEvent& event);
ResourceEvent resource_event_from_json(const ojson& j);

ojson to_json(const FailureOutcome& outcome);
FailureOutcome failure_outcome_from_json(const ojson& j);

ojson to_json(const BuildRecord& record);
BuildRecord build_record_from_json(const ojson& j);

ojson to_json(const FailureTrace& trace);
FailureTrace failure_trace_from_json(const ojson& j);

ojson to_json(const ConfigNode& node);
ConfigNode config_node_from_json(const ojson& j);

ojson to_json(const PluginConfig& plugin);
PluginConfig plugin_config_from_json(const ojson& j);

ojson to_json(const ConfigFile& file);
ConfigFile config_file_from_json(const ojson& j);

ojson to_json(const SourceItem& item);

ojson to_json(const Library& library);

ojson to_json(const Generator& generator);

// Canonical text form used for all emitted .json files.
std::string dump_canonical(const ojson& j);

}  // namespace pexrep
