#pragma once

#include <set>
#include <string>

#include "pexrep/backend.hpp"
#include "pexrep/core.hpp"

namespace pexrep::testsup {

// Independent trace oracle: (i) dynamic closure from the failed test over
// declared loads, then (ii) static-ref closures — first from the dynamic
// closure's test members (expanding test items only), then from the app
// members (expanding app and generated items). Pure graph reachability over
// the project model; shares nothing with the tracer or the backend.
FailureTrace two_phase_bfs_trace(const ProjectModel& project, const std::string& test_id);

// Independent effective-config oracle: flattens every config file to
// path->value maps and replays them key by key, then rebuilds the trees.
// Dependency mediation is re-derived by brute-force depth comparison.
EffectiveConfig naive_effective_config(const ProjectModel& project);

// Intra-library load closure, by plain BFS over one library's loads graph.
std::set<std::string> intra_library_closure(const Library& library,
                                            const std::set<std::string>& seeds);

}  // namespace pexrep::testsup
