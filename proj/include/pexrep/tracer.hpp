#pragma once

#include <filesystem>
#include <vector>

#include "pexrep/backend.hpp"
#include "pexrep/core.hpp"

namespace pexrep {

// One round's contribution, partitioned by item kind.
struct TracePartition {
  std::set<ItemRef> tests;
  std::set<ItemRef> sources;
  std::set<ItemRef> lib_classes;
};

// Partition a Test-task record (the runtime load set) into T/S/L deltas.
TracePartition dynamic_tracer(const BuildRecord& record);

// Partition a Compile or TestCompile record (compiler references) into
// T/S/L deltas.
TracePartition static_analyzer(const BuildRecord& record);

struct TraceOptions {
  // When false the Test round still runs (the failure and its resource
  // events are needed) but the load set is not fed to the tracer; Round 2
  // is seeded with the failed test alone.
  bool use_dynamic = true;
};

struct TraceRun {
  FailureTrace trace;
  FailureOutcome outcome;             // Round-1 outcome: the reproduction target
  std::vector<BuildRecord> records;   // all rounds, execution order
  int round3_passes = 1;              // >1 when the Compile round had to iterate
  std::filesystem::path workspace;    // Round-1/2 workspace (holds generated files)
};

// Hybrid backward failure tracing: a full build plus test run seeds the
// trace dynamically, an on-demand TestCompile of T adds the test-side static
// closure, and an on-demand Compile of S in a fresh workspace adds the
// application-side static closure.
//
// `project` must be rooted at a scratch workspace the caller can mutate; a
// second fresh workspace is created under `scratch_parent` for Round 3.
TraceRun hybrid_backward_trace(const BuildBackend& backend, const ProjectModel& project,
                               const std::string& test_id, const EffectiveConfig& config,
                               const TraceOptions& options = {},
                               const std::filesystem::path& scratch_parent = {});

}  // namespace pexrep
