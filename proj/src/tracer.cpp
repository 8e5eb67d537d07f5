#include "pexrep/tracer.hpp"

#include <algorithm>

#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"

namespace pexrep {

namespace {

TracePartition partition_by_kind(const BuildRecord& record) {
  TracePartition partition;
  for (const auto& ref : record.referenced) {
    switch (ref.kind) {
      case ItemKind::TestSource: partition.tests.insert(ref); break;
      case ItemKind::AppSource:
      case ItemKind::GeneratedSource: partition.sources.insert(ref); break;
      case ItemKind::LibraryClass: partition.lib_classes.insert(ref); break;
    }
  }
  return partition;
}

void merge(FailureTrace* trace, const TracePartition& partition) {
  trace->tests.insert(partition.tests.begin(), partition.tests.end());
  trace->sources.insert(partition.sources.begin(), partition.sources.end());
  trace->lib_classes.insert(partition.lib_classes.begin(), partition.lib_classes.end());
}

}  // namespace

TracePartition dynamic_tracer(const BuildRecord& record) {
  if (record.task != TaskKind::Test) {
    throw Error(ErrorKind::WrongTask,
                std::string("dynamic tracer needs a Test record, got ") + to_string(record.task));
  }
  return partition_by_kind(record);
}

TracePartition static_analyzer(const BuildRecord& record) {
  if (record.task != TaskKind::Compile && record.task != TaskKind::TestCompile) {
    throw Error(ErrorKind::WrongTask,
                std::string("static analyzer needs a compile record, got ") +
                    to_string(record.task));
  }
  return partition_by_kind(record);
}

TraceRun hybrid_backward_trace(const BuildBackend& backend, const ProjectModel& project,
                               const std::string& test_id, const EffectiveConfig& config,
                               const TraceOptions& options,
                               const std::filesystem::path& scratch_parent) {
  if (!project.find_item(test_id)) {
    throw Error(ErrorKind::UnknownTest, "UnknownTest: " + test_id);
  }

  TraceRun run;
  run.workspace = project.root_dir;
  try {
    // Round 1: the whole lifecycle with the entire code base, then the
    // failed test alone. The Test record holds everything the runtime loaded.
    run.records.push_back(backend.run_generate_sources(project));
    run.records.push_back(backend.run_process_resources(project));
    run.records.push_back(
        backend.run_compile(project, project.all_app_refs(), TaskKind::Compile, config));
    run.records.push_back(
        backend.run_compile(project, project.all_test_refs(), TaskKind::TestCompile, config));
    auto [outcome, test_record] = backend.run_test(project, test_id, config);
    run.outcome = outcome;
    run.records.push_back(test_record);
    if (outcome.status == OutcomeStatus::Passed) {
      throw Error(ErrorKind::TestPassed, "TestPassed: " + test_id);
    }

    const ItemRef target = ItemRef::source(ItemKind::TestSource, test_id);
    if (options.use_dynamic) {
      merge(&run.trace, dynamic_tracer(test_record));
    }
    run.trace.tests.insert(target);

    // Round 2: reuse the application object code, wipe the test output, and
    // on-demand compile exactly T so the compiler reports the test-side
    // static closure.
    fs::remove_all(project.root_dir / kTestClassesDir);
    BuildRecord r2 = backend.run_compile(project, run.trace.tests, TaskKind::TestCompile, config);
    run.records.push_back(r2);
    merge(&run.trace, static_analyzer(r2));

    // Round 3: compile exactly S in a fresh workspace so stale object code
    // cannot hide a missing reference. Iterated to a fixed point; the pass
    // count lands in the trace dump when more than one was needed.
    fs::path round3_root = scratch_parent.empty()
                               ? unique_workdir(project.name + "-r3")
                               : scratch_parent / (project.name + "-r3");
    ScopedDir round3_guard(round3_root);
    copy_tree(project.root_dir, round3_root, {"target"});
    ProjectModel round3_project = project.rebased(round3_root);

    run.round3_passes = 0;
    while (true) {
      ++run.round3_passes;
      fs::remove_all(round3_root / "target");
      backend.run_generate_sources(round3_project);
      BuildRecord r3 =
          backend.run_compile(round3_project, run.trace.sources, TaskKind::Compile, config);
      run.records.push_back(r3);
      TracePartition partition = static_analyzer(r3);
      const size_t before = run.trace.sources.size() + run.trace.lib_classes.size();
      merge(&run.trace, partition);
      const size_t after = run.trace.sources.size() + run.trace.lib_classes.size();
      if (after == before || run.round3_passes >= 8) break;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::TestPassed || e.kind() == ErrorKind::UnknownTest) throw;
    throw Error(ErrorKind::BackendFailure, e.what());
  }

  check(run.trace);
  return run;
}

}  // namespace pexrep
