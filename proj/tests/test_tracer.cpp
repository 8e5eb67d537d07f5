#include <doctest.h>

#include <random>

#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"
#include "pexrep/tracer.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace pexrep;
using namespace pexrep::testsup;

namespace {

ItemRef app(const std::string& id) { return ItemRef::source(ItemKind::AppSource, id); }
ItemRef test_item(const std::string& id) { return ItemRef::source(ItemKind::TestSource, id); }
ItemRef log_cls() {
  return ItemRef::library(LibCoord{"org.extlog", "logging", "1.0"}, "log.Log");
}

TraceRun trace_fig3(const TempDir& dir, bool use_dynamic = true) {
  write_project(dir.path(), fig3_spec());
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());
  EffectiveConfig config = backend.compute_effective_config(project);
  TraceOptions options;
  options.use_dynamic = use_dynamic;
  return hybrid_backward_trace(backend, project, "t.T1", config, options);
}

}  // namespace

TEST_CASE("dynamic tracer partitions the runtime load set by kind") {
  BuildRecord record;
  record.task = TaskKind::Test;
  record.referenced = {test_item("t.T1"), app("a.A2"), log_cls()};
  TracePartition partition = dynamic_tracer(record);
  CHECK(partition.tests == std::set<ItemRef>{test_item("t.T1")});
  CHECK(partition.sources == std::set<ItemRef>{app("a.A2")});
  CHECK(partition.lib_classes == std::set<ItemRef>{log_cls()});

  SUBCASE("singleton record") {
    BuildRecord solo;
    solo.task = TaskKind::Test;
    solo.referenced = {test_item("t.T1")};
    TracePartition p = dynamic_tracer(solo);
    CHECK(p.tests.size() == 1);
    CHECK(p.sources.empty());
    CHECK(p.lib_classes.empty());
  }
  SUBCASE("wrong task") {
    record.task = TaskKind::Compile;
    CHECK_THROWS_AS(dynamic_tracer(record), Error);
  }
}

TEST_CASE("partition preserves size and disjointness on arbitrary records") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    BuildRecord record;
    record.task = TaskKind::Test;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const int kind = static_cast<int>(rng() % 4);
      const std::string name = "q.N" + std::to_string(rng() % 30);
      if (kind == 3) {
        record.referenced.insert(ItemRef::library(LibCoord{"g.x", "a", "1"}, name));
      } else {
        record.referenced.insert(ItemRef::source(static_cast<ItemKind>(kind), name));
      }
    }
    TracePartition partition = dynamic_tracer(record);

    // Oracle: a plain filter by kind.
    std::set<ItemRef> expected_tests, expected_sources, expected_libs;
    for (const auto& ref : record.referenced) {
      if (ref.kind == ItemKind::TestSource) expected_tests.insert(ref);
      else if (ref.kind == ItemKind::LibraryClass) expected_libs.insert(ref);
      else expected_sources.insert(ref);
    }
    CHECK(partition.tests == expected_tests);
    CHECK(partition.sources == expected_sources);
    CHECK(partition.lib_classes == expected_libs);
    CHECK(partition.tests.size() + partition.sources.size() + partition.lib_classes.size() ==
          record.referenced.size());
  }
}

TEST_CASE("static analyzer accepts only compile records") {
  BuildRecord r2;
  r2.task = TaskKind::TestCompile;
  r2.referenced = {test_item("t.T1"), app("a.A3"), app("a.A2")};
  TracePartition partition = static_analyzer(r2);
  CHECK(partition.sources.count(app("a.A3")) == 1);

  BuildRecord r3;
  r3.task = TaskKind::Compile;
  r3.referenced = {app("a.A3"), app("a.A5")};
  CHECK(static_analyzer(r3).sources.count(app("a.A5")) == 1);

  BuildRecord test_record;
  test_record.task = TaskKind::Test;
  CHECK_THROWS_AS(static_analyzer(test_record), Error);
}

TEST_CASE("hybrid backward trace reproduces the golden fixture trace") {
  TempDir dir;
  TraceRun run = trace_fig3(dir);

  CHECK(run.trace.tests == std::set<ItemRef>{test_item("t.T1")});
  CHECK(run.trace.sources == std::set<ItemRef>{app("a.A2"), app("a.A3"), app("a.A5")});
  CHECK(run.trace.lib_classes == std::set<ItemRef>{log_cls()});
  CHECK(run.outcome.failure_type == "AssertFail");
  CHECK(run.outcome.message == "expected 2 but was 3");

  // a.A4 and util.U stay out of the trace.
  CHECK_FALSE(run.trace.contains(app("a.A4")));
  CHECK_FALSE(
      run.trace.contains(ItemRef::library(LibCoord{"com.fig3.util", "util", "2.1"}, "util.U")));

  // Rounds only ever grow the trace.
  const BuildRecord* test_record = nullptr;
  for (const auto& record : run.records) {
    if (record.task == TaskKind::Test) test_record = &record;
  }
  REQUIRE(test_record != nullptr);
  TracePartition round1 = dynamic_tracer(*test_record);
  for (const auto& ref : round1.tests) CHECK(run.trace.tests.count(ref) == 1);
  for (const auto& ref : round1.sources) CHECK(run.trace.sources.count(ref) == 1);
  for (const auto& ref : round1.lib_classes) CHECK(run.trace.lib_classes.count(ref) == 1);
}

TEST_CASE("hybrid trace of an isolated test is just the test") {
  TempDir dir;
  ProjectSpec spec;
  spec.name = "iso";
  spec.group = "com.iso";
  spec.test = {ItemSpec{.id = "t.Solo", .failure = {{"AssertFail", "solo"}}}};
  write_project(dir.path(), spec);
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());
  TraceRun run =
      hybrid_backward_trace(backend, project, "t.Solo", backend.compute_effective_config(project));
  CHECK(run.trace.tests == std::set<ItemRef>{test_item("t.Solo")});
  CHECK(run.trace.sources.empty());
  CHECK(run.trace.lib_classes.empty());
}

TEST_CASE("a passing test aborts the trace") {
  TempDir dir;
  ProjectSpec spec;
  spec.name = "pass";
  spec.group = "com.pass";
  spec.test = {ItemSpec{.id = "t.Green"}};  // no declared failure
  write_project(dir.path(), spec);
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());
  try {
    hybrid_backward_trace(backend, project, "t.Green", backend.compute_effective_config(project));
    FAIL("expected TestPassed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TestPassed);
  }
}

TEST_CASE("trace equals the two-phase BFS oracle on small corpus projects") {
  TempDir root;
  MiniBuild backend;
  int checked = 0;
  for (int i = 0; i < 36; ++i) {
    CorpusProject info;
    ProjectSpec spec = corpus_spec(i, 1234, &info);
    if (info.item_count > 12) continue;
    const fs::path dir = root.path() / spec.name;
    write_project(dir, spec);
    ProjectModel project = backend.parse_manifest(dir);
    EffectiveConfig config = backend.compute_effective_config(project);
    TraceRun run = hybrid_backward_trace(backend, project, info.test_id, config);
    FailureTrace expected = two_phase_bfs_trace(project, info.test_id);
    CHECK(run.trace.tests == expected.tests);
    CHECK(run.trace.sources == expected.sources);
    CHECK(run.trace.lib_classes == expected.lib_classes);
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("static-only ablation traces a subset and misses dynamic-only edges") {
  TempDir full_dir;
  TraceRun full = trace_fig3(full_dir);
  TempDir static_dir;
  TraceRun static_only = trace_fig3(static_dir, /*use_dynamic=*/false);

  for (const auto& ref : static_only.trace.tests) CHECK(full.trace.tests.count(ref) == 1);
  for (const auto& ref : static_only.trace.sources) CHECK(full.trace.sources.count(ref) == 1);
  for (const auto& ref : static_only.trace.lib_classes) {
    CHECK(full.trace.lib_classes.count(ref) == 1);
  }
  // The dynamic-only edges t.T1 -> a.A2 and t.T1 -> log.Log disappear.
  CHECK_FALSE(static_only.trace.contains(app("a.A2")));
  CHECK_FALSE(static_only.trace.contains(log_cls()));
  CHECK(static_only.trace.contains(app("a.A3")));
  CHECK(static_only.trace.contains(app("a.A5")));
}

TEST_CASE("unknown test id is rejected before any round runs") {
  TempDir dir;
  write_project(dir.path(), fig3_spec());
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());
  CHECK_THROWS_AS(
      hybrid_backward_trace(backend, project, "t.Ghost",
                            backend.compute_effective_config(project)),
      Error);
}
