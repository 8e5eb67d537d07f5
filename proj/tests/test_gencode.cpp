#include <doctest.h>

#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"
#include "pexrep/gencode.hpp"
#include "pexrep/reconstruct.hpp"
#include "pexrep/report.hpp"
#include "pexrep/tracer.hpp"
#include "support/fixtures.hpp"
#include "support/temp_dir.hpp"

using namespace pexrep;
using namespace pexrep::testsup;

namespace {

// Fixture with one template generator and one annotation generator, both
// producing code the failing test needs.
ProjectSpec gen_spec(bool annotation) {
  ProjectSpec spec;
  spec.name = "genproj";
  spec.group = "com.genproj";
  spec.resources = {{"templates/p.tpl", "template body\n"}};
  spec.generators = {GeneratorSpec{
      "gen/parser", "Template", {"src/main/res/templates/p.tpl"}, {ItemSpec{.id = "p.P"}}}};
  if (annotation) {
    spec.generators.push_back(GeneratorSpec{
        "gen/anno", "AnnotationProcessing", {"src/main/res/templates/p.tpl"},
        {ItemSpec{.id = "x.Anno"}}});
  }
  spec.app = {ItemSpec{.id = "a.Base"}};
  ItemSpec t{.id = "t.T1",
             .static_refs = {"src:p.P", "src:a.Base"},
             .failure = {{"AssertFail", "gen fixture"}}};
  if (annotation) t.static_refs.push_back("src:x.Anno");
  spec.test = {t};
  return spec;
}

TraceRun run_trace(const fs::path& dir, const ProjectSpec& spec) {
  write_project(dir, spec);
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir);
  return hybrid_backward_trace(backend, project, "t.T1",
                               backend.compute_effective_config(project));
}

}  // namespace

TEST_CASE("source roots are collected from compile rounds only, in order") {
  BuildRecord compile1;
  compile1.task = TaskKind::Compile;
  compile1.source_roots = {"src/main", "gen/parser", "src/main"};
  BuildRecord compile2;
  compile2.task = TaskKind::TestCompile;
  compile2.source_roots = {"src/test"};
  BuildRecord test_only;
  test_only.task = TaskKind::Test;
  test_only.source_roots = {"should/not/appear"};

  CHECK(trace_source_roots({compile1, compile2, test_only}) ==
        std::vector<std::string>{"src/main", "gen/parser", "src/test"});
  CHECK(trace_source_roots({test_only}).empty());
}

TEST_CASE("a project without generators reports only the standard roots") {
  TempDir dir;
  TraceRun run = run_trace(dir.path(), fig3_spec());
  CHECK(trace_source_roots(run.records) == std::vector<std::string>{"src/main", "src/test"});
}

TEST_CASE("template-generated items are copied; annotation items carry the generator") {
  TempDir dir;
  TraceRun run = run_trace(dir.path(), gen_spec(/*annotation=*/true));
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());

  GeneratedExtraction extraction =
      extract_generated_sources(project, trace_source_roots(run.records), run.trace);

  REQUIRE(extraction.copies.size() == 1);
  CHECK(extraction.copies[0].item.id == "p.P");
  CHECK(extraction.copies[0].original_path == "gen/parser/p/P.src");
  CHECK(extraction.copies[0].package_path == "src/gen/p/P.src");

  REQUIRE(extraction.carried.size() == 1);
  CHECK(extraction.carried[0].kind == GeneratorKind::AnnotationProcessing);
  REQUIRE(extraction.carried[0].produces.size() == 1);
  CHECK(extraction.carried[0].produces[0].id == "x.Anno");
}

TEST_CASE("a trace without generated items extracts nothing") {
  TempDir dir;
  TraceRun run = run_trace(dir.path(), fig3_spec());
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());
  GeneratedExtraction extraction =
      extract_generated_sources(project, trace_source_roots(run.records), run.trace);
  CHECK(extraction.copies.empty());
  CHECK(extraction.carried.empty());
}

TEST_CASE("the package skips template generation yet compiles the traced generated code") {
  TempDir dir;
  ProjectSpec spec = gen_spec(/*annotation=*/true);
  TraceRun run = run_trace(dir.path(), spec);
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());

  AssembleInputs inputs;
  inputs.project = &project;
  inputs.build_workspace = run.workspace;
  inputs.trace = run.trace;
  inputs.outcome = run.outcome;
  inputs.records = run.records;
  inputs.test_id = "t.T1";
  inputs.round3_passes = run.round3_passes;
  TempDir out_root;
  const fs::path out = out_root.path() / "pkg";
  ReproPackage package = assemble_report(inputs, out);

  // Copied template product, no template generator in the manifest.
  CHECK(fs::exists(out / "src/gen/p/P.src"));
  CHECK(bytes_equal(out / "src/gen/p/P.src", run.workspace / "gen/parser/p/P.src"));
  for (const auto& generator : package.manifest.generators) {
    CHECK(generator.kind == GeneratorKind::AnnotationProcessing);
  }
  // No item is both a copied source and a generator product.
  for (const auto& generator : package.manifest.generators) {
    for (const auto& produced : generator.produces) {
      for (const auto& item : package.manifest.app_sources) CHECK(item.id != produced.id);
    }
  }
  // The annotation template travels with the package.
  CHECK(fs::exists(out / "src/main/res/templates/p.tpl"));

  // The package validates, regenerating the annotation item exactly once.
  ValidationResult result = validate_report(backend, out);
  CHECK(result.valid);

  // Direct package build: the only generated files are annotation products.
  TempDir rebuild;
  copy_tree(out, rebuild.path(), {"target"});
  ProjectModel package_model = backend.parse_manifest(rebuild.path());
  BuildRecord gen_record = backend.run_generate_sources(package_model);
  CHECK(gen_record.workspace_outputs == std::set<std::string>{"gen/anno/x/Anno.src"});
}

TEST_CASE("a traced generated file missing from the workspace is an error") {
  TempDir dir;
  ProjectSpec spec = gen_spec(/*annotation=*/false);
  TraceRun run = run_trace(dir.path(), spec);
  MiniBuild backend;
  ProjectModel project = backend.parse_manifest(dir.path());

  fs::remove(run.workspace / "gen/parser/p/P.src");
  AssembleInputs inputs;
  inputs.project = &project;
  inputs.build_workspace = run.workspace;
  inputs.trace = run.trace;
  inputs.outcome = run.outcome;
  inputs.records = run.records;
  inputs.test_id = "t.T1";
  TempDir out_root;
  try {
    assemble_report(inputs, out_root.path() / "pkg");
    FAIL("expected MissingGeneratedFile");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingGeneratedFile);
  }
}
