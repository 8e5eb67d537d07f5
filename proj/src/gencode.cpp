#include "pexrep/gencode.hpp"

#include <algorithm>

#include "pexrep/errors.hpp"

namespace pexrep {

std::vector<std::string> trace_source_roots(const std::vector<BuildRecord>& records) {
  std::vector<std::string> roots;
  for (const auto& record : records) {
    if (record.task != TaskKind::Compile && record.task != TaskKind::TestCompile) continue;
    for (const auto& root : record.source_roots) {
      if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
    }
  }
  return roots;
}

GeneratedExtraction extract_generated_sources(const ProjectModel& project,
                                              const std::vector<std::string>& roots,
                                              const FailureTrace& trace) {
  GeneratedExtraction extraction;

  auto generated_root_of = [&](const std::string& file_path) -> const std::string* {
    for (const auto& root : roots) {
      if (root == "src/main" || root == "src/test") continue;
      if (file_path.rfind(root + "/", 0) == 0) return &root;
    }
    return nullptr;
  };

  std::vector<const Generator*> carried;
  for (const auto& ref : trace.sources) {
    const SourceItem* item = project.find_item(ref.qualified_name);
    if (!item) continue;
    const std::string* root = generated_root_of(item->file_path);
    if (!root) continue;  // original source code is extracted elsewhere

    const Generator* generator = project.generator_of(item->id);
    if (generator && generator->kind == GeneratorKind::AnnotationProcessing) {
      // Annotation-processed code would conflict with its own regeneration;
      // carry the generator instead of the files.
      if (std::find(carried.begin(), carried.end(), generator) == carried.end()) {
        carried.push_back(generator);
      }
      continue;
    }

    GeneratedExtraction::Copy copy;
    copy.original_path = item->file_path;
    copy.package_path = std::string(kPackageGenRoot) + item->file_path.substr(root->size());
    copy.item = *item;
    copy.item.file_path = copy.package_path;
    extraction.copies.push_back(std::move(copy));
  }

  std::sort(extraction.copies.begin(), extraction.copies.end(),
            [](const auto& a, const auto& b) { return a.item.id < b.item.id; });

  std::sort(carried.begin(), carried.end(), [](const Generator* a, const Generator* b) {
    return a->output_root < b->output_root;
  });
  for (const Generator* generator : carried) {
    Generator pruned = *generator;
    pruned.produces.clear();
    for (const auto& item : generator->produces) {
      if (trace.contains(item.ref())) pruned.produces.push_back(item);
    }
    extraction.carried.push_back(std::move(pruned));
  }

  return extraction;
}

}  // namespace pexrep
