#pragma once

#include <string>
#include <vector>

#include "pexrep/backend.hpp"
#include "pexrep/core.hpp"

namespace pexrep {

// Deduplicated, order-preserving union of the compilation rounds' source
// roots. Test-task records are ignored.
std::vector<std::string> trace_source_roots(const std::vector<BuildRecord>& records);

// How traced generated code travels into the package: template-generated
// items are copied under src/gen (generation is skipped in the package);
// annotation-processed items are regenerated by carrying their generator.
struct GeneratedExtraction {
  struct Copy {
    SourceItem item;               // declaration rewritten to the package path
    std::string original_path;     // file in the traced workspace
    std::string package_path;      // src/gen/...
  };
  std::vector<Copy> copies;
  std::vector<Generator> carried;  // annotation generators, produces pruned to the trace
};

GeneratedExtraction extract_generated_sources(const ProjectModel& project,
                                              const std::vector<std::string>& roots,
                                              const FailureTrace& trace);

inline constexpr const char* kPackageGenRoot = "src/gen";

}  // namespace pexrep
