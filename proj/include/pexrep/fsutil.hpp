#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace pexrep {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);  // creates parents
bool bytes_equal(const fs::path& a, const fs::path& b);
std::string first_line(const std::string& content);

// Recursive copy; `exclude_root_names` skips top-level entries (e.g. target/).
void copy_tree(const fs::path& src, const fs::path& dst,
               const std::set<std::string>& exclude_root_names = {});

// Files under root, as sorted root-relative generic paths.
std::vector<std::string> list_files_recursive(const fs::path& root);
// Direct children of a directory, sorted by name.
std::vector<fs::path> list_dir_sorted(const fs::path& dir);

bool dir_missing_or_empty(const fs::path& dir);

// Scratch area: $PEXREP_WORKDIR if set, else a pexrep dir under the system
// temp directory. unique_workdir() hands out fresh subdirectories.
fs::path workdir_root();
fs::path unique_workdir(const std::string& prefix);

// Deletes a directory tree when the guard leaves scope.
class ScopedDir {
 public:
  explicit ScopedDir(fs::path dir) : dir_(std::move(dir)) {}
  ~ScopedDir();
  ScopedDir(const ScopedDir&) = delete;
  ScopedDir& operator=(const ScopedDir&) = delete;

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
};

}  // namespace pexrep
