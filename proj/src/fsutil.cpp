#include "pexrep/fsutil.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "pexrep/errors.hpp"

namespace pexrep {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read file: " + path.filename().string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write file: " + path.filename().string());
  out << content;
  if (!out) throw Error(ErrorKind::IoFailure, "short write: " + path.filename().string());
}

bool bytes_equal(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  if (!fs::is_regular_file(a, ec) || !fs::is_regular_file(b, ec)) return false;
  if (fs::file_size(a, ec) != fs::file_size(b, ec)) return false;
  return read_file(a) == read_file(b);
}

std::string first_line(const std::string& content) {
  auto pos = content.find('\n');
  return pos == std::string::npos ? content : content.substr(0, pos);
}

void copy_tree(const fs::path& src, const fs::path& dst,
               const std::set<std::string>& exclude_root_names) {
  fs::create_directories(dst);
  for (const auto& entry : list_dir_sorted(src)) {
    const std::string name = entry.filename().string();
    if (exclude_root_names.count(name)) continue;
    const fs::path to = dst / name;
    if (fs::is_directory(entry)) {
      copy_tree(entry, to, {});
    } else {
      fs::create_directories(to.parent_path());
      fs::copy_file(entry, to, fs::copy_options::overwrite_existing);
    }
  }
}

std::vector<std::string> list_files_recursive(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::exists(root)) return out;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    if (it->is_regular_file()) {
      out.push_back(fs::relative(it->path(), root).generic_string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> list_dir_sorted(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

bool dir_missing_or_empty(const fs::path& dir) {
  if (!fs::exists(dir)) return true;
  if (!fs::is_directory(dir)) return false;
  return fs::directory_iterator(dir) == fs::directory_iterator();
}

fs::path workdir_root() {
  if (const char* env = std::getenv("PEXREP_WORKDIR"); env && *env) return fs::path(env);
  return fs::temp_directory_path() / "pexrep-work";
}

fs::path unique_workdir(const std::string& prefix) {
  static std::atomic<uint64_t> counter{0};
  const uint64_t n = counter.fetch_add(1);
  fs::path dir =
      workdir_root() / (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(n));
  fs::create_directories(dir);
  return dir;
}

ScopedDir::~ScopedDir() {
  std::error_code ec;
  fs::remove_all(dir_, ec);
}

}  // namespace pexrep
