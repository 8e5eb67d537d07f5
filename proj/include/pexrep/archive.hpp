#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pexrep {

// Deterministic zip archives: stored entries, sorted names, zeroed DOS
// timestamps. Writing the same entry map always yields identical bytes.
void write_archive(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& entries);

std::map<std::string, std::string> read_archive(const std::filesystem::path& path);

std::vector<std::string> archive_entry_names(const std::filesystem::path& path);

bool archive_has_entry(const std::filesystem::path& path, const std::string& name);

// Entry name for a library class: dots become directories, ".class" suffix.
std::string class_entry_name(const std::string& class_name);

}  // namespace pexrep
