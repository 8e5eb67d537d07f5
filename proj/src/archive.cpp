#include "pexrep/archive.hpp"

#include <array>
#include <cstdint>
#include <cstring>

#include "pexrep/errors.hpp"
#include "pexrep/fsutil.hpp"

namespace pexrep {

namespace {

constexpr uint32_t kLocalSig = 0x04034b50;
constexpr uint32_t kCentralSig = 0x02014b50;
constexpr uint32_t kEndSig = 0x06054b50;
// Fixed DOS date 1980-01-01, time 00:00:00 — archives carry no wall clock.
constexpr uint16_t kDosTime = 0;
constexpr uint16_t kDosDate = 0x0021;

const std::array<uint32_t, 256>& crc_table() {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  return table;
}

uint32_t crc32(const std::string& data) {
  uint32_t c = 0xFFFFFFFFu;
  for (unsigned char byte : data) c = crc_table()[(c ^ byte) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

void put16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put32(std::string& out, uint32_t v) {
  put16(out, static_cast<uint16_t>(v & 0xFFFF));
  put16(out, static_cast<uint16_t>((v >> 16) & 0xFFFF));
}

uint16_t get16(const std::string& s, size_t off) {
  return static_cast<uint16_t>(static_cast<unsigned char>(s[off]) |
                               (static_cast<unsigned char>(s[off + 1]) << 8));
}

uint32_t get32(const std::string& s, size_t off) {
  return static_cast<uint32_t>(get16(s, off)) | (static_cast<uint32_t>(get16(s, off + 2)) << 16);
}

Error corrupt(const std::filesystem::path& path) {
  return Error(ErrorKind::IoFailure, "corrupt archive: " + path.filename().string());
}

}  // namespace

void write_archive(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& entries) {
  std::string out;
  std::string central;
  uint16_t count = 0;
  for (const auto& [name, data] : entries) {  // std::map iterates sorted
    const uint32_t offset = static_cast<uint32_t>(out.size());
    const uint32_t crc = crc32(data);
    const auto size = static_cast<uint32_t>(data.size());

    put32(out, kLocalSig);
    put16(out, 20);  // version needed
    put16(out, 0);   // flags
    put16(out, 0);   // method: stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, static_cast<uint16_t>(name.size()));
    put16(out, 0);  // extra
    out += name;
    out += data;

    put32(central, kCentralSig);
    put16(central, 20);  // version made by
    put16(central, 20);  // version needed
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, static_cast<uint16_t>(name.size()));
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attrs
    put32(central, 0);  // external attrs
    put32(central, offset);
    central += name;
    ++count;
  }

  const uint32_t cd_offset = static_cast<uint32_t>(out.size());
  out += central;
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, count);
  put16(out, count);
  put32(out, static_cast<uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);  // comment length

  write_file(path, out);
}

std::map<std::string, std::string> read_archive(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  if (raw.size() < 22) throw corrupt(path);

  // End record has a fixed size here (no archive comment is ever written).
  const size_t end_off = raw.size() - 22;
  if (get32(raw, end_off) != kEndSig) throw corrupt(path);
  const uint16_t count = get16(raw, end_off + 10);
  size_t pos = get32(raw, end_off + 16);

  std::map<std::string, std::string> entries;
  for (uint16_t i = 0; i < count; ++i) {
    if (pos + 46 > raw.size() || get32(raw, pos) != kCentralSig) throw corrupt(path);
    const uint32_t size = get32(raw, pos + 24);
    const uint16_t name_len = get16(raw, pos + 28);
    const uint16_t extra_len = get16(raw, pos + 30);
    const uint16_t comment_len = get16(raw, pos + 32);
    const uint32_t local_off = get32(raw, pos + 42);
    if (pos + 46 + name_len > raw.size()) throw corrupt(path);
    const std::string name = raw.substr(pos + 46, name_len);

    if (local_off + 30 > raw.size() || get32(raw, local_off) != kLocalSig) throw corrupt(path);
    const uint16_t lf_name_len = get16(raw, local_off + 26);
    const uint16_t lf_extra_len = get16(raw, local_off + 28);
    const size_t data_off = local_off + 30 + lf_name_len + lf_extra_len;
    if (data_off + size > raw.size()) throw corrupt(path);
    entries[name] = raw.substr(data_off, size);

    pos += 46 + name_len + extra_len + comment_len;
  }
  return entries;
}

std::vector<std::string> archive_entry_names(const std::filesystem::path& path) {
  std::vector<std::string> names;
  for (const auto& [name, data] : read_archive(path)) names.push_back(name);
  return names;
}

bool archive_has_entry(const std::filesystem::path& path, const std::string& name) {
  return read_archive(path).count(name) > 0;
}

std::string class_entry_name(const std::string& class_name) {
  std::string entry = class_name;
  for (char& c : entry) {
    if (c == '.') c = '/';
  }
  return entry + ".class";
}

}  // namespace pexrep
