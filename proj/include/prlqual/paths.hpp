#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "prlqual/errors.hpp"

namespace prlqual {

// Reference paths inside an asset are POSIX-style and relative to the asset
// root. A path escapes when it is absolute or when ".." segments climb above
// the root at any point.
inline bool path_escapes_root(std::string_view rel) {
  if (rel.empty()) return true;
  if (rel.front() == '/') return true;
  int depth = 0;
  std::size_t pos = 0;
  while (pos <= rel.size()) {
    std::size_t end = rel.find('/', pos);
    if (end == std::string_view::npos) end = rel.size();
    std::string_view segment = rel.substr(pos, end - pos);
    if (segment == "..") {
      if (--depth < 0) return true;
    } else if (!segment.empty() && segment != ".") {
      ++depth;
    }
    pos = end + 1;
  }
  return false;
}

inline std::filesystem::path join_under_root(const std::filesystem::path& root,
                                             std::string_view rel) {
  if (path_escapes_root(rel))
    throw Error(ErrorCode::invalid_value, std::string(rel), "path escapes the asset root");
  return root / std::filesystem::path(std::string(rel));
}

// ---------------------------------------------------------------------------
// Small file helpers shared by the loaders and the CLI.
// ---------------------------------------------------------------------------

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, path.string(), "cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io_failure, path.string(), "read failed");
  return std::move(buffer).str();
}

// Write-to-temp-then-rename so readers never observe a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_failure, tmp.string(), "cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::io_failure, tmp.string(), "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::io_failure, path.string(), "atomic rename failed");
  }
}

}  // namespace prlqual
