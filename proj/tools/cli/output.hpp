#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace tagtrace::cli {

/// Creates `dir` (and parents) if missing. Throws IoError on failure.
void ensure_directory(const std::filesystem::path& dir);

/// Writes through a sibling temporary file and renames it over `path`, so
/// readers never observe a half-written output.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tagtrace::cli
