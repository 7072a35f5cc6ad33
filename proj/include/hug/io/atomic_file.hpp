#pragma once

#include <filesystem>
#include <functional>
#include <string>

namespace hug::io {

/// Writes through a sibling temporary file and renames it into place, so a
/// crash mid-write never leaves a truncated file at `path`. The writer
/// receives the temporary path; parent directories are created first.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(const std::filesystem::path&)>& writer);

/// atomic_write specialised to a string payload.
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hug::io
