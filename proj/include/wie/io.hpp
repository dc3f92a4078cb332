#pragma once

#include <filesystem>
#include <string>

namespace wie {

/// Locale-independent "%.*e" rendering, so outputs are byte-stable.
std::string fmt_num(double v, int precision = 10);

/// Writes `content` to a temporary sibling of `path` and renames it into
/// place. Parent directories are created. Throws InputError on failure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace wie
