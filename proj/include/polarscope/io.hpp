#pragma once

#include <string>
#include <string_view>

namespace polarscope {

std::string read_file_to_string(const std::string& path);  // throws std::runtime_error

// Writes to <path>.tmp.<pid> then renames into place so readers never see a
// partial file.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace polarscope
