#pragma once

#include <string>
#include <string_view>

namespace polarscope {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);  // streams; throws if unreadable

}  // namespace polarscope
