#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace polarscope {

// ASCII case fold; multi-byte UTF-8 passes through untouched (matches how
// the platform compares tags).
std::string to_lower(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

// True when `text` contains `term` (case-insensitive) at a position not
// immediately preceded by '#'. "# term" and "#!term" count; "#term" does not.
bool contains_unprefixed_term(std::string_view text, std::string_view term);

// Whitespace-delimited tokens.
std::vector<std::string_view> split_ws(std::string_view s);

// Lowercased whitespace token set; for near-duplicate comparison.
std::vector<std::string> token_set(std::string_view s);

// |A ∩ B| / |A ∪ B| over sorted unique token vectors; 1.0 when both empty.
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

std::string json_escape(std::string_view s);

}  // namespace polarscope
