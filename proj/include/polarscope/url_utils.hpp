#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace polarscope {

struct ParsedUrl {
    std::string scheme;  // lowercase
    std::string host;    // lowercase
    std::string port;    // empty when absent
    std::string path;
    std::string query;   // without '?'
};

std::optional<ParsedUrl> parse_url(std::string_view url);

// Lowercases scheme/host, drops default ports and fragments, removes utm_*
// query params, trims trailing slashes. Unparseable inputs come back trimmed
// but otherwise untouched.
std::string canonicalize_url(std::string_view url);

// eTLD+1 approximation: last two host labels, or three when the middle one is
// a recognized second-level label under a two-letter country code
// ("example.com.au" -> "example.com.au"). IPs and single-label hosts pass
// through.
std::string registered_domain(std::string_view host);

std::string host_of(std::string_view url);  // lowercase host or empty

// Links back into the platform itself (twitter.com and subdomains).
bool is_platform_url(std::string_view url);

}  // namespace polarscope
