#include "polarscope/url_utils.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "polarscope/text.hpp"

namespace polarscope {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

}  // namespace

std::optional<ParsedUrl> parse_url(std::string_view url) {
    url = trim(url);
    std::size_t sep = url.find("://");
    if (sep == std::string_view::npos || sep == 0) return std::nullopt;
    ParsedUrl out;
    out.scheme = to_lower(url.substr(0, sep));
    std::string_view rest = url.substr(sep + 3);
    std::size_t frag = rest.find('#');
    if (frag != std::string_view::npos) rest = rest.substr(0, frag);
    std::size_t path_start = rest.find_first_of("/?");
    std::string_view authority = rest.substr(0, path_start);
    if (authority.empty()) return std::nullopt;
    std::size_t at = authority.rfind('@');  // strip userinfo
    if (at != std::string_view::npos) authority = authority.substr(at + 1);
    std::size_t colon = authority.rfind(':');
    if (colon != std::string_view::npos &&
        authority.find(']') == std::string_view::npos) {  // not IPv6 literal
        out.host = to_lower(authority.substr(0, colon));
        out.port = std::string(authority.substr(colon + 1));
    } else {
        out.host = to_lower(authority);
    }
    if (out.host.empty()) return std::nullopt;
    if (path_start != std::string_view::npos) {
        std::string_view tail = rest.substr(path_start);
        std::size_t q = tail.find('?');
        if (q == std::string_view::npos) {
            out.path = std::string(tail);
        } else {
            out.path = std::string(tail.substr(0, q));
            out.query = std::string(tail.substr(q + 1));
        }
    }
    return out;
}

std::string canonicalize_url(std::string_view url) {
    auto parsed = parse_url(url);
    if (!parsed) return std::string(trim(url));
    ParsedUrl& u = *parsed;
    if ((u.scheme == "http" && u.port == "80") || (u.scheme == "https" && u.port == "443"))
        u.port.clear();
    // drop utm_* tracking params, keep the rest in order
    std::string query;
    if (!u.query.empty()) {
        std::size_t pos = 0;
        while (pos <= u.query.size()) {
            std::size_t amp = u.query.find('&', pos);
            std::string_view param =
                std::string_view(u.query).substr(pos, amp == std::string::npos ? std::string::npos
                                                                               : amp - pos);
            if (!param.empty() && !istarts_with(param, "utm_")) {
                if (!query.empty()) query += '&';
                query += param;
            }
            if (amp == std::string::npos) break;
            pos = amp + 1;
        }
    }
    std::string path = u.path;
    while (!path.empty() && path.back() == '/') path.pop_back();
    std::string out = u.scheme + "://" + u.host;
    if (!u.port.empty()) out += ':' + u.port;
    out += path;
    if (!query.empty()) out += '?' + query;
    return out;
}

std::string registered_domain(std::string_view host) {
    std::string h = to_lower(trim(host));
    if (h.empty()) return h;
    // IPv4 literal: pass through
    if (std::all_of(h.begin(), h.end(),
                    [](unsigned char c) { return std::isdigit(c) || c == '.'; }))
        return h;
    std::vector<std::string_view> labels;
    std::size_t pos = 0;
    std::string_view hv = h;
    while (pos <= hv.size()) {
        std::size_t dot = hv.find('.', pos);
        if (dot == std::string_view::npos) {
            labels.push_back(hv.substr(pos));
            break;
        }
        labels.push_back(hv.substr(pos, dot - pos));
        pos = dot + 1;
    }
    if (labels.size() <= 2) return h;
    static const std::vector<std::string_view> kSecondLevel = {"co",  "com", "net", "org",
                                                               "gov", "edu", "ac",  "mil"};
    std::string_view tld = labels[labels.size() - 1];
    std::string_view second = labels[labels.size() - 2];
    std::size_t take = 2;
    if (tld.size() == 2 &&
        std::find(kSecondLevel.begin(), kSecondLevel.end(), second) != kSecondLevel.end())
        take = 3;
    if (labels.size() < take) take = labels.size();
    std::string out;
    for (std::size_t i = labels.size() - take; i < labels.size(); ++i) {
        if (!out.empty()) out += '.';
        out += labels[i];
    }
    return out;
}

std::string host_of(std::string_view url) {
    auto p = parse_url(url);
    return p ? p->host : std::string();
}

bool is_platform_url(std::string_view url) {
    std::string h = host_of(url);
    return h == "twitter.com" || (h.size() > 12 && h.ends_with(".twitter.com"));
}

}  // namespace polarscope
