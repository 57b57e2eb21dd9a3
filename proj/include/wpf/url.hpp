#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace wpf {

/// Minimal absolute-URL model for http(s) links found in pages and API
/// payloads.
struct Url {
    std::string scheme;  // lowercase
    std::string host;    // lowercase
    int port = 0;        // 0 means the scheme default
    std::string path;    // starts with '/', "/" when empty
    std::string query;   // without '?'
    std::string fragment;

    std::string origin() const;        // scheme://host[:port]
    std::string path_and_query() const;
    std::string str() const;
};

/// nullopt unless `text` is an absolute http or https URL.
std::optional<Url> parse_url(std::string_view text);

/// Resolves `ref` against an absolute base (RFC 3986 style, without
/// dot-segment corner cases beyond "." and ".."). Returns `ref` unchanged
/// when the base is not absolute.
std::string resolve_url(std::string_view base, std::string_view ref);

/// Key used to match links to articles: lowercase scheme and host, default
/// port dropped, fragment removed, trailing slash removed from the path.
std::string normalize_url(std::string_view text);

/// First path segment when it is one of the known article languages.
std::optional<std::string> path_language(std::string_view url);

}  // namespace wpf
