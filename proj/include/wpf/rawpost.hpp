#pragma once

#include "wpf/article.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wpf {

/// One post as returned by the WordPress REST API, with the verbatim bytes
/// it was parsed from.
struct RawPost {
    PostId id = 0;
    Timestamp date_gmt{};
    Timestamp modified_gmt{};
    std::string slug;
    std::string link;
    std::string title_html;
    std::string content_html;
    std::vector<std::int64_t> categories;
    std::vector<std::int64_t> tags;
    std::int64_t author = 0;
    std::string raw_json;
};

class RawPostError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a single post object. Throws RawPostError when required fields
/// are missing or malformed, or the id is not positive.
RawPost parse_raw_post(std::string_view json);

/// Splits a top-level JSON array into the exact byte ranges of its
/// elements, so each element can be stored verbatim. Throws RawPostError on
/// malformed input.
std::vector<std::string_view> split_json_array(std::string_view json);

}  // namespace wpf
