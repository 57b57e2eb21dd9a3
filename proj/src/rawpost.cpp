#include "wpf/rawpost.hpp"

#include <json.hpp>

namespace wpf {

namespace {

std::string rendered(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_object()) return v.at("rendered").get<std::string>();
    return v.get<std::string>();
}

std::vector<std::int64_t> id_list(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return {};
    return j[key].get<std::vector<std::int64_t>>();
}

}  // namespace

RawPost parse_raw_post(std::string_view json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw RawPostError(std::string("invalid post JSON: ") + e.what());
    }
    RawPost p;
    try {
        p.id = j.at("id").get<PostId>();
        p.date_gmt = parse_timestamp(j.at("date_gmt").get<std::string>());
        p.modified_gmt = parse_timestamp(j.at("modified_gmt").get<std::string>());
        p.slug = j.value("slug", "");
        p.link = j.at("link").get<std::string>();
        p.title_html = rendered(j, "title");
        p.content_html = rendered(j, "content");
        p.categories = id_list(j, "categories");
        p.tags = id_list(j, "tags");
        p.author = j.value("author", std::int64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw RawPostError(std::string("post field error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw RawPostError(std::string("post date error: ") + e.what());
    }
    if (p.id <= 0) throw RawPostError("post id must be positive");
    p.raw_json = std::string(json);
    return p;
}

std::vector<std::string_view> split_json_array(std::string_view json) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < json.size() && (json[i] == ' ' || json[i] == '\t' || json[i] == '\n' || json[i] == '\r')) ++i;
    };
    // tolerate a UTF-8 byte order mark
    if (json.starts_with("\xEF\xBB\xBF")) i = 3;
    skip_ws();
    if (i >= json.size() || json[i] != '[') throw RawPostError("expected a JSON array");
    ++i;
    skip_ws();
    if (i < json.size() && json[i] == ']') {
        ++i;
        skip_ws();
        if (i != json.size()) throw RawPostError("trailing data after array");
        return out;
    }
    while (true) {
        skip_ws();
        std::size_t start = i;
        int depth = 0;
        bool in_string = false;
        for (; i < json.size(); ++i) {
            char c = json[i];
            if (in_string) {
                if (c == '\\') ++i;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{' || c == '[') ++depth;
            else if (c == '}' || c == ']') {
                if (depth == 0) break;
                --depth;
            } else if (c == ',' && depth == 0) {
                break;
            }
        }
        if (i >= json.size() || in_string) throw RawPostError("unterminated JSON array");
        std::size_t end = i;
        while (end > start && (json[end - 1] == ' ' || json[end - 1] == '\n' || json[end - 1] == '\r' || json[end - 1] == '\t')) --end;
        if (end == start) throw RawPostError("empty array element");
        out.push_back(json.substr(start, end - start));
        if (json[i] == ']') {
            ++i;
            skip_ws();
            if (i != json.size()) throw RawPostError("trailing data after array");
            return out;
        }
        ++i;  // comma
    }
}

}  // namespace wpf
