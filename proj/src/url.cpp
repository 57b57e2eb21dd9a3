#include "wpf/url.hpp"

#include "wpf/article.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace wpf {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

int default_port(const std::string& scheme) { return scheme == "https" ? 443 : 80; }

std::string remove_dot_segments(std::string_view path) {
    std::vector<std::string> out;
    std::size_t i = 0;
    bool trailing = false;
    while (i <= path.size()) {
        auto j = path.find('/', i);
        if (j == std::string_view::npos) j = path.size();
        std::string seg(path.substr(i, j - i));
        trailing = false;
        if (seg == "..") {
            if (!out.empty()) out.pop_back();
            trailing = true;
        } else if (seg == ".") {
            trailing = true;
        } else if (!seg.empty() || j == path.size()) {
            out.push_back(seg);
        }
        i = j + 1;
    }
    std::string result;
    for (const auto& s : out) result += "/" + s;
    if (result.empty() || trailing) result += "/";
    // collapse a doubled slash produced by a trailing empty segment
    if (result.size() > 1 && result.ends_with("//")) result.pop_back();
    return result;
}

}  // namespace

std::string Url::origin() const {
    std::string out = scheme + "://" + host;
    if (port && port != default_port(scheme)) out += ":" + std::to_string(port);
    return out;
}

std::string Url::path_and_query() const { return query.empty() ? path : path + "?" + query; }

std::string Url::str() const {
    std::string out = origin() + path_and_query();
    if (!fragment.empty()) out += "#" + fragment;
    return out;
}

std::optional<Url> parse_url(std::string_view text) {
    auto colon = text.find("://");
    if (colon == std::string_view::npos) return std::nullopt;
    Url u;
    u.scheme = lower(text.substr(0, colon));
    if (u.scheme != "http" && u.scheme != "https") return std::nullopt;
    auto rest = text.substr(colon + 3);
    auto end = rest.find_first_of("/?#");
    auto authority = rest.substr(0, end);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
    if (authority.empty()) return std::nullopt;
    if (auto pc = authority.rfind(':'); pc != std::string_view::npos && authority.find(']') == std::string_view::npos) {
        auto digits = authority.substr(pc + 1);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            return std::nullopt;
        }
        u.port = std::stoi(std::string(digits));
        authority = authority.substr(0, pc);
    }
    u.host = lower(authority);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    if (auto hash = rest.find('#'); hash != std::string_view::npos) {
        u.fragment = std::string(rest.substr(hash + 1));
        rest = rest.substr(0, hash);
    }
    if (auto q = rest.find('?'); q != std::string_view::npos) {
        u.query = std::string(rest.substr(q + 1));
        rest = rest.substr(0, q);
    }
    u.path = rest.empty() ? "/" : std::string(rest);
    return u;
}

std::string resolve_url(std::string_view base, std::string_view ref) {
    if (parse_url(ref)) return std::string(ref);
    auto b = parse_url(base);
    if (!b || ref.empty()) return std::string(ref);
    if (ref.starts_with("//")) return b->scheme + ":" + std::string(ref);
    Url out = *b;
    out.fragment.clear();
    std::string_view r = ref;
    std::string fragment;
    if (auto hash = r.find('#'); hash != std::string_view::npos) {
        fragment = std::string(r.substr(hash + 1));
        r = r.substr(0, hash);
    }
    if (r.empty()) {
        out.fragment = fragment;
        return out.str();
    }
    std::string query;
    bool has_query = false;
    if (auto q = r.find('?'); q != std::string_view::npos) {
        query = std::string(r.substr(q + 1));
        has_query = true;
        r = r.substr(0, q);
    }
    if (r.empty()) {
        out.query = query;
    } else if (r.front() == '/') {
        out.path = remove_dot_segments(r);
        out.query = has_query ? query : "";
    } else {
        auto dir = b->path.substr(0, b->path.rfind('/') + 1);
        out.path = remove_dot_segments(dir + std::string(r));
        out.query = has_query ? query : "";
    }
    out.fragment = fragment;
    return out.str();
}

std::string normalize_url(std::string_view text) {
    auto u = parse_url(text);
    if (!u) return std::string(text);
    u->fragment.clear();
    while (u->path.size() > 1 && u->path.back() == '/') u->path.pop_back();
    if (u->path == "/") u->path.clear();
    return u->origin() + u->path_and_query();
}

std::optional<std::string> path_language(std::string_view url) {
    auto u = parse_url(url);
    std::string path = u ? u->path : std::string(url);
    std::size_t start = path.starts_with("/") ? 1 : 0;
    auto end = path.find('/', start);
    auto seg = lower(path.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (is_known_language(seg)) return seg;
    // regional or script variants such as "zh-hans" or "pt_br"
    auto cut = seg.find_first_of("-_");
    if (cut == 2 && seg.size() <= 7 && is_known_language(seg.substr(0, 2))) return seg.substr(0, 2);
    return std::nullopt;
}

}  // namespace wpf
