#pragma once

#include "wpf/time.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wpf {

using PostId = std::int64_t;

/// The seven article languages the two studied sites publish in.
inline constexpr std::array<std::string_view, 7> kLanguages = {"ar", "de", "en", "es", "fr", "it", "zh"};

bool is_known_language(std::string_view code);

struct ArticleKey {
    std::string site_id;
    PostId post_id = 0;

    auto operator<=>(const ArticleKey&) const = default;
    std::string str() const;  // "site/123"
};

struct Link {
    std::string text;
    std::string href;
    bool operator==(const Link&) const = default;
};

struct TranslationRef {
    std::string language;
    std::string url;
    bool operator==(const TranslationRef&) const = default;
};

/// A cleaned article. `text` is `paragraphs` joined by '\n' and the
/// Moscow timestamps are always the GMT ones shifted by +3 h.
struct Article {
    std::string site_id;
    PostId post_id = 0;
    std::string url;
    std::string language;
    std::string title;
    std::string author_name;
    Timestamp date_gmt{};
    Timestamp modified_gmt{};
    MoscowTime date_msk{};
    MoscowTime modified_msk{};
    std::vector<std::string> categories;
    std::vector<std::string> tags;
    std::vector<std::string> paragraphs;
    std::string text;
    std::vector<Link> links;
    std::vector<std::string> image_urls;
    std::vector<TranslationRef> translation_refs;

    ArticleKey key() const { return {site_id, post_id}; }
    bool operator==(const Article&) const = default;
};

std::string join_paragraphs(const std::vector<std::string>& paragraphs);

}  // namespace wpf
