#pragma once

#include "wpf/article.hpp"
#include "wpf/rawpost.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wpf {

/// Per-site extraction rules. Selectors use the subset supported by
/// wpf::html::Selector.
struct SiteExtractionConfig {
    std::string id;
    std::string default_language = "en";
    /// Element inside content_html holding the article body; empty means
    /// the whole fragment.
    std::string body_root;
    /// Subtrees removed from the body before text, links and images are read.
    std::string body_exclude = "figcaption, .wp-caption-text";
    /// Links of the language picker in the full page.
    std::string picker_links;
    /// Attribute carrying the language code of a picker link.
    std::string picker_language_attr = "hreflang";
    /// Picker element marking the page's own language, if any.
    std::string picker_current;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// INI-style file: `[site_id]` sections of `key = value` lines; `#` and `;`
/// start comments. Unknown keys are errors.
std::map<std::string, SiteExtractionConfig> read_extraction_config(std::istream& is);
std::map<std::string, SiteExtractionConfig> load_extraction_config(const std::filesystem::path& path);

/// Id to display name maps from the harvested metadata endpoints.
struct SiteMeta {
    std::map<std::int64_t, std::string> users;
    std::map<std::int64_t, std::string> categories;
    std::map<std::int64_t, std::string> tags;
};

/// Reads a WordPress list payload (`[{"id":..,"name":..}, ...]`).
std::map<std::int64_t, std::string> read_name_map(std::string_view json);

struct TranslationExtraction {
    std::vector<TranslationRef> refs;
    std::vector<std::string> warnings;
};

/// Picker links of a full page. The page's own language is `self_language`
/// when given, otherwise the current picker item, otherwise `<html lang>`.
TranslationExtraction extract_translations(std::string_view page_html, const SiteExtractionConfig& config,
                                           std::optional<std::string> self_language = std::nullopt);

struct ExtractResult {
    Article article;
    std::vector<std::string> warnings;
};

/// Builds a clean Article from the API payload and the rendered page.
/// `page_charset` names the page encoding when known (from headers or the
/// snapshot manifest); otherwise a `<meta charset>` is honoured and UTF-8
/// assumed.
ExtractResult extract_article(const RawPost& raw, std::string_view page_html, const SiteExtractionConfig& config,
                              const SiteMeta& meta = {}, std::string_view page_charset = {});

/// Paragraph text of an HTML fragment under the config's body rules.
std::vector<std::string> extract_paragraphs(std::string_view body_html, const SiteExtractionConfig& config);

/// Decodes page bytes to UTF-8. Invalid input is replaced with U+FFFD and
/// reported through `replaced`.
std::string decode_page(std::string_view bytes, std::string_view charset, std::size_t* replaced = nullptr);

/// `<meta charset>` or the charset parameter of a `http-equiv` content type.
std::optional<std::string> sniff_charset(std::string_view html);

/// Renders an Article back into a minimal payload and page, so that
/// re-extraction can be checked for stability.
struct RenderedArticle {
    RawPost raw;
    std::string page_html;
};
RenderedArticle render_article(const Article& article);

// ---------------------------------------------------------------- groups

struct TranslationGroup {
    int group_id = 0;
    /// Language to member; one member per language per site.
    std::map<std::string, ArticleKey> members;
    /// Every article in the component, ascending.
    std::vector<ArticleKey> article_keys;
    bool orphaned = false;

    std::size_t language_count() const { return members.size(); }
};

struct ConflictReport {
    enum class Kind { SameLanguage, DanglingRef };
    Kind kind = Kind::SameLanguage;
    int group_id = 0;
    std::vector<ArticleKey> articles;
    std::string language;
    std::string url;  // dangling target
};

std::string_view to_string(ConflictReport::Kind kind);

struct GroupResolution {
    std::vector<TranslationGroup> groups;
    std::vector<ConflictReport> reports;
};

/// Connected components of the undirected translation graph. Groups are
/// numbered by their lowest article key. Throws std::invalid_argument on
/// duplicate article URLs.
GroupResolution resolve_translation_groups(const std::vector<Article>& articles);

// ---------------------------------------------------------------- snapshots

struct SnapshotExtraction {
    std::vector<Article> articles;
    std::vector<std::string> warnings;  // "site/post: message"
    std::size_t failed_posts = 0;
};

/// Extracts every post of every site directory under `snapshot_root`
/// (either a `snapshot/` directory or a single site directory). Sites
/// without a config section use defaults with the directory name as id.
SnapshotExtraction extract_snapshot(const std::filesystem::path& snapshot_root,
                                    const std::map<std::string, SiteExtractionConfig>& configs);

}  // namespace wpf
